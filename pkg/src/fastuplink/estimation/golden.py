"""Golden-section search, vectorized over independent brackets."""

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(
    f: Callable[[np.ndarray], np.ndarray],
    low: np.ndarray,
    high: np.ndarray,
    tol: float = 1e-6,
    max_iter: int = 100,
) -> np.ndarray:
    """
    Maximize a unimodal f on [low, high] elementwise.

    f must evaluate an array of candidates (one per bracket) and return an array of
    the same shape. The bracket ends are scored too, so boundary maxima come back
    exactly.
    """
    a = np.array(low, dtype=np.float64)
    b = np.array(high, dtype=np.float64)
    a, b = np.broadcast_arrays(a, b)
    a, b = a.copy(), b.copy()
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = f(c)
    fd = f(d)

    for _ in range(max_iter):
        if np.all(b - a <= tol):
            break
        left = fc >= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        trial = np.where(left, b - INV_PHI * (b - a), a + INV_PHI * (b - a))
        f_trial = f(trial)
        c, d = np.where(left, trial, d), np.where(left, c, trial)
        fc, fd = np.where(left, f_trial, fd), np.where(left, fc, f_trial)

    middle = 0.5 * (a + b)
    candidates = np.stack(
        [middle, np.broadcast_to(low, middle.shape), np.broadcast_to(high, middle.shape)]
    )
    values = np.stack([f(candidate) for candidate in candidates])
    return np.take_along_axis(candidates, np.argmax(values, axis=0)[None], axis=0)[0]


def golden_section_min(
    f: Callable[[float], float],
    low: float,
    high: float,
    max_evals: int = 12,
) -> tuple[float, float]:
    """
    Minimize a scalar f on [low, high] with a fixed evaluation budget.

    Returns (argmin, minimum) over every point evaluated.
    """
    a, b = float(low), float(high)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    seen = [(fc, c), (fd, d)]
    for _ in range(max(0, max_evals - 2)):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
            seen.append((fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            seen.append((fd, d))
    best_value, best_x = min(seen, key=lambda item: (item[0], item[1]))
    return best_x, best_value
