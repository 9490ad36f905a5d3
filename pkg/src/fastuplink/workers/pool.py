"""Process-pool fan-out for independent replicas (seeds, beta candidates).

Results always come back in input order, so anything written from them is the
same whatever the worker count.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

from ..config import get_settings

logger = logging.getLogger(__name__)
settings = get_settings()

T = TypeVar("T")
R = TypeVar("R")


def fan_out(fn: Callable[[T], R], items: Sequence[T], workers: int | None = None) -> List[R]:
    """
    Apply fn to every item, across worker processes when workers > 1.

    fn must be picklable (a module-level function or a functools.partial of one).
    """
    workers = settings.workers if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    max_workers = min(workers, len(items))
    logger.debug("Fanning %d replicas out to %d workers", len(items), max_workers)
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(fn, items))
