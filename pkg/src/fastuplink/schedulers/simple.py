"""Policies without traffic prediction: round-robin and grant-free random access."""

from typing import Optional

import numpy as np

from ..models.rng import RngStream
from .base import Scheduler


class TdmaScheduler(Scheduler):
    """Grant the next L devices in cyclic order."""

    policy_name = "tdma"
    description = "Round-robin over all devices, L per slot"

    def schedule(self, rng: RngStream, truth: Optional[np.ndarray] = None) -> np.ndarray:
        chosen = (self.state.rr_pointer + np.arange(self.n_slots)) % self.n_devices
        grants = np.zeros(self.n_devices, dtype=np.int8)
        grants[chosen] = 1
        self.state.rr_pointer = (self.state.rr_pointer + self.n_slots) % self.n_devices
        return grants


class GrantFreeScheduler(Scheduler):
    """
    Random access on L preambles.

    Every active device transmits on one of the L resources, chosen uniformly at
    random. A resource picked by exactly one device carries a success; collisions
    destroy every colliding transmission. A device retries only while it stays
    active. The returned vector marks successful devices only.
    """

    policy_name = "gf"
    description = "Grant-free random access, collisions lose every transmission"
    device_side = True

    def schedule(self, rng: RngStream, truth: Optional[np.ndarray] = None) -> np.ndarray:
        if truth is None:
            raise ValueError("Grant-free access needs the slot's activations")
        active = np.asarray(truth) == 1
        # one draw per device per slot, active or not
        choices = rng.integers(0, self.n_slots, self.n_devices)
        counts = np.bincount(choices[active], minlength=self.n_slots)
        success = active & (counts[choices] == 1)
        return success.astype(np.int8)

