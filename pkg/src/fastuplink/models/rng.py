"""Deterministic, named random streams.

One root seed spawns independent substreams by name (events, activations,
gf-choices, em-init, beta-search, ...) so adding a consumer never shifts the
draws of another one.
"""

import zlib
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF


def derive_seed(seed: int, name: str) -> int:
    """Derive a 64-bit child seed from a parent seed and a stream name."""
    entropy = [int(seed) & _MASK64, zlib.crc32(name.encode())]
    sequence = np.random.SeedSequence(entropy=entropy)
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


@dataclass
class RngStream:
    """An explicit pseudo-random stream: same seed and call sequence, same draws."""

    seed: int
    name: str = "root"
    generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.generator = np.random.default_rng(np.random.SeedSequence(int(self.seed) & _MASK64))

    def child(self, name: str) -> "RngStream":
        """Spawn the named substream of this stream."""
        return RngStream(seed=derive_seed(self.seed, name), name=f"{self.name}/{name}")

    def random(self, size: Optional[Union[int, Tuple[int, ...]]] = None) -> np.ndarray:
        return self.generator.random(size)

    def uniform(
        self,
        low: float = 0.0,
        high: float = 1.0,
        size: Optional[Union[int, Tuple[int, ...]]] = None,
    ) -> np.ndarray:
        return self.generator.uniform(low, high, size)

    def integers(
        self,
        low: int,
        high: Optional[int] = None,
        size: Optional[Union[int, Tuple[int, ...]]] = None,
    ) -> np.ndarray:
        return self.generator.integers(low, high, size)
