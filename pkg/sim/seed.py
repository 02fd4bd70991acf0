from __future__ import annotations

import hashlib
from dataclasses import dataclass
from random import Random


@dataclass(frozen=True)
class SeedManager:
    """Deterministically map a check name and case index to RNG seeds."""

    base_seed: int = 0

    def case_seed(self, experiment: str, index: int) -> int:
        key = f"{experiment}|{index}|{self.base_seed}"
        digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
        value = int.from_bytes(digest, byteorder="big", signed=False)
        # Clamp to 31-bit positive integer for compatibility with Random
        return value % (2**31 - 1) or 1

    def case_rng(self, experiment: str, index: int) -> Random:
        return Random(self.case_seed(experiment, index))


__all__ = ["SeedManager"]
