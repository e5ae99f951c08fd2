"""Seeded random streams for reproducible simulations.

All randomness of a run derives from one master seed. Named streams are spawned from it with
`numpy.random.SeedSequence` in a fixed order, so adding draws to one stream never shifts another.
"""

from typing import Dict, List, Optional, Sequence
import numpy as np


def make_rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(seed)


def derive_rngs(master_seed: int, names: Sequence[str]) -> Dict[str, np.random.Generator]:
    """Return one independent generator per name, spawned from `master_seed` in the order of `names`."""
    children = np.random.SeedSequence(master_seed).spawn(len(names))
    return {name: np.random.default_rng(child) for name, child in zip(names, children)}


def split_rng(rng: np.random.Generator, n: int) -> List[np.random.Generator]:
    """Split `n` independent child streams off `rng` (consumes exactly one draw of `rng`)."""
    entropy = int(rng.integers(0, 2**63 - 1))
    return [np.random.default_rng(child) for child in np.random.SeedSequence(entropy).spawn(n)]


def derive_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**32 - 1))
