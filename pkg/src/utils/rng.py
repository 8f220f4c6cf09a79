"""Seeded random streams."""
import numpy as np


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """Counter-based 64-bit generator (Philox) for reproducible statistics."""
    return np.random.Generator(np.random.Philox(seed))


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent streams for ``count`` trials, ordered by trial index."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [make_rng(child) for child in children]
