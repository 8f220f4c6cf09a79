"""Bin bookkeeping for states merging."""
from dataclasses import dataclass, field
from math import ceil, prod

import numpy as np


@dataclass(frozen=True)
class SubcircuitBins:
    """State -> bin map of one subcircuit; -1 marks states outside the analysis."""

    bin_of_state: np.ndarray
    n_bins: int

    def members(self, b: int) -> np.ndarray:
        return np.flatnonzero(self.bin_of_state == b)


@dataclass(frozen=True)
class MergeBin:
    recursion: int
    index: int  # flat index among the bins of its recursion
    bins: tuple[int, ...]
    members: tuple[np.ndarray, ...] = field(repr=False)  # ascending state indices per subcircuit
    probability: float

    @property
    def fully_expanded(self) -> bool:
        return all(len(m) == 1 for m in self.members)

    def sort_key(self) -> tuple:
        return (-self.probability, self.recursion, self.index)


@dataclass(frozen=True)
class BinAssignment:
    recursion: int
    subcircuits: tuple[SubcircuitBins, ...]
    parent: MergeBin | None = None

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(s.n_bins for s in self.subcircuits)

    def child(self, index: int, probability: float) -> MergeBin:
        bins = tuple(int(b) for b in np.unravel_index(index, self.counts))
        members = tuple(s.members(b) for s, b in zip(self.subcircuits, bins))
        return MergeBin(self.recursion, index, bins, members, float(probability))


def halve_counts(counts: list[int], max_bins: int) -> list[int]:
    """Halve the largest count (lowest index on a tie) until the product fits ``max_bins``."""
    counts = list(counts)
    while prod(counts) > max_bins:
        largest = counts.index(max(counts))
        counts[largest] = ceil(counts[largest] / 2)
    return counts


def assign_states(
    recursion: int,
    parent: MergeBin | None,
    max_bins: int,
    output_widths: list[int],
) -> BinAssignment:
    """Spread the states under analysis round-robin over as many bins as ``max_bins`` allows.

    At the first recursion every state of every subcircuit is analysed;
    afterwards only the states inside ``parent``.
    """
    if parent is None:
        states = [np.arange(2 ** n) for n in output_widths]
    else:
        states = list(parent.members)
    counts = halve_counts([len(s) for s in states], max_bins)

    subcircuits = []
    for n, members, count in zip(output_widths, states, counts):
        bin_of_state = np.full(2 ** n, -1, dtype=np.int64)
        bin_of_state[members] = np.arange(len(members)) % count
        subcircuits.append(SubcircuitBins(bin_of_state=bin_of_state, n_bins=count))
    return BinAssignment(recursion=recursion, subcircuits=tuple(subcircuits), parent=parent)
