"""Subcircuit entry evaluation with a shared, thread-safe cache."""
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from itertools import product

import numpy as np

from src.circuit.simulator import probabilities, run_statevector
from src.config.settings import WORKERS
from src.cutting.fragments import MEASURE, Fragment
from src.subsim.variants import MEASURE_SIGNS, VariantTerm, variant_circuit, variant_terms

logger = logging.getLogger(__name__)


class SubcircuitEvaluator:
    """Evaluates ``p_i(k)`` for every subcircuit and local basis.

    Simulations are cached by (subcircuit, prepared states, rotations) and
    entries by (subcircuit, basis, mode, bins version). Entries only depend
    on the local basis, so every global term reuses them.
    """

    def __init__(self, fragments: list[Fragment], workers: int = WORKERS):
        self.fragments = fragments
        self.workers = workers
        self._lock = threading.Lock()
        self._runs: dict = {}
        self._entries: dict = {}
        self.simulations = 0

    def _probabilities(self, fragment: Fragment, term: VariantTerm) -> np.ndarray:
        # I and Z read the cut qubit without rotation, so they share a run
        key = (fragment.subcircuit, term.inits, tuple(3 if r == 0 else r for r in term.rotations))
        with self._lock:
            cached = self._runs.get(key)
        if cached is not None:
            return cached
        state = run_statevector(variant_circuit(fragment, term))
        tensor = probabilities(state).reshape((2,) * fragment.circuit.n_qubits)
        with self._lock:
            if key not in self._runs:
                self.simulations += 1
            return self._runs.setdefault(key, tensor)

    def entry(self, subcircuit: int, basis: tuple[int, ...]) -> np.ndarray:
        """Full-state entry: one real value per output state of the subcircuit."""
        key = (subcircuit, basis, "full", None)
        with self._lock:
            cached = self._entries.get(key)
        if cached is not None:
            return cached

        fragment = self.fragments[subcircuit]
        measured = sorted(
            ((role.local_qubit, label) for role, label in zip(fragment.roles, basis) if role.role == MEASURE),
            reverse=True,
        )
        remaining = sorted(fragment.output_local)
        axes = [remaining.index(local) for local in fragment.output_local]

        values = np.zeros(2 ** len(fragment.output_qubits))
        for term in variant_terms(fragment, basis):
            tensor = self._probabilities(fragment, term)
            for local, label in measured:
                tensor = np.tensordot(tensor, np.array(MEASURE_SIGNS[label]), axes=([local], [0]))
            values += term.weight * np.transpose(tensor, axes).reshape(-1)

        with self._lock:
            return self._entries.setdefault(key, values)

    def binned_entry(self, subcircuit: int, basis: tuple[int, ...], bins, version: int) -> np.ndarray:
        """Entry summed per bin; states mapped to -1 are outside the analysis."""
        key = (subcircuit, basis, "bins", version)
        with self._lock:
            cached = self._entries.get(key)
        if cached is not None:
            return cached
        full = self.entry(subcircuit, basis)
        inside = bins.bin_of_state >= 0
        values = np.bincount(bins.bin_of_state[inside], weights=full[inside], minlength=bins.n_bins)
        with self._lock:
            return self._entries.setdefault(key, values)

    def _drop_binned(self, keep: int) -> None:
        with self._lock:
            stale = [key for key in self._entries if key[2] == "bins" and key[3] != keep]
            for key in stale:
                del self._entries[key]
        if stale:
            logger.debug(f"Dropped {len(stale)} binned entries older than version {keep}")

    def evaluate_entries(self, bins: list | None = None, version: int = 0) -> dict[int, np.ndarray]:
        """Entry tensors of shape ``(4,) * d_i + (dim_i,)`` keyed by subcircuit.

        ``bins`` holds one bin map per subcircuit (``bin_of_state``, ``n_bins``);
        ``version`` identifies it in the cache. Binned entries of any other
        version are dropped first, so only one bin map is cached at a time.
        """
        if bins is not None:
            self._drop_binned(keep=version)
        jobs = [
            (f.subcircuit, basis)
            for f in self.fragments
            for basis in product(range(4), repeat=len(f.roles))
        ]

        def run(job):
            subcircuit, basis = job
            if bins is None:
                return self.entry(subcircuit, basis)
            return self.binned_entry(subcircuit, basis, bins[subcircuit], version)

        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            values = list(pool.map(run, jobs))

        entries = {}
        position = 0
        for fragment in self.fragments:
            count = 4 ** len(fragment.roles)
            block = np.stack(values[position:position + count])
            entries[fragment.subcircuit] = block.reshape((4,) * len(fragment.roles) + (block.shape[-1],))
            position += count
        logger.info(
            f"Evaluated {len(jobs)} entries over {len(self.fragments)} subcircuits "
            f"with {self.simulations} simulations so far"
        )
        return entries
