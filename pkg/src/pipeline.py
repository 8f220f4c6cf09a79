"""Circuit cutting pipeline: cut, evaluate, contract or merge, report."""
import logging

import numpy as np

from src.circuit.benchmarks import generate_benchmark
from src.circuit.dag import build_dag
from src.circuit.ir import Circuit
from src.circuit.parser import load_circuit
from src.circuit.simulator import simulate_full
from src.config.settings import SIMULATOR_MAX_QUBITS
from src.contraction.cost import plan_contraction, predict_cost
from src.contraction.engine import contract
from src.contraction.graph import ComputeGraph, load_graph_spec
from src.cutting.fragments import build_fragments, quantum_area
from src.cutting.solver import find_cuts
from src.merge.search import StatesMerger, arbitrary_subset_mode, run_merge
from src.models.cut import CutSolution
from src.models.run import RunConfig, RunReport
from src.sampling.estimator import SamplingPlan, run_trials, sample_terms
from src.sampling.weights import compute_weights, sampling_probabilities
from src.subsim.evaluator import SubcircuitEvaluator
from src.tools.report_tools import (
    distribution_summary,
    lambda_histogram,
    merge_summary,
    plan_frame,
    trace_frame,
)
from src.utils.errors import CircuitCutError, ConfigError
from src.utils.rng import spawn_rngs
from src.utils.timing import PhaseTimer

logger = logging.getLogger(__name__)


class CircuitCuttingPipeline:
    """Runs one configured job and collects its report."""

    def __init__(self, config: RunConfig):
        """Initialize the pipeline.

        Args:
            config: Validated run configuration
        """
        self.config = config
        self.timer = PhaseTimer()
        self.report = RunReport(config=config.model_dump(mode="json"))
        self.tables = {}
        self.circuit: Circuit | None = None
        self.solution: CutSolution | None = None

    def load(self) -> Circuit:
        config = self.config
        with self.timer.phase("parse"):
            if config.circuit_path:
                circuit = load_circuit(config.circuit_path)
            else:
                circuit = generate_benchmark(
                    config.benchmark, config.n_qubits, seed=config.seed, **config.benchmark_params
                )
        if config.mode == "full" and circuit.n_qubits > SIMULATOR_MAX_QUBITS:
            raise ConfigError(f"full mode needs n <= {SIMULATOR_MAX_QUBITS}, got {circuit.n_qubits}")
        self.circuit = circuit
        self.report.circuit = {
            "n_qubits": circuit.n_qubits,
            "gates": len(circuit.gates),
            "two_qubit_gates": len(circuit.two_qubit_gates()),
            "depth": circuit.depth(),
        }
        return circuit

    def cut(self) -> CutSolution:
        config = self.config
        with self.timer.phase("cut"):
            solution = find_cuts(
                build_dag(self.circuit),
                alpha=config.alpha,
                max_subcircuits=config.max_subcircuits,
                time_limit=config.solver_timeout_s,
                degree_cap=config.degree_cap,
            )
        self.solution = solution
        self.report.cut = solution.to_json_dict()
        self.report.quantum_area = quantum_area(solution, self.circuit)
        return solution

    def _plan(self, graph: ComputeGraph):
        with self.timer.phase("plan"):
            plan = plan_contraction(graph, self.config.memory_limit_values)
        self.report.plan = plan
        self.report.cost = predict_cost(graph, plan)
        self.tables["plan"] = plan_frame(plan)
        return plan

    def run_cost(self) -> None:
        if self.config.graph_spec:
            graph = load_graph_spec(self.config.graph_spec)
        else:
            self.load()
            graph = ComputeGraph.from_solution(self.cut())
        self._plan(graph)

    def run_full(self) -> None:
        circuit = self.load()
        solution = self.cut()
        graph = ComputeGraph.from_solution(solution)
        evaluator = SubcircuitEvaluator(build_fragments(circuit, build_dag(circuit), solution))
        with self.timer.phase("evaluate"):
            entries = evaluator.evaluate_entries()
        plan = self._plan(graph)
        with self.timer.phase("contract"):
            outcome = contract(graph, entries, plan)
        self.report.actual_multiplications = outcome.multiplications

        result = distribution_summary(outcome.values, circuit.n_qubits)
        truth = outcome.values
        if circuit.n_qubits <= SIMULATOR_MAX_QUBITS:
            with self.timer.phase("oracle"):
                truth = simulate_full(circuit)
            result["linf_error"] = float(np.max(np.abs(outcome.values - truth)))
        self.report.result = result

        if self.config.sampler != "none":
            self._sample(graph, entries, plan, truth)

    def _sample(self, graph, entries, plan, truth) -> None:
        config = self.config
        with self.timer.phase("sample"):
            weights = compute_weights(graph, entries)
            q = sampling_probabilities(config.sampler, graph, weights, config.narrow_subcircuit)
            report, _ = run_trials(
                graph, entries, plan, weights, q,
                samples=config.samples,
                trials=config.trials,
                seed=config.seed,
                sampler=config.sampler,
                truth=truth,
                narrow=config.narrow_subcircuit,
            )
        self.report.sampling = report
        # same stream as the first trial
        first = SamplingPlan(samples=config.samples, q=q)
        sample_terms(first, spawn_rngs(config.seed, 1)[0])
        histogram = lambda_histogram(first.counts)
        self.tables["lambda"] = histogram
        self.report.result["lambda_histogram"] = [
            [int(value), int(terms)] for value, terms in histogram.itertuples(index=False)
        ]

    def _record_merge_cost(self, merger: StatesMerger) -> None:
        self.report.cost = merger.cost_report()
        if merger.costs:
            self.report.actual_multiplications = merger.multiplications

    def run_merge(self) -> None:
        circuit = self.load()
        solution = self.cut()
        config = self.config
        with self.timer.phase("merge"):
            merger = StatesMerger(circuit, solution, config.memory_limit_values)
            state = run_merge(
                circuit, solution,
                max_bins=config.max_bins,
                top_r=config.top_r,
                max_recursions=config.max_recursions,
                threshold=config.solution_threshold,
                memory_limit=config.memory_limit_values,
                merger=merger,
            )
        self._record_merge_cost(merger)
        self.report.result = merge_summary(state)
        self.tables["trace"] = trace_frame(state)

    def run_subset(self) -> None:
        circuit = self.load()
        solution = self.cut()
        with self.timer.phase("subset"):
            merger = StatesMerger(circuit, solution, self.config.memory_limit_values)
            probabilities = arbitrary_subset_mode(
                circuit, solution, self.config.states,
                max_bins=self.config.max_bins,
                memory_limit=self.config.memory_limit_values,
                merger=merger,
            )
        self._record_merge_cost(merger)
        self.report.result = {"probabilities": probabilities}

    def run(self) -> RunReport:
        """Run the configured mode.

        Errors are recorded in the report with their phase tag and re-raised.
        """
        modes = {
            "cost": self.run_cost,
            "cut": lambda: (self.load(), self.cut()),
            "full": self.run_full,
            "merge": self.run_merge,
            "subset": self.run_subset,
        }
        logger.info(f"Running {self.config.mode} mode")
        try:
            modes[self.config.mode]()
        except CircuitCutError as e:
            self.report.error = {"phase": e.phase, "type": type(e).__name__, "message": str(e)}
            raise
        finally:
            self.report.timing = dict(self.timer.seconds)
        return self.report


def run_pipeline(config: RunConfig) -> RunReport:
    return CircuitCuttingPipeline(config).run()
