import json
import os
import sys

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

import main
from src.circuit.benchmarks import bv
from src.circuit.parser import load_circuit
from src.models.run import RunConfig
from src.pipeline import CircuitCuttingPipeline, run_pipeline
from src.tools.report_tools import distribution_summary, lambda_histogram, load_report, write_report
from src.utils.errors import ConfigError, InfeasiblePartitionError
from tests.conftest import SAMPLE_DATA

GRAPH_SPEC = os.path.join(SAMPLE_DATA, "compute_graph.json")


def bv_config(secret, **overrides):
    settings = {
        "benchmark": "bv",
        "n_qubits": len(secret),
        "benchmark_params": {"secret": secret},
        "alpha": 0.5,
        "max_subcircuits": 3,
        "solver_timeout_s": 5,
    }
    settings.update(overrides)
    return RunConfig(**settings)


def without_timing(report):
    data = json.loads(report.to_json())
    data.pop("timing")
    return data


class TestPipeline:
    def test_full_mode(self):
        secret = "1011001101"
        report = run_pipeline(bv_config(secret))
        assert report.result["linf_error"] <= 1e-9
        assert report.result["sum"] == pytest.approx(1.0, abs=1e-9)
        assert report.result["top_states"][0][0] == secret
        assert report.actual_multiplications == report.cost.multiplications
        assert report.cut["K"] >= 1
        assert report.quantum_area.ratio < 1
        assert {"parse", "cut", "evaluate", "plan", "contract"} <= set(report.timing)

    def test_sampling(self):
        pipeline = CircuitCuttingPipeline(bv_config("10110110", sampler="optimal", samples=64, trials=5, seed=3))
        report = pipeline.run()
        assert report.sampling.trials == 5
        assert report.sampling.n_terms == 4 ** report.cut["K"]
        assert report.sampling.optimal_error <= report.sampling.uniform_error
        histogram = pipeline.tables["lambda"]
        assert (histogram["lambda"] * histogram["terms"]).sum() == 64
        assert histogram["terms"].sum() <= report.sampling.q_nonzero
        assert report.result["lambda_histogram"] == histogram.values.tolist()
        assert sum(value * terms for value, terms in report.result["lambda_histogram"]) == 64

    def test_merge_mode(self):
        secret = "1011001110001011"
        pipeline = CircuitCuttingPipeline(bv_config(secret, mode="merge", max_subcircuits=2))
        report = pipeline.run()
        assert report.result["solutions"][0][0] == secret
        assert report.result["recursions"] <= 2
        assert len(pipeline.tables["trace"]) == report.result["recursions"]
        assert len(report.cost.step_multiplications) == report.result["recursions"]
        assert report.actual_multiplications == report.cost.multiplications > 0

    def test_subset_mode(self):
        secret = "110100101"
        report = run_pipeline(bv_config(secret, mode="subset", states=[secret, "0" * 9]))
        assert report.result["probabilities"][secret] == pytest.approx(1.0, abs=1e-9)
        assert report.result["probabilities"]["0" * 9] == pytest.approx(0.0, abs=1e-9)
        assert report.cost.n_subgraphs >= 1
        assert report.actual_multiplications == report.cost.multiplications

    def test_cost_mode_from_graph_spec(self):
        report = run_pipeline(RunConfig(graph_spec=GRAPH_SPEC, mode="cost"))
        assert report.cost.input_storage == 1168
        assert report.cost.step_multiplications == (512, 2048)
        assert report.cost.naive_multiplications == 8704
        assert report.plan.order == (0, 1, 2)
        assert report.circuit is None

    def test_reports_are_reproducible(self):
        config = bv_config("1101101", sampler="uniform", samples=32, trials=3, seed=8)
        assert without_timing(run_pipeline(config)) == without_timing(run_pipeline(config))

    def test_error_is_recorded(self):
        pipeline = CircuitCuttingPipeline(bv_config("1100", mode="cut", degree_cap=0))
        with pytest.raises(InfeasiblePartitionError):
            pipeline.run()
        assert pipeline.report.error["phase"] == "cut"
        assert pipeline.report.error["type"] == "InfeasiblePartitionError"


class TestRunConfig:
    def test_exactly_one_source(self):
        with pytest.raises(ConfigError):
            RunConfig(benchmark="bv", n_qubits=4, graph_spec=GRAPH_SPEC)
        with pytest.raises(ConfigError):
            RunConfig()

    def test_graph_spec_only_costs(self):
        with pytest.raises(ConfigError):
            RunConfig(graph_spec=GRAPH_SPEC, mode="full")

    def test_full_mode_width(self):
        with pytest.raises(ConfigError):
            RunConfig(benchmark="bv", n_qubits=30)
        assert RunConfig(benchmark="bv", n_qubits=30, mode="merge").n_qubits == 30

    def test_alpha_range(self):
        with pytest.raises(ConfigError):
            RunConfig(benchmark="bv", n_qubits=4, alpha=0)

    def test_subset_needs_states(self):
        with pytest.raises(ConfigError):
            RunConfig(benchmark="bv", n_qubits=4, mode="subset")

    def test_sampling_needs_full_mode(self):
        with pytest.raises(ConfigError):
            RunConfig(benchmark="bv", n_qubits=4, mode="merge", sampler="optimal")

    def test_unknown_field(self):
        with pytest.raises(ValidationError):
            RunConfig(benchmark="bv", n_qubits=4, colour="red")

    def test_file_with_overrides(self):
        config = RunConfig.from_file(os.path.join(SAMPLE_DATA, "run_config.json"), alpha=0.4, seed=None)
        assert config.alpha == 0.4
        assert config.seed == 1234
        assert config.circuit_path.endswith("bv8.circuit")


class TestReportTools:
    def test_write_and_load(self, tmp_path):
        pipeline = CircuitCuttingPipeline(RunConfig(graph_spec=GRAPH_SPEC, mode="cost"))
        report = pipeline.run()
        path = write_report(report, str(tmp_path / "cost.json"), pipeline.tables)
        data = load_report(path)
        assert data["schema_version"] == report.schema_version
        assert data["cost"]["input_storage"] == 1168
        plan = pd.read_csv(tmp_path / "cost_plan.csv")
        assert plan["multiplications"].tolist() == [512, 2048]

    def test_lambda_histogram(self):
        frame = lambda_histogram(np.array([0, 3, 1, 3, 0]))
        assert frame["lambda"].tolist() == [1, 3]
        assert frame["terms"].tolist() == [1, 2]

    def test_distribution_summary(self):
        summary = distribution_summary(np.array([0.1, 0.6, 0.3, 0.0]), 2, top=2)
        assert summary["sum"] == pytest.approx(1.0)
        assert summary["top_states"] == [["01", 0.6], ["10", 0.3]]


class TestCli:
    def run_cli(self, monkeypatch, *args):
        monkeypatch.setattr(sys, "argv", ["main.py", *args])
        main.main()

    def test_cost(self, monkeypatch, tmp_path):
        out = tmp_path / "report.json"
        self.run_cli(monkeypatch, "cost", "--graph", GRAPH_SPEC, "-o", str(out))
        assert load_report(str(out))["cost"]["naive_multiplications"] == 8704
        assert (tmp_path / "report_plan.csv").exists()

    def test_run(self, monkeypatch, tmp_path):
        out = tmp_path / "bv8.json"
        self.run_cli(
            monkeypatch, "run", "--circuit", os.path.join(SAMPLE_DATA, "bv8.circuit"),
            "--alpha", "0.5", "--max-subcircuits", "2", "-o", str(out),
        )
        assert load_report(str(out))["result"]["linf_error"] <= 1e-9

    def test_infeasible_exit_code(self, monkeypatch, tmp_path):
        with pytest.raises(SystemExit) as info:
            self.run_cli(
                monkeypatch, "cut", "--bench", "bv", "--n", "4", "--param", 'secret="1100"',
                "--degree-cap", "0", "-o", str(tmp_path / "cut.json"),
            )
        assert info.value.code == 2
        assert load_report(str(tmp_path / "cut.json"))["error"]["phase"] == "cut"

    def test_missing_circuit_exit_code(self, monkeypatch, tmp_path):
        with pytest.raises(SystemExit) as info:
            self.run_cli(monkeypatch, "run", "--circuit", str(tmp_path / "nope.circuit"), "-o", str(tmp_path / "r.json"))
        assert info.value.code == 1

    def test_merge_top_r_alias(self, monkeypatch, tmp_path):
        out = tmp_path / "merge.json"
        self.run_cli(
            monkeypatch, "merge", "--bench", "bv", "--n", "8", "--param", 'secret="10110010"',
            "--max-bins", "16", "--top-R", "2", "-o", str(out),
        )
        report = load_report(str(out))
        assert report["config"]["top_r"] == 2
        assert report["result"]["solutions"][0][0] == "10110010"
        assert report["actual_multiplications"] == report["cost"]["multiplications"]

    def test_sampler_none_skips_sampling(self, monkeypatch, tmp_path):
        out = tmp_path / "none.json"
        self.run_cli(
            monkeypatch, "sample", "--bench", "bv", "--n", "6", "--param", 'secret="101101"',
            "--sampler", "none", "-o", str(out),
        )
        report = load_report(str(out))
        assert report["sampling"] is None
        assert report["result"]["linf_error"] <= 1e-9

    def test_bench_writes_circuit(self, monkeypatch, tmp_path):
        out = tmp_path / "bv5.circuit"
        self.run_cli(monkeypatch, "bench", "bv", "--n", "5", "--param", 'secret="10110"', "--out", str(out))
        assert load_circuit(str(out)) == bv(5, secret="10110")
