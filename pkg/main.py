#!/usr/bin/env python3
"""
Circuit Cutting Engine

Partitions a quantum circuit into subcircuits, evaluates them with the
built-in statevector simulator and reconstructs the output distribution by
tensor-network contraction, states merging or importance sampling.

Usage:
    python main.py cut --circuit sample_data/bv8.circuit
    python main.py run --bench bv --n 10 --alpha 0.5
    python main.py merge --bench bv --n 16 --max-bins 256
    python main.py sample --bench bv --n 8 --sampler optimal --samples 64 --trials 200
    python main.py bench bv --n 8 --out bv8.circuit
    python main.py cost --graph sample_data/compute_graph.json
"""
import argparse
import json
import logging
import os
import sys
from datetime import datetime

# Add src to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from pydantic import ValidationError

from src.circuit.benchmarks import BENCHMARK_KINDS, generate_benchmark
from src.circuit.ir import serialize_circuit
from src.config.settings import LOG_LEVEL, OUTPUT_DIR
from src.models.run import RunConfig
from src.pipeline import CircuitCuttingPipeline
from src.tools.report_tools import write_report
from src.utils.errors import CircuitCutError, InfeasiblePartitionError

EXIT_INFEASIBLE = 2

# subcommand -> pipeline mode
COMMAND_MODES = {
    "cut": "cut",
    "run": "full",
    "merge": "merge",
    "sample": "full",
    "cost": "cost",
}


def parse_params(pairs: list[str]) -> dict:
    """Turn ``key=value`` pairs into benchmark parameters; values are read as JSON when possible."""
    params = {}
    for pair in pairs or []:
        key, _, value = pair.partition("=")
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    return params


def build_config(args: argparse.Namespace) -> RunConfig:
    mode = COMMAND_MODES[args.command]
    if args.command == "merge" and args.states:
        mode = "subset"
    overrides = {
        "mode": mode,
        "circuit_path": args.circuit,
        "benchmark": args.bench,
        "n_qubits": args.n,
        "benchmark_params": parse_params(args.param) or None,
        "graph_spec": getattr(args, "graph", None),
        "alpha": args.alpha,
        "max_subcircuits": args.max_subcircuits,
        "solver_timeout_s": args.solver_timeout_s,
        "degree_cap": args.degree_cap,
        "memory_limit_values": args.memory_limit_values,
        "seed": args.seed,
        "output": args.output,
        "max_bins": getattr(args, "max_bins", None),
        "top_r": getattr(args, "top_r", None),
        "max_recursions": getattr(args, "max_recursions", None),
        "solution_threshold": getattr(args, "solution_threshold", None),
        "states": getattr(args, "states", None),
        "sampler": getattr(args, "sampler", None),
        "samples": getattr(args, "samples", None),
        "trials": getattr(args, "trials", None),
        "narrow_subcircuit": getattr(args, "narrow", None),
    }
    if args.command == "sample" and overrides["sampler"] is None:
        overrides["sampler"] = "optimal"
    if args.config:
        return RunConfig.from_file(args.config, **overrides)
    return RunConfig(**{k: v for k, v in overrides.items() if v is not None})


def run_job(config: RunConfig) -> str:
    """Run one pipeline job and save its report.

    Args:
        config: Validated run configuration

    Returns:
        Path to the generated report
    """
    source = config.circuit_path or config.graph_spec or f"{config.benchmark}({config.n_qubits})"
    print("\n" + "=" * 60)
    print("✂️  CIRCUIT CUTTING ENGINE")
    print("=" * 60)
    print(f"📄 Input: {source}")
    print(f"⚙️  Mode: {config.mode}")
    if config.sampler != "none":
        print(f"🎲 Sampler: {config.sampler} (c={config.samples}, T={config.trials}, seed={config.seed})")
    print(f"🕐 Started: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    print("=" * 60 + "\n")

    pipeline = CircuitCuttingPipeline(config)
    try:
        report = pipeline.run()
    finally:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        name = os.path.splitext(os.path.basename(source))[0].replace("(", "_").replace(")", "")
        report_path = config.output or os.path.join(OUTPUT_DIR, f"{config.mode}_{name}_{timestamp}.json")
        write_report(pipeline.report, report_path, pipeline.tables)

    print("\n" + "=" * 60)
    print("✅ RUN COMPLETE")
    print("=" * 60)
    if report.cut:
        print(f"🔪 Cuts: K={report.cut['K']}, L={report.cut['L']}, subcircuits={report.cut['n_subcircuits']}")
    if report.cost:
        print(f"🧮 Multiplications: {report.cost.multiplications:,} (naive {report.cost.naive_multiplications:,})")
    if report.result and "linf_error" in report.result:
        print(f"🎯 L-inf error vs direct simulation: {report.result['linf_error']:.3e}")
    if report.result and "solutions" in report.result:
        print(f"🔎 Solutions: {report.result['solutions']} after {report.result['recursions']} recursion(s)")
    print(f"📊 Report saved to: {report_path}")
    print("=" * 60 + "\n")
    return report_path


def run_bench(args: argparse.Namespace) -> None:
    circuit = generate_benchmark(args.kind, args.n, seed=args.seed, **parse_params(args.param))
    text = serialize_circuit(circuit)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
        print(f"📄 Wrote {args.kind}({args.n}) with {len(circuit.gates)} gates to {args.out}")
    else:
        sys.stdout.write(text)


def add_source_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON run configuration; flags override its values")
    parser.add_argument("--circuit", help="Circuit text file")
    parser.add_argument("--bench", choices=BENCHMARK_KINDS, help="Generate a benchmark circuit instead")
    parser.add_argument("--n", type=int, help="Benchmark qubit count")
    parser.add_argument("--param", action="append", help="Benchmark parameter key=value (repeatable)")
    parser.add_argument("--seed", type=int, help="Seed for generators and sampling")
    parser.add_argument("--alpha", type=float, help="Max load factor per subcircuit")
    parser.add_argument("--max-subcircuits", type=int, help="Largest subcircuit count to try")
    parser.add_argument("--solver-timeout-s", type=float, help="Cut search time limit per subcircuit count")
    parser.add_argument("--degree-cap", type=int, help="Max cuts attached to one subcircuit")
    parser.add_argument("--memory-limit-values", type=int, help="Values allowed per tensor set before slicing")
    parser.add_argument("--output", "-o", help="Report path (JSON)")


def main():
    """Main entry point."""
    parser = argparse.ArgumentParser(
        description="Circuit Cutting Engine",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py cut --circuit sample_data/bv8.circuit       # Find cuts only
  python main.py run --bench bv --n 10                       # Exact reconstruction
  python main.py merge --bench bv --n 16 --max-bins 256      # States merging search
  python main.py merge --bench bv --n 10 --states 1011010011 # Probabilities of listed states
  python main.py sample --bench bv --n 8 --samples 64        # Importance sampling
  python main.py bench qaoa-regular --n 8 --out q8.circuit   # Write a benchmark circuit
  python main.py cost --graph sample_data/compute_graph.json # Cost model only
  python main.py run --config sample_data/run_config.json    # From a config file
        """
    )
    commands = parser.add_subparsers(dest="command", required=True)

    add_source_arguments(commands.add_parser("cut", help="Find cut locations"))
    add_source_arguments(commands.add_parser("run", help="Cut and reconstruct the full distribution"))

    merge = commands.add_parser("merge", help="States merging search, or listed-state probabilities")
    add_source_arguments(merge)
    merge.add_argument("--max-bins", type=int, help="Bins per recursion (M)")
    merge.add_argument("--top-r", "--top-R", dest="top_r", type=int, help="Candidate bins kept (R)")
    merge.add_argument("--max-recursions", type=int, help="Recursion budget")
    merge.add_argument("--solution-threshold", type=float, help="Min probability of a solution state")
    merge.add_argument("--states", nargs="+", help="Bitstrings to evaluate in one recursion")

    sample = commands.add_parser("sample", help="Importance-sampled reconstruction")
    add_source_arguments(sample)
    sample.add_argument(
        "--sampler", choices=("none", "uniform", "essential", "optimal"), help="Term distribution (default optimal)"
    )
    sample.add_argument("--samples", type=int, help="Sample count c")
    sample.add_argument("--trials", type=int, help="Independent seeded trials")
    sample.add_argument("--narrow", type=int, help="Subcircuit driving essential sampling")

    cost = commands.add_parser("cost", help="Predict contraction cost")
    add_source_arguments(cost)
    cost.add_argument("--graph", help="Compute graph spec (JSON)")

    bench = commands.add_parser("bench", help="Write a benchmark circuit")
    bench.add_argument("kind", choices=BENCHMARK_KINDS)
    bench.add_argument("--n", type=int, required=True, help="Qubit count")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--param", action="append", help="Generator parameter key=value (repeatable)")
    bench.add_argument("--out", help="Output file; stdout when omitted")

    args = parser.parse_args()
    logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        if args.command == "bench":
            run_bench(args)
        else:
            run_job(build_config(args))
    except InfeasiblePartitionError as e:
        print(f"\n❌ Infeasible: {e}")
        sys.exit(EXIT_INFEASIBLE)
    except (CircuitCutError, ValidationError, OSError) as e:
        print(f"\n❌ Error: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
