"""Report emission: JSON run reports and CSV tables for external plotting."""
import json
import os

import numpy as np
import pandas as pd

from src.merge.search import MergeState
from src.models.plan import ContractionPlan
from src.models.run import RunReport


def distribution_summary(probabilities: np.ndarray, n_qubits: int, top: int = 10) -> dict:
    """Total mass and the most probable states of a reconstructed distribution."""
    frame = pd.DataFrame({"state": np.arange(len(probabilities)), "probability": probabilities})
    leaders = frame.sort_values(["probability", "state"], ascending=[False, True]).head(top)
    return {
        "sum": float(frame["probability"].sum()),
        "min": float(frame["probability"].min()),
        "top_states": [
            [format(int(row.state), f"0{n_qubits}b"), round(float(row.probability), 12)]
            for row in leaders.itertuples()
        ],
    }


def plan_frame(plan: ContractionPlan) -> pd.DataFrame:
    rows = [
        {
            "step": i + 1,
            "node": step.node,
            "contracted": " ".join(map(str, step.contracted)),
            "rows": step.rows,
            "inner": step.inner,
            "cols": step.cols,
            "multiplications": step.multiplications,
            "operand_storage": step.operand_storage,
            "output_storage": step.output_storage,
        }
        for i, step in enumerate(plan.steps)
    ]
    return pd.DataFrame(rows, columns=[
        "step", "node", "contracted", "rows", "inner", "cols",
        "multiplications", "operand_storage", "output_storage",
    ])


def trace_frame(state: MergeState) -> pd.DataFrame:
    return pd.DataFrame([vars(record) for record in state.trace])


def lambda_histogram(counts: np.ndarray) -> pd.DataFrame:
    """How many terms were drawn exactly ``lambda`` times, for every observed lambda > 0."""
    drawn = pd.Series(counts[counts > 0], name="lambda")
    return drawn.value_counts().sort_index().rename_axis("lambda").reset_index(name="terms")


def merge_summary(state: MergeState) -> dict:
    return {
        "recursions": state.recursions,
        "threshold": state.threshold,
        "solutions": [[bitstring, round(p, 12)] for bitstring, p in state.solutions],
        "output_qubits": [list(q) for q in state.output_qubits],
        "trace": trace_frame(state).round(12).to_dict(orient="records"),
    }


def write_report(report: RunReport, path: str, tables: dict[str, pd.DataFrame] | None = None) -> str:
    """Write the JSON report and any CSV tables next to it; returns the report path."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as f:
        f.write(report.to_json())
    stem = os.path.splitext(path)[0]
    for name, frame in (tables or {}).items():
        frame.to_csv(f"{stem}_{name}.csv", index=False)
    return path


def load_report(path: str) -> dict:
    with open(path, "r") as f:
        return json.load(f)
