"""Per-dimension fit reports and the plot-ready error-versus-k table."""
import json
import math
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from core.errors import CorruptFile
from core.metrics import EvalReport
from services.pipeline_service import DimensionReport, GridEntry

REPORT_FORMAT = "dimension-reports"
PLOT_COLUMNS = ["k", "best_val_error", "switch_iteration", "iterations"]


def _finite_or_none(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return _finite_or_none(obj)


def _report_from_dict(data: dict) -> DimensionReport:
    def number(key):
        value = data.get(key)
        return float("inf") if value is None else float(value)

    return DimensionReport(
        k=int(data["k"]),
        best_theta=tuple(data.get("best_theta") or ()),
        best_val_error=number("best_val_error"),
        pso_best_loss=number("pso_best_loss"),
        iterations=int(data.get("iterations", 0)),
        switch_iteration=data.get("switch_iteration"),
        trace=tuple(float("inf") if v is None else float(v) for v in data.get("trace") or ()),
        phases=tuple(data.get("phases") or ()),
        n_failed_evaluations=int(data.get("n_failed_evaluations", 0)),
        nnz=int(data.get("nnz", 0)),
        final_phase=data.get("final_phase", "lasso"),
        error=data.get("error"),
    )


def save_reports(
    reports: Sequence[DimensionReport],
    path: "str | Path",
    selected_k: Optional[int] = None,
    evaluations: Optional[dict[str, EvalReport]] = None,
    grid: Sequence[GridEntry] = (),
) -> Path:
    """Write dimension reports (plus split errors and grid entries) as JSON; non-finite numbers become null."""
    document = {
        "format": REPORT_FORMAT,
        "selected_k": selected_k,
        "dimensions": [asdict(r) for r in reports],
        "evaluations": {split: asdict(e) for split, e in (evaluations or {}).items()},
        "grid": [
            {
                "n_features": g.n_features,
                "q": g.q,
                "k_star": g.k_star,
                "validation_error": g.validation_error,
            }
            for g in grid
        ],
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_clean(document), indent=1) + "\n", encoding="utf-8")
    return path


def load_reports(path: "str | Path") -> list[DimensionReport]:
    """
    Read the dimension reports written by save_reports.

    Raises:
        CorruptFile: missing or malformed report file
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CorruptFile(f"Report file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise CorruptFile(f"{path} is not valid JSON: {e}") from None
    if not isinstance(document, dict) or document.get("format") != REPORT_FORMAT:
        raise CorruptFile(f"{path} is not a {REPORT_FORMAT} file")
    try:
        return [_report_from_dict(d) for d in document["dimensions"]]
    except (KeyError, TypeError, ValueError) as e:
        raise CorruptFile(f"{path} has a malformed dimension entry: {e}") from None


def plot_table(reports: Sequence[DimensionReport]) -> pd.DataFrame:
    """Validation error against k, one row per dimension in ascending k."""
    rows = [
        {
            "k": r.k,
            "best_val_error": r.best_val_error if math.isfinite(r.best_val_error) else None,
            "switch_iteration": r.switch_iteration,
            "iterations": r.iterations,
        }
        for r in sorted(reports, key=lambda r: r.k)
    ]
    frame = pd.DataFrame(rows, columns=PLOT_COLUMNS)
    frame["switch_iteration"] = frame["switch_iteration"].astype("Int64")
    return frame


def save_plot_csv(reports: Sequence[DimensionReport], path: "str | Path") -> Path:
    """Write plot_table(reports); missing values are empty cells."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    plot_table(reports).to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path
