"""Dataset CSV reading and writing (comma delimiter, header row, `y` as last column)."""
import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from core.dataset import Dataset
from core.errors import MissingResponseColumn, ParseError

logger = logging.getLogger(__name__)

RESPONSE_COLUMN = "y"
PREDICTION_COLUMN = "y_pred"
FLOAT_FORMAT = "%.17g"


def _read_table(path: "str | Path") -> pd.DataFrame:
    path = Path(path)
    if not path.is_file():
        raise ParseError(f"CSV file not found: {path}")
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise ParseError(f"Could not read {path}: {e}") from None


def _parse_numeric(frame: pd.DataFrame, path: "str | Path") -> np.ndarray:
    """Float matrix of every cell; the first bad cell is reported 1-based (data row, column)."""
    values = np.empty(frame.shape, dtype=float)
    for i, row in enumerate(frame.itertuples(index=False, name=None)):
        for j, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                value = float("nan")
            if not np.isfinite(value):
                raise ParseError(
                    f"{path}: cell {cell!r} in column '{frame.columns[j]}' is not a finite number",
                    row=i + 1,
                    column=j + 1,
                )
            values[i, j] = value
    return values


def load_csv(path: "str | Path") -> Dataset:
    """
    Load a dataset whose columns are the input coordinates followed by `y`.

    Raises:
        ParseError: unreadable file, no data rows or a non-numeric / non-finite cell
        MissingResponseColumn: the last header entry is not `y`
    """
    frame = _read_table(path)
    columns = [str(c).strip() for c in frame.columns]
    if len(columns) < 2 or columns[-1] != RESPONSE_COLUMN:
        raise MissingResponseColumn(f"{path}: last column must be '{RESPONSE_COLUMN}', header is {columns}")
    if frame.shape[0] == 0:
        raise ParseError(f"{path}: no data rows")

    values = _parse_numeric(frame, path)
    logger.debug(f"Loaded {values.shape[0]} rows with {values.shape[1] - 1} inputs from {path}")
    return Dataset(values[:, :-1], values[:, -1], tuple(columns[:-1]))


def load_points(path: "str | Path") -> tuple[np.ndarray, tuple[str, ...]]:
    """Input points of a CSV; a trailing `y` column is ignored if present."""
    frame = _read_table(path)
    columns = [str(c).strip() for c in frame.columns]
    if columns and columns[-1] == RESPONSE_COLUMN:
        frame = frame.iloc[:, :-1]
        columns = columns[:-1]
    if frame.shape[0] == 0 or not columns:
        raise ParseError(f"{path}: no input data")
    return _parse_numeric(frame, path), tuple(columns)


def _input_names(dim: int, column_names: Optional[Sequence[str]]) -> list[str]:
    return list(column_names) if column_names else [f"x{i + 1}" for i in range(dim)]


def save_csv(data: Dataset, path: "str | Path") -> Path:
    """Write `data` with 17 significant digits so load_csv restores every value exactly."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(data.points, columns=_input_names(data.dim, data.column_names))
    frame[RESPONSE_COLUMN] = data.responses
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def save_predictions(
    points: np.ndarray, predictions: np.ndarray, path: "str | Path",
    column_names: Optional[Sequence[str]] = None,
) -> Path:
    """Write input points followed by a `y_pred` column."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    points = np.array(points, dtype=float, ndmin=2)
    frame = pd.DataFrame(points, columns=_input_names(points.shape[1], column_names))
    frame[PREDICTION_COLUMN] = np.asarray(predictions, dtype=float).reshape(-1)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path
