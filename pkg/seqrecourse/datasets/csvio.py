"""
CSV ingestion and writing.

Format: header row, comma separated, decimal point, UTF-8, one label column
with values in {0, 1}, every other column numeric.
"""
import logging
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .. import settings
from ..exceptions import DataFormatError

logger = logging.getLogger(__name__)


def _read_frame(path: Path) -> pd.DataFrame:
    """All cells as stripped strings; the header row becomes the column index."""
    try:
        frame = pd.read_csv(
            path, header=None, dtype=str, keep_default_na=False, encoding='utf-8', skipinitialspace=True,
        )
    except pd.errors.EmptyDataError as e:
        raise DataFormatError(f"{path}: missing header row") from e
    except pd.errors.ParserError as e:
        raise DataFormatError(f"{path}: {e}") from e
    # pandas would rename duplicate headers, so the header is read as row 0
    frame.columns = [str(h).strip() for h in frame.iloc[0].fillna('')]
    frame = frame.iloc[1:].reset_index(drop=True)
    for i, name in enumerate(frame.columns):
        if not name:
            raise DataFormatError(f"{path}: empty header name in column {i + 1}", column=i)
    duplicated = frame.columns[frame.columns.duplicated()]
    if len(duplicated):
        raise DataFormatError(f"{path}: duplicate header name '{duplicated[0]}'", column=duplicated[0])
    return frame


def _parse_column(path: Path, frame: pd.DataFrame, name: str) -> np.ndarray:
    column = frame[name].str.strip()
    parsed = pd.to_numeric(column, errors='coerce').to_numpy(dtype=float, na_value=np.nan)
    bad = ~np.isfinite(parsed)
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        raise DataFormatError(
            f"{path}: invalid numeric value {column.iloc[row]!r} at row {row + 1}, column '{name}'",
            row=row + 1,
            column=name,
        )
    # float() on the text is correctly rounded; the C parser may be off by an ulp
    return column.astype(float).to_numpy()


def load_csv(
    path: Union[str, Path],
    label_column: str = settings.LABEL_COLUMN,
) -> Tuple[np.ndarray, np.ndarray, List[str]]:
    """
    Load a labelled numeric CSV file.

    Args:
        path: CSV file
        label_column: Name of the {0, 1} label column

    Returns:
        (raw n x d feature matrix, n labels, d feature names) in file order;
        values are bit-identical to what write_csv wrote

    Raises:
        DataFormatError: Header problems, non-numeric or non-finite cells
            (with 1-based data row and column name), bad labels
    """
    path = Path(path)
    frame = _read_frame(path)
    names = list(frame.columns)
    if label_column not in names:
        raise DataFormatError(f"{path}: label column '{label_column}' not found", column=label_column)
    if frame.empty:
        raise DataFormatError(f"{path}: no data rows")

    values = {name: _parse_column(path, frame, name) for name in names}

    labels = values.pop(label_column)
    bad = ~np.isin(labels, (0.0, 1.0))
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        raise DataFormatError(
            f"{path}: label at row {row + 1} must be 0 or 1, got {labels[row]!r}",
            row=row + 1,
            column=label_column,
        )
    features = [n for n in names if n != label_column]
    if not features:
        raise DataFormatError(f"{path}: no feature columns besides '{label_column}'")
    raw = np.column_stack([values[n] for n in features])
    logger.info(f"Loaded {raw.shape[0]} rows x {raw.shape[1]} features from {path}")
    return raw, labels.astype(int), features


def write_csv(
    path: Union[str, Path],
    raw: np.ndarray,
    labels: np.ndarray,
    names: Sequence[str],
    label_column: str = settings.LABEL_COLUMN,
) -> Path:
    """Write features then the label column; floats keep full precision."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(np.asarray(raw, dtype=float), columns=list(names))
    frame[label_column] = np.asarray(labels, dtype=int)
    frame.to_csv(path, index=False, encoding='utf-8')
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path
