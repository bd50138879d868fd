"""
Output Writers

Snapshot tables in long format (header `t,x,value`, row-major in time, 17
significant digits) plus JSON summaries. pandas does the CSV work.
"""

import logging
import math
from pathlib import Path
from typing import Dict, List, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel
from scipy.integrate import trapezoid

from ffdrive.constants.constants import CSV_FLOAT_FORMAT

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def snapshot_frame(times: Sequence[float], x: np.ndarray, values: np.ndarray) -> pd.DataFrame:
    """Long-format table of a (n_times, n_points) array."""
    values = np.asarray(values, dtype=float)
    n_t, n_x = values.shape
    return pd.DataFrame({
        "t": np.repeat(np.asarray(times, dtype=float), n_x),
        "x": np.tile(np.asarray(x, dtype=float), n_t),
        "value": values.reshape(-1),
    })


def write_snapshot_csv(path: PathLike, times: Sequence[float], x: np.ndarray, values: np.ndarray) -> Path:
    path = Path(path)
    snapshot_frame(times, x, values).to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    logger.debug(f"Wrote {path}")
    return path


def read_snapshot_csv(path: PathLike) -> pd.DataFrame:
    return pd.read_csv(path, float_precision="round_trip")


def norms_from_density_csv(path: PathLike) -> List[float]:
    """sqrt(trapezoid(|psi|^2)) per snapshot time of a density table."""
    frame = read_snapshot_csv(path)
    norms = []
    for _, group in frame.groupby("t", sort=False):
        norms.append(math.sqrt(float(trapezoid(group["value"].to_numpy(), x=group["x"].to_numpy()))))
    return norms


def write_json(path: PathLike, model: BaseModel) -> Path:
    path = Path(path)
    path.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.debug(f"Wrote {path}")
    return path


def write_table_csv(path: PathLike, rows: List[Dict[str, object]], columns: Sequence[str]) -> Path:
    path = Path(path)
    pd.DataFrame(rows, columns=list(columns)).to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
    return path
