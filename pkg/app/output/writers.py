"""
Artifact writers

Every writer is deterministic for identical input:
- PGM P5 for masks and region maps, rows written from the top of the box down
- CSV (RFC 4180, CRLF line ends) through pandas
- JSON with sorted keys and two-space indentation
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, Union

import numpy as np
import pandas as pd

logger = logging.getLogger("output.writers")

PathLike = Union[str, Path]

# excluded, mild, critical, strong
REGION_GREYS = {-1: 0, 0: 85, 1: 170, 2: 255}


def jsonable(value: Any) -> Any:
    """Plain JSON types: numpy scalars unwrapped, infinities as "inf"/"-inf", NaN as null"""
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def dumps_json(payload: Any) -> str:
    """Canonical JSON text (sorted keys, infinities as strings)"""
    return json.dumps(jsonable(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path: PathLike, payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(payload), encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path


def pgm_bytes(image: np.ndarray) -> bytes:
    """
    Binary PGM of a grid indexed [row=y, col=x]

    Args:
        image: uint8-compatible array; row 0 is the bottom of the box

    Returns:
        bytes: P5 file content with maxval 255
    """
    image = np.asarray(image)
    if image.ndim != 2:
        raise ValueError(f"PGM needs a 2-D grid, got shape {image.shape}")
    rows, cols = image.shape
    header = f"P5\n{cols} {rows}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(np.flipud(image).astype(np.uint8)).tobytes()


def write_pgm(path: PathLike, image: np.ndarray) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(pgm_bytes(image))
    logger.info(f"Wrote {path}")
    return path


def mask_image(mask: np.ndarray) -> np.ndarray:
    return np.where(np.asarray(mask, dtype=bool), 255, 0).astype(np.uint8)


def region_image(codes: np.ndarray) -> np.ndarray:
    image = np.zeros(codes.shape, dtype=np.uint8)
    for code, grey in REGION_GREYS.items():
        image[codes == code] = grey
    return image


def write_csv(path: PathLike, frame: Union[pd.DataFrame, Dict[str, Iterable]]) -> Path:
    """Write a table as RFC 4180 CSV"""
    if not isinstance(frame, pd.DataFrame):
        frame = pd.DataFrame(frame)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\r\n", float_format="%.12g")
    logger.info(f"Wrote {path}")
    return path


def grid_frame(xs: np.ndarray, ys: np.ndarray, values: np.ndarray, name: str = "value") -> pd.DataFrame:
    """Long-format table (x, y, value) of a grid indexed [row=y, col=x]"""
    gx, gy = np.meshgrid(xs, ys)
    return pd.DataFrame({"x": gx.ravel(), "y": gy.ravel(), name: np.asarray(values).ravel()})
