"""File formats: series CSV, truth/report/config JSON and the flat report CSV."""
import logging
import os
from typing import List, Optional, Type, TypeVar

import msgspec
import numpy as np
import pandas as pd

from .core import ChangepointReport, ModelConfig, TimeSeries, decode, encode, make_series
from .errors import InputFormatError
from .scenarios import GroundTruth

logger = logging.getLogger(__name__)

T_ = TypeVar("T_")


def design_columns(columns: List[str]) -> List[str]:
    """x1, x2, ... in numeric order."""
    xs = [c for c in columns if c.startswith("x") and c[1:].isdigit()]
    return sorted(xs, key=lambda c: int(c[1:]))


def read_series(path: str) -> TimeSeries:
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise InputFormatError(f"cannot read series from {path}: {exc}") from exc
    if "y" not in frame.columns:
        raise InputFormatError(f"{path}: missing required column 'y' (found {', '.join(map(str, frame.columns))})")
    xs = design_columns([str(c) for c in frame.columns])
    try:
        values = frame["y"].to_numpy(dtype=float)
        design = frame[xs].to_numpy(dtype=float) if xs else None
    except ValueError as exc:
        raise InputFormatError(f"{path}: non-numeric data: {exc}") from exc
    labels = [str(v) for v in frame["t"]] if "t" in frame.columns else None
    logger.debug("read %d rows (%d predictors) from %s", len(frame), len(xs), path)
    return make_series(values, design, labels)


def series_frame(series: TimeSeries) -> pd.DataFrame:
    cols = {"t": series.labels if series.labels is not None else np.arange(series.t_len), "y": series.values}
    if series.design is not None:
        for j in range(series.design.shape[1]):
            cols[f"x{j + 1}"] = series.design[:, j]
    return pd.DataFrame(cols)


def write_series(path: str, series: TimeSeries) -> None:
    series_frame(series).to_csv(path, index=False, float_format="%.17g")


def _write_bytes(path: str, data: bytes) -> None:
    with open(path, "wb") as f:
        f.write(data)


def _read_typed(path: str, typ: Type[T_]) -> T_:
    try:
        with open(path, "rb") as f:
            return decode(f.read(), typ)
    except OSError as exc:
        raise InputFormatError(f"cannot open {path}: {exc}") from exc
    except msgspec.DecodeError as exc:
        raise InputFormatError(f"{path}: {exc}") from exc


def write_truth(path: str, truth: GroundTruth) -> None:
    _write_bytes(path, encode(truth))


def read_truth(path: str) -> GroundTruth:
    return _read_typed(path, GroundTruth)


def write_report(path: str, report: ChangepointReport) -> None:
    _write_bytes(path, encode(report))


def read_report(path: str) -> ChangepointReport:
    return _read_typed(path, ChangepointReport)


def load_config(path: Optional[str]) -> ModelConfig:
    """ModelConfig from a JSON file; unknown keys are rejected.  None gives the defaults."""
    if path is None:
        return ModelConfig()
    return _read_typed(path, ModelConfig)


def report_frame(report: ChangepointReport) -> pd.DataFrame:
    """One row per observation; increment quantities sit at their observation index t = k + d."""
    t_len = report.values.shape[0]
    d = report.d

    def at_obs(inc: np.ndarray) -> np.ndarray:
        out = np.full(t_len, np.nan)
        out[d:] = inc
        return out

    is_cp = np.zeros(t_len, dtype=int)
    is_cp[np.asarray(report.changepoints, dtype=int)] = 1
    frame = pd.DataFrame({
        "t": report.labels if report.labels is not None else np.arange(t_len),
        "y": report.values,
        "trend_mean": report.trend_mean,
        "trend_lo95": report.trend_lo95,
        "trend_hi95": report.trend_hi95,
        "obs_lo95": report.obs_lo95,
        "obs_hi95": report.obs_hi95,
        "cp_prob": at_obs(report.cp_prob),
        "is_changepoint": is_cp,
        "kappa": at_obs(report.kappa),
        "psi": at_obs(report.psi),
    })
    if report.outlier_scores is not None:
        flags = np.zeros(t_len, dtype=int)
        flags[np.asarray(report.flagged_outliers or [], dtype=int)] = 1
        frame["outlier_score"] = report.outlier_scores
        frame["is_outlier"] = flags
    if report.cp_window_prob is not None:
        frame["cp_window_prob"] = at_obs(report.cp_window_prob)
    return frame


def write_report_csv(path: str, report: ChangepointReport) -> None:
    report_frame(report).to_csv(path, index=False, float_format="%.17g")


def output_paths(out: str, predictor: Optional[int] = None) -> List[str]:
    """[json, csv] for an output stem; regression reports get a ``.pred<j>`` infix."""
    stem, ext = os.path.splitext(out)
    if ext.lower() not in (".json", ".csv"):
        stem = out
    if predictor is not None:
        stem = f"{stem}.pred{predictor + 1}"
    return [stem + ".json", stem + ".csv"]
