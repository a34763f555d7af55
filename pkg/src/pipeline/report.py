"""Deterministic serialization of experiment reports to JSON and CSV."""

import json
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Union

import pandas as pd
import structlog
from pydantic import BaseModel, ValidationError

from ..analysis.lang_trotter import LangTrotterRow
from ..analysis.measure import residue_key
from ..analysis.sato_tate import HistogramReport, PointTrace
from ..common.errors import ReportIOError
from ..common.schema import HistogramReportModel

logger = structlog.get_logger(__name__)

HISTOGRAM_COLUMNS = ["d", "bucket", "empirical_count", "theoretical_num", "theoretical_den"]
POINT_COLUMNS = ["d", "prime", "a_x", "bucket"]

PathLike = Union[str, Path]


def _poly_text(coeffs: Sequence[int]) -> str:
    """Ascending coefficients joined by spaces, e.g. '1 0 1' for 1 + t^2."""
    return " ".join(str(c) for c in coeffs)


def dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, default=str)


def write_json(payload: Any, path: PathLike) -> Path:
    filepath = Path(path)
    try:
        filepath.parent.mkdir(parents=True, exist_ok=True)
        filepath.write_text(dump_json(payload) + "\n", encoding="utf-8")
    except OSError as e:
        raise ReportIOError(f"cannot write {filepath}: {e}") from e
    logger.info("Report written", filepath=str(filepath))
    return filepath


def read_json(path: PathLike) -> Any:
    filepath = Path(path)
    try:
        return json.loads(filepath.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ReportIOError(f"cannot read {filepath}: {e}") from e


def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    filepath = Path(path)
    try:
        filepath.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(filepath, index=False)
    except OSError as e:
        raise ReportIOError(f"cannot write {filepath}: {e}") from e
    logger.info("Table written", filepath=str(filepath), rows=len(frame))
    return filepath


def models_payload(models: Iterable[BaseModel]) -> List[dict]:
    return [m.model_dump(mode="json") for m in models]


def histogram_frame(reports: Sequence[HistogramReport]) -> pd.DataFrame:
    """One row per (d, bucket), buckets in lexicographic order."""
    rows = [
        {
            "d": r.d,
            "bucket": residue_key(k),
            "empirical_count": r.buckets.get(k, 0),
            "theoretical_num": r.theoretical[k].numerator,
            "theoretical_den": r.theoretical[k].denominator,
        }
        for r in reports
        for k in sorted(r.theoretical)
    ]
    return pd.DataFrame(rows, columns=HISTOGRAM_COLUMNS)


def emit_report(reports: Sequence[HistogramReport], path: PathLike, fmt: str = "json") -> Path:
    """Write histogram reports; an empty list gives a valid empty document."""
    if fmt == "json":
        return write_json({"reports": models_payload(r.to_model() for r in reports)}, path)
    if fmt == "csv":
        return write_csv(histogram_frame(reports), path)
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report(path: PathLike) -> List[HistogramReport]:
    """Read back a JSON document written by emit_report."""
    payload = read_json(path)
    try:
        models = [HistogramReportModel.model_validate(item) for item in payload.get("reports", [])]
    except (AttributeError, ValidationError) as e:
        raise ReportIOError(f"{path} is not a histogram report: {e}") from e
    return [HistogramReport.from_model(m) for m in models]


def read_histogram_csv(path: PathLike) -> pd.DataFrame:
    filepath = Path(path)
    try:
        return pd.read_csv(filepath, dtype={"bucket": str})
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ReportIOError(f"cannot read {filepath}: {e}") from e


def write_points_csv(points: Sequence[PointTrace], path: PathLike) -> Path:
    """One row per good point: d, prime, a_x, bucket."""
    frame = pd.DataFrame(
        [
            {
                "d": pt.d,
                "prime": _poly_text(pt.prime.to_list()),
                "a_x": _poly_text(pt.a_x.to_list()),
                "bucket": residue_key(pt.bucket),
            }
            for pt in points
        ],
        columns=POINT_COLUMNS,
    )
    return write_csv(frame, path)


def lang_trotter_frame(rows: Sequence[LangTrotterRow]) -> pd.DataFrame:
    return pd.DataFrame([r.to_model().model_dump() for r in rows])
