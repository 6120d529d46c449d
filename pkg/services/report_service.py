"""
Report Service
Assembles JSON reports and tabular exports for the command line
"""

import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Union

import pandas as pd
from pydantic import BaseModel

from app.config import get_engine_config
from app.constants import APP_VERSION, JSON_INDENT, RESULT_SCHEMA_VERSION
from modules.search import CandidateReport
from utils.logger import get_logger

logger = get_logger(__name__)

Payload = Union[BaseModel, Dict[str, Any], List[Any]]


def to_jsonable(payload: Payload) -> Any:
    """Plain JSON value of a model, a list of models, or a dict."""
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json")
    if isinstance(payload, list):
        return [to_jsonable(item) for item in payload]
    return payload


def build_envelope(command: str, payload: Payload) -> Dict[str, Any]:
    """
    Wrap a result with the fields every report carries.

    No timestamps or timings: reruns must be byte-identical.
    """
    return {
        "command": command,
        "schema_version": RESULT_SCHEMA_VERSION,
        "version": APP_VERSION,
        "engine": get_engine_config(),
        "result": to_jsonable(payload),
    }


def dumps_report(report: Dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=JSON_INDENT, ensure_ascii=False) + "\n"


def write_report(report: Dict[str, Any], path: Optional[Path] = None, stream: Optional[TextIO] = None) -> str:
    """Write the report to ``path`` if given, else to ``stream`` (stdout)."""
    text = dumps_report(report)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Report written to {path}")
    else:
        (stream or sys.stdout).write(text)
    return text


# ============================================
# Tabular Export
# ============================================

CANDIDATE_COLUMNS = [
    "degree",
    "group_order",
    "cycles",
    "classes",
    "genus",
    "polynomial",
    "normal_sigma_infinity",
    "charschinzel",
    "reducible",
    "orbit_lengths",
    "newly_reducible",
    "verdict",
    "survivor",
    "bound_exceeded",
    "key",
]


def candidates_frame(reports: Sequence[CandidateReport]) -> pd.DataFrame:
    """One row per candidate class, in report order."""
    rows = []
    for r in reports:
        rows.append({
            "degree": r.degree,
            "group_order": r.group["order"] if r.group else None,
            "cycles": " ; ".join(r.tuple.cycles),
            "classes": " ; ".join(r.classes),
            "genus": r.genus,
            "polynomial": r.polynomial,
            "normal_sigma_infinity": r.normal_sigma_infinity,
            "charschinzel": r.charschinzel.passed if r.charschinzel else None,
            "reducible": r.reducible,
            "orbit_lengths": " ".join(map(str, r.orbit_lengths)) if r.orbit_lengths else "",
            "newly_reducible": r.newly_reducible,
            "verdict": r.verdict.value if r.verdict else "",
            "survivor": r.survivor,
            "bound_exceeded": r.bound_exceeded,
            "key": r.key,
        })
    return pd.DataFrame(rows, columns=CANDIDATE_COLUMNS)


def write_candidates_csv(reports: Sequence[CandidateReport], path: Path) -> pd.DataFrame:
    df = candidates_frame(reports)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False)
    logger.info(f"Wrote {len(df)} candidate rows to {path}")
    return df


def survivor_summary(reports: Sequence[CandidateReport]) -> Dict[str, Any]:
    """Candidate and survivor counts per degree."""
    df = candidates_frame(reports)
    if df.empty:
        return {"candidates": 0, "survivors": 0, "by_degree": {}}
    grouped = df.groupby("degree").agg(candidates=("key", "count"), survivors=("survivor", "sum"))
    return {
        "candidates": int(len(df)),
        "survivors": int(df["survivor"].sum()),
        "by_degree": {
            str(degree): {"candidates": int(row.candidates), "survivors": int(row.survivors)}
            for degree, row in grouped.iterrows()
        },
    }


__all__ = [
    'to_jsonable',
    'build_envelope',
    'dumps_report',
    'write_report',
    'candidates_frame',
    'write_candidates_csv',
    'survivor_summary',
]
