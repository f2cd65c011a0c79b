# app/writers.py
"""
Distribution and report writers.

Output is deterministic: rows follow step order then the label order of the
distribution, probabilities keep their shortest round-trip form and JSON keys
keep insertion order. Identical runs give identical bytes.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Sequence, Union

import pandas as pd
from pydantic import BaseModel

from app.core.errors import ParseError
from app.schemas.simulation import OutputFormat

logger = logging.getLogger(__name__)

Distribution = Dict[str, float]


def distribution_frame(distributions: Sequence[Distribution]) -> pd.DataFrame:
    """Long table with one (step, label, probability) row per label and step."""
    rows = [
        (step, label, float(value))
        for step, dist in enumerate(distributions)
        for label, value in dist.items()
    ]
    return pd.DataFrame(rows, columns=["step", "label", "probability"])


def write_csv(path: Union[str, Path], distributions: Sequence[Distribution]) -> None:
    try:
        distribution_frame(distributions).to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    except OSError as e:
        raise ParseError(f"Cannot write {path}: {e}") from e


def write_json(path: Union[str, Path], distributions: Sequence[Distribution]) -> None:
    payload: List[Distribution] = [{label: float(v) for label, v in dist.items()} for dist in distributions]
    try:
        with Path(path).open("w", encoding="utf-8") as handle:
            json.dump(payload, handle, indent=2)
            handle.write("\n")
    except OSError as e:
        raise ParseError(f"Cannot write {path}: {e}") from e


def write_distributions(
    path: Union[str, Path],
    distributions: Sequence[Distribution],
    fmt: OutputFormat = OutputFormat.CSV,
) -> None:
    writers = {
        OutputFormat.CSV: write_csv,
        OutputFormat.JSON: write_json,
    }
    writers[OutputFormat(fmt)](path, distributions)
    logger.info(f"Wrote {len(distributions)} steps to {path}")


def write_report(path: Union[str, Path], report: BaseModel) -> None:
    try:
        with Path(path).open("w", encoding="utf-8") as handle:
            handle.write(report.model_dump_json(indent=2))
            handle.write("\n")
    except OSError as e:
        raise ParseError(f"Cannot write {path}: {e}") from e
    logger.info(f"Wrote report to {path}")


def summary(distribution: Distribution, digits: int = 6) -> str:
    """Human readable one line per label, rounded for display only."""
    return "\n".join(f"{label}\t{round(value, digits):.{digits}f}" for label, value in distribution.items())
