"""
Parsing of pipe-delimited vintage files
"""

import logging
from pathlib import Path
from typing import BinaryIO

import numpy as np
import pandas as pd

from src.exceptions import ParseIssue, VintageParseError

from ..layout import FieldKind, FieldSpec, ORIGINATION_LAYOUT, PERFORMANCE_LAYOUT, ZERO_BALANCE_CODES
from ..schemas import ParsedVintage

logger = logging.getLogger(__name__)


def _read_lines(stream: BinaryIO | bytes) -> list[str | None]:
    """
    Decoded lines; a line that is not valid UTF-8 comes back as None
    """
    data = stream if isinstance(stream, bytes) else stream.read()
    try:
        return data.decode("utf-8").splitlines()
    except UnicodeDecodeError:
        pass
    lines: list[str | None] = []
    for raw in data.splitlines():
        try:
            lines.append(raw.decode("utf-8"))
        except UnicodeDecodeError:
            lines.append(None)
    return lines


def _parse_lines(
    lines: list[str | None],
    layout: tuple[FieldSpec, ...],
    label: str,
    issues: list[ParseIssue],
) -> tuple[pd.DataFrame, int]:
    """
    Splits lines into a typed frame. Malformed lines are appended to
    `issues` and left out. Returns the frame and the count of numeric
    cells that were unreadable in non-mandatory fields (read as blank).
    """
    width = len(layout)
    rows: list[list[str]] = []
    numbers: list[int] = []
    for number, line in enumerate(lines, start=1):
        if line is None:
            issues.append(ParseIssue(file=label, line=number, reason="line is not valid UTF-8"))
            continue
        if not line.strip():
            continue
        values = line.split("|")
        if len(values) != width:
            issues.append(ParseIssue(
                file=label, line=number, reason=f"expected {width} fields, found {len(values)}",
            ))
            continue
        rows.append([value.strip() for value in values])
        numbers.append(number)

    frame = pd.DataFrame(rows, columns=[field.name for field in layout], dtype=object)
    line_numbers = np.asarray(numbers, dtype=int)
    bad = np.zeros(len(frame), dtype=bool)
    unparseable_cells = 0

    def flag(mask: np.ndarray, reason: str) -> None:
        for number in line_numbers[mask]:
            issues.append(ParseIssue(file=label, line=int(number), reason=reason))
        bad[mask] = True

    for field in layout:
        raw = frame[field.name]
        blank = (raw == "").to_numpy()

        if field.kind in (FieldKind.NUMERIC, FieldKind.DATE):
            values = pd.to_numeric(raw.where(~blank), errors="coerce").astype(float)
            unparseable = values.isna().to_numpy() & ~blank
            if field.mandatory:
                flag(blank, f"mandatory field {field.name} is empty")
                flag(unparseable, f"unparseable number in mandatory field {field.name}")
            else:
                unparseable_cells += int(unparseable.sum())
            if field.sentinels:
                values = values.mask(values.isin(field.sentinels))
            frame[field.name] = values
        elif field.kind == FieldKind.TARGET:
            unknown = (~raw.isin(ZERO_BALANCE_CODES)).to_numpy()
            flag(unknown, f"unknown {field.name}")
        else:
            if field.mandatory:
                flag(blank, f"mandatory field {field.name} is empty")
            frame[field.name] = raw.where(~blank, None)

    if layout is ORIGINATION_LAYOUT:
        duplicated = np.zeros(len(frame), dtype=bool)
        duplicated[~bad] = frame.loc[~bad, "loan_sequence_number"].duplicated().to_numpy()
        flag(duplicated, "duplicate loan_sequence_number")

    frame = frame.loc[~bad].reset_index(drop=True)
    return frame, unparseable_cells


def parse_vintage(
    origination_file: BinaryIO | bytes,
    performance_file: BinaryIO | bytes,
    vintage_year: int | None = None,
    strict: bool = True,
) -> ParsedVintage:
    """
    Parses one vintage. Every well-formed line yields one row; malformed
    lines are reported with their line numbers. With `strict` any malformed
    line raises `VintageParseError`, otherwise they are logged and kept in
    `ParsedVintage.issues`.
    """
    issues: list[ParseIssue] = []
    origination, orig_unparseable = _parse_lines(
        _read_lines(origination_file), ORIGINATION_LAYOUT, "origination", issues,
    )
    performance, perf_unparseable = _parse_lines(
        _read_lines(performance_file), PERFORMANCE_LAYOUT, "performance", issues,
    )

    if issues:
        if strict:
            raise VintageParseError(issues)
        for issue in issues:
            logger.warning("Skipped malformed line %s", issue)

    logger.info(
        "Parsed vintage %s: %d origination rows, %d performance rows",
        vintage_year, len(origination), len(performance),
    )
    return ParsedVintage(
        vintage_year=vintage_year,
        origination=origination,
        performance=performance,
        issues=issues,
        unparseable_cells=orig_unparseable + perf_unparseable,
    )


def parse_vintage_files(
    origination_path: Path,
    performance_path: Path,
    vintage_year: int | None = None,
    strict: bool = True,
) -> ParsedVintage:
    with open(origination_path, "rb") as origination, open(performance_path, "rb") as performance:
        return parse_vintage(origination, performance, vintage_year=vintage_year, strict=strict)
