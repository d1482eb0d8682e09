"""Citation matrices on disk and the environments cut out of them.

A citation matrix is a labeled cited x citing table of non-negative integer
counts: ``cell(i, j)`` is the number of citations journal ``j`` (column) gave
to journal ``i`` (row) in one year.  This module parses and serializes the
CSV form of such matrices, restricts them to the citation impact environment
of a seed journal, flips between the citing and cited analysis directions,
and assembles per-year series.

All functions are pure; matrices are treated as immutable once built.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CitationMatrix",
    "YearSeries",
    "parse_citation_csv",
    "serialize_citation_csv",
    "build_environment",
    "select_direction",
    "zero_diagonal",
    "load_year_series",
    "load_year_dir",
]


@dataclass(frozen=True)
class CitationMatrix:
    """Labeled cited x citing matrix of citation counts for one year."""

    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    cells: np.ndarray  # shape (len(row_labels), len(col_labels)), integer
    year: int | None = None

    def __post_init__(self):
        cells = np.asarray(self.cells)
        if cells.shape != (len(self.row_labels), len(self.col_labels)):
            raise ValueError(
                f"cell block is {cells.shape}, labels imply "
                f"({len(self.row_labels)}, {len(self.col_labels)})"
            )
        if np.any(cells < 0):
            raise ValueError("citation counts must be non-negative")
        for name, labels in (("row", self.row_labels), ("column", self.col_labels)):
            dup = _first_duplicate(labels)
            if dup is not None:
                raise ValueError(f"duplicate {name} label: {dup!r}")
        object.__setattr__(self, "cells", cells)

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape

    def cell(self, cited: str, citing: str) -> int:
        return int(self.cells[self.row_labels.index(cited), self.col_labels.index(citing)])


@dataclass(frozen=True)
class YearSeries:
    """Citation matrices keyed by strictly increasing year."""

    entries: tuple[tuple[int, CitationMatrix], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("empty series")
        years = [y for y, _ in self.entries]
        if any(b <= a for a, b in zip(years, years[1:])):
            raise ValueError(f"years not strictly increasing: {years}")

    @property
    def years(self) -> tuple[int, ...]:
        return tuple(y for y, _ in self.entries)


def _first_duplicate(labels: Sequence[str]) -> str | None:
    seen = set()
    for lab in labels:
        if lab in seen:
            return lab
        seen.add(lab)
    return None


_INT_RE = re.compile(r"[+-]?\d+$")


def parse_citation_csv(text: str, year: int | None = None) -> CitationMatrix:
    """Parse the CSV citation-matrix format.

    The first row is a header whose first cell is ignored and whose remaining
    cells are citing-journal labels; each following row starts with a
    cited-journal label followed by integer counts.  Labels may be quoted
    (embedded quotes doubled) and are trimmed of surrounding whitespace; empty
    count cells read as 0.
    """
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]  # ignore blank lines
    if not rows:
        raise ValueError("empty data section")
    header = [c.strip() for c in rows[0]]
    col_labels = header[1:]
    if not col_labels:
        raise ValueError("header has no citing-journal labels")
    dup = _first_duplicate(col_labels)
    if dup is not None:
        raise ValueError(f"duplicate column label: {dup!r}")

    data_rows = rows[1:]
    if not data_rows:
        raise ValueError("empty data section")

    row_labels: list[str] = []
    cells = np.zeros((len(data_rows), len(col_labels)), dtype=np.int64)
    for r, row in enumerate(data_rows):
        if len(row) != len(col_labels) + 1:
            raise ValueError(
                f"ragged row {r + 1}: expected {len(col_labels) + 1} cells, got {len(row)}"
            )
        label = row[0].strip()
        row_labels.append(label)
        for c, raw in enumerate(row[1:]):
            cell = raw.strip()
            if cell == "":
                continue
            if not _INT_RE.match(cell):
                raise ValueError(
                    f"non-numeric cell at row {r + 1}, column {c + 1}: {raw!r}"
                )
            value = int(cell)
            if value < 0:
                raise ValueError(
                    f"negative cell at row {r + 1}, column {c + 1}: {value}"
                )
            cells[r, c] = value
    dup = _first_duplicate(row_labels)
    if dup is not None:
        raise ValueError(f"duplicate row label: {dup!r}")
    return CitationMatrix(tuple(row_labels), tuple(col_labels), cells, year)


def serialize_citation_csv(matrix: CitationMatrix) -> str:
    """Inverse of :func:`parse_citation_csv` (LF newlines, no BOM)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([""] + list(matrix.col_labels))
    for label, row in zip(matrix.row_labels, matrix.cells):
        writer.writerow([label] + [int(v) for v in row])
    return out.getvalue()


def build_environment(matrix: CitationMatrix, seed: str, fraction: float) -> CitationMatrix:
    """Restrict a matrix to the citation impact environment of ``seed``.

    A citing journal stays in the environment when its citations to the seed
    reach ``fraction`` of the seed's total citations received (the sum of the
    seed's row).  The seed itself always stays.  Rows are restricted to the
    same journal set; journals that never appear as cited rows get zero rows.
    Retained labels keep the input column order, with the seed appended when
    it was not a citing column.
    """
    if not 0 < fraction < 1:
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    if seed not in matrix.row_labels:
        raise ValueError(f"seed journal not found among cited rows: {seed!r}")
    seed_row = matrix.cells[matrix.row_labels.index(seed)]
    total = int(seed_row.sum())
    if total == 0:
        raise ValueError(f"seed journal {seed!r} received no citations; environment undefined")
    threshold = fraction * total

    keep = [lab for lab, v in zip(matrix.col_labels, seed_row) if v >= threshold or lab == seed]
    if seed not in keep:
        keep.append(seed)

    row_index = {lab: i for i, lab in enumerate(matrix.row_labels)}
    col_index = {lab: j for j, lab in enumerate(matrix.col_labels)}
    cells = np.zeros((len(keep), len(keep)), dtype=matrix.cells.dtype)
    for i, ri in enumerate(keep):
        if ri not in row_index:
            continue  # journal cited nobody on record: zero row
        src = matrix.cells[row_index[ri]]
        for j, cj in enumerate(keep):
            if cj in col_index:
                cells[i, j] = src[col_index[cj]]
    return CitationMatrix(tuple(keep), tuple(keep), cells, matrix.year)


def select_direction(matrix: CitationMatrix, direction: str) -> CitationMatrix:
    """Pick the analysis direction.

    ``citing`` leaves the matrix alone (factor-analysis variables will be the
    columns, i.e. citing patterns); ``cited`` transposes it so that cited
    patterns become the columns.  Applying ``cited`` twice is the identity.
    """
    if direction == "citing":
        return matrix
    if direction == "cited":
        return CitationMatrix(matrix.col_labels, matrix.row_labels, matrix.cells.T.copy(), matrix.year)
    raise ValueError(f"direction must be 'citing' or 'cited', got {direction!r}")


def zero_diagonal(matrix: CitationMatrix) -> CitationMatrix:
    """Zero journal self-citations (cells whose row and column label match)."""
    cells = matrix.cells.copy()
    col_index = {lab: j for j, lab in enumerate(matrix.col_labels)}
    for i, lab in enumerate(matrix.row_labels):
        j = col_index.get(lab)
        if j is not None:
            cells[i, j] = 0
    return replace(matrix, cells=cells)


def load_year_series(entries: Iterable[tuple[int, str]]) -> YearSeries:
    """Parse ``(year, csv text)`` pairs into a series sorted by year."""
    pairs = list(entries)
    if not pairs:
        raise ValueError("empty series")
    seen: set[int] = set()
    for year, _ in pairs:
        if year in seen:
            raise ValueError(f"duplicate year: {year}")
        seen.add(year)
    parsed = []
    for year, text in sorted(pairs, key=lambda p: p[0]):
        try:
            parsed.append((year, parse_citation_csv(text, year)))
        except ValueError as exc:
            raise ValueError(f"year {year}: {exc}") from exc
    return YearSeries(tuple(parsed))


def load_year_dir(path: str | Path) -> YearSeries:
    """Load a directory of ``<year>.csv`` files as a series."""
    path = Path(path)
    entries = []
    for child in sorted(path.glob("*.csv")):
        if not child.stem.isdigit():
            continue
        entries.append((int(child.stem), child.read_text(encoding="utf-8")))
    if not entries:
        raise ValueError(f"no <year>.csv files found under {path}")
    return load_year_series(entries)
