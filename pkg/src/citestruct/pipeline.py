"""End-to-end per-year analysis, multi-year series, and synthetic data.

One year runs: direction selection -> optional impact-environment threshold
-> optional diagonal zeroing -> column correlations -> principal components
-> varimax rotation -> (optional alignment to the previous year) -> binning
of the three main loading columns -> information measures and the IPF fit.
A series repeats this per year and renders rows in the millibit table
layout.  The synthetic generator produces block-structured citation series
for validation: stable blocks, a scheduled merger of the first two blocks,
or two blocks bridged by general journals.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .binning import bin_loadings
from .corpus import CitationMatrix, YearSeries, build_environment, select_direction, zero_diagonal
from .factors import (
    CorrelationReport,
    FactorSolution,
    align_solution,
    correlation_matrix,
    partial_correlations,
    principal_components,
    varimax_rotate,
)
from .infomeasures import InfoReport, info_report
from .maxent import ipf_fit, ternary_interaction

__all__ = [
    "AnalysisConfig",
    "YearAnalysis",
    "SeriesReport",
    "SeriesRow",
    "SynthParams",
    "analyze_year",
    "analyze_series",
    "synth_series",
]

CONVENTION_NOTE = "Q = -mu*, R = I + Q"


@dataclass(frozen=True)
class AnalysisConfig:
    """Knobs for one run; defaults follow the three-factor, ten-bin setup."""

    factors: int = 3
    bins: int = 10
    direction: str = "citing"
    seed_journal: str | None = None
    env_fraction: float | None = None
    diag_zeroed: bool = False
    use_factors: tuple[int, int, int] = (1, 2, 3)  # 1-based loading columns for Q/I/R
    graph_threshold: float = 0.0
    ipf_tol: float = 1e-10
    ipf_max_cycles: int = 1000

    def __post_init__(self):
        if self.factors < 3:
            raise ValueError(
                "ternary measures need at least three factors; "
                f"got factors={self.factors}"
            )
        if self.bins < 2:
            raise ValueError(f"bins must be >= 2, got {self.bins}")
        if self.direction not in ("citing", "cited"):
            raise ValueError(f"direction must be 'citing' or 'cited', got {self.direction!r}")
        if (self.seed_journal is None) != (self.env_fraction is None):
            raise ValueError("seed_journal and env_fraction must be given together")
        if len(self.use_factors) != 3 or len(set(self.use_factors)) != 3:
            raise ValueError(f"use_factors must name three distinct columns, got {self.use_factors}")
        if any(not 1 <= c <= self.factors for c in self.use_factors):
            raise ValueError(f"use_factors out of 1..{self.factors}: {self.use_factors}")

    def echo_lines(self) -> list[str]:
        """Self-description embedded in every report."""
        return [
            f"factors={self.factors}",
            f"bins={self.bins}",
            f"direction={self.direction}",
            f"seed_journal={self.seed_journal if self.seed_journal is not None else ''}",
            f"env_fraction={self.env_fraction if self.env_fraction is not None else ''}",
            f"zero_diagonal={'true' if self.diag_zeroed else 'false'}",
            "use_factors=" + ",".join(str(c) for c in self.use_factors),
            f"graph_threshold={self.graph_threshold}",
            f"convention={CONVENTION_NOTE}",
        ]


class YearAnalysis(NamedTuple):
    info: InfoReport
    solution: FactorSolution
    correlations: CorrelationReport


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ValueError as exc:
        raise ValueError(f"{name}: {exc}") from exc


def analyze_year(
    matrix: CitationMatrix,
    config: AnalysisConfig = AnalysisConfig(),
    prev_solution: FactorSolution | None = None,
) -> YearAnalysis:
    """Run the full pipeline on one year's citation matrix.

    ``prev_solution`` aligns the rotated factors to an earlier year so that
    series stay comparable; alignment is skipped when the two solutions share
    fewer than two variables.  Errors carry the failing stage's name.
    """
    m = _stage("direction", select_direction, matrix, config.direction)
    if config.seed_journal is not None:
        m = _stage("environment", build_environment, m, config.seed_journal, config.env_fraction)
    if config.diag_zeroed:
        m = zero_diagonal(m)
    corr = _stage("correlation", correlation_matrix, m)
    sol = _stage("extraction", principal_components, corr, config.factors)
    sol = _stage("rotation", varimax_rotate, sol)
    if prev_solution is not None and prev_solution.k == sol.k:
        try:
            sol = align_solution(prev_solution, sol)
        except ValueError:
            pass  # fewer than 2 shared journals: leave unaligned
    columns = [c - 1 for c in config.use_factors]
    three = sol.loadings[:, columns]
    joint = _stage("binning", bin_loadings, three, config.bins)
    fit = _stage("maxent", ipf_fit, joint, config.ipf_tol, config.ipf_max_cycles)
    i_value = _stage("maxent", ternary_interaction, joint, fit)
    report = info_report(joint, i_value, ipf_converged=fit.converged, year=matrix.year)
    correlations = _stage("partial-correlations", partial_correlations, three)
    return YearAnalysis(report, sol, correlations)


@dataclass(frozen=True)
class SeriesRow:
    year: int
    n: int
    q_mb: int
    i_mb: int
    r_mb: int
    r12: float
    r13: float
    r23: float
    pr12_3: float | None
    pr13_2: float | None
    pr23_1: float | None
    ipf_converged: bool


@dataclass(frozen=True)
class SeriesReport:
    """Per-year indicator rows plus any years that failed."""

    rows: tuple[SeriesRow, ...]
    failures: tuple[tuple[int, str], ...]
    config: AnalysisConfig

    @property
    def partial(self) -> bool:
        return bool(self.failures)

    def to_csv(self) -> str:
        out = io.StringIO()
        for line in self.config.echo_lines():
            out.write(f"# {line}\n")
        for year, message in self.failures:
            out.write(f"# failed year {year}: {message}\n")
        out.write("year,N,Q_mb,I_mb,R_mb,r12,r13,r23,pr12_3,pr13_2,pr23_1,ipf_converged\n")
        for row in self.rows:
            cells = [
                str(row.year), str(row.n), str(row.q_mb), str(row.i_mb), str(row.r_mb),
                f"{row.r12:.6f}", f"{row.r13:.6f}", f"{row.r23:.6f}",
                *(("undefined" if v is None else f"{v:.6f}")
                  for v in (row.pr12_3, row.pr13_2, row.pr23_1)),
                "true" if row.ipf_converged else "false",
            ]
            out.write(",".join(cells) + "\n")
        return out.getvalue()


def analyze_series(series: YearSeries, config: AnalysisConfig = AnalysisConfig()) -> SeriesReport:
    """Analyze every year of a series, aligning factors year over year.

    A year that fails is recorded with its error and skipped; the remaining
    rows still come back (the report is then flagged as partial).
    """
    rows: list[SeriesRow] = []
    failures: list[tuple[int, str]] = []
    prev: FactorSolution | None = None
    for year, matrix in series.entries:
        try:
            info, sol, corr = analyze_year(matrix, config, prev_solution=prev)
        except ValueError as exc:
            failures.append((year, str(exc)))
            continue
        prev = sol
        rows.append(SeriesRow(
            year=year, n=info.n,
            q_mb=info.q_mb, i_mb=info.i_mb, r_mb=info.r_mb,
            r12=corr.r12, r13=corr.r13, r23=corr.r23,
            pr12_3=corr.pr12_3, pr13_2=corr.pr13_2, pr23_1=corr.pr23_1,
            ipf_converged=info.ipf_converged,
        ))
    return SeriesReport(tuple(rows), tuple(failures), config)


@dataclass(frozen=True)
class SynthParams:
    """Three-block synthetic citation series.

    Expected citation counts are Poisson rates: ``within_rate`` inside a
    block, ``between_rate`` across blocks, plus ``noise_rate`` everywhere.
    From ``merger_year`` on, the rate between the first two blocks ramps
    toward ``within_rate`` by ``merger_strength`` per year (1.0 = fully
    merged immediately).  With ``bridge_rate`` set, the third block becomes
    general journals: its exchanges with the other two blocks run at
    ``bridge_rate`` and it loses its own internal density.
    """

    block_sizes: tuple[int, int, int] = (20, 20, 20)
    within_rate: float = 50.0
    between_rate: float = 2.0
    merger_year: int | None = None
    merger_strength: float = 0.5
    noise_rate: float = 1.0
    random_seed: int = 0
    years: tuple[int, int] = (1994, 2007)
    bridge_rate: float | None = None

    def __post_init__(self):
        if any(s < 2 for s in self.block_sizes):
            raise ValueError(f"each block needs >= 2 journals, got {self.block_sizes}")
        if min(self.within_rate, self.between_rate, self.noise_rate) < 0:
            raise ValueError("rates must be non-negative")
        if self.years[1] < self.years[0]:
            raise ValueError(f"empty year span {self.years}")


def _rate_matrix(params: SynthParams, year: int) -> np.ndarray:
    sizes = params.block_sizes
    block = np.repeat(np.arange(3), sizes)
    n = block.size
    same = block[:, None] == block[None, :]
    rates = np.where(same, params.within_rate, params.between_rate)

    if params.bridge_rate is not None:
        general = block == 2
        cross = general[:, None] ^ general[None, :]
        rates = np.where(cross, params.bridge_rate, rates)
        # general journals have no internal specialty of their own
        rates = np.where(general[:, None] & general[None, :], params.between_rate, rates)

    if params.merger_year is not None and year >= params.merger_year:
        ramp = min(1.0, params.merger_strength * (year - params.merger_year + 1))
        pair = ((block[:, None] == 0) & (block[None, :] == 1)) | (
            (block[:, None] == 1) & (block[None, :] == 0)
        )
        merged = params.between_rate + ramp * (params.within_rate - params.between_rate)
        rates = np.where(pair, merged, rates)

    return rates + params.noise_rate


def synth_series(params: SynthParams) -> YearSeries:
    """Draw a deterministic citation series from block-structured rates."""
    labels = tuple(
        f"{letter}{i + 1:02d}"
        for letter, size in zip("ABC", params.block_sizes)
        for i in range(size)
    )
    rng = np.random.default_rng(params.random_seed)
    entries = []
    for year in range(params.years[0], params.years[1] + 1):
        counts = rng.poisson(_rate_matrix(params, year))
        entries.append((year, CitationMatrix(labels, labels, counts.astype(np.int64), year)))
    return YearSeries(tuple(entries))
