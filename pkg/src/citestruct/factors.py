"""Factor analysis of citation patterns.

Variables are the columns of a (direction-selected) citation matrix, cases
its rows.  The chain is: Pearson correlation matrix over non-constant
columns, principal-component extraction from its eigendecomposition, varimax
rotation under Kaiser normalization, and year-over-year column alignment so
that factor F1 means the same thing in consecutive solutions.  Correlations
and partial correlations among the three main loading columns summarize how
the factors relate.
"""

from __future__ import annotations

import io
import csv
from dataclasses import dataclass, replace
from itertools import permutations

import numpy as np

from .corpus import CitationMatrix

__all__ = [
    "CorrelationMatrix",
    "RotationInfo",
    "FactorSolution",
    "CorrelationReport",
    "correlation_matrix",
    "principal_components",
    "varimax_rotate",
    "varimax_criterion",
    "align_solution",
    "partial_correlations",
    "serialize_solution_csv",
]

_EIG_FLOOR = -1e-10


@dataclass(frozen=True)
class CorrelationMatrix:
    """Pearson correlations among retained (non-constant) variables."""

    labels: tuple[str, ...]
    values: np.ndarray
    dropped: tuple[str, ...] = ()


@dataclass(frozen=True)
class RotationInfo:
    method: str  # "none" or "varimax"
    sweeps: int = 0
    converged: bool = True
    zero_communality: tuple[str, ...] = ()


@dataclass(frozen=True)
class FactorSolution:
    """Variables x k loading matrix with its extraction metadata.

    Eigenvalues and explained-variance fractions describe the extraction;
    rotation reassigns variance among columns but leaves them in place.
    """

    labels: tuple[str, ...]
    loadings: np.ndarray
    eigenvalues: tuple[float, ...]
    explained_variance: tuple[float, ...]
    rotation: RotationInfo

    @property
    def k(self) -> int:
        return self.loadings.shape[1]

    def communalities(self) -> np.ndarray:
        return (self.loadings ** 2).sum(axis=1)


@dataclass(frozen=True)
class CorrelationReport:
    """Pairwise and partial correlations among three loading columns.

    A partial correlation whose denominator vanishes (one controlling
    correlation is +-1) is ``None`` rather than a number.
    """

    r12: float
    r13: float
    r23: float
    pr12_3: float | None
    pr13_2: float | None
    pr23_1: float | None


def correlation_matrix(matrix: CitationMatrix) -> CorrelationMatrix:
    """Pearson correlations between the columns of a citation matrix.

    Zero-variance columns are dropped (and listed); at least two rows and two
    non-constant columns are required.
    """
    data = np.asarray(matrix.cells, dtype=float)
    if data.shape[0] < 2:
        raise ValueError(f"need at least 2 rows, got {data.shape[0]}")
    constant = np.ptp(data, axis=0) == 0
    dropped = tuple(lab for lab, c in zip(matrix.col_labels, constant) if c)
    kept = [lab for lab, c in zip(matrix.col_labels, constant) if not c]
    if len(kept) < 2:
        raise ValueError(
            f"need at least 2 non-constant columns, got {len(kept)} "
            f"(dropped: {list(dropped)})"
        )
    values = np.corrcoef(data[:, ~constant], rowvar=False)
    values = (values + values.T) / 2.0
    np.fill_diagonal(values, 1.0)
    np.clip(values, -1.0, 1.0, out=values)
    return CorrelationMatrix(tuple(kept), values, dropped)


def _fix_column_signs(loadings: np.ndarray) -> np.ndarray:
    out = loadings.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        if col.size and col[np.argmax(np.abs(col))] < 0:
            out[:, j] = -col
    return out


def principal_components(corr: CorrelationMatrix, k: int) -> FactorSolution:
    """Extract the k largest principal components of a correlation matrix.

    Loadings are eigenvector * sqrt(eigenvalue); column signs are fixed so
    the largest-magnitude loading in each column is positive.  Eigenvalues
    within float noise of zero are clamped to zero; anything more negative
    means the matrix is not a correlation matrix.
    """
    n = len(corr.labels)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    try:
        eigvals, eigvecs = np.linalg.eigh(corr.values)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"eigensolver failed to converge: {exc}") from exc
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]
    if eigvals[-1] < _EIG_FLOOR:
        raise ValueError(
            f"matrix is not positive semi-definite (eigenvalue {eigvals[-1]})"
        )
    eigvals = np.maximum(eigvals, 0.0)
    loadings = _fix_column_signs(eigvecs[:, :k] * np.sqrt(eigvals[:k]))
    return FactorSolution(
        labels=corr.labels,
        loadings=loadings,
        eigenvalues=tuple(float(v) for v in eigvals[:k]),
        explained_variance=tuple(float(v) / n for v in eigvals[:k]),
        rotation=RotationInfo(method="none"),
    )


def varimax_criterion(loadings: np.ndarray) -> float:
    """Sum over columns of the variance of squared loadings."""
    sq = np.asarray(loadings, dtype=float) ** 2
    return float((sq ** 2).mean(axis=0).sum() - (sq.mean(axis=0) ** 2).sum())


def varimax_rotate(sol: FactorSolution, tol: float = 1e-6, max_sweeps: int = 100) -> FactorSolution:
    """Varimax rotation with Kaiser normalization.

    Rows are scaled to unit communality, columns rotated pairwise to maximize
    the varimax criterion until its relative change drops below ``tol`` or
    ``max_sweeps`` sweeps run out, then rescaled back.  Zero-communality rows
    take no part in the rotation (they are zero rows and stay so) and are
    flagged in the result.  Non-convergence sets ``converged=False`` rather
    than raising.
    """
    lam = np.array(sol.loadings, dtype=float)
    d, k = lam.shape
    zero_rows = tuple(
        lab for lab, h in zip(sol.labels, (lam ** 2).sum(axis=1)) if h == 0
    )
    if k < 2:
        return replace(sol, rotation=RotationInfo("varimax", 0, True, zero_rows))

    comm = np.sqrt((lam ** 2).sum(axis=1))
    scale = np.where(comm > 0, comm, 1.0)
    lam = lam / scale[:, None]

    crit = varimax_criterion(lam)
    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        for p in range(k - 1):
            for q in range(p + 1, k):
                x = lam[:, p].copy()
                y = lam[:, q].copy()
                u = x * x - y * y
                v = 2.0 * x * y
                numer = 2.0 * (u * v).sum() - 2.0 * u.sum() * v.sum() / d
                denom = (u * u - v * v).sum() - (u.sum() ** 2 - v.sum() ** 2) / d
                theta = 0.25 * np.arctan2(numer, denom)
                if theta == 0.0:
                    continue
                c, s = np.cos(theta), np.sin(theta)
                lam[:, p] = c * x + s * y
                lam[:, q] = -s * x + c * y
        sweeps += 1
        new_crit = varimax_criterion(lam)
        if abs(new_crit - crit) <= tol * max(abs(crit), 1e-12):
            crit = new_crit
            converged = True
            break
        crit = new_crit

    rotated = _fix_column_signs(lam * scale[:, None])
    return replace(
        sol,
        loadings=rotated,
        rotation=RotationInfo("varimax", sweeps, converged, zero_rows),
    )


def _column_correlation(a: np.ndarray, b: np.ndarray) -> float:
    a = a - a.mean()
    b = b - b.mean()
    denom = np.sqrt((a * a).sum() * (b * b).sum())
    if denom == 0:
        return 0.0
    return float((a * b).sum() / denom)


def align_solution(prev: FactorSolution, cur: FactorSolution) -> FactorSolution:
    """Permute and sign-flip the columns of ``cur`` to line up with ``prev``.

    The assignment maximizes the summed absolute Pearson correlation between
    matched columns over the shared variables; ties prefer the identity, then
    the lexicographically smallest permutation, then no flip.
    """
    if prev.k != cur.k:
        raise ValueError(f"factor counts differ: {prev.k} vs {cur.k}")
    shared = [lab for lab in prev.labels if lab in set(cur.labels)]
    if len(shared) < 2:
        raise ValueError(f"need at least 2 shared variables, got {len(shared)}")
    prev_idx = [prev.labels.index(lab) for lab in shared]
    cur_idx = [cur.labels.index(lab) for lab in shared]
    a = prev.loadings[prev_idx]
    b = cur.loadings[cur_idx]

    k = prev.k
    r = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            r[i, j] = _column_correlation(a[:, i], b[:, j])

    best_perm = None
    best_score = -np.inf
    for perm in permutations(range(k)):
        score = sum(abs(r[i, perm[i]]) for i in range(k))
        if score > best_score:
            best_score = score
            best_perm = perm
    signs = np.array([1.0 if r[i, best_perm[i]] >= 0 else -1.0 for i in range(k)])

    loadings = cur.loadings[:, list(best_perm)] * signs
    return replace(
        cur,
        loadings=loadings,
        eigenvalues=tuple(cur.eigenvalues[j] for j in best_perm),
        explained_variance=tuple(cur.explained_variance[j] for j in best_perm),
    )


def partial_correlations(loadings: np.ndarray) -> CorrelationReport:
    """Pairwise and partial correlations among three loading columns.

    Each partial controls for the remaining column:
    r_xy.z = (r_xy - r_xz * r_yz) / sqrt((1 - r_xz^2)(1 - r_yz^2)).
    """
    loadings = np.asarray(loadings, dtype=float)
    if loadings.ndim != 2 or loadings.shape[1] != 3:
        raise ValueError(f"expected an n x 3 loading matrix, got shape {loadings.shape}")
    if loadings.shape[0] < 4:
        raise ValueError(f"need at least 4 rows, got {loadings.shape[0]}")
    if np.any(np.ptp(loadings, axis=0) == 0):
        raise ValueError("zero-variance loading column")
    r = np.corrcoef(loadings, rowvar=False)
    r = np.clip((r + r.T) / 2.0, -1.0, 1.0)

    def partial(xy: float, xz: float, yz: float) -> float | None:
        denom_sq = (1.0 - xz * xz) * (1.0 - yz * yz)
        if denom_sq <= 0:
            return None
        return float(np.clip((xy - xz * yz) / np.sqrt(denom_sq), -1.0, 1.0))

    r12, r13, r23 = float(r[0, 1]), float(r[0, 2]), float(r[1, 2])
    return CorrelationReport(
        r12=r12, r13=r13, r23=r23,
        pr12_3=partial(r12, r13, r23),
        pr13_2=partial(r13, r12, r23),
        pr23_1=partial(r23, r12, r13),
    )


def serialize_solution_csv(sol: FactorSolution) -> str:
    """CSV of loadings (6 decimals) with a trailing ``#`` metadata block."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["label"] + [f"F{j + 1}" for j in range(sol.k)])
    for lab, row in zip(sol.labels, sol.loadings):
        writer.writerow([lab] + [f"{v:.6f}" for v in row])
    out.write("# eigenvalues=" + ",".join(f"{v!r}" for v in sol.eigenvalues) + "\n")
    out.write("# explained_variance=" + ",".join(f"{v!r}" for v in sol.explained_variance) + "\n")
    out.write(f"# rotation={sol.rotation.method}\n")
    out.write(f"# sweeps={sol.rotation.sweeps}\n")
    out.write(f"# converged={'true' if sol.rotation.converged else 'false'}\n")
    return out.getvalue()
