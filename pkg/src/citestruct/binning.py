"""Binned joint distributions over three columns of factor loadings.

Loadings live in [-1, 1]; each axis is cut into ``b`` equal steps (default 10
steps of 0.2) and every journal's loading triple lands in exactly one cell of
a b x b x b count array.  Intervals are half-open ``[edge, edge + 2/b)`` with
the top bin closed at +1.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

__all__ = [
    "JointDistribution3",
    "MarginSet",
    "bin_loadings",
    "margins",
    "serialize_joint_csv",
]


@dataclass(frozen=True)
class JointDistribution3:
    """Joint probability distribution over three binned loading axes."""

    bins_per_axis: int
    counts: np.ndarray  # (b, b, b) integer cell counts
    case_count: int

    @property
    def probabilities(self) -> np.ndarray:
        return self.counts / self.case_count


@dataclass(frozen=True)
class MarginSet:
    """The three bivariate margins of a 3-d joint distribution."""

    ab: np.ndarray
    ac: np.ndarray
    bc: np.ndarray


def bin_index(x: float, bins: int) -> int:
    """Bin of a loading value: floor((x + 1) * b / 2), +1 landing in bin b-1."""
    i = int(np.floor((x + 1.0) * bins / 2.0))
    return min(max(i, 0), bins - 1)


def bin_loadings(loadings: np.ndarray, bins: int = 10) -> JointDistribution3:
    """Count loading triples into a ``bins**3`` joint distribution.

    Loadings are clamped to [-1, 1]; values outside [-1.01, 1.01] are treated
    as an upstream bug and rejected.
    """
    loadings = np.asarray(loadings, dtype=float)
    if loadings.ndim != 2 or loadings.shape[1] != 3:
        raise ValueError(f"expected an n x 3 loading matrix, got shape {loadings.shape}")
    if loadings.shape[0] == 0:
        raise ValueError("empty loading matrix")
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    out_of_range = np.abs(loadings) > 1.01
    if np.any(out_of_range):
        i, j = np.argwhere(out_of_range)[0]
        raise ValueError(
            f"loading out of [-1.01, 1.01] at row {i}, column {j}: {loadings[i, j]}"
        )
    clamped = np.clip(loadings, -1.0, 1.0)
    idx = np.floor((clamped + 1.0) * bins / 2.0).astype(int)
    np.clip(idx, 0, bins - 1, out=idx)
    counts = np.zeros((bins, bins, bins), dtype=np.int64)
    np.add.at(counts, (idx[:, 0], idx[:, 1], idx[:, 2]), 1)
    return JointDistribution3(bins, counts, loadings.shape[0])


def margins(p: np.ndarray | JointDistribution3) -> MarginSet:
    """Axis sums of a 3-d joint: ab over z, ac over y, bc over x."""
    if isinstance(p, JointDistribution3):
        p = p.probabilities
    p = np.asarray(p, dtype=float)
    if p.ndim != 3:
        raise ValueError(f"expected a 3-d array, got {p.ndim}-d")
    return MarginSet(ab=p.sum(axis=2), ac=p.sum(axis=1), bc=p.sum(axis=0))


def serialize_joint_csv(joint: JointDistribution3) -> str:
    """CSV of ``i,j,k,count`` rows (zero cells omitted) after a ``# N=`` line."""
    out = io.StringIO()
    out.write(f"# N={joint.case_count}\n")
    out.write("i,j,k,count\n")
    for (i, j, k), c in np.ndenumerate(joint.counts):
        if c:
            out.write(f"{i},{j},{k},{int(c)}\n")
    return out.getvalue()
