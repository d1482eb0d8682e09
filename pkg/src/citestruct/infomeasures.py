"""Shannon entropies, transmissions, and signed multivariate information.

Everything is a plug-in measure of a discrete probability array, in bits
(log base 2), with 0 * log2(0) = 0.  The three-dimensional signed mutual
information is the alternating seven-entropy sum

    mu* = Hx + Hy + Hz - Hxy - Hxz - Hyz + Hxyz

and configurational information is its negation, Q = -mu*.  Positive Q is
reported as redundancy-dominated, negative Q as information-dominated.
Summation runs in row-major order over the same array every time, so repeated
calls are bit-identical.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .binning import JointDistribution3, margins

__all__ = [
    "entropy",
    "transmission2",
    "mu_star3",
    "q_config",
    "mu_multi",
    "millibits",
    "InfoReport",
    "info_report",
]

_SUM_TOL = 1e-9
_NEG_TOL = 1e-12


def _as_distribution(p) -> np.ndarray:
    if isinstance(p, JointDistribution3):
        p = p.probabilities
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("negative probability entry")
    total = float(p.sum())
    if abs(total - 1.0) > _SUM_TOL:
        raise ValueError(f"probabilities sum to {total}, not 1")
    return p


def entropy(p) -> float:
    """Shannon entropy -sum p log2 p of a probability array of any arity."""
    p = _as_distribution(p)
    flat = p.ravel(order="C")
    nz = flat > 0
    return float(-(flat[nz] * np.log2(flat[nz])).sum())


def _clamp_nonneg(t: float) -> float:
    # transmissions are >= 0 up to float noise; only noise gets clamped
    if -_NEG_TOL <= t < 0:
        return 0.0
    return t


def transmission2(joint) -> float:
    """Bivariate transmission T = Hx + Hy - Hxy; tiny negatives clamp to 0."""
    p = _as_distribution(joint)
    if p.ndim != 2:
        raise ValueError(f"expected a bivariate distribution, got {p.ndim} axes")
    return _clamp_nonneg(entropy(p.sum(axis=1)) + entropy(p.sum(axis=0)) - entropy(p))


def mu_star3(joint) -> float:
    """Signed three-way mutual information from the seven margin entropies."""
    p = _as_distribution(joint)
    if p.ndim != 3:
        raise ValueError(f"expected a three-axis distribution, got {p.ndim} axes")
    m = margins(p)
    h_x = entropy(p.sum(axis=(1, 2)))
    h_y = entropy(p.sum(axis=(0, 2)))
    h_z = entropy(p.sum(axis=(0, 1)))
    return h_x + h_y + h_z - entropy(m.ab) - entropy(m.ac) - entropy(m.bc) + entropy(p)


def q_config(joint) -> float:
    """Configurational information Q = -mu*."""
    return -mu_star3(joint)


def mu_multi(p) -> float:
    """Inclusion-exclusion information over n axes (2 <= n <= 8).

    Sum over nonempty axis subsets S of (-1)**(|S|+1) * H(S); reduces to the
    bivariate transmission at n = 2 and to mu* at n = 3.
    """
    p = _as_distribution(p)
    n = p.ndim
    if not 2 <= n <= 8:
        raise ValueError(f"arity must be between 2 and 8, got {n}")
    total = 0.0
    axes = range(n)
    for size in range(1, n + 1):
        sign = 1.0 if size % 2 == 1 else -1.0
        for subset in combinations(axes, size):
            drop = tuple(a for a in axes if a not in subset)
            margin = p.sum(axis=drop) if drop else p
            total += sign * entropy(margin)
    return total


def millibits(bits: float) -> int:
    """Millibit rendering: half-away-from-zero rounding of 1000x the bits."""
    scaled = bits * 1000.0
    return int(math.floor(abs(scaled) + 0.5) * (1 if scaled >= 0 else -1))


@dataclass(frozen=True)
class InfoReport:
    """All entropy and information terms for one binned joint distribution."""

    h_x: float
    h_y: float
    h_z: float
    h_xy: float
    h_xz: float
    h_yz: float
    h_xyz: float
    t_xy: float
    t_xz: float
    t_yz: float
    mu_star: float
    q: float
    i_ternary: float
    r: float
    n: int
    year: int | None = None
    ipf_converged: bool = True

    @property
    def q_mb(self) -> int:
        return millibits(self.q)

    @property
    def i_mb(self) -> int:
        return millibits(self.i_ternary)

    @property
    def r_mb(self) -> int:
        return millibits(self.r)

    def to_text(self) -> str:
        """Flat key=value block, one entry per line."""
        out = io.StringIO()
        if self.year is not None:
            out.write(f"year={self.year}\n")
        out.write(f"n={self.n}\n")
        for key in ("h_x", "h_y", "h_z", "h_xy", "h_xz", "h_yz", "h_xyz",
                    "t_xy", "t_xz", "t_yz", "mu_star", "q", "i_ternary", "r"):
            out.write(f"{key}={getattr(self, key):.12f}\n")
        out.write(f"q_mb={self.q_mb}\n")
        out.write(f"i_mb={self.i_mb}\n")
        out.write(f"r_mb={self.r_mb}\n")
        out.write(f"ipf_converged={'true' if self.ipf_converged else 'false'}\n")
        return out.getvalue()


def info_report(joint: JointDistribution3, i_ternary: float, *,
                ipf_converged: bool = True, year: int | None = None) -> InfoReport:
    """Assemble an :class:`InfoReport` from a joint and a fitted I value."""
    p = joint.probabilities
    m = margins(p)
    h_x = entropy(p.sum(axis=(1, 2)))
    h_y = entropy(p.sum(axis=(0, 2)))
    h_z = entropy(p.sum(axis=(0, 1)))
    h_xy, h_xz, h_yz = entropy(m.ab), entropy(m.ac), entropy(m.bc)
    h_xyz = entropy(p)
    mu = h_x + h_y + h_z - h_xy - h_xz - h_yz + h_xyz
    q = -mu
    return InfoReport(
        h_x=h_x, h_y=h_y, h_z=h_z,
        h_xy=h_xy, h_xz=h_xz, h_yz=h_yz, h_xyz=h_xyz,
        t_xy=_clamp_nonneg(h_x + h_y - h_xy),
        t_xz=_clamp_nonneg(h_x + h_z - h_xz),
        t_yz=_clamp_nonneg(h_y + h_z - h_yz),
        mu_star=mu, q=q, i_ternary=i_ternary, r=i_ternary + q,
        n=joint.case_count, year=year, ipf_converged=ipf_converged,
    )
