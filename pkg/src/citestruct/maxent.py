"""Maximum-entropy fit under all three bivariate margins, via IPF.

Iterative proportional fitting starts from the uniform distribution on the
cells permitted by the zero-pattern of the target margins and cycles through
the margins in the fixed order AB, AC, BC, rescaling cell blocks by
target/current.  The limit is the maximum-entropy distribution with the
observed bivariate margins; its entropy surplus over the observed joint is
the ternary interaction information I, and R = I + Q is the model redundancy.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .binning import JointDistribution3, margins
from .infomeasures import entropy

__all__ = ["MaxEntModel", "ipf_fit", "ternary_interaction", "redundancy"]

_I_TOL = 1e-9


@dataclass(frozen=True)
class MaxEntModel:
    """Result of an IPF fit: the fitted array plus convergence diagnostics."""

    fitted: np.ndarray
    iterations: int
    max_margin_deviation: float
    converged: bool


def _margin_deviation(p: np.ndarray, targets) -> float:
    cur = margins(p)
    return max(
        float(np.abs(cur.ab - targets.ab).max()),
        float(np.abs(cur.ac - targets.ac).max()),
        float(np.abs(cur.bc - targets.bc).max()),
    )


def ipf_fit(joint, tol: float = 1e-10, max_cycles: int = 1000) -> MaxEntModel:
    """Fit the maximum-entropy distribution preserving all bivariate margins.

    Non-convergence is not fatal: the model comes back with
    ``converged=False`` and the deviation it reached.
    """
    if isinstance(joint, JointDistribution3):
        joint = joint.probabilities
    p_obs = np.asarray(joint, dtype=float)
    if p_obs.ndim != 3:
        raise ValueError(f"expected a three-axis distribution, got {p_obs.ndim} axes")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    target = margins(p_obs)

    # Cells allowed by the zero-pattern of the three target margins.
    allowed = (
        (target.ab[:, :, None] > 0)
        & (target.ac[:, None, :] > 0)
        & (target.bc[None, :, :] > 0)
    )
    fitted = np.where(allowed, 1.0, 0.0)
    fitted /= fitted.sum()

    deviation = _margin_deviation(fitted, target)
    cycles = 0
    while deviation >= tol and cycles < max_cycles:
        for axis, tgt in ((2, target.ab), (1, target.ac), (0, target.bc)):
            cur = fitted.sum(axis=axis)
            ratio = np.divide(tgt, cur, out=np.zeros_like(cur), where=cur > 0)
            fitted *= np.expand_dims(ratio, axis)
        fitted /= fitted.sum()
        cycles += 1
        deviation = _margin_deviation(fitted, target)
    return MaxEntModel(fitted, cycles, deviation, deviation < tol)


def ternary_interaction(joint, fit: MaxEntModel | None = None,
                        tol: float = 1e-10, max_cycles: int = 1000) -> float:
    """I = H(maxent fit) - H(observed); >= 0 up to float noise, clamped there.

    Pass ``fit`` to reuse an existing IPF result; its ``converged`` flag is
    the caller's signal that the value is trustworthy.
    """
    if isinstance(joint, JointDistribution3):
        joint = joint.probabilities
    if fit is None:
        fit = ipf_fit(joint, tol=tol, max_cycles=max_cycles)
    value = entropy(fit.fitted) - entropy(joint)
    if fit.converged and value < -_I_TOL:
        raise ValueError(
            f"converged fit has lower entropy than the data ({value} bits); "
            "margins were not preserved"
        )
    return max(value, 0.0) if -_I_TOL <= value < 0 else value


def redundancy(q: float, i: float) -> float:
    """Model redundancy R = I + Q."""
    return i + q


def serialize_model_csv(model: MaxEntModel, case_count: int) -> str:
    """CSV like a joint distribution, with fit diagnostics in the comments."""
    out = io.StringIO()
    out.write(f"# N={case_count}\n")
    out.write(f"# iterations={model.iterations}\n")
    out.write(f"# deviation={model.max_margin_deviation:.3e}\n")
    out.write(f"# converged={'true' if model.converged else 'false'}\n")
    out.write("i,j,k,p\n")
    for (i, j, k), v in np.ndenumerate(model.fitted):
        if v:
            out.write(f"{i},{j},{k},{v!r}\n")
    return out.getvalue()
