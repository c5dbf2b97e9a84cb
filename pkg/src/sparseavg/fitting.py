"""Log-log slope fits against claimed exponents, and stability measures.

Every asymptotic claim of the form value(N) <~ N^beta is operationalized
as an ordinary least squares fit of log value against log N, with a
verdict when the fitted slope undercuts the claimed exponent plus a
tolerance and the residual scatter stays small.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

__all__ = ["AsymptoticFit", "fit_slope", "stability_factor", "spearman_rho"]

DEFAULT_SLOPE_TOL = 0.05
DEFAULT_RESIDUAL_TOL = 0.2


@dataclass(frozen=True)
class AsymptoticFit:
    points: tuple
    slope: float
    intercept: float
    residual_rms: float
    claimed: float | None = None
    slope_tol: float = DEFAULT_SLOPE_TOL
    residual_tol: float = DEFAULT_RESIDUAL_TOL

    @property
    def verdict(self) -> bool | None:
        """Pass/fail when claimed is set and there are enough points; None otherwise."""
        if self.claimed is None or len(self.points) < 4:
            return None
        return bool(
            self.slope <= self.claimed + self.slope_tol
            and self.residual_rms <= self.residual_tol
        )

    def to_dict(self) -> dict:
        return {
            "points": [[float(n), float(v)] for n, v in self.points],
            "slope": self.slope,
            "intercept": self.intercept,
            "residual_rms": self.residual_rms,
            "claimed": self.claimed,
            "slope_tol": self.slope_tol,
            "residual_tol": self.residual_tol,
            "verdict": self.verdict,
        }


def fit_slope(
    Ns,
    values,
    claimed: float | None = None,
    slope_tol: float = DEFAULT_SLOPE_TOL,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> AsymptoticFit:
    """OLS on (log N, log value)."""
    Ns = np.asarray(Ns, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if Ns.size != values.size or Ns.size < 2:
        raise ValueError("need at least two (N, value) points")
    bad = np.flatnonzero(values <= 0)
    if bad.size:
        i = int(bad[0])
        raise ValueError(f"nonpositive value {values[i]} at N = {Ns[i]:g} (index {i})")
    x = np.log(Ns)
    y = np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    rms = float(np.sqrt(np.mean(resid**2)))
    return AsymptoticFit(
        tuple(zip(Ns.tolist(), values.tolist())),
        float(slope),
        float(intercept),
        rms,
        claimed,
        slope_tol,
        residual_tol,
    )


def stability_factor(values) -> float:
    """max/min of positive values; the 'varies by less than a factor F' measure."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0 or np.any(v <= 0):
        raise ValueError("stability factor needs positive values")
    return float(v.max() / v.min())


def spearman_rho(xs, ys) -> float:
    """Spearman rank correlation; 0 when either side is constant."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if np.all(xs == xs[0]) or np.all(ys == ys[0]):
        return 0.0
    rho = stats.spearmanr(xs, ys).statistic
    return float(rho) if np.isfinite(rho) else 0.0
