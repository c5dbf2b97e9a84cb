"""Smooth cutoff functions for the averaging kernels.

Two variants: the constant cutoff (identically 1), and the windowed
power cutoff chi(t)/t^alpha with a C^2 quintic-smoothstep bump chi
satisfying 1 on [1/2, 2] and 0 outside [1/4, 4]. The bump's ramps are as
wide as the support geometry allows (left [1/4, 1/2], right [2, 4]).

Each instance certifies numerical sup bounds on phi, phi', phi'' over a
fine grid with a second-difference safety pad. The classical smoothness
budget ||phi|| + ||phi'|| + ||phi''|| is reported, not assumed: the
constant variant has budget 1, while the windowed power variant's budget
is dominated by the forced left-ramp curvature (||chi''|| >= 4/w^2 = 64
for any C^2 ramp of width w = 1/4) and lands above 100 for most alpha.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["CutoffFunction", "constant_cutoff", "phi_alpha_cutoff", "SMOOTH_BUDGET"]

SMOOTH_BUDGET = 100.0


def _smoothstep(u: np.ndarray) -> np.ndarray:
    """Quintic smoothstep: C^2, 0 at u<=0, 1 at u>=1."""
    u = np.clip(u, 0.0, 1.0)
    return u * u * u * (u * (6.0 * u - 15.0) + 10.0)


def _chi(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    left = _smoothstep((t - 0.25) / 0.25)
    right = _smoothstep((4.0 - t) / 2.0)
    return left * right


@dataclass(frozen=True)
class CutoffFunction:
    """Evaluator of a smooth cutoff with certified C^2 sup bounds."""

    variant: str  # "constant" | "phi_alpha"
    alpha: float = 0.0
    sup_phi: float = 1.0
    sup_dphi: float = 0.0
    sup_d2phi: float = 0.0

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        if self.variant == "constant":
            return np.ones_like(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(t > 0, _chi(t) * t ** (-self.alpha), 0.0)
        return out

    @property
    def smooth_budget(self) -> float:
        return self.sup_phi + self.sup_dphi + self.sup_d2phi

    def satisfies_smooth_budget(self, limit: float = SMOOTH_BUDGET) -> bool:
        return self.smooth_budget <= limit


def constant_cutoff() -> CutoffFunction:
    return CutoffFunction("constant", sup_phi=1.0, sup_dphi=0.0, sup_d2phi=0.0)


def phi_alpha_cutoff(alpha: float, grid_points: int = 200_001) -> CutoffFunction:
    """chi(t)/t^alpha with certified derivative sup bounds.

    Bounds are grid maxima of central finite differences over the support
    [1/4, 4], padded by 5% to absorb grid truncation.
    """
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    t = np.linspace(0.25, 4.0, grid_points)
    h = t[1] - t[0]
    phi = _chi(t) * t ** (-alpha)
    d1 = np.gradient(phi, h)
    d2 = np.diff(phi, 2) / (h * h)
    pad = 1.05
    return CutoffFunction(
        "phi_alpha",
        alpha=float(alpha),
        sup_phi=float(np.max(np.abs(phi)) * pad),
        sup_dphi=float(np.max(np.abs(d1)) * pad),
        sup_d2phi=float(np.max(np.abs(d2)) * pad),
    )
