"""Exact floors and fractional parts of real powers n^c.

Floor errors silently corrupt every downstream count, so all floors of
n^c (and distances of n^{1/c} to the integers) go through a two-stage
evaluation: fast float64, with escalation to 128-bit mpmath whenever the
float result lands within ``ESCALATION_TOL`` of an integer boundary.

The exponent c is taken at its double-precision value; all escalated
evaluations use the exact binary expansion of that double, so both
stages agree about which real number is being floored.
"""

from __future__ import annotations

import numpy as np
import mpmath

ESCALATION_TOL = 1e-9
_MP_PREC = 128


def _mp_pow(base: int | float, expo: float) -> mpmath.mpf:
    with mpmath.workprec(_MP_PREC):
        return mpmath.mpf(base) ** mpmath.mpf(expo)


def floor_powers(ns, c: float) -> np.ndarray:
    """Floor of n**c for an integer array n, correct near boundaries.

    Escalates any entry whose float64 fractional part is within
    ESCALATION_TOL of 0 or 1 to 128-bit arithmetic.
    """
    ns = np.asarray(ns, dtype=np.int64)
    vals = np.power(ns.astype(np.float64), c)
    flo = np.floor(vals)
    frac = vals - flo
    risky = (frac < ESCALATION_TOL) | (frac > 1.0 - ESCALATION_TOL)
    out = flo.astype(np.int64)
    for i in np.flatnonzero(risky):
        with mpmath.workprec(_MP_PREC):
            out[i] = int(mpmath.floor(_mp_pow(int(ns[i]), c)))
    return out


def floor_power(n: int, c: float) -> int:
    """Floor of a single n**c."""
    return int(floor_powers(np.array([n]), c)[0])


def power_frac_parts(ns, expo: float) -> np.ndarray:
    """Fractional part of n**expo, escalated near the 0/1 boundary."""
    ns = np.asarray(ns, dtype=np.int64)
    vals = np.power(ns.astype(np.float64), expo)
    frac = vals - np.floor(vals)
    risky = (frac < ESCALATION_TOL) | (frac > 1.0 - ESCALATION_TOL)
    for i in np.flatnonzero(risky):
        with mpmath.workprec(_MP_PREC):
            v = _mp_pow(int(ns[i]), expo)
            frac[i] = float(v - mpmath.floor(v))
    return frac


def nearest_int_distance(ts: np.ndarray) -> np.ndarray:
    """Distance from each t to the nearest integer, ||t||."""
    ts = np.asarray(ts, dtype=np.float64)
    return np.abs(ts - np.rint(ts))


def pow_cmp(n: int, c: float, target: float) -> int:
    """Sign of n^c - target, escalated when the float margin is tiny."""
    v = float(n) ** c
    if abs(v - target) < max(1.0, abs(target)) * ESCALATION_TOL:
        with mpmath.workprec(_MP_PREC):
            d = mpmath.mpf(n) ** mpmath.mpf(c) - mpmath.mpf(target)
            return -1 if d < 0 else (1 if d > 0 else 0)
    return -1 if v < target else 1


def shifted_power_int_distance(ns, u: float, expo: float) -> np.ndarray:
    """||(n+u)**expo|| with escalation when the float answer is < ESCALATION_TOL.

    Used by the min{1, 1/(H||.||)} sums, where a spuriously tiny distance
    would inflate a term to its cap.
    """
    ns = np.asarray(ns, dtype=np.int64)
    ts = np.power(ns.astype(np.float64) + u, expo)
    dist = nearest_int_distance(ts)
    for i in np.flatnonzero(dist < ESCALATION_TOL):
        with mpmath.workprec(_MP_PREC):
            v = (mpmath.mpf(int(ns[i])) + mpmath.mpf(u)) ** mpmath.mpf(expo)
            dist[i] = float(abs(v - mpmath.nint(v)))
    return dist
