"""Averaging kernels, correlations, and Fourier-side decompositions.

Kernels are finitely supported functions on the integers, stored as a
dense value block plus an offset. Constructors cover the half/full
window averages, the floor-power averages, and the random Bernoulli
averages; operations cover reflection, exact convolution/correlation
(direct or FFT with an integer-exact path), Fourier sup evaluation on an
oversampled grid, the sawtooth expansion of the floor-power indicator,
its four-piece Fourier decomposition, correlation gap measurement, and
the smooth/heavy correlation split.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .cutoffs import CutoffFunction, constant_cutoff, phi_alpha_cutoff
from .power_floor import floor_power, floor_powers, pow_cmp
from .sequences import IndicatorSeries

__all__ = [
    "Kernel",
    "birkhoff_kernel",
    "power_average_kernel",
    "power_kernel_range",
    "indicator_kernel",
    "random_average_kernel",
    "reflect",
    "convolve",
    "correlate",
    "autocorrelation_table",
    "fourier_sup",
    "fourier_grid",
    "SawtoothIndeterminate",
    "sawtooth_identity_check",
    "sawtooth_identity_scan",
    "FourierPieces",
    "fourier_pieces",
    "CorrelationGap",
    "correlation_gap",
    "TransferReport",
    "transfer_bound_check",
    "smooth_average_kernel",
    "CorrelationDecomposition",
    "correlation_decompose",
    "kernel_to_json",
    "kernel_from_json",
]


@dataclass(frozen=True)
class Kernel:
    """Finitely supported function on Z: values[i] sits at offset + i."""

    offset: int
    values: np.ndarray
    scale: int
    normalization: str = "none"  # none | N | phi | W | empirical
    half: bool = True

    def __post_init__(self):
        v = np.asarray(self.values)
        if not np.iscomplexobj(v):
            v = v.astype(np.float64)
        object.__setattr__(self, "values", v)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("kernel values must be a nonempty 1-d array")
        if not np.all(np.isfinite(v)):
            raise ValueError("kernel values must be finite")

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def support_end(self) -> int:
        return self.offset + len(self) - 1

    def support(self) -> np.ndarray:
        """Positions carrying nonzero mass."""
        return self.offset + np.flatnonzero(self.values)

    def total_mass(self) -> complex | float:
        s = self.values.sum()
        return complex(s) if np.iscomplexobj(self.values) else float(s)

    def value_at(self, x: int) -> complex | float:
        i = x - self.offset
        if 0 <= i < len(self):
            return self.values[i]
        return 0.0

    def is_integer_valued(self) -> bool:
        if np.iscomplexobj(self.values):
            return False
        return bool(np.all(self.values == np.rint(self.values)))


# ---------------------------------------------------------------------------
# Constructors

def birkhoff_kernel(N: int, phi: CutoffFunction | None = None, half: bool = True) -> Kernel:
    """(1/N) sum phi(n/N) delta_n over (N/2, N] (half) or [1, N] (full)."""
    if N < 4:
        raise ValueError("N must be >= 4")
    phi = phi or constant_cutoff()
    lo = N // 2 + 1 if half else 1
    n = np.arange(lo, N + 1, dtype=np.float64)
    return Kernel(lo, phi(n / N) / N, N, normalization="N", half=half)


def power_kernel_range(N: int, c: float) -> tuple[int, int]:
    """Integer range [lo, hi] with (N/2)^{1/c} <= n <= N^{1/c}, boundary exact."""
    lo = max(1, int(np.floor((N / 2.0) ** (1.0 / c))) - 2)
    while pow_cmp(lo, c, N / 2.0) < 0:
        lo += 1
    hi = int(np.ceil(float(N) ** (1.0 / c))) + 2
    while pow_cmp(hi, c, float(N)) > 0:
        hi -= 1
    return lo, hi


def power_average_kernel(N: int, c: float, phi: CutoffFunction | None = None) -> Kernel:
    """(1/N^{1/c}) sum over (N/2)^{1/c} <= n <= N^{1/c} of phi(n/N^{1/c}) delta_{floor(n^c)}.

    The cutoff is evaluated at n/N^{1/c} so the constant and windowed
    variants degenerate to the half Birkhoff normalization as c -> 1.
    """
    if N < 16:
        raise ValueError("N must be >= 16")
    if not (1.0 < c < 2.0):
        raise ValueError(f"exponent c must lie in (1, 2), got {c}")
    phi = phi or constant_cutoff()
    lo, hi = power_kernel_range(N, c)
    ns = np.arange(lo, hi + 1, dtype=np.int64)
    supp = floor_powers(ns, c)
    varphi = N ** (1.0 / c)
    weights = phi(ns / varphi) / varphi
    off = int(supp[0])
    vals = np.zeros(int(supp[-1]) - off + 1)
    np.add.at(vals, supp - off, weights)
    return Kernel(off, vals, N, normalization="phi", half=True)


def indicator_kernel(N: int, c: float) -> Kernel:
    """Unnormalized indicator of the floor-power value set on the window (N/2, N]."""
    hi_n = floor_power_sequence_cap(N + 1, c)
    supp = floor_powers(np.arange(1, hi_n + 1), c)
    supp = supp[(supp > N // 2) & (supp <= N)]
    off = N // 2 + 1
    vals = np.zeros(N - N // 2)
    np.add.at(vals, supp - off, 1.0)
    vals = np.minimum(vals, 1.0)  # indicator, not multiplicity
    return Kernel(off, vals, N, normalization="none", half=True)


def floor_power_sequence_cap(limit: int, c: float) -> int:
    """Largest n with floor(n^c) < limit."""
    n = int(np.floor(limit ** (1.0 / c))) + 2
    while floor_power(n, c) < limit:
        n += 1
    while n > 1 and floor_power(n, c) >= limit:
        n -= 1
    return n


def random_average_kernel(
    ind: IndicatorSeries, N: int, normalization: str = "expected"
) -> Kernel:
    """Bernoulli average on (N/2, N]: mass X_n / W_N (expected) or X_n / sum X_n (empirical)."""
    if len(ind) < N:
        raise ValueError(f"indicator series covers only {len(ind)} < N = {N}")
    if normalization not in ("expected", "empirical"):
        raise ValueError("normalization must be 'expected' or 'empirical'")
    lo = N // 2 + 1
    x = ind.values[lo - 1 : N].astype(np.float64)
    if normalization == "expected":
        denom = ind.half_window_mass(N)
        tag = "W"
    else:
        denom = float(x.sum())
        if denom == 0.0:
            raise ValueError("empirical normalization undefined: no hits in (N/2, N]")
        tag = "empirical"
    return Kernel(lo, x / denom, N, normalization=tag, half=True)


def expected_average_kernel(alpha: float, N: int) -> Kernel:
    """Mean of the random average: n^{-alpha}/W_N on (N/2, N], total mass 1."""
    lo = N // 2 + 1
    n = np.arange(lo, N + 1, dtype=np.float64)
    w = n ** (-alpha)
    return Kernel(lo, w / w.sum(), N, normalization="W", half=True)


def smooth_average_kernel(N: int, c: float) -> Kernel:
    """Smooth main term of the floor-power average:
    (1/(c N^{1/c})) sum over N/2 < n <= N of n^{-(1-1/c)} delta_n.

    Carries the same total mass as the floor-power kernel up to O(1/N),
    about 1 - 2^{-1/c}, unlike the mass-one random-model mean.
    """
    lo = N // 2 + 1
    n = np.arange(lo, N + 1, dtype=np.float64)
    alpha = 1.0 - 1.0 / c
    vals = n ** (-alpha) / (c * N ** (1.0 / c))
    return Kernel(lo, vals, N, normalization="phi", half=True)


# ---------------------------------------------------------------------------
# Convolution algebra

DIRECT_CONV_LIMIT = 1 << 22  # product of lengths above which FFT is used


def reflect(K: Kernel) -> Kernel:
    """Conjugate reflection g~(x) = conj(g(-x)); plain reflection for real kernels."""
    return Kernel(
        -(K.support_end),
        np.conj(K.values[::-1]),
        K.scale,
        K.normalization,
        K.half,
    )


def convolve(K1: Kernel, K2: Kernel, method: str = "auto") -> Kernel:
    """Exact discrete convolution.

    Integer-valued inputs take an integer-exact route: direct int64
    convolution when small (overflow-checked), FFT-and-round when large
    with a residual guard of 0.1 before rounding.
    """
    v1, v2 = K1.values, K2.values
    off = K1.offset + K2.offset
    scale = max(K1.scale, K2.scale)
    if method not in ("auto", "direct", "fft"):
        raise ValueError("method must be auto|direct|fft")
    small = v1.size * v2.size <= DIRECT_CONV_LIMIT
    if method == "direct" or (method == "auto" and small):
        if K1.is_integer_valued() and K2.is_integer_valued():
            a = v1.astype(np.int64)
            b = v2.astype(np.int64)
            bound = int(np.abs(a).max()) * int(np.abs(b).sum())
            if bound < (1 << 62):
                out = np.convolve(a, b).astype(np.float64)
                return Kernel(off, out, scale, "none", K1.half)
            # fall through to float with a warning-free escalation
        out = np.convolve(v1, v2)
        return Kernel(off, out, scale, "none", K1.half)
    out = signal.fftconvolve(v1, v2)
    if K1.is_integer_valued() and K2.is_integer_valued():
        rounded = np.rint(out.real)
        resid = np.abs(out.real - rounded).max()
        if resid > 0.1:
            raise ArithmeticError(f"integer FFT convolution residual {resid:.3g} too large")
        out = rounded
    return Kernel(off, out, scale, "none", K1.half)


def correlate(K1: Kernel, K2: Kernel, method: str = "auto") -> Kernel:
    """convolve(K1, reflect(K2)); correlate(K, K)(0) = sum |K|^2."""
    return convolve(K1, reflect(K2), method=method)


def autocorrelation_table(values: np.ndarray, max_lag: int | None = None) -> np.ndarray:
    """Nonnegative-lag autocorrelation sum_n v(n) conj(v(n - x)) via rfft.

    Integer inputs are rounded back to exact counts.
    """
    v = np.asarray(values, dtype=np.float64)
    L = 1
    while L < 2 * v.size:
        L <<= 1
    f = np.fft.rfft(v, L)
    ac = np.fft.irfft(f * np.conj(f), L)[: v.size]
    if np.all(v == np.rint(v)):
        ac = np.rint(ac)
    if max_lag is not None:
        ac = ac[: max_lag + 1]
    return ac


# ---------------------------------------------------------------------------
# Fourier evaluation

def fourier_grid(K: Kernel, oversample: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """|K^(theta)| on the grid theta_j = j/(oversample*len); modulus is offset-free."""
    if oversample < 4:
        raise ValueError("oversample must be >= 4")
    L = oversample * len(K)
    spec = np.fft.fft(K.values, L)
    thetas = np.arange(L) / L
    return thetas, np.abs(spec)


def fourier_sup(K: Kernel, oversample: int = 8) -> float:
    """Grid maximum of |K^|; a lower bound for the true sup with grid spacing
    1/(oversample*len(K))."""
    _, mags = fourier_grid(K, oversample)
    return float(mags.max())


# ---------------------------------------------------------------------------
# Sawtooth expansion of the floor-power indicator

class SawtoothIndeterminate(RuntimeError):
    """Raised when a boundary case cannot be resolved at maximum precision."""


def _psi(t: np.ndarray) -> np.ndarray:
    """Sawtooth {t} - 1/2."""
    t = np.asarray(t, dtype=np.float64)
    return (t - np.floor(t)) - 0.5


def _is_member(n: int, c: float) -> bool:
    """n in {floor(m^c)} via exact floors of the candidate m's."""
    base = int(np.floor(n ** (1.0 / c)))
    for m in range(max(1, base - 1), base + 3):
        if floor_power(m, c) == n:
            return True
    return False


def sawtooth_identity_check(n: int, c: float, tol: float = 1e-9) -> bool:
    """Verify 1_{n in N_c} = ((n+1)^{1/c} - n^{1/c}) + psi(-(n+1)^{1/c}) - psi(-n^{1/c}).

    Float64 first; if either power sits within tol of an integer the
    evaluation escalates to 128-bit. Raises SawtoothIndeterminate when
    the boundary stays unresolved there.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lhs = 1.0 if _is_member(n, c) else 0.0
    e = 1.0 / c
    t0, t1 = float(n) ** e, float(n + 1) ** e
    near = min(t0 - np.floor(t0), np.ceil(t0) - t0, t1 - np.floor(t1), np.ceil(t1) - t1)
    if near < tol:
        import mpmath

        with mpmath.workprec(128):
            mt0 = mpmath.mpf(n) ** (1 / mpmath.mpf(c))
            mt1 = mpmath.mpf(n + 1) ** (1 / mpmath.mpf(c))
            for t in (mt0, mt1):
                if abs(t - mpmath.nint(t)) < mpmath.mpf(2) ** -100 and t != mpmath.nint(t):
                    raise SawtoothIndeterminate(f"n={n}: boundary unresolved at 128 bits")
            rhs = (mt1 - mt0) + (mpmath.frac(-mt1) - 0.5) - (mpmath.frac(-mt0) - 0.5)
            return bool(abs(rhs - lhs) <= tol)
    rhs = (t1 - t0) + float(_psi(np.array(-t1))) - float(_psi(np.array(-t0)))
    return bool(abs(rhs - lhs) <= tol)


def sawtooth_identity_scan(c: float, n_max: int, tol: float = 1e-9) -> dict:
    """Vectorized identity check for all n <= n_max.

    Returns counts of failures and indeterminates plus the escalated n's.
    """
    n = np.arange(1, n_max + 1, dtype=np.int64)
    hi_m = floor_power_sequence_cap(n_max + 1, c)
    member = np.zeros(n_max + 2, dtype=bool)
    vals = floor_powers(np.arange(1, hi_m + 1), c)
    member[vals[vals <= n_max]] = True
    e = 1.0 / c
    t0 = n.astype(np.float64) ** e
    t1 = (n + 1).astype(np.float64) ** e
    rhs = (t1 - t0) + _psi(-t1) - _psi(-t0)
    lhs = member[1 : n_max + 1].astype(np.float64)
    diff = np.abs(lhs - rhs)
    frac0 = np.minimum(t0 - np.floor(t0), np.ceil(t0) - t0)
    frac1 = np.minimum(t1 - np.floor(t1), np.ceil(t1) - t1)
    risky = (frac0 < tol) | (frac1 < tol) | (diff > tol)
    failures = 0
    indeterminates = 0
    escalated = []
    for i in np.flatnonzero(risky):
        escalated.append(int(n[i]))
        try:
            if not sawtooth_identity_check(int(n[i]), c, tol):
                failures += 1
        except SawtoothIndeterminate:
            indeterminates += 1
    clean = ~risky
    failures += int(np.count_nonzero(diff[clean] > tol))
    return {
        "checked": int(n_max),
        "failures": failures,
        "indeterminates": indeterminates,
        "escalated": escalated,
    }


# ---------------------------------------------------------------------------
# Four-piece Fourier decomposition of the window indicator

@dataclass(frozen=True)
class FourierPieces:
    """Spatial pieces on (N/2, N] with indicator = f_s + f_1 + f_2 + E."""

    f_s: Kernel
    f_1: Kernel
    f_2: Kernel
    E: Kernel
    indicator: Kernel
    N: int
    c: float
    H: float
    delta: float

    def reconstruction_error(self) -> float:
        s = self.f_s.values + self.f_1.values + self.f_2.values + self.E.values
        return float(np.abs(s - self.indicator.values).max())


def fourier_pieces(N: int, c: float, H: float | None = None, delta: float = 0.01) -> FourierPieces:
    """Decompose the window indicator of the floor-power set over (N/2, N].

    f_s is the smooth density (1/(c N^{1-1/c})) phi_alpha(m/N); f_1 the
    |h| <= H truncation of the sawtooth difference; f_2 the tail,
    evaluated as the closed-form sawtooth difference minus f_1; E is
    defined by subtraction and carries the second-order Taylor remainder
    of the power difference.

    The target is the exact window indicator; the normalized average
    kernel differs from it by at most O(1) endpoint atoms (see
    indicator_kernel).
    """
    if N < (1 << 10):
        raise ValueError("N must be >= 2^10")
    if H is None:
        H = float(N) ** (2.0 - 2.0 / c + delta)
    if H < 2:
        raise ValueError("H must be >= 2")
    alpha = 1.0 - 1.0 / c
    off = N // 2 + 1
    m = np.arange(off, N + 1, dtype=np.float64)
    e = 1.0 / c
    t0 = m ** e
    t1 = (m + 1.0) ** e

    phi_a = phi_alpha_cutoff(alpha) if alpha > 0 else constant_cutoff()
    f_s = phi_a(m / N) / (c * N ** (1.0 - 1.0 / c))

    f1 = np.zeros_like(m)
    for h in range(1, int(np.floor(H)) + 1):
        f1 += (np.sin(2 * np.pi * h * t1) - np.sin(2 * np.pi * h * t0)) / (np.pi * h)

    D = _psi(-t1) - _psi(-t0)
    f2 = D - f1

    ind = indicator_kernel(N, c)
    E = ind.values - f_s - f1 - f2

    mk = lambda v: Kernel(off, v, N, normalization="none", half=True)
    return FourierPieces(mk(f_s), mk(f1), mk(f2), mk(E), ind, N, float(c), float(H), float(delta))


# ---------------------------------------------------------------------------
# Correlation gap and decomposition

@dataclass(frozen=True)
class CorrelationGap:
    gap_main: float
    gap_small: float
    N: int
    c: float


def _det_correlations(N: int, c: float) -> tuple[np.ndarray, np.ndarray]:
    """(A*A~, B*B~) tables at lags 0..N for the floor-power model."""
    lo, hi = power_kernel_range(N, c)
    supp = floor_powers(np.arange(lo, hi + 1), c)
    counts = np.zeros(N + 1)
    np.add.at(counts, supp, 1.0)
    ca = autocorrelation_table(counts, N) / float(N) ** (2.0 / c)
    alpha = 1.0 - 1.0 / c
    bvals = np.zeros(N + 1)
    nn = np.arange(N // 2 + 1, N + 1, dtype=np.float64)
    bvals[N // 2 + 1 :] = nn ** (-alpha) / (c * N ** (1.0 / c))
    cb = autocorrelation_table(bvals, N)
    return ca, cb


def correlation_gap(N: int, c: float) -> CorrelationGap:
    """Sup gaps of the correlation tables, exact integer counting underneath.

    gap_main over N^{1/c} <= |x| <= N compares the floor-power and smooth
    correlations; gap_small is the raw correlation sup over
    0 < |x| <= N^{1/c}.
    """
    if N < (1 << 10):
        raise ValueError("N must be >= 2^10")
    ca, cb = _det_correlations(N, c)
    _, hi = power_kernel_range(N, c)
    x_small_max = hi  # largest integer <= N^{1/c}
    x_main_min = hi if pow_cmp(hi, c, float(N)) == 0 else hi + 1
    gap_main = float(np.abs(ca[x_main_min : N + 1] - cb[x_main_min : N + 1]).max())
    gap_small = float(ca[1 : x_small_max + 1].max())
    return CorrelationGap(gap_main, gap_small, N, float(c))


@dataclass(frozen=True)
class CorrelationDecomposition:
    """A*A~ = D_N^{-1} delta_0 + rho + residual, rho the smooth even part."""

    D_N: float
    rho: Kernel
    residual_sup: float
    lipschitz_estimate: float
    N: int
    alpha: float

    @property
    def rho_sup(self) -> float:
        return float(np.abs(self.rho.values).max())


def correlation_decompose(
    N: int,
    c: float | None = None,
    indicators: IndicatorSeries | None = None,
) -> CorrelationDecomposition:
    """Split the autocorrelation into point mass, smooth part, and residual.

    rho is the smooth-model correlation (B*B~) with the origin removed —
    the part carrying the Lipschitz |h|/N^2 regularity. The residual is
    measured on the admissible range |x| >= N^{1-alpha}.
    """
    if (c is None) == (indicators is None):
        raise ValueError("pass exactly one of c or indicators")
    if c is not None:
        alpha = 1.0 - 1.0 / c
        corr, smooth = _det_correlations(N, c)
    else:
        alpha = indicators.alpha
        lo = N // 2 + 1
        x = indicators.values[lo - 1 : N].astype(np.float64)
        W = indicators.half_window_mass(N)
        avals = np.zeros(N + 1)
        avals[lo:] = x / W
        corr = autocorrelation_table(avals, N)
        bvals = np.zeros(N + 1)
        nn = np.arange(lo, N + 1, dtype=np.float64)
        bvals[lo:] = nn ** (-alpha) / W
        smooth = autocorrelation_table(bvals, N)

    D_N = 1.0 / corr[0]
    rho_vals = np.concatenate([smooth[:0:-1], [0.0], smooth[1:]])  # even, rho(0) = 0
    rho = Kernel(-N, rho_vals, N, normalization="none")
    x_lo = int(np.ceil(N ** (1.0 - alpha)))
    resid = corr[1:] - smooth[1:]
    residual_sup = float(np.abs(resid[x_lo - 1 :]).max()) if x_lo <= N else 0.0

    lip = 0.0
    h = 1
    while h <= max(1, x_lo // 2):
        seg = smooth[x_lo : N + 1 - h]
        seg_h = smooth[x_lo + h : N + 1]
        if seg.size:
            lip = max(lip, float(np.abs(seg - seg_h).max()) * N * N / h)
        h <<= 2
    return CorrelationDecomposition(float(D_N), rho, residual_sup, lip, N, float(alpha))


# ---------------------------------------------------------------------------
# Transfer comparison

@dataclass(frozen=True)
class TransferReport:
    lhs: float
    rhs: float
    ratio: float
    fourier_sups: dict
    decay_slope: float | None


def _aligned(K1: Kernel, K2: Kernel) -> tuple[int, np.ndarray, np.ndarray]:
    lo = min(K1.offset, K2.offset)
    hi = max(K1.support_end, K2.support_end)
    v1 = np.zeros(hi - lo + 1, dtype=np.result_type(K1.values, K2.values))
    v2 = v1.copy()
    v1[K1.offset - lo : K1.offset - lo + len(K1)] = K1.values
    v2[K2.offset - lo : K2.offset - lo + len(K2)] = K2.values
    return lo, v1, v2


def kernel_sub(K1: Kernel, K2: Kernel) -> Kernel:
    lo, v1, v2 = _aligned(K1, K2)
    return Kernel(lo, v1 - v2, max(K1.scale, K2.scale), "none", K1.half)


def transfer_bound_check(
    a_family: dict,
    b_family: dict,
    f: np.ndarray,
    p: int = 2,
    functional=None,
    oversample: int = 8,
) -> TransferReport:
    """Compare N(A_N * f) against N(B_N * f) plus the summed error terms.

    Verifies the hypothesis numerically — a negative fitted slope of
    ||E_N^||_inf with E_N = A_N - B_N — and reports the lhs/rhs of the
    convex-operator comparison in l^p for the given functional.
    """
    if p not in (1, 2):
        raise ValueError("p must be 1 or 2")
    from .fitting import fit_slope
    from .oscillation import OscillationFunctional, apply_functional_batch

    functional = functional or OscillationFunctional("variation", r=2.0)
    times = sorted(a_family)
    if sorted(b_family) != times:
        raise ValueError("families must share the same times")
    e_family = {N: kernel_sub(a_family[N], b_family[N]) for N in times}
    sups = {N: fourier_sup(e_family[N], oversample) for N in times}

    f = np.asarray(f, dtype=np.float64)
    both = list(a_family.values()) + list(b_family.values())
    lo = min(k.offset for k in both)
    hi = max(k.support_end for k in both)
    W = f.size + (hi - lo)
    series_a = np.zeros((W, len(times)))
    series_b = np.zeros((W, len(times)))
    err_sum = 0.0
    for j, N in enumerate(times):
        for K, target in ((a_family[N], series_a), (b_family[N], series_b)):
            conv = signal.fftconvolve(f, K.values.real)
            pos = K.offset - lo
            target[pos : pos + conv.size, j] += conv
        econv = signal.fftconvolve(f, e_family[N].values.real)
        err_sum += float(np.linalg.norm(econv, ord=p))
    va = apply_functional_batch(functional, series_a)
    vb = apply_functional_batch(functional, series_b)
    lhs = float(np.linalg.norm(va, ord=p))
    rhs = float(np.linalg.norm(vb, ord=p)) + err_sum
    slope = None
    positive = [(N, s) for N, s in sups.items() if s > 0]
    if len(positive) >= 2:
        slope = fit_slope([N for N, _ in positive], [s for _, s in positive]).slope
    return TransferReport(lhs, rhs, lhs / rhs if rhs > 0 else np.inf, sups, slope)


# ---------------------------------------------------------------------------
# Serialization

def kernel_to_json(K: Kernel) -> str:
    d = {
        "offset": K.offset,
        "N": K.scale,
        "normalization": K.normalization,
        "half": K.half,
    }
    if np.iscomplexobj(K.values):
        d["values"] = [[float(v.real), float(v.imag)] for v in K.values]
        d["complex"] = True
    else:
        d["values"] = [float(v) for v in K.values]
    return json.dumps(d)


def kernel_from_json(text: str) -> Kernel:
    d = json.loads(text)
    if d.get("complex"):
        vals = np.array([complex(re, im) for re, im in d["values"]])
    else:
        vals = np.array(d["values"], dtype=np.float64)
    return Kernel(int(d["offset"]), vals, int(d["N"]), d.get("normalization", "none"), d.get("half", True))
