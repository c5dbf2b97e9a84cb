"""Toy measure-preserving systems and quantitative-convergence censuses.

Two systems: the cyclic rotation x -> x + a mod m with normalized
counting measure, and the integer shift x -> x - 1 on a finite window.
Sparse-time averages are evaluated for every state at once through
histogram correlation, so a million time steps against a ten-thousand
state rotation costs a handful of FFTs.

The census counts time blocks on which the averages oscillate by tau on
a tau-fraction of the space; boundedness of the census as the horizon
grows is the desk-scale signature of pointwise convergence. Block
selection is greedy (close a block as soon as the exceedance density
reaches tau), a lower bound for the sup over all breakpoint choices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sequences import LacunaryGrid, SparseSequence

__all__ = [
    "CyclicRotation",
    "IntegerShift",
    "ergodic_averages",
    "OscillationCensus",
    "oscillation_census",
    "census_exhaustive",
    "transfer_compare",
    "growth_inverse",
]


@dataclass(frozen=True)
class CyclicRotation:
    """Z_m with x -> x + a mod m, normalized counting measure."""

    m: int
    a: int

    @property
    def n_states(self) -> int:
        return self.m


@dataclass(frozen=True)
class IntegerShift:
    """The integers with x -> x - 1, restricted to a finite window [0, size)."""

    size: int

    @property
    def n_states(self) -> int:
        return self.size


def _circular_correlate(hist: np.ndarray, f: np.ndarray) -> np.ndarray:
    out = np.fft.irfft(np.conj(np.fft.rfft(hist)) * np.fft.rfft(f), f.size)
    return out


def ergodic_averages(system, f: np.ndarray, seq: SparseSequence, times) -> np.ndarray:
    """Per-state averages (1/N) sum_{n<=N} f(T^{a_n} x) for each N in times.

    Returns an (n_states, len(times)) array. The sequence must cover the
    largest time.
    """
    times = np.asarray(times.times if isinstance(times, LacunaryGrid) else times, dtype=np.int64)
    if times.size == 0:
        raise ValueError("empty time grid")
    if len(seq) < int(times.max()):
        raise ValueError(f"sequence has {len(seq)} terms, need {int(times.max())}")
    f = np.asarray(f, dtype=np.float64)
    if isinstance(system, CyclicRotation):
        m = system.m
        if f.size != m:
            raise ValueError("f must be defined on the m states")
        shifts = (system.a * (seq.terms[: int(times.max())] % m)) % m
        out = np.empty((m, times.size))
        hist = np.zeros(m)
        prev = 0
        for j, N in enumerate(times):
            hist += np.bincount(shifts[prev:N] % m, minlength=m)
            prev = int(N)
            out[:, j] = _circular_correlate(hist, f) / N
        return out
    if isinstance(system, IntegerShift):
        # f(T^{a} x) = f(x - a); accumulate sum_a hist[a] f(x - a) per block
        W = system.size
        if f.size != W:
            raise ValueError("f must be defined on the window")
        out = np.empty((W, times.size))
        acc = np.zeros(W)
        prev = 0
        for j, N in enumerate(times):
            block = seq.terms[prev:N]
            hist = np.bincount(block)
            conv = np.convolve(hist, f)
            acc += conv[:W]
            prev = int(N)
            out[:, j] = acc / N
        return out
    raise TypeError(f"unknown system {system!r}")


@dataclass(frozen=True)
class OscillationCensus:
    tau: float
    H: int
    times: np.ndarray
    breakpoints: np.ndarray  # indices into times, block k = (b[k-1], b[k]]
    densities: np.ndarray

    @property
    def count(self) -> int:
        return int(self.breakpoints.size)


def growth_inverse(seq_kind: str, c: float | None = None, alpha: float | None = None):
    """h^{-1} for the growth majorant of the time sequence.

    Deterministic: h(n) = ceil(n^c); random: the fitted envelope
    h(n) = 2 n^{1/(1-alpha)}.
    """
    if seq_kind == "deterministic":
        return lambda y: int(np.floor(y ** (1.0 / c))) if y >= 1 else 0
    return lambda y: int(np.floor((y / 2.0) ** (1.0 - alpha))) if y >= 2 else 0


def oscillation_census(
    series_field: np.ndarray,
    tau: float,
    times,
    H: int,
    max_time: int | None = None,
) -> OscillationCensus:
    """Greedy census of tau-oscillating blocks over the time grid.

    series_field is (n_points, n_times); a block (M_{k-1}, M_k] counts
    when |{x : max_{M_{k-1} <= N <= M_k} |f_N(x) - f_{M_k}(x)| >= tau}|
    is at least tau * H. Times beyond max_time (the growth restriction
    h^{-1}(H/100)) are discarded. Greedy closing yields a lower bound for
    the sup over breakpoint choices.
    """
    if not (0.0 < tau < 1.0):
        raise ValueError("tau must lie in (0, 1)")
    times = np.asarray(times.times if isinstance(times, LacunaryGrid) else times, dtype=np.int64)
    s = np.asarray(series_field, dtype=np.float64)
    if s.shape[1] != times.size:
        raise ValueError("series field and time grid disagree")
    if max_time is not None:
        keep = times <= max_time
        times = times[keep]
        s = s[:, keep]
    L = times.size
    P = s.shape[0]
    breakpoints = []
    densities = []
    start = 0
    for k in range(1, L):
        block = s[:, start : k + 1]
        dev = np.abs(block - block[:, -1:]).max(axis=1)
        density = float(np.count_nonzero(dev >= tau)) / H
        if density >= tau:
            breakpoints.append(k)
            densities.append(density)
            start = k
    return OscillationCensus(
        tau, H, times, np.array(breakpoints, dtype=np.int64), np.array(densities)
    )


def census_exhaustive(series_field: np.ndarray, tau: float, times, H: int) -> int:
    """Exact census by trying every breakpoint subset; capped at 14 times."""
    times = np.asarray(times.times if isinstance(times, LacunaryGrid) else times, dtype=np.int64)
    s = np.asarray(series_field, dtype=np.float64)
    L = times.size
    if L > 14:
        raise ValueError("exhaustive census capped at 14 times")
    # ok[i][j]: block (i, j] has exceedance density >= tau
    ok = np.zeros((L, L), dtype=bool)
    for i in range(L):
        for j in range(i + 1, L):
            dev = np.abs(s[:, i : j + 1] - s[:, j : j + 1]).max(axis=1)
            ok[i, j] = np.count_nonzero(dev >= tau) >= tau * H
    best = np.zeros(L, dtype=np.int64)  # best count of blocks ending at index j
    for j in range(L):
        for i in range(j):
            if ok[i, j]:
                best[j] = max(best[j], best[i] + 1)
        # blocks need not start at 0; best[j] already allows leading slack
    return int(best.max(initial=0))


@dataclass(frozen=True)
class TransferComparison:
    lhs: int
    rhs: float
    system_census: int
    window_census: int
    c0: float
    tau: float


def transfer_compare(
    system,
    f: np.ndarray,
    tau: float,
    H: int,
    seq: SparseSequence,
    times,
    c0: float = 0.01,
    n_orbits: int = 4,
    seed: int = 0,
) -> TransferComparison:
    """Both sides of the system-to-window census domination.

    lhs: census of the system averages at altitude tau against the
    system's measure. rhs: tau^{-1} times the window census at altitude
    c0*tau of the pulled-back orbit functions F(n) = f(T^n x0) 1_{[H]},
    maximized over sampled base points.
    """
    times_arr = np.asarray(times.times if isinstance(times, LacunaryGrid) else times, dtype=np.int64)
    # restrict all block times so the shifts stay below H/100, as the
    # census construction requires
    h_inv = growth_inverse(seq.kind, c=seq.c, alpha=seq.alpha)
    max_time = h_inv(H / 100.0)
    times_arr = times_arr[times_arr <= max(max_time, int(times_arr.min()))]
    avg = ergodic_averages(system, f, seq, times_arr)
    meas = system.n_states
    lhs_census = oscillation_census(avg, tau, times_arr, meas).count

    gen = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    best = 0
    for _ in range(n_orbits):
        x0 = int(gen.integers(0, system.n_states))
        if isinstance(system, CyclicRotation):
            orbit = f[(x0 + system.a * np.arange(H)) % system.m]
        else:
            idx = x0 - np.arange(H)
            orbit = np.where((idx >= 0) & (idx < system.size), f[np.clip(idx, 0, system.size - 1)], 0.0)
        shift = IntegerShift(H)
        # the transference needs forward averages (1/N) sum F(w + a_n);
        # reflecting the orbit turns the shift's backward averages into
        # these, and the census is invariant under relabeling points
        pulled = ergodic_averages(shift, orbit[::-1].copy(), seq, times_arr)
        # count exceedances on the tenth-trimmed interior, where admissible
        # shifts never cross the truncation edge (point order is irrelevant
        # to the census)
        interior = pulled[H // 10 : H - H // 10]
        best = max(best, oscillation_census(interior, c0 * tau, times_arr, H).count)
    return TransferComparison(
        lhs_census, best / tau, lhs_census, best, c0, tau
    )
