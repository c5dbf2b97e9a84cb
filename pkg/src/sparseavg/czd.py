"""Discrete Calderon-Zygmund machinery on the integers.

Exact Hardy-Littlewood maximal function, stopping intervals (maximal
dyadic intervals inside the superlevel set, lattice anchored at 0),
scale-indexed good/bad/heavy splits with mean-zero atoms, exceptional
sets, and the empirical weak-type (1,1) ratio of functional fields built
from kernel families.

The per-interval mass equivalence of the classical construction holds
here only as an upper bound: a maximal dyadic interval deep inside the
superlevel set may carry no mass at all (the superlevel set of M f is
much wider than supp f), so validation asserts the upper bound and the
exact tiling of the superlevel set, not a two-sided per-interval bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from .kernels import Kernel
from .oscillation import OscillationFunctional, apply_functional_batch

__all__ = [
    "DyadicInterval",
    "hl_maximal",
    "superlevel_window",
    "cz_stopping",
    "CZDecomposition",
    "cz_split",
    "exceptional_sumset",
    "weak_type_ratio",
    "default_lambda_grid",
]


@dataclass(frozen=True)
class DyadicInterval:
    """[k 2^s, (k+1) 2^s) on the lattice anchored at 0."""

    scale: int
    index: int

    @property
    def start(self) -> int:
        return self.index << self.scale

    @property
    def length(self) -> int:
        return 1 << self.scale

    @property
    def end(self) -> int:
        return self.start + self.length

    def parent(self) -> "DyadicInterval":
        return DyadicInterval(self.scale + 1, self.index >> 1)

    def dilate(self, factor: int) -> tuple[int, int]:
        """[start, end) of the factor-times concentric dilation (integer window)."""
        center = self.start + self.length / 2.0
        half = factor * self.length / 2.0
        return int(np.floor(center - half)), int(np.ceil(center + half))


def hl_maximal(values: np.ndarray, offset: int = 0, window: tuple[int, int] | None = None):
    """Exact centered maximal function of a finitely supported function.

    values[i] is f(offset + i), f = 0 elsewhere. Returns (window_offset,
    M) where M[j] = M_HL f(window_offset + j), computed exactly: for each
    x the radius sweep stops once the window swallows the support, past
    which the average only decays.
    """
    v = np.abs(np.asarray(values, dtype=np.float64))
    if window is None:
        lo, hi = offset, offset + v.size
    else:
        lo, hi = window
    total = v.sum()
    P = np.concatenate([[0.0], np.cumsum(v)])  # P[i] = sum of v[:i]

    def mass(a: int, b: int) -> np.ndarray:
        """Vector of sums over [a_j, b_j] inclusive, absolute coordinates."""
        ai = np.clip(a - offset, 0, v.size)
        bi = np.clip(b - offset + 1, 0, v.size)
        return P[bi] - P[ai]

    xs = np.arange(lo, hi)
    out = np.zeros(xs.size)
    r_max_each = np.maximum(np.abs(xs - offset), np.abs(offset + v.size - 1 - xs))
    r_cap = int(r_max_each.max()) if xs.size else 0
    for r in range(0, r_cap + 1):
        avg = mass(xs - r, xs + r) / (2 * r + 1)
        out = np.maximum(out, avg)
        if total > 0 and (2 * r + 1) * out.min() >= total:
            break
    return lo, out


def superlevel_window(values: np.ndarray, offset: int, level: float) -> tuple[int, int]:
    """Window certain to contain {M_HL f >= level}: beyond it M < level."""
    total = float(np.abs(values).sum())
    pad = int(np.ceil(total / level)) + 2
    return offset - pad, offset + len(values) + pad


def cz_stopping(values: np.ndarray, offset: int = 0, level: float = 0.125) -> list[DyadicInterval]:
    """Maximal dyadic intervals inside {M_HL f >= level}.

    The returned intervals are pairwise disjoint, each has a parent not
    contained in the superlevel set, and together they tile the
    superlevel set exactly (every point is its own dyadic singleton).
    """
    if level <= 0:
        raise ValueError("level must be positive")
    lo, hi = superlevel_window(values, offset, level)
    wlo, M = hl_maximal(values, offset, (lo, hi))
    S = M >= level

    def in_S(a: int, b: int) -> bool:
        """[a, b) fully inside the superlevel set."""
        if a < lo or b > hi:
            return False
        ia, ib = a - wlo, b - wlo
        return bool(S[ia:ib].all())

    out = []
    pts = np.flatnonzero(S)
    i = 0
    while i < pts.size:
        x = int(pts[i]) + wlo
        s = 0
        q = DyadicInterval(0, x)
        while True:
            p = q.parent()
            if in_S(p.start, p.end):
                q = p
                s += 1
            else:
                break
        out.append(q)
        i = int(np.searchsorted(pts, q.end - wlo, side="left"))
    return out


@dataclass
class CZDecomposition:
    """f = heavy + sum_s bad[s] + good on the window [offset, offset + len)."""

    offset: int
    f: np.ndarray
    heavy: np.ndarray
    bad: dict  # scale s -> array (sum of mean-zero atoms on the size-2^s intervals)
    good: np.ndarray
    intervals: list
    level: float
    threshold: float
    scale_n: int
    alpha: float
    exceptional: list = field(default_factory=list)  # disjoint [start, end) windows
    sumset: np.ndarray | None = None

    @property
    def exceptional_size(self) -> int:
        return sum(b - a for a, b in self.exceptional)

    def bad_total(self) -> np.ndarray:
        out = np.zeros_like(self.f)
        for arr in self.bad.values():
            out += arr
        return out

    def reconstruction_error(self) -> float:
        return float(np.abs(self.f - (self.heavy + self.bad_total() + self.good)).max())

    def atoms(self):
        """Yield (interval, atom values) pairs."""
        for q in self.intervals:
            arr = self.bad.get(q.scale)
            if arr is None:
                continue
            a = q.start - self.offset
            yield q, arr[a : a + q.length]


def _merge_windows(windows: list[tuple[int, int]]) -> list[tuple[int, int]]:
    if not windows:
        return []
    windows = sorted(windows)
    out = [list(windows[0])]
    for a, b in windows[1:]:
        if a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return [tuple(w) for w in out]


def cz_split(
    values: np.ndarray,
    n: int,
    alpha: float,
    offset: int = 0,
    level: float = 0.125,
    dilation: int = 100,
) -> CZDecomposition:
    """Scale-n split into heavy, mean-zero bad atoms, and a bounded good part.

    heavy keeps entries with |f| >= 2^{(1-alpha)n}; on each stopping
    interval the truncated part is recentered to a mean-zero atom; the
    good part is the truncated remainder off the intervals plus the
    interval means. The exceptional set is the union of dilated stopping
    intervals.
    """
    raw = np.asarray(values, dtype=np.float64)
    intervals = cz_stopping(raw, offset, level)
    # work on a window wide enough to contain every stopping interval, so
    # atoms keep their exact zero sum even where f vanishes
    wlo = min([offset] + [q.start for q in intervals])
    whi = max([offset + raw.size] + [q.end for q in intervals])
    f = np.zeros(whi - wlo)
    f[offset - wlo : offset - wlo + raw.size] = raw
    threshold = 2.0 ** ((1.0 - alpha) * n)
    heavy = np.where(np.abs(f) >= threshold, f, 0.0)
    light = f - heavy
    bad: dict[int, np.ndarray] = {}
    good = light.copy()
    for q in intervals:
        a = q.start - wlo
        b = a + q.length
        seg = light[a:b]
        mean = seg.sum() / q.length
        atom = np.zeros(f.size)
        atom[a:b] = seg - mean
        bad[q.scale] = bad.get(q.scale, np.zeros(f.size)) + atom
        good[a:b] = mean
    return CZDecomposition(
        wlo,
        f,
        heavy,
        bad,
        good,
        intervals,
        level,
        threshold,
        n,
        alpha,
        exceptional=_merge_windows([q.dilate(dilation) for q in intervals]),
    )


def exceptional_sumset(kernel_supports: list[np.ndarray], f: np.ndarray, offset: int, threshold: float) -> np.ndarray:
    """Literal sumset union over scales of supp(kernel) + {|f| >= threshold}."""
    big = offset + np.flatnonzero(np.abs(f) >= threshold)
    pts = set()
    for supp in kernel_supports:
        for b in big:
            pts.update((supp + b).tolist())
    return np.array(sorted(pts), dtype=np.int64)


def default_lambda_grid(values: np.ndarray, field_values: np.ndarray) -> np.ndarray:
    """Geometric grid, ratio 2^{1/4}, from min(|f| nonzero / 10, smallest positive
    field value) up to 10x the largest field value."""
    nz = np.abs(values[values != 0])
    pos = field_values[field_values > 0]
    lo = float(nz.min()) / 10.0 if nz.size else 1e-6
    if pos.size:
        lo = min(lo, float(pos.min()))
    hi = 10.0 * (float(pos.max()) if pos.size else lo)
    k = max(2, int(np.ceil(np.log(hi / lo) / np.log(2 ** 0.25))) + 1)
    return lo * (2 ** 0.25) ** np.arange(k)


def weak_type_ratio(
    kernel_family: dict,
    functional: OscillationFunctional,
    f: np.ndarray,
    lambda_grid: np.ndarray | None = None,
    offset: int = 0,
) -> float:
    """sup over lambda of lambda |{x : F(x) >= lambda}| / ||f||_1, where
    F(x) is the functional applied to the per-point series N -> (K_N * f)(x)."""
    times = sorted(kernel_family)
    if not times:
        raise ValueError("kernel family is empty")
    f = np.asarray(f, dtype=np.float64)
    lo = offset + min(k.offset for k in kernel_family.values())
    hi = offset + f.size - 1 + max(k.support_end for k in kernel_family.values())
    W = hi - lo + 1
    series = np.zeros((W, len(times)))
    nz = np.flatnonzero(f)
    sparse = nz.size * nz.size <= W  # scatter the kernel per mass when cheaper
    for j, N in enumerate(times):
        K = kernel_family[N]
        if sparse:
            for i in nz:
                pos = offset + i + K.offset - lo
                series[pos : pos + len(K), j] += f[i] * K.values.real
        else:
            conv = signal.fftconvolve(f, K.values.real)
            pos = offset + K.offset - lo
            series[pos : pos + conv.size, j] += conv
    F = apply_functional_batch(functional, series)
    l1 = float(np.abs(f).sum())
    if l1 == 0:
        raise ValueError("f must carry mass")
    if lambda_grid is None:
        lambda_grid = default_lambda_grid(f, F)
    if len(lambda_grid) == 0:
        raise ValueError("empty lambda grid")
    best = 0.0
    Fs = np.sort(F)
    for lam in lambda_grid:
        count = Fs.size - np.searchsorted(Fs, lam, side="left")
        best = max(best, lam * count / l1)
    return best
