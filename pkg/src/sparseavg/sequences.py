"""Sparse time sequences: floor-power times, random hitting times, lacunary grids.

Two families of sparse times are generated here: the deterministic
a_n = floor(n^c) with 1 <= c < 2, and the random hitting times of
independent Bernoulli indicators X_n with P(X_n = 1) = n^{-alpha}.
Both carry enough provenance (exponent, or seed) to be regenerated
exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .power_floor import floor_powers

__all__ = [
    "SparseSequence",
    "IndicatorSeries",
    "LacunaryGrid",
    "ExhaustedSeriesError",
    "floor_power_sequence",
    "bernoulli_indicators",
    "hitting_times",
    "chernoff_tail",
    "lacunary_grid",
]


class ExhaustedSeriesError(RuntimeError):
    """Raised when an indicator series has too little mass for the requested count."""

    def __init__(self, requested: int, max_count: int):
        super().__init__(
            f"indicator series exhausted: requested {requested} hitting times, "
            f"only {max_count} available"
        )
        self.requested = requested
        self.max_count = max_count


@dataclass(frozen=True)
class SparseSequence:
    """Strictly increasing integer times with generation provenance."""

    terms: np.ndarray
    kind: str  # "deterministic" | "random"
    c: float | None = None
    alpha: float | None = None
    seed: int | None = None

    def __post_init__(self):
        t = np.asarray(self.terms, dtype=np.int64)
        object.__setattr__(self, "terms", t)
        if t.size and not (np.all(np.diff(t) > 0) and t[0] >= 1):
            raise ValueError("terms must be strictly increasing positive integers")

    def __len__(self) -> int:
        return int(self.terms.size)

    def count_up_to(self, M: int) -> int:
        """Number of terms <= M."""
        return int(np.searchsorted(self.terms, M, side="right"))

    def to_tsv(self) -> str:
        """Line-oriented 'n<TAB>a_n' text format."""
        return "\n".join(f"{i + 1}\t{a}" for i, a in enumerate(self.terms)) + "\n"

    def to_json(self) -> str:
        meta = {"kind": self.kind, "c": self.c, "alpha": self.alpha, "seed": self.seed}
        return json.dumps(
            {"terms": self.terms.tolist(), **{k: v for k, v in meta.items() if v is not None}}
        )

    @staticmethod
    def from_tsv(text: str, kind: str = "deterministic", **meta) -> "SparseSequence":
        terms = [int(line.split("\t")[1]) for line in text.strip().splitlines()]
        return SparseSequence(np.array(terms, dtype=np.int64), kind, **meta)

    @staticmethod
    def from_json(text: str) -> "SparseSequence":
        d = json.loads(text)
        return SparseSequence(
            np.array(d["terms"], dtype=np.int64),
            d.get("kind", "deterministic"),
            c=d.get("c"),
            alpha=d.get("alpha"),
            seed=d.get("seed"),
        )


@dataclass(frozen=True)
class IndicatorSeries:
    """0/1 draws X_n with P(X_n=1) = n^{-alpha}, Philox counter-based from seed."""

    values: np.ndarray
    alpha: float
    seed: int
    partial_sums: np.ndarray = field(default=None)
    expected_mass: float = field(default=None)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int8)
        object.__setattr__(self, "values", v)
        if self.partial_sums is None:
            object.__setattr__(self, "partial_sums", np.cumsum(v, dtype=np.int64))
        if self.expected_mass is None:
            object.__setattr__(self, "expected_mass", self.half_window_mass(len(v)))

    def __len__(self) -> int:
        return int(self.values.size)

    def half_window_mass(self, N: int) -> float:
        """W(N/2, N] = sum of n^{-alpha} over N/2 < n <= N."""
        n = np.arange(N // 2 + 1, N + 1, dtype=np.float64)
        return float(np.sum(n ** (-self.alpha)))

    def half_window_count(self, N: int) -> int:
        """Observed mass sum of X_n over N/2 < n <= N."""
        lo = N // 2
        return int(self.partial_sums[N - 1] - (self.partial_sums[lo - 1] if lo >= 1 else 0))


@dataclass(frozen=True)
class LacunaryGrid:
    """Deduplicated times floor(2^{k/R}), with the empirical lacunarity ratio."""

    R: int
    times: np.ndarray
    lam: float

    def __len__(self) -> int:
        return int(self.times.size)

    def tail_ratio_ok(self, threshold: int = 1_000_000, tol: float = 1e-6) -> bool:
        """Check consecutive ratios >= 2^{1/R}(1 - tol) for times >= threshold."""
        t = self.times
        mask = t[:-1] >= threshold
        if not mask.any():
            return True
        ratios = t[1:][mask] / t[:-1][mask]
        return bool(np.all(ratios >= 2.0 ** (1.0 / self.R) * (1.0 - tol)))


def floor_power_sequence(c: float, count: int) -> SparseSequence:
    """a_n = floor(n^c) for n = 1..count.

    The admissible exponent window is [1, 2); floors near integer
    boundaries are escalated to high precision.
    """
    if not np.isfinite(c) or not (1.0 <= c < 2.0):
        raise ValueError(f"exponent c must lie in [1, 2), got {c}")
    if count < 1:
        raise ValueError("count must be >= 1")
    terms = floor_powers(np.arange(1, count + 1), c)
    return SparseSequence(terms, "deterministic", c=float(c))


def bernoulli_indicators(alpha: float, n_max: int, seed: int) -> IndicatorSeries:
    """Independent X_n ~ Bernoulli(n^{-alpha}) for n = 1..n_max.

    Counter-based Philox keyed by the seed: the first n_max draws are a
    fixed function of (seed, n), so prefixes agree across different n_max
    and across parallel sweeps.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    gen = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    u = gen.random(n_max)
    n = np.arange(1, n_max + 1, dtype=np.float64)
    values = (u < n ** (-alpha)).astype(np.int8)
    return IndicatorSeries(values, float(alpha), int(seed))


def hitting_times(ind: IndicatorSeries, count: int) -> SparseSequence:
    """a_n = min{k : X_1 + ... + X_k = n} for n = 1..count."""
    total = int(ind.partial_sums[-1]) if len(ind) else 0
    if count > total:
        raise ExhaustedSeriesError(count, total)
    # partial_sums is nondecreasing; first index reaching n
    idx = np.searchsorted(ind.partial_sums, np.arange(1, count + 1), side="left")
    return SparseSequence(idx + 1, "random", alpha=ind.alpha, seed=ind.seed)


def chernoff_tail(lam: float, V: float) -> float:
    """Tail majorant 10*max(exp(-lam^2/(10V)), exp(-lam/10)) for 1-bounded sums."""
    if V <= 0:
        raise ValueError("total variance V must be positive")
    if lam < 0:
        raise ValueError("lam must be >= 0")
    return 10.0 * max(np.exp(-lam * lam / (10.0 * V)), np.exp(-lam / 10.0))


def lacunary_grid(R: int, n_max: int) -> LacunaryGrid:
    """Times floor(2^{k/R}) <= n_max, deduplicated, values < 2 dropped.

    The stored lam is the minimum consecutive ratio of the whole grid
    (> 1 since the times are strictly increasing integers); the
    asymptotic ratio 2^{1/R} is certified on the tail via tail_ratio_ok.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    if n_max < 2:
        return LacunaryGrid(R, np.empty(0, dtype=np.int64), 2.0 ** (1.0 / R))
    k_max = int(np.ceil(R * np.log2(n_max))) + 1
    k = np.arange(1, k_max + 1, dtype=np.float64)
    vals = np.floor(2.0 ** (k / R)).astype(np.int64)
    vals = np.unique(vals[(vals >= 2) & (vals <= n_max)])
    lam = float(np.min(vals[1:] / vals[:-1])) if vals.size > 1 else 2.0 ** (1.0 / R)
    return LacunaryGrid(int(R), vals, lam)
