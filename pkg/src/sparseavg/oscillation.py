"""Jump-counting, r-variation, oscillation, and diameter functionals.

All four functionals are computed exactly from their sup-over-chains
definitions by O(K^2) dynamic programming; a linear greedy scan is
provided as a fast lower-bound estimator for the jump count. Complex
input is allowed everywhere (moduli of differences are used throughout).

The quadratic DP is refused above MAX_DP_LENGTH points unless forced;
lacunary time grids keep series short in practice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MAX_DP_LENGTH",
    "jump_count",
    "greedy_jump_count",
    "variation",
    "oscillation",
    "diameter",
    "jump_count_batch",
    "variation_batch",
    "oscillation_batch",
    "diameter_batch",
    "OscillationFunctional",
    "apply_functional",
    "apply_functional_batch",
    "AxiomReport",
    "axiom_suite",
    "load_series_json",
    "load_series_binary",
]

MAX_DP_LENGTH = 20000


def _as_series(values) -> np.ndarray:
    a = np.asarray(values)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("series must be a nonempty 1-d array")
    if not np.iscomplexobj(a):
        a = a.astype(np.float64)
    return a

def _check_length(a: np.ndarray, force: bool):
    if a.size > MAX_DP_LENGTH and not force:
        raise ValueError(
            f"series length {a.size} exceeds {MAX_DP_LENGTH}; "
            "the DP is quadratic — pass force=True to run anyway"
        )


def jump_count(values, epsilon: float, force: bool = False) -> int:
    """Largest M with indices k_0 < ... < k_M and |a_{k_i} - a_{k_{i-1}}| > epsilon.

    Exact longest-chain DP: every consecutive gap along the chain must
    exceed epsilon.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    a = _as_series(values)
    _check_length(a, force)
    K = a.size
    jumps = np.zeros(K)  # best number of jumps of a chain ending at k
    for j in range(1, K):
        ok = np.abs(a[j] - a[:j]) > epsilon
        if ok.any():
            jumps[j] = np.max(jumps[:j][ok]) + 1
    return int(jumps.max())


def greedy_jump_count(values, epsilon: float) -> int:
    """Linear anchored scan; a lower bound for jump_count."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    a = _as_series(values)
    anchor = a[0]
    count = 0
    for x in a[1:]:
        if abs(x - anchor) > epsilon:
            count += 1
            anchor = x
    return count


def variation(values, r: float, force: bool = False) -> float:
    """r-variation: sup over increasing chains of the l^r norm of the gaps.

    r = inf returns the diameter sup_{n != m} |a_n - a_m|.
    """
    a = _as_series(values)
    if np.isinf(r):
        return diameter(a)
    if r < 1:
        raise ValueError("variation exponent r must be >= 1 (or inf)")
    _check_length(a, force)
    K = a.size
    dp = np.zeros(K)  # max sum of |gap|^r over chains ending at k
    for j in range(1, K):
        cand = dp[:j] + np.abs(a[j] - a[:j]) ** r
        dp[j] = cand.max()
    return float(dp.max() ** (1.0 / r))


def diameter(values) -> float:
    """sup_{n != m} |a_n - a_m|; the infinity-variation."""
    a = _as_series(values)
    if a.size == 1:
        return 0.0
    if not np.iscomplexobj(a):
        return float(a.max() - a.min())
    # complex: chunked pairwise max to bound memory
    best = 0.0
    step = 2048
    for i in range(0, a.size, step):
        d = np.abs(a[i : i + step, None] - a[None, :])
        best = max(best, float(d.max()))
    return best


def oscillation(values, breakpoints) -> float:
    """Block oscillation (sum_j max_{M_j <= k <= M_{j+1}} |a_k - a_{M_j}|^2)^{1/2}.

    breakpoints are 0-based positions M_1 < ... < M_{J+1} into the series.
    """
    a = _as_series(values)
    bp = np.asarray(breakpoints, dtype=np.int64)
    if bp.size < 2:
        raise ValueError("need at least two breakpoints")
    if np.any(np.diff(bp) <= 0):
        raise ValueError("breakpoints must be strictly increasing")
    if bp[0] < 0 or bp[-1] >= a.size:
        raise ValueError("breakpoints out of range")
    total = 0.0
    for j in range(bp.size - 1):
        lo, hi = bp[j], bp[j + 1]
        total += float(np.max(np.abs(a[lo : hi + 1] - a[lo]) ** 2))
    return float(np.sqrt(total))


# ---------------------------------------------------------------------------
# Batched variants: one short series per row, vectorized across rows.
# Used by the weak-type and census sweeps where the per-point series is the
# handful of lacunary times.

def jump_count_batch(series: np.ndarray, epsilon: float) -> np.ndarray:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    s = np.atleast_2d(np.asarray(series))
    P, L = s.shape
    jumps = np.zeros((P, L))
    for j in range(1, L):
        gaps = np.abs(s[:, j : j + 1] - s[:, :j])
        cand = np.where(gaps > epsilon, jumps[:, :j] + 1.0, 0.0)
        jumps[:, j] = cand.max(axis=1)
    return jumps.max(axis=1).astype(np.int64)


def variation_batch(series: np.ndarray, r: float) -> np.ndarray:
    s = np.atleast_2d(np.asarray(series))
    if np.isinf(r):
        return diameter_batch(s)
    if r < 1:
        raise ValueError("variation exponent r must be >= 1 (or inf)")
    P, L = s.shape
    dp = np.zeros((P, L))
    for j in range(1, L):
        cand = dp[:, :j] + np.abs(s[:, j : j + 1] - s[:, :j]) ** r
        dp[:, j] = cand.max(axis=1)
    return dp.max(axis=1) ** (1.0 / r)


def diameter_batch(series: np.ndarray) -> np.ndarray:
    s = np.atleast_2d(np.asarray(series))
    if np.iscomplexobj(s):
        best = np.zeros(s.shape[0])
        for j in range(s.shape[1]):
            best = np.maximum(best, np.abs(s[:, j : j + 1] - s).max(axis=1))
        return best
    return s.max(axis=1) - s.min(axis=1)


def oscillation_batch(series: np.ndarray, breakpoints) -> np.ndarray:
    s = np.atleast_2d(np.asarray(series))
    bp = np.asarray(breakpoints, dtype=np.int64)
    total = np.zeros(s.shape[0])
    for j in range(bp.size - 1):
        lo, hi = bp[j], bp[j + 1]
        total += np.max(np.abs(s[:, lo : hi + 1] - s[:, lo : lo + 1]) ** 2, axis=1)
    return np.sqrt(total)


# ---------------------------------------------------------------------------
# Functional descriptors

@dataclass(frozen=True)
class OscillationFunctional:
    """Descriptor of one functional: jump{epsilon}, variation{r}, oscillation{breakpoints}, diameter."""

    kind: str
    epsilon: float | None = None
    r: float | None = None
    breakpoints: tuple | None = None

    def __post_init__(self):
        if self.kind == "jump":
            if self.epsilon is None or self.epsilon <= 0:
                raise ValueError("jump functional needs epsilon > 0")
        elif self.kind == "variation":
            if self.r is None or (not np.isinf(self.r) and self.r < 1):
                raise ValueError("variation functional needs r >= 1 or inf")
        elif self.kind == "oscillation":
            if not self.breakpoints or len(self.breakpoints) < 2:
                raise ValueError("oscillation functional needs >= 2 breakpoints")
            if np.any(np.diff(self.breakpoints) <= 0):
                raise ValueError("breakpoints must be strictly increasing")
        elif self.kind != "diameter":
            raise ValueError(f"unknown functional kind {self.kind!r}")


def apply_functional(fn: OscillationFunctional, values) -> float:
    """Scalar value of the functional on one series.

    The jump kind returns the weak-type normalization
    epsilon * sqrt(N_epsilon), the quantity the endpoint estimates bound.
    """
    if fn.kind == "jump":
        return fn.epsilon * float(np.sqrt(jump_count(values, fn.epsilon)))
    if fn.kind == "variation":
        return variation(values, fn.r)
    if fn.kind == "oscillation":
        return oscillation(values, fn.breakpoints)
    return diameter(values)


def apply_functional_batch(fn: OscillationFunctional, series: np.ndarray) -> np.ndarray:
    if fn.kind == "jump":
        return fn.epsilon * np.sqrt(jump_count_batch(series, fn.epsilon))
    if fn.kind == "variation":
        return variation_batch(series, fn.r)
    if fn.kind == "oscillation":
        return oscillation_batch(series, fn.breakpoints)
    return diameter_batch(series)


# ---------------------------------------------------------------------------
# Axiom suite: the functional-class inequalities on random series

@dataclass
class AxiomEntry:
    name: str
    constant: float
    worst_ratio: float
    violations: int
    trials: int


@dataclass
class AxiomReport:
    kind: str
    seed: int
    entries: list = field(default_factory=list)

    @property
    def total_violations(self) -> int:
        return sum(e.violations for e in self.entries)


def _random_series(gen: np.random.Generator, max_len: int = 24) -> np.ndarray:
    K = int(gen.integers(2, max_len + 1))
    a = gen.normal(size=K)
    if gen.random() < 0.25:
        a = np.round(a * 4) / 4  # exercise ties
    return a


def _lead_value(kind: str, a: np.ndarray, epsilon: float, r: float) -> float:
    if kind == "jump":
        return epsilon * np.sqrt(jump_count(a, epsilon))
    if kind == "variation":
        return variation(a, r)
    return oscillation(a, _default_breakpoints(a.size))


def _default_breakpoints(K: int, J: int = 4) -> np.ndarray:
    J = min(J, K - 1) if K > 1 else 1
    return np.unique(np.linspace(0, K - 1, J + 1).astype(np.int64))


def axiom_suite(
    kind: str,
    trials: int,
    seed: int = 0,
    epsilon: float = 0.5,
    r: float = 2.0,
    L: int = 3,
) -> AxiomReport:
    """Check the functional-class inequalities on random series.

    For each trial: (i) the l^2 domination N(a) <= 2 (sum |a_k|^2)^{1/2};
    (ii) the L-fold splitting bound, instantiated for the jump kind at
    altitudes epsilon/L and epsilon/(10 l^2) with constant 10, and for
    variation/oscillation as the plain triangle inequality with
    constant 1; (iii) for the jump kind, scaling conjugation as an exact
    identity: epsilon*sqrt(N_epsilon(lam*a)) = |lam| * (epsilon/|lam|) *
    sqrt(N_{epsilon/|lam|}(a)).

    Failures are report entries, never exceptions.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if kind not in ("jump", "variation", "oscillation"):
        raise ValueError(f"unknown kind {kind!r}")
    gen = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    C_L2 = 2.0
    C_SPLIT = 10.0 if kind == "jump" else 1.0 + 1e-9
    report = AxiomReport(kind=kind, seed=seed)
    slack = 1e-12

    worst_l2 = 0.0
    viol_l2 = 0
    worst_split1 = 0.0
    viol_split1 = 0
    worst_split2 = 0.0
    viol_split2 = 0
    worst_homo = 0.0
    viol_homo = 0

    for _ in range(trials):
        parts = [_random_series(gen) for _ in range(L)]
        K = min(p.size for p in parts)
        parts = [p[:K] for p in parts]
        total = np.sum(parts, axis=0)

        # (i) l^2 domination on the summed series
        lead = _lead_value(kind, total, epsilon, r)
        l2 = float(np.sqrt(np.sum(np.abs(total) ** 2)))
        if l2 > 0:
            ratio = lead / l2
            worst_l2 = max(worst_l2, ratio)
            if ratio > C_L2 + slack:
                viol_l2 += 1

        # (ii) splitting bound, two routes
        if kind == "jump":
            rhs1 = L * sum(
                (epsilon / L) * np.sqrt(jump_count(p, epsilon / L)) for p in parts
            )
            rhs2 = sum(
                (l * l)
                * (epsilon / (10 * l * l))
                * np.sqrt(jump_count(parts[l - 1], epsilon / (10 * l * l)))
                for l in range(1, L + 1)
            )
        elif kind == "variation":
            rhs1 = sum(variation(p, r) for p in parts)
            rhs2 = rhs1
        else:
            bp = _default_breakpoints(K)
            rhs1 = sum(oscillation(p, bp) for p in parts)
            rhs2 = rhs1
            lead = oscillation(total, bp)
        for rhs, which in ((rhs1, 1), (rhs2, 2)):
            if rhs > 0:
                ratio = lead / rhs
                if which == 1:
                    worst_split1 = max(worst_split1, ratio)
                    if ratio > C_SPLIT + slack:
                        viol_split1 += 1
                else:
                    worst_split2 = max(worst_split2, ratio)
                    if ratio > C_SPLIT + slack:
                        viol_split2 += 1
            elif lead > slack:
                if which == 1:
                    viol_split1 += 1
                else:
                    viol_split2 += 1

        # (iii) scaling conjugation (exact for the jump kind; homogeneity else)
        lam = float(gen.uniform(0.2, 5.0))
        if kind == "jump":
            lhs = epsilon * np.sqrt(jump_count(lam * total, epsilon))
            rhs = lam * (epsilon / lam) * np.sqrt(jump_count(total, epsilon / lam))
            err = abs(lhs - rhs)
            worst_homo = max(worst_homo, err)
            if err > 1e-9:
                viol_homo += 1
        else:
            v1 = _lead_value(kind, lam * total, epsilon, r)
            v0 = _lead_value(kind, total, epsilon, r)
            err = abs(v1 - lam * v0) / max(v1, lam * v0, 1e-30)
            worst_homo = max(worst_homo, err)
            if err > 1e-9:
                viol_homo += 1

    report.entries = [
        AxiomEntry("l2_domination", C_L2, worst_l2, viol_l2, trials),
        AxiomEntry("split_route_L", C_SPLIT, worst_split1, viol_split1, trials),
        AxiomEntry("split_route_l2weights", C_SPLIT, worst_split2, viol_split2, trials),
        AxiomEntry("scaling", 0.0, worst_homo, viol_homo, trials),
    ]
    return report


# ---------------------------------------------------------------------------
# External interfaces: JSON arrays and little-endian float64 blocks

def load_series_json(text: str) -> np.ndarray:
    import json

    return _as_series(json.loads(text))


def load_series_binary(blob: bytes) -> np.ndarray:
    return _as_series(np.frombuffer(blob, dtype="<f8"))
