import json

import numpy as np
import pytest

from sparseavg import (
    ExhaustedSeriesError,
    IndicatorSeries,
    SparseSequence,
    bernoulli_indicators,
    chernoff_tail,
    floor_power_sequence,
    hitting_times,
    lacunary_grid,
)


class TestFloorPowerSequence:
    def test_identity_exponent(self):
        assert floor_power_sequence(1.0, 5).terms.tolist() == [1, 2, 3, 4, 5]

    def test_exact_power(self):
        # 4^{3/2} = 8 exactly
        assert floor_power_sequence(1.5, 4).terms[3] == 8

    def test_c_1_1_first_ten(self):
        assert floor_power_sequence(1.1, 10).terms.tolist() == [1, 2, 3, 4, 5, 7, 8, 9, 11, 12]

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            floor_power_sequence(0.9, 5)
        with pytest.raises(ValueError):
            floor_power_sequence(2.0, 5)
        with pytest.raises(ValueError):
            floor_power_sequence(1.1, 0)

    def test_strictly_increasing(self):
        for c in (1.0, 1.05, 1.1, 1.5, 1.99):
            t = floor_power_sequence(c, 500).terms
            assert np.all(np.diff(t) > 0)

    def test_density(self):
        # |{a_n <= M}| stays within 2 of M^{1/c} on a dyadic grid
        c = 1.1
        seq = floor_power_sequence(c, 5000)
        for M in 2 ** np.arange(3, 12):
            got = seq.count_up_to(int(M))
            assert abs(got - M ** (1 / c)) <= 2

    def test_boundary_escalation(self):
        # perfect squares at c = 3/2 give exact cubes; a float pow that lands
        # a hair below the integer must be rescued by the escalation path
        seq = floor_power_sequence(1.5, 10000)
        for k in range(1, 101):
            assert seq.terms[k * k - 1] == k ** 3


class TestBernoulliIndicators:
    def test_determinism(self):
        a = bernoulli_indicators(0.3, 1000, seed=42)
        b = bernoulli_indicators(0.3, 1000, seed=42)
        assert np.array_equal(a.values, b.values)

    def test_prefix_stability(self):
        short = bernoulli_indicators(0.3, 100, seed=7)
        long = bernoulli_indicators(0.3, 1000, seed=7)
        assert np.array_equal(short.values, long.values[:100])

    def test_alpha_domain(self):
        for bad in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(ValueError):
                bernoulli_indicators(bad, 10, seed=0)

    def test_small_alpha_saturates(self):
        # mean over [1, N] approaches 1 as alpha -> 0+
        means = [bernoulli_indicators(a, 4000, seed=3).values.mean() for a in (0.5, 0.1, 0.005)]
        assert means[0] < means[1] < means[2]
        assert means[2] > 0.9

    def test_partial_sums(self):
        ind = bernoulli_indicators(0.4, 500, seed=9)
        assert np.array_equal(ind.partial_sums, np.cumsum(ind.values))

    def test_concentration_envelope(self):
        # half-window deviation within the 10-sigma style envelope
        alpha, N = 0.3, 1 << 16
        ok = 0
        trials = 300
        for seed in range(trials):
            ind = bernoulli_indicators(alpha, N, seed=seed)
            n = np.arange(N // 2 + 1, N + 1, dtype=np.float64)
            dev = abs(ind.half_window_count(N) - float(np.sum(n ** -alpha)))
            if dev <= 10 * np.sqrt(np.log(N)) * N ** ((1 - alpha) / 2):
                ok += 1
        assert ok / trials >= 0.99


class TestHittingTimes:
    def test_all_ones(self):
        ind = IndicatorSeries(np.array([1, 1, 1], dtype=np.int8), 0.3, 0)
        assert hitting_times(ind, 3).terms.tolist() == [1, 2, 3]

    def test_pattern(self):
        ind = IndicatorSeries(np.array([0, 1, 0, 1, 1], dtype=np.int8), 0.3, 0)
        assert hitting_times(ind, 3).terms.tolist() == [2, 4, 5]

    def test_exhausted(self):
        ind = bernoulli_indicators(0.5, 50, seed=1)
        total = int(ind.partial_sums[-1])
        with pytest.raises(ExhaustedSeriesError) as exc:
            hitting_times(ind, total + 5)
        assert exc.value.max_count == total

    def test_partial_sum_recovery(self):
        ind = bernoulli_indicators(0.3, 5000, seed=11)
        seq = hitting_times(ind, 100)
        assert np.all(np.diff(seq.terms) > 0)
        for n in (1, 10, 50, 100):
            a_n = int(seq.terms[n - 1])
            assert int(ind.partial_sums[a_n - 1]) == n

    def test_growth_ratio_bounded(self):
        # a_n / n^{1/(1-alpha)} stays in a fixed band for n >= 100
        alpha = 0.3
        ratios = []
        for seed in range(10):
            ind = bernoulli_indicators(alpha, 1 << 17, seed=seed)
            count = min(400, int(ind.partial_sums[-1]))
            seq = hitting_times(ind, count)
            n = np.arange(100, count + 1, dtype=np.float64)
            ratios.append(seq.terms[99:] / n ** (1 / (1 - alpha)))
        allr = np.concatenate(ratios)
        assert 0.2 <= allr.min() and allr.max() <= 5.0


class TestChernoffTail:
    def test_zero(self):
        assert chernoff_tail(0.0, 3.0) == 10.0

    def test_monotone(self):
        V = 2.0
        lams = np.linspace(0, 50, 200)
        vals = [chernoff_tail(l, V) for l in lams]
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_gaussian_regime_value(self):
        V = 1.0
        lam = np.sqrt(10 * V * np.log(10))
        # here lam/10 < ln 10, so the linear branch dominates the max
        expected = 10 * max(np.exp(-np.log(10)), np.exp(-lam / 10))
        assert chernoff_tail(lam, V) == pytest.approx(expected)
        # with V large enough that lam/10 >= ln 10 the value is exactly 1
        V = 600.0
        lam = np.sqrt(10 * V * np.log(10))
        assert lam / 10 >= np.log(10)
        assert chernoff_tail(lam, V) == pytest.approx(1.0)


class TestLacunaryGrid:
    def test_r1(self):
        assert lacunary_grid(1, 64).times.tolist() == [2, 4, 8, 16, 32, 64]

    def test_r2_dedup(self):
        assert lacunary_grid(2, 8).times.tolist() == [2, 4, 5, 8]

    def test_lam_positive(self):
        g = lacunary_grid(3, 1 << 14)
        assert g.lam > 1.0

    def test_tail_ratio(self):
        for R in (1, 2, 4):
            g = lacunary_grid(R, 1 << 22)
            t = g.times
            mask = t[:-1] >= (1 << 21)
            ratios = t[1:][mask] / t[:-1][mask]
            assert np.all(ratios >= 2 ** (1 / R) * (1 - 1e-6))
            assert g.tail_ratio_ok(threshold=1 << 21)


class TestSerialization:
    def test_tsv_roundtrip(self):
        seq = floor_power_sequence(1.1, 20)
        text = seq.to_tsv()
        assert text.splitlines()[5] == "6\t7"
        back = SparseSequence.from_tsv(text, kind="deterministic", c=1.1)
        assert np.array_equal(back.terms, seq.terms)

    def test_json_roundtrip(self):
        ind = bernoulli_indicators(0.3, 2000, seed=5)
        seq = hitting_times(ind, 30)
        back = SparseSequence.from_json(seq.to_json())
        assert np.array_equal(back.terms, seq.terms)
        assert back.kind == "random" and back.seed == 5
        data = json.loads(seq.to_json())
        assert data["alpha"] == 0.3
