import numpy as np
import pytest

from sparseavg import (
    DyadicInterval,
    OscillationFunctional,
    cz_split,
    cz_stopping,
    hl_maximal,
    power_average_kernel,
    weak_type_ratio,
)
from sparseavg.czd import exceptional_sumset, superlevel_window

from oracles import hl_maximal_point


class TestHlMaximal:
    def test_delta_profile(self):
        lo, M = hl_maximal(np.array([1.0]), 0, (-8, 9))
        for i, x in enumerate(range(-8, 9)):
            assert M[i] == pytest.approx(1.0 / (2 * abs(x) + 1))

    def test_constant_interior(self):
        f = np.ones(64)
        lo, M = hl_maximal(f, 0, (20, 44))
        assert np.allclose(M, 1.0)

    def test_weak_type_of_delta(self):
        # sup_lambda lambda |{M delta_0 > lambda}| <= 2
        lo, M = hl_maximal(np.array([1.0]), 0, (-200, 201))
        for lam in np.geomspace(1e-3, 1.0, 40):
            count = int(np.count_nonzero(M > lam))
            assert lam * count <= 2.0 + 1e-9

    def test_matches_pointwise_oracle(self, rng):
        f = rng.normal(size=33)
        off = -16
        lo, M = hl_maximal(f, off, (-30, 31))
        for i, x in enumerate(range(-30, 31)):
            assert M[i] == pytest.approx(hl_maximal_point(f, off, x), abs=1e-12)


class TestStopping:
    def test_zero_function(self):
        assert cz_stopping(np.zeros(16), 0, level=1.0) == []

    def test_tall_delta_coverage(self):
        H = 64.0
        f = np.zeros(1)
        f[0] = H
        qs = cz_stopping(f, 0, level=1.0)
        total = sum(q.length for q in qs)
        # {M >= 1} = [-31, 31]: 63 points, tiled exactly
        assert total == 63

    def test_disjoint_maximal_tiling(self, rng):
        f = np.zeros(256)
        pos = rng.integers(0, 256, size=12)
        np.add.at(f, pos, rng.exponential(3.0, size=12))
        level = 0.25
        qs = cz_stopping(f, 0, level=level)
        # pairwise disjoint
        spans = sorted((q.start, q.end) for q in qs)
        for (a1, b1), (a2, b2) in zip(spans, spans[1:]):
            assert b1 <= a2
        # exact tiling of the superlevel set
        wlo, whi = superlevel_window(f, 0, level)
        lo, M = hl_maximal(f, 0, (wlo, whi))
        S = set((np.flatnonzero(M >= level) + wlo).tolist())
        covered = set()
        for q in qs:
            covered.update(range(q.start, q.end))
        assert covered == S
        # maximality: the parent sticks out of the superlevel set
        for q in qs:
            p = q.parent()
            assert not set(range(p.start, p.end)) <= S
        # per-interval upper mass bound from the stopping construction
        for q in qs:
            mass = float(np.abs(f[max(q.start, 0) : min(q.end, 256)]).sum())
            assert mass <= 5.0 * level * q.length

    def test_level_domain(self):
        with pytest.raises(ValueError):
            cz_stopping(np.ones(4), 0, level=0.0)


class TestCzSplit:
    def test_no_intervals_all_good(self):
        f = np.full(16, 0.05)
        dec = cz_split(f, 4, 0.3, level=0.125)
        assert len(dec.intervals) == 0
        assert np.abs(dec.heavy).max() == 0.0
        assert dec.reconstruction_error() == 0.0
        assert np.allclose(dec.good[dec.f != 0], 0.05)

    def test_reconstruction_exact(self, rng):
        for _ in range(20):
            f = rng.normal(size=128) * rng.exponential(2.0)
            dec = cz_split(f, int(rng.integers(1, 8)), 0.3)
            assert dec.reconstruction_error() <= 1e-12 * max(1.0, np.abs(f).max())

    def test_atoms_mean_zero_and_l1(self, rng):
        f = rng.normal(size=512) * 4
        dec = cz_split(f, 3, 0.3, level=0.125)
        for q, atom in dec.atoms():
            assert abs(atom.sum()) <= 1e-10 * max(1.0, np.abs(atom).sum())
            assert np.abs(atom).sum() <= 10.0 * q.length

    def test_good_bounded(self):
        # off the intervals |good| < level; on them it is the truncated mean,
        # bounded by the per-interval mass constant
        for seed in range(10):
            g = np.random.Generator(np.random.Philox(key=seed))
            f = g.normal(size=256) * 2
            dec = cz_split(f, 4, 0.3, level=0.125)
            assert np.abs(dec.good).max() <= 5.0 * 0.125 + 1e-9

    def test_exceptional_size_bound(self, rng):
        # |E| <= 100 * weak-type(level) * ||f||_1
        level = 0.125
        for seed in range(20):
            g = np.random.Generator(np.random.Philox(key=100 + seed))
            f = np.zeros(256)
            pos = g.integers(0, 256, size=8)
            np.add.at(f, pos, g.exponential(2.0, size=8))
            dec = cz_split(f, 4, 0.3, level=level)
            l1 = float(np.abs(f).sum())
            assert dec.exceptional_size <= (400.0 / level) * l1

    def test_bad_windows_controlled_by_exceptional(self, rng):
        # sum over s <= m of ||B_s||_{l1(J)} <= C |E cap J| for |J| >= 2^m
        f = np.zeros(512)
        pos = rng.integers(0, 512, size=16)
        np.add.at(f, pos, rng.exponential(4.0, size=16))
        dec = cz_split(f, 5, 0.3, level=0.125)
        if not dec.intervals:
            return
        scales = sorted(dec.bad)
        exc = np.zeros(dec.f.size, dtype=bool)
        for a, b in dec.exceptional:
            aa = max(a - dec.offset, 0)
            bb = min(b - dec.offset, dec.f.size)
            if aa < bb:
                exc[aa:bb] = True
        m = max(scales)
        for start in range(0, dec.f.size - (1 << m), max(1, dec.f.size // 8)):
            J = slice(start, start + (1 << m))
            tot = sum(np.abs(dec.bad[s][J]).sum() for s in scales)
            assert tot <= 50.0 * max(1, int(exc[J].sum()))


class TestExceptionalSumset:
    def test_literal_sumset(self):
        f = np.array([0.0, 10.0, 0.0, 0.0])
        supports = [np.array([0, 2]), np.array([5])]
        pts = exceptional_sumset(supports, f, offset=0, threshold=5.0)
        assert pts.tolist() == [1, 3, 6]


class TestWeakTypeRatio:
    def _family(self, c=1.1, kmin=6, kmax=12):
        return {1 << k: power_average_kernel(1 << k, c) for k in range(kmin, kmax + 1)}

    def test_delta_finite(self):
        fam = self._family()
        fn = OscillationFunctional("jump", epsilon=1.0)
        f = np.zeros(1 << 13)
        f[100] = 4.0 * (1 << 6) ** (1 / 1.1)
        ratio = weak_type_ratio(fam, fn, f)
        assert 0 < ratio < 10.0

    def test_scaling_conjugation_invariance(self):
        fam = self._family()
        f = np.zeros(1 << 13)
        f[500] = 4.0 * (1 << 6) ** (1 / 1.1)
        s = 2.5
        r1 = weak_type_ratio(fam, OscillationFunctional("jump", epsilon=1.0), f)
        r2 = weak_type_ratio(fam, OscillationFunctional("jump", epsilon=s), s * f)
        assert r1 == pytest.approx(r2, rel=1e-9)

    def test_homogeneous_functional_scale_invariance(self, rng):
        fam = self._family()
        f = np.zeros(1 << 13)
        f[rng.integers(0, 1 << 13, size=5)] = rng.exponential(50.0, size=5)
        fn = OscillationFunctional("variation", r=2.0)
        r1 = weak_type_ratio(fam, fn, f)
        r2 = weak_type_ratio(fam, fn, 7.0 * f)
        assert r1 == pytest.approx(r2, rel=1e-6)

    def test_spread_masses_stable(self, rng):
        fam = self._family(kmax=13)
        fn = OscillationFunctional("jump", epsilon=1.0)
        h0 = 4.0 * (1 << 6) ** (1 / 1.1)
        ratios = []
        for K in (1, 4, 16):
            f = np.zeros(1 << 14)
            f[rng.integers(0, 1 << 14, size=K)] = h0
            ratios.append(weak_type_ratio(fam, fn, f))
        assert max(ratios) / min(ratios) < 4.0

    def test_errors(self):
        fam = self._family()
        fn = OscillationFunctional("jump", epsilon=1.0)
        with pytest.raises(ValueError):
            weak_type_ratio({}, fn, np.ones(4))
        with pytest.raises(ValueError):
            weak_type_ratio(fam, fn, np.zeros(16))
        with pytest.raises(ValueError):
            weak_type_ratio(fam, fn, np.ones(16), lambda_grid=np.array([]))


class TestDyadicInterval:
    def test_geometry(self):
        q = DyadicInterval(3, -2)
        assert q.start == -16 and q.end == -8 and q.length == 8
        assert q.parent() == DyadicInterval(4, -1)
        a, b = q.dilate(100)
        assert b - a == 800
        assert (a + b) / 2 == pytest.approx((q.start + q.end) / 2)
