import numpy as np
import pytest

from sparseavg import (
    CyclicRotation,
    IntegerShift,
    ergodic_averages,
    floor_power_sequence,
    lacunary_grid,
    oscillation_census,
    transfer_compare,
)
from sparseavg.ergodic import census_exhaustive, growth_inverse


class TestErgodicAverages:
    def test_constant_function(self):
        seq = floor_power_sequence(1.1, 200)
        sysr = CyclicRotation(17, 3)
        f = np.full(17, 0.7)
        avg = ergodic_averages(sysr, f, seq, np.array([10, 50, 200]))
        assert np.allclose(avg, 0.7)

    def test_identity_map(self):
        # a = 0 leaves every state fixed: the series is f(x) at every time
        seq = floor_power_sequence(1.1, 100)
        sysr = CyclicRotation(2, 0)
        f = np.array([0.2, 0.9])
        avg = ergodic_averages(sysr, f, seq, np.array([5, 100]))
        assert np.allclose(avg[:, 0], f)
        assert np.allclose(avg[:, 1], f)

    def test_rotation_equidistribution_small(self):
        seq = floor_power_sequence(1.1, 100_000)
        m = 401
        sysr = CyclicRotation(m, 1)
        f = np.zeros(m)
        f[: m // 2] = 1.0
        avg = ergodic_averages(sysr, f, seq, np.array([100_000]))
        assert np.abs(avg[:, 0] - f.mean()).max() < 0.02

    def test_shift_window(self):
        seq = floor_power_sequence(1.1, 50)
        shift = IntegerShift(64)
        f = np.zeros(64)
        f[10] = 1.0
        avg = ergodic_averages(shift, f, seq, np.array([10]))
        # f(x - a_n) = 1 iff x = 10 + a_n
        hits = {10 + int(a) for a in seq.terms[:10] if 10 + int(a) < 64}
        for x in range(64):
            expect = (1.0 if x in hits else 0.0) / 10
            assert avg[x, 0] == pytest.approx(expect)

    def test_sequence_coverage_error(self):
        seq = floor_power_sequence(1.1, 10)
        with pytest.raises(ValueError):
            ergodic_averages(CyclicRotation(5, 1), np.ones(5), seq, np.array([100]))

    def test_time_grid_lipschitz(self):
        # moving N inside one lacunary step changes the average by O(1/R)
        seq = floor_power_sequence(1.1, 40_000)
        m = 1009
        sysr = CyclicRotation(m, 1)
        f = np.zeros(m)
        f[: m // 2] = 1.0
        for R in (4, 8, 16):
            grid = lacunary_grid(R, 30_000)
            t = grid.times[grid.times >= 100]
            avg = ergodic_averages(sysr, f, seq, t)
            step = np.abs(np.diff(avg, axis=1)).max()
            assert step <= 10.0 / R


class TestOscillationCensus:
    def test_constant_field_zero(self):
        field = np.ones((50, 6))
        cen = oscillation_census(field, 0.3, np.array([2, 4, 8, 16, 32, 64]), 50)
        assert cen.count == 0

    def test_fully_oscillating_field(self):
        # oscillation by 2 tau at every time and every point closes a block
        # at each step
        times = np.array([2, 4, 8, 16, 32, 64])
        tau = 0.2
        field = np.tile([0.0, 2 * tau], (40, 3))
        cen = oscillation_census(field, tau, times, 40)
        assert cen.count == times.size - 1

    def test_tau_monotonicity(self, rng):
        field = rng.normal(size=(60, 8)) * 0.5
        times = 2 ** np.arange(1, 9)
        counts = [oscillation_census(field, t, times, 60).count for t in (0.05, 0.1, 0.3, 0.6)]
        assert all(a >= b for a, b in zip(counts, counts[1:]))

    def test_bounded_function_high_tau(self, rng):
        field = np.clip(rng.normal(size=(30, 6)), -1, 1)
        cen = oscillation_census(field / 10, 0.9, 2 ** np.arange(1, 7), 30)
        assert cen.count == 0

    def test_max_time_restriction(self):
        times = np.array([2, 4, 8, 16, 32])
        field = np.tile([0.0, 1.0], (20, 3))[:, :5]
        cen = oscillation_census(field, 0.3, times, 20, max_time=8)
        assert np.all(cen.times <= 8)

    def test_greedy_at_least_half_of_exhaustive(self, rng):
        times = 2 ** np.arange(1, 9)
        for _ in range(40):
            field = rng.normal(size=(25, 8)) * rng.uniform(0.2, 1.5)
            tau = float(rng.uniform(0.1, 0.5))
            greedy = oscillation_census(field, tau, times, 25).count
            exact = census_exhaustive(field, tau, times, 25)
            assert greedy <= exact
            assert greedy >= 0.5 * exact - 1e-9

    def test_tau_domain(self):
        with pytest.raises(ValueError):
            oscillation_census(np.ones((4, 3)), 1.5, np.array([1, 2, 4]), 4)


class TestGrowthInverse:
    def test_deterministic(self):
        h_inv = growth_inverse("deterministic", c=1.1)
        assert h_inv(100.0) == int(100 ** (1 / 1.1))
        assert h_inv(0.5) == 0

    def test_random_envelope(self):
        h_inv = growth_inverse("random", alpha=0.3)
        assert h_inv(200.0) == int((100.0) ** 0.7)


class TestTransferCompare:
    def test_constant_zero_both_sides(self):
        seq = floor_power_sequence(1.1, 5000)
        sysr = CyclicRotation(101, 1)
        f = np.full(101, 0.4)
        out = transfer_compare(sysr, f, 0.2, 1 << 10, seq, np.array([4, 8, 16, 32]))
        assert out.lhs == 0
        assert out.window_census == 0

    def test_high_tau_zero(self, rng):
        seq = floor_power_sequence(1.1, 5000)
        sysr = CyclicRotation(101, 1)
        f = (rng.random(101) < 0.5).astype(np.float64)
        out = transfer_compare(sysr, f, 0.95, 1 << 10, seq, np.array([4, 8, 16, 32]))
        assert out.lhs == 0

    def test_indicator_family_dominated(self, rng):
        seq = floor_power_sequence(1.1, 20_000)
        sysr = CyclicRotation(211, 1)
        times = np.array([4, 8, 16, 32, 64])
        worst = 0
        for _ in range(10):
            f = (rng.random(211) < rng.uniform(0.2, 0.8)).astype(np.float64)
            out = transfer_compare(sysr, f, 0.25, 1 << 11, seq, times, c0=0.01)
            if out.rhs > 0:
                worst = max(worst, out.lhs / max(out.rhs, 1e-12))
            else:
                assert out.lhs <= 20
        assert worst <= 20.0
