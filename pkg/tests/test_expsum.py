import numpy as np
import pytest

from sparseavg import (
    PhaseSum,
    counting_function,
    exp_sum_direct,
    min_sum_check,
    psi_expand,
    psi_tail_coefficients,
    sigma_split,
    two_frequency_bound_check,
    vdc_bound,
    vdc_certify,
)
from sparseavg.expsum import _pair_kernel

from oracles import mp_exp_sum, pair_difference_counts


class TestExpSumDirect:
    def test_zero_phase_counts_interval(self):
        ps = PhaseSum(N=64, c=1.1, t=64, theta=0.0, h=0)
        assert exp_sum_direct(ps) == pytest.approx(32.0)

    def test_half_period_cancellation(self):
        # theta = 1/2 with no power term alternates signs over the
        # even-length window and cancels exactly
        ps = PhaseSum(N=64, c=1.1, t=64, theta=0.5, h=0)
        assert abs(exp_sum_direct(ps)) < 1e-12

    def test_matches_mpmath_reference(self, rng):
        for _ in range(6):
            N = int(rng.integers(64, 2049))
            ps = PhaseSum(
                N=N,
                c=float(rng.uniform(1.05, 1.6)),
                t=int(rng.integers(N // 2 + 1, N + 1)),
                theta=float(rng.random()),
                h=int(rng.integers(1, 20)) * (1 if rng.random() < 0.5 else -1),
                u=float(rng.random()),
            )
            if ps.interval().size > 1000:
                continue
            got = exp_sum_direct(ps)
            ref = mp_exp_sum(ps)
            assert abs(got - ref) <= 1e-9

    def test_trivial_modulus_bound(self, rng):
        for _ in range(10):
            N = int(rng.integers(64, 512))
            ps = PhaseSum(
                N=N, c=1.1, t=N, theta=float(rng.random()),
                h=int(rng.integers(1, N)), u=float(rng.random()),
            )
            assert abs(exp_sum_direct(ps)) <= ps.interval().size + 1e-9

    def test_interval_guard(self):
        ps = PhaseSum(N=1 << 26, c=1.1, t=1 << 26, h=1)
        with pytest.raises(ValueError):
            exp_sum_direct(ps)


class TestVdc:
    def test_bound_shape(self):
        assert vdc_bound(1.0, 1.0, 10) == pytest.approx(11.0)
        with pytest.raises(ValueError):
            vdc_bound(0.0, 1.0, 5)
        with pytest.raises(ValueError):
            vdc_bound(1.0, 0.5, 5)

    def test_quadratic_phase_family(self, rng):
        # F(k) = beta k^2 has F'' = 2 beta exactly; ratios stay uniformly small
        worst = 0.0
        for _ in range(60):
            beta = float(rng.uniform(1e-5, 0.3))
            M = int(rng.integers(16, 2048))
            n = np.arange(M, dtype=np.longdouble)
            ph = np.longdouble(beta) * n * n
            frac = (ph - np.floor(ph)).astype(np.float64)
            direct = abs(np.exp(2j * np.pi * frac).sum())
            bound = vdc_bound(2 * beta, 1.0, M)
            worst = max(worst, direct / bound)
        assert worst <= 10.0

    def test_large_lambda_bound_dominated_by_linear_term(self):
        lam, v, M = 100.0, 1.0, 50
        assert vdc_bound(lam, v, M) == pytest.approx(v * M * np.sqrt(lam), rel=1e-2)

    def test_single_point(self):
        # |I| = 1: modulus <= 1 <= bound whenever lam <= 1
        for lam in (0.01, 0.5, 1.0):
            assert vdc_bound(lam, 1.0, 1) >= 1.0

    def test_certify_with_sum(self):
        ps = PhaseSum(N=256, c=1.1, t=256, theta=0.1, h=3, u=0.2)
        lam_lo = 3 * (1 / 1.1) * (1 - 1 / 1.1) * 256.0 ** (1 / 1.1 - 2)
        out = vdc_certify(lam_lo, 4.0, ps=ps)
        assert out["ratio"] <= 10.0


class TestTwoFrequencyCases:
    def test_case1_ratio(self):
        ps = PhaseSum(N=1 << 14, c=1.1, t=1 << 14, theta=0.0, h=1, u=0.0)
        out = two_frequency_bound_check(1, ps)
        assert out["ratio"] <= 10.0

    def test_case1_violations(self):
        ps = PhaseSum(N=64, c=1.1, t=64, theta=0.0, h=128, u=0.0)
        with pytest.raises(ValueError, match="|h|"):
            two_frequency_bound_check(1, ps)

    def test_case2_ratio(self, rng):
        N = 1 << 12
        for _ in range(10):
            h1 = int(rng.integers(1, N))
            h2 = int(rng.integers(1, h1 + 1))
            ps = PhaseSum(
                N=N, c=1.1, t=N, theta=float(rng.random()),
                h1=h1, h2=-h2, u1=float(rng.random()), u2=float(rng.random()),
                x=int(rng.integers(1, N)), N0=float(rng.uniform(2, N)),
            )
            out = two_frequency_bound_check(2, ps)
            assert out["ratio"] <= 10.0

    def test_case2_requires_n0(self):
        ps = PhaseSum(N=256, c=1.1, t=256, h1=4, h2=2, x=10)
        with pytest.raises(ValueError, match="N0"):
            two_frequency_bound_check(2, ps)

    def test_case3_ratio_and_offdiagonal(self, rng):
        N = 1 << 12
        c = 1.1
        H = float(N) ** 0.9
        for _ in range(10):
            x = int(rng.integers(0, N // 8))
            h2 = int(rng.integers(1, 4))
            lo = int(np.ceil((1 + 100 * x / N) * h2))
            if lo > H:
                continue
            h1 = int(rng.integers(lo, int(H) + 1))
            ps = PhaseSum(
                N=N, c=c, t=N, theta=float(rng.random()),
                h1=h1, h2=-h2, u1=float(rng.random()), u2=float(rng.random()),
                x=x, H=H,
            )
            # the off-diagonal margin |h1 + h2| >= 100|x||h2|/N holds under
            # the precondition via the triangle inequality
            assert abs(ps.h1 + ps.h2) >= 100 * abs(x) * abs(h2) / N - 1e-9
            out = two_frequency_bound_check(3, ps)
            assert out["ratio"] <= 10.0

    def test_case3_h_range_violation(self):
        ps = PhaseSum(N=256, c=1.1, t=256, h1=1, h2=5, x=1, H=100.0)
        with pytest.raises(ValueError, match="h1"):
            two_frequency_bound_check(3, ps)

    def test_degenerate_interval(self):
        # t = N/2 + 1 gives a single summand; modulus <= 1 <= bound
        ps = PhaseSum(N=256, c=1.1, t=129, theta=0.3, h=1, u=0.5)
        out = two_frequency_bound_check(1, ps)
        assert out["direct"] <= 1.0 + 1e-12
        assert out["bound"] >= 1.0


class TestPsiExpand:
    def test_half_point(self):
        out = psi_expand(0.5, 100.0)
        assert out.psi == 0.0
        assert abs(out.truncated) < 1e-12
        assert out.tail_bound == pytest.approx(1 / 50)
        assert not out.one_sided

    def test_integer_one_sided(self):
        out = psi_expand(3.0, 50.0)
        assert out.one_sided
        assert out.psi == -0.5

    def test_sweep_bounded(self):
        # max |psi - truncated| / tail over a fine sweep stays modest
        ts = np.linspace(0.001, 0.999, 2001)
        for H in (100.0, 1000.0):
            worst = 0.0
            for t in ts:
                out = psi_expand(float(t), H)
                worst = max(worst, abs(out.psi - out.truncated) / out.tail_bound)
            assert worst <= 5.0

    def test_h_domain(self):
        with pytest.raises(ValueError):
            psi_expand(0.3, 1.0)


class TestPsiTailCoefficients:
    def test_decay_envelope(self):
        for H in (10.0, 100.0, 1000.0):
            b = psi_tail_coefficients(H, 2000)
            h = np.arange(1, 2001, dtype=np.float64)
            env = np.minimum(np.log(H) / H, H / h**2)
            assert np.all(np.abs(b[1:]) <= 3.0 * env)

    def test_partial_sum_reconstructs(self):
        # the Fourier series reproduces min{1, 1/(H||t||)} pointwise
        H = 50.0
        b = psi_tail_coefficients(H, 4000)
        for t in (0.003, 0.02, 0.25, 0.49):
            h = np.arange(1, 4001)
            val = b[0] + 2 * np.sum(b[1:] * np.cos(2 * np.pi * h * t))
            target = min(1.0, 1.0 / (H * abs(t - round(t))))
            assert val == pytest.approx(target, abs=0.02)


class TestMinSum:
    def test_ratio_bounded_small(self):
        for u in (0.0, 0.5):
            r = min_sum_check(1 << 12, u, 1.1)
            assert 0.0 < r.value / r.majorant < 10.0

    def test_h_to_infty_limit(self):
        # huge H collapses the sum to near the count of integral powers
        N = 1 << 10
        r = min_sum_check(N, 0.0, 1.1, delta=6.0)
        assert r.value < 2.0

    def test_domains(self):
        with pytest.raises(ValueError):
            min_sum_check(1 << 10, 0.0, 1.3)
        with pytest.raises(ValueError):
            min_sum_check(1 << 10, 1.2, 1.1)


class TestSigmaSplit:
    def test_exact_total_matches_direct_double_sum(self):
        # the three regions partition all pairs, so their sum equals the
        # full double sum of K/(h1 h2) computed directly
        N, c = 1 << 10, 1.1
        x = 600
        ss = sigma_split(N, x, c)
        assert ss.exact
        H = int(np.floor(ss.H))
        total = 0.0
        for a1 in range(1, H + 1):
            for a2 in range(1, a1 + 1):
                for s1 in (1, -1):
                    for s2 in (1, -1):
                        total += _pair_kernel(N, c, x, s1 * a1, s2 * a2) / (a1 * a2)
        assert ss.sigma1 + ss.sigma2 + ss.sigma3 == pytest.approx(total, rel=1e-9)

    def test_nonnegative_and_diagonal(self):
        ss = sigma_split(1 << 11, 1200, 1.1)
        assert ss.sigma1 >= 0 and ss.sigma2 >= 0 and ss.sigma3 >= 0
        assert ss.diagonal_max_ratio <= 10.0

    def test_exponent_ordering(self):
        # for c < 7/6 the stationary-window exponent undercuts the
        # counting exponent, which is what makes the balance close
        for c in (1.05, 1.1, 1.15):
            assert 1 - 1 / (3 * c) < 2 / c - 1
        assert not (1 - 1 / (3 * 1.2) < 2 / 1.2 - 1)

    def test_range_and_budget_errors(self):
        with pytest.raises(ValueError):
            sigma_split(1 << 10, 10, 1.1)
        with pytest.raises(ValueError, match="budget"):
            sigma_split(1 << 10, 600, 1.1, sample_budget=10)


class TestCountingFunction:
    def test_x_zero_and_diagonal(self):
        # counts index from x = 1 (strict m < n); the relaxed m <= n count at
        # x = 0 is the diagonal, which equals the index count when the floor
        # values are distinct
        from sparseavg.power_floor import floor_powers, pow_cmp

        N, c = 1 << 12, 1.1
        h = counting_function(N, c, method="fft")
        m_lo = 1
        while pow_cmp(m_lo, c, N / 2.0) <= 0:
            m_lo += 1
        n_hi = int(N ** (1 / c))
        vals = floor_powers(np.arange(m_lo, n_hi + 1), c)
        assert np.unique(vals).size == vals.size
        assert h.diagonal == vals.size

    def test_fft_equals_bruteforce(self):
        a = counting_function(1 << 12, 1.1, method="fft")
        b = counting_function(1 << 12, 1.1, method="bruteforce")
        assert a.diagonal == b.diagonal
        assert np.array_equal(a.counts, b.counts)

    def test_matches_pair_oracle(self):
        from sparseavg.power_floor import floor_powers
        from sparseavg.power_floor import pow_cmp

        N, c = 1 << 10, 1.1
        h = counting_function(N, c, method="fft")
        m_lo = 1
        while pow_cmp(m_lo, c, N / 2.0) <= 0:
            m_lo += 1
        n_hi = int(N ** (1 / c))
        vals = floor_powers(np.arange(m_lo, n_hi + 1), c)
        oracle = pair_difference_counts(vals)
        for x, cnt in oracle.items():
            assert h.counts[x - 1] == cnt
        assert h.counts.sum() == sum(oracle.values())

    def test_max_ratio_scale(self):
        c = 1.1
        r = []
        for k in (12, 14, 16):
            h = counting_function(1 << k, c, method="fft")
            r.append(h.max_count / (1 << k) ** (2 / c - 1))
        assert max(r) / min(r) < 4.0

    def test_caps(self):
        with pytest.raises(ValueError):
            counting_function(1 << 23, 1.1, method="fft")
        with pytest.raises(ValueError):
            counting_function(1 << 14, 1.1, method="bruteforce")


class TestGkMonotonicity:
    def test_increment_lower_bound(self):
        # g_k(n) = n^c - (n-k)^c has increments >= c' k N^{1-2/c} on the
        # admissible range
        N, c = 1 << 14, 1.1
        lo = int((N / 2) ** (1 / c)) + 1
        hi = int(N ** (1 / c))
        cprime = 0.5 * c * (c - 1)
        for k in (1, 2, 5, 20):
            n = np.arange(lo + k, hi, dtype=np.float64)
            g = n**c - (n - k) ** c
            inc = np.diff(g)
            assert np.all(inc >= cprime * k * N ** (1 - 2 / c))
