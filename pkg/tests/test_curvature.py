import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellipsoid_measures.core import DomainError, unit_ball_volume, unit_sphere_area
from ellipsoid_measures.curvature import (
    CurvatureQuery,
    curvature_bounds,
    haar_frames,
    haar_subspace_sample,
    kubota_mc,
    mk_ball,
    mk_flat_ball,
    mk_ratio,
)
from ellipsoid_measures.sphere import MonteCarloConfig, substream
from ellipsoid_measures.surface import surface_area

OMEGA5 = unit_sphere_area(5)


def within(est, target, sigmas=3.0):
    # rounding floor for estimators whose variance is zero in exact arithmetic
    return abs(est.value - target) <= sigmas * est.std_error + 1e-12 * abs(target)


def cfg(samples=100_000, seed=0):
    return MonteCarloConfig(samples=samples, master_seed=seed, chunk_size=16384)


class TestClosedForms:
    @pytest.mark.parametrize("n, k, R, expected", [
        (3, 0, 1.0, 4 * math.pi),
        (4, 1, 1.0, 2 * math.pi ** 2),
        (6, 2, 2.0, OMEGA5 * 8),
    ])
    def test_mk_ball(self, n, k, R, expected):
        assert mk_ball(n, k, R) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("n, k, expected", [(3, 1, 2 * math.pi), (4, 1, 2 * math.pi ** 2 / 3)])
    def test_mk_flat_ball(self, n, k, expected):
        assert mk_flat_ball(n, k) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("n", range(2, 15))
    def test_flat_ball_k0_is_two_sided_disk(self, n):
        assert mk_flat_ball(n, 0) == pytest.approx(2 * unit_ball_volume(n - 1), rel=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            mk_ball(1, 0)
        with pytest.raises(DomainError):
            mk_ball(4, 4)
        with pytest.raises(DomainError):
            mk_ball(4, 1, 0.0)
        with pytest.raises(DomainError):
            mk_flat_ball(4, 3)


class TestRatio:
    def test_direct_example(self):
        r = mk_ratio(4, 2, "direct")
        assert r.value == pytest.approx(3 * math.pi / 4, rel=1e-14)

    def test_direct_closed_form_grid(self):
        for n in range(2, 31):
            for k in range(n - 1):
                r = mk_ratio(n, k, "direct")
                assert r.deviation <= 1e-10, (n, k)

    def test_paper_closed_form(self):
        r = mk_ratio(4, 2, "paper_closed_form")
        assert r.value == pytest.approx(1.5 * math.pi ** 2, rel=1e-14)
        assert r.deviation_factor == pytest.approx(2 * math.pi, rel=1e-13)

    @pytest.mark.parametrize("n, k", [(4, 1), (4, 3), (5, 4), (3, 0)])
    def test_paper_closed_form_range(self, n, k):
        with pytest.raises(DomainError):
            mk_ratio(n, k, "paper_closed_form")

    def test_normalized_closed_form(self):
        for n in range(3, 60):
            for k in range(n - 1):
                r = mk_ratio(n, k, "normalized")
                assert r.deviation <= 1e-10, (n, k)
                assert r.value == pytest.approx(mk_ratio(n, k).value / math.sqrt(math.comb(n, k + 1)), rel=1e-12)

    def test_normalized_printed_rhs_is_smooth(self):
        # direct / printed varies smoothly in (n, k): no sign flips, bounded steps
        f = np.array([[1 / mk_ratio(n, k, "normalized").details["printed_deviation_factor"]
                       for k in range(2, 8)] for n in range(10, 20)])
        assert np.all(f > 0)
        assert np.max(np.abs(np.diff(np.log(f), axis=0))) < 0.1
        assert np.max(np.abs(np.diff(np.log(f), axis=1))) < 0.5

    @pytest.mark.parametrize("n", [4, 10, 100, 1000])
    def test_asymptotic_peak(self, n):
        r = mk_ratio(n, n // 2, "asymptotic")
        assert r.value == pytest.approx(((n + 2) / 8) ** 0.25, rel=1e-14)
        assert r.details["B_nk"] == pytest.approx(math.pi ** 1.25 * r.value, rel=1e-14)

    def test_asymptotic_corrected_law(self):
        for n in (1000, 10000, 100000):
            for k in (n // 4, n // 2):
                r = mk_ratio(n, k, "asymptotic")
                assert abs(r.details["B_nk_corrected"] / r.oracle_value - 1) <= 2 / n
                assert r.deviation_factor == pytest.approx(math.pi ** -0.25, rel=2e-3)

    def test_peak_at_half(self):
        n = 40
        vals = [mk_ratio(n, k, "normalized").value for k in range(n - 1)]
        assert abs(int(np.argmax(vals)) - n / 2) <= 1

    def test_unknown_mode(self):
        with pytest.raises(DomainError):
            mk_ratio(5, 1, "bogus")


class TestBounds:
    @pytest.mark.parametrize("n, k, R", [(4, 1, 1.0), (6, 2, 2.5), (9, 0, 0.7)])
    def test_ball_equality(self, n, k, R):
        b = curvature_bounds(CurvatureQuery([R] * n, k))
        assert b.upper == pytest.approx(mk_ball(n, k, R), rel=1e-9)
        assert b.lower <= b.upper

    @pytest.mark.parametrize("n, k", [(4, 1), (5, 2), (6, 1), (6, 3), (8, 2)])
    def test_flat_ball_equality(self, n, k):
        a = [1.0] * (n - k - 1) + [0.0] * (k + 1)
        b = curvature_bounds(CurvatureQuery(a, k))
        assert b.amplitude == pytest.approx(1.0, rel=1e-12)
        assert b.lower == pytest.approx(mk_flat_ball(n, k), rel=1e-9)

    @given(st.lists(st.floats(0.1, 5.0), min_size=3, max_size=9), st.floats(0.1, 10.0), st.data())
    def test_linear_in_amplitude(self, a, lam, data):
        k = data.draw(st.integers(0, len(a) - 2))
        m = len(a) - k - 1
        b1 = curvature_bounds(CurvatureQuery(a, k))
        b2 = curvature_bounds(CurvatureQuery([lam * x for x in a], k))
        assert b1.lower <= b1.upper * (1 + 1e-12)
        assert b2.amplitude == pytest.approx(lam ** m * b1.amplitude, rel=1e-10)
        assert b2.upper / b2.lower == pytest.approx(b1.upper / b1.lower, rel=1e-10)

    def test_query_validation(self):
        with pytest.raises(DomainError):
            CurvatureQuery([1.0, 1.0, 1.0], 2)
        with pytest.raises(DomainError):
            CurvatureQuery([1.0, -1.0, 1.0], 0)


class TestKubota:
    def test_ball_n4(self):
        assert within(kubota_mc(CurvatureQuery([1.0] * 4, 1), cfg()), 2 * math.pi ** 2)

    def test_balls_all_orders(self):
        for n in range(2, 9):
            for k in range(n - 1):
                est = kubota_mc(CurvatureQuery([1.3] * n, k), cfg(5_000, seed=n))
                assert within(est, mk_ball(n, k, 1.3)), (n, k)

    def test_ball_radius_two(self):
        assert within(kubota_mc(CurvatureQuery([2.0] * 6, 2), cfg()), OMEGA5 * 8)

    @pytest.mark.parametrize("n, k", [(4, 1), (6, 3), (5, 1)])
    def test_flat_ball(self, n, k):
        a = [1.0] * (n - k - 1) + [0.0] * (k + 1)
        est = kubota_mc(CurvatureQuery(a, k), cfg(seed=k))
        assert within(est, mk_flat_ball(n, k))

    def test_surface_area(self):
        est = kubota_mc(CurvatureQuery([3.0, 2.0, 1.0], 0), cfg())
        assert within(est, surface_area([3.0, 2.0, 1.0]).value, 4.0)

    def test_homogeneity(self):
        a = [1.0, 2.0, 0.5, 1.5, 0.8]
        for k in range(3):
            base = kubota_mc(CurvatureQuery(a, k), cfg(20_000, seed=4))
            scaled = kubota_mc(CurvatureQuery([2.0 * x for x in a], k), cfg(20_000, seed=4))
            assert scaled.value / base.value == pytest.approx(2.0 ** (4 - k), rel=1e-12)

    def test_containment(self):
        a = np.random.default_rng(8).uniform(0.5, 2.0, 6)
        q = CurvatureQuery(a, 1)
        b = curvature_bounds(q)
        est = kubota_mc(q, cfg())
        assert b.lower - 3 * est.std_error <= est.value <= b.upper + 3 * est.std_error

    def test_workers_deterministic(self):
        q = CurvatureQuery([1.0, 2.0, 0.5, 1.5], 1)
        one = kubota_mc(q, MonteCarloConfig(samples=50_000, master_seed=3, chunk_size=4096))
        many = kubota_mc(q, MonteCarloConfig(samples=50_000, master_seed=3, chunk_size=4096, workers=8))
        assert one == many


class TestHaar:
    def test_orthonormal(self):
        f = haar_frames(7, 3, substream(0, 0), 200)
        g = np.einsum("nik,nil->nkl", f, f)
        assert np.max(np.abs(g - np.eye(3))) <= 1e-12
        b = haar_subspace_sample(5, 2, substream(0, 0))
        assert b.sub_dim == 2

    def test_same_seed_same_frame(self):
        a = haar_subspace_sample(6, 2, substream(5, 1)).columns
        b = haar_subspace_sample(6, 2, substream(5, 1)).columns
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("n", [2, 5, 9])
    def test_beta_moments(self, n):
        f = haar_frames(n, 1, substream(n, 0), 100_000)
        x = f[:, 0, 0] ** 2  # Beta(1/2, (n-1)/2)
        se = x.std() / math.sqrt(x.size)
        assert abs(x.mean() - 1 / n) <= 3 * se
        x2 = x * x
        assert abs(x2.mean() - 3 / (n * (n + 2))) <= 3 * x2.std() / math.sqrt(x.size)

    def test_domain(self):
        with pytest.raises(DomainError):
            haar_frames(3, 4, substream(0, 0), 1)
