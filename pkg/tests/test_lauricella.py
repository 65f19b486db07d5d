import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellipsoid_measures.core import ConvergenceError, DomainError
from ellipsoid_measures.lauricella import (
    FdParams,
    fd_integral,
    fd_series,
    lauricella_fd,
    ratio_fd_corrected,
    ratio_fd_printed,
    ratio_via_fd,
)
from ellipsoid_measures.surface import ratio_norm


@st.composite
def fd_params(draw, max_n=5, max_x=0.5):
    n = draw(st.integers(1, max_n))
    a = draw(st.floats(0.1, 3.0))
    c = a + draw(st.floats(0.1, 3.0))
    b = draw(st.lists(st.floats(-1.5, 2.5), min_size=n, max_size=n))
    x = draw(st.lists(st.floats(-max_x, max_x), min_size=n, max_size=n))
    return FdParams(a, tuple(b), c, tuple(x))


class TestFdParams:
    @pytest.mark.parametrize("a, b, c, x", [
        (0.0, [1], 2, [0.1]),
        (1.0, [1], 1.0, [0.1]),
        (1.0, [1], 2, [1.0]),
        (1.0, [1, 2], 2, [0.1]),
    ])
    def test_invalid(self, a, b, c, x):
        with pytest.raises(DomainError):
            FdParams(a, tuple(b), c, tuple(x))


class TestSeriesAndIntegral:
    @pytest.mark.parametrize("method", ["series", "integral"])
    def test_origin(self, method):
        assert lauricella_fd(0.7, [1.2, -0.4, 2.0], 2.3, [0, 0, 0], method) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("method", ["series", "integral"])
    def test_log_reduction(self, method):
        assert lauricella_fd(1, [1], 2, [0.5], method) == pytest.approx(2 * math.log(2), rel=1e-12)

    @pytest.mark.parametrize("method", ["series", "integral"])
    def test_arcsin_reduction(self, method):
        t = 0.3
        assert lauricella_fd(0.5, [0.5], 1.5, [t * t], method) == pytest.approx(math.asin(t) / t, rel=1e-12)

    @given(st.floats(0.1, 3), st.floats(-2, 3), st.floats(0.1, 3), st.floats(-0.9, 0.9))
    def test_gauss_function(self, a, b, extra, x):
        ref = float(mp.hyp2f1(a, b, a + extra, x))
        assert fd_integral(FdParams(a, (b,), a + extra, (x,))) == pytest.approx(ref, rel=1e-9)

    @given(st.floats(0.1, 3), st.floats(-1, 2), st.floats(-1, 2), st.floats(0.1, 3),
           st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
    def test_appell_f1(self, a, b1, b2, extra, x1, x2):
        ref = float(mp.appellf1(a, b1, b2, a + extra, x1, x2))
        got = lauricella_fd(a, [b1, b2], a + extra, [x1, x2])
        assert got == pytest.approx(ref, rel=1e-8)

    @given(fd_params())
    def test_series_matches_integral(self, p):
        assert fd_series(p) == pytest.approx(fd_integral(p), rel=1e-8)

    @given(fd_params(max_x=0.95), st.randoms())
    def test_permutation(self, p, rnd):
        order = list(range(p.n))
        rnd.shuffle(order)
        q = FdParams(p.a, tuple(p.b[i] for i in order), p.c, tuple(p.x[i] for i in order))
        assert fd_integral(q) == pytest.approx(fd_integral(p), rel=1e-12)

    def test_monotone(self):
        grid = np.linspace(-0.9, 0.9, 19)
        vals = [lauricella_fd(0.5, [0.5, 1.5, 0.5], 2.5, [x, 0.3, -0.2]) for x in grid]
        assert np.all(np.diff(vals) >= 0)

    def test_series_refuses_slow_inputs(self):
        with pytest.raises(DomainError):
            fd_series(FdParams(0.5, (0.5,), 1.5, (0.96,)))

    def test_series_non_convergence(self):
        with pytest.raises(ConvergenceError):
            fd_series(FdParams(0.5, (0.5,), 1.5, (0.9,)), max_total_degree=5)

    def test_near_unit_argument(self):
        # integral route handles x close to 1
        ref = float(mp.hyp2f1(0.5, 0.5, 2.0, 0.999))
        assert lauricella_fd(0.5, [0.5], 2.0, [0.999]) == pytest.approx(ref, rel=1e-10)

    def test_unknown_method(self):
        with pytest.raises(DomainError):
            lauricella_fd(1, [1], 2, [0.1], "bogus")


class TestRatioViaFd:
    def test_printed_disk(self):
        r = ratio_via_fd([1.0, 1.0])
        assert r.value == pytest.approx(8 / math.pi, rel=1e-10)
        assert r.oracle_value == pytest.approx(2.0, rel=1e-12)
        assert r.deviation_factor == pytest.approx(4 / math.pi, rel=1e-10)
        assert r.details["corrected_deviation"] <= 1e-10

    @pytest.mark.parametrize("n", range(2, 11))
    def test_corrected_ball(self, n):
        assert ratio_fd_corrected(np.ones(n)) == pytest.approx(n, rel=1e-10)

    @pytest.mark.parametrize("n", range(2, 11))
    def test_corrected_random(self, n):
        q = np.random.default_rng(n).uniform(0.3, 1.3, n)
        alpha = 1.0 / q.max() ** 2
        assert ratio_fd_corrected(q, alpha) == pytest.approx(ratio_norm(q).ratio, rel=1e-8)

    def test_alpha_invariance(self):
        q = [1.0, 0.8, 0.6, 0.9, 0.3]
        vals = [ratio_fd_corrected(q, al) for al in (0.7, 1.0, 1.5, 1.9)]
        assert np.ptp(vals) <= 1e-10 * vals[0]
        printed = [ratio_fd_printed(q, al) for al in (0.7, 1.0, 1.9)]
        assert np.ptp(printed) > 1e-3

    def test_series_method(self):
        q = [1.0, 0.9, 0.95]
        r = ratio_via_fd(q, 1.0, "series")
        assert r.details["corrected_value"] == pytest.approx(ratio_norm(q).ratio, rel=1e-10)

    def test_admissibility(self):
        with pytest.raises(DomainError):
            ratio_via_fd([1.0, 2.0], 1.0)
        with pytest.raises(DomainError):
            ratio_via_fd([1.0, 0.0], 1.0)
        with pytest.raises(DomainError):
            ratio_via_fd([1.0], -1.0)

    def test_oracle_is_moment_integral(self):
        q = [0.5, 0.9, 1.2]
        r = ratio_via_fd(q, 0.8)
        assert r.oracle_value == ratio_norm(q).ratio
