import math

import numpy as np
import pytest
from scipy import integrate

from ellipsoid_measures.core import DomainError
from ellipsoid_measures.sphere import (
    MonteCarloConfig,
    chunked_mean,
    gaussian_abs_moment,
    lp_sphere_mean,
    sample_gaussian_vector,
    sphere_mean_homogeneous,
    substream,
)


def _within(est, target, sigmas=4.0):
    return abs(est.value - target) <= sigmas * est.std_error + 1e-12 * abs(target)


class TestGaussianSampling:
    def test_moments(self):
        x = sample_gaussian_vector(1, substream(3, 0), 1_000_000)[:, 0]
        assert abs(x.mean()) <= 3 * math.sqrt(0.5 / x.size)
        x2 = x * x
        assert abs(x2.mean() - 0.5) <= 3 * x2.std() / math.sqrt(x.size)

    def test_shape(self):
        assert sample_gaussian_vector(4, substream(0, 0)).shape == (4,)
        assert sample_gaussian_vector(4, substream(0, 0), 7).shape == (7, 4)

    def test_stream_reproducible(self):
        a = sample_gaussian_vector(3, substream(11, 5), 10)
        b = sample_gaussian_vector(3, substream(11, 5), 10)
        c = sample_gaussian_vector(3, substream(11, 6), 10)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_bad_dimension(self):
        with pytest.raises(DomainError):
            sample_gaussian_vector(0, substream(0, 0))


class TestSphereMean:
    @pytest.mark.parametrize("mode", ["gaussian", "direct"])
    def test_constant(self, mode):
        est = sphere_mean_homogeneous(lambda x: np.ones(len(x)), 0.0, 5,
                                      MonteCarloConfig(samples=10_000), mode)
        assert est.value == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("mode", ["gaussian", "direct"])
    def test_abs_coordinate(self, mode):
        est = sphere_mean_homogeneous(lambda x: np.abs(x[:, 0]), 1.0, 3,
                                      MonteCarloConfig(samples=400_000, master_seed=2), mode)
        assert _within(est, 0.5)

    def test_squared_norm(self):
        f = lambda x: np.sum(x * x, axis=1)
        g = sphere_mean_homogeneous(f, 2.0, 6, MonteCarloConfig(samples=200_000))
        assert _within(g, 1.0)
        d = sphere_mean_homogeneous(f, 2.0, 6, MonteCarloConfig(samples=1000), "direct")
        assert d.value == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("d", [1, 2, 3])
    @pytest.mark.parametrize("which", ["coord", "l3"])
    def test_gaussian_direct_consistency(self, d, which):
        n = 4
        if which == "coord":
            f = lambda x: np.abs(x[:, 0]) ** d
        else:
            f = lambda x: np.linalg.norm(x, ord=3, axis=1) ** d
        g = sphere_mean_homogeneous(f, d, n, MonteCarloConfig(samples=1_000_000, master_seed=1))
        s = sphere_mean_homogeneous(f, d, n, MonteCarloConfig(samples=1_000_000, master_seed=2), "direct")
        assert abs(g.value - s.value) <= 4 * math.hypot(g.std_error, s.std_error)

    def test_error_scaling(self):
        f = lambda x: np.abs(x[:, 0])
        e1 = sphere_mean_homogeneous(f, 1.0, 3, MonteCarloConfig(samples=50_000))
        e4 = sphere_mean_homogeneous(f, 1.0, 3, MonteCarloConfig(samples=200_000))
        assert 2 / 1.5 <= e1.std_error / e4.std_error <= 2 * 1.5

    def test_domain(self):
        with pytest.raises(DomainError):
            sphere_mean_homogeneous(lambda x: x[:, 0], -3.0, 3)
        with pytest.raises(DomainError):
            sphere_mean_homogeneous(lambda x: x[:, 0], 1.0, 3, mode="bogus")


class TestDeterminism:
    def test_repeat_bit_identical(self):
        cfg = MonteCarloConfig(samples=100_003, master_seed=42, chunk_size=4096)
        f = lambda x: np.abs(x[:, 1])
        assert sphere_mean_homogeneous(f, 1.0, 3, cfg) == sphere_mean_homogeneous(f, 1.0, 3, cfg)

    def test_worker_count_irrelevant(self):
        f = lambda x: np.linalg.norm(x, ord=1, axis=1)
        base = dict(samples=300_001, master_seed=7, chunk_size=8192)
        one = sphere_mean_homogeneous(f, 1.0, 5, MonteCarloConfig(**base, workers=1))
        eight = sphere_mean_homogeneous(f, 1.0, 5, MonteCarloConfig(**base, workers=8))
        assert one.value == eight.value
        assert one.std_error == eight.std_error

    def test_sample_accounting(self):
        cfg = MonteCarloConfig(samples=10_001, chunk_size=1000)
        mean, se, count = chunked_mean(lambda s, m: s.random(m), cfg)
        assert count == 10_001
        assert abs(mean - 0.5) <= 4 * se

    def test_config_validation(self):
        with pytest.raises(ValueError):
            MonteCarloConfig(samples=1)
        with pytest.raises(ValueError):
            MonteCarloConfig(chunk_size=0)


class TestMoments:
    @pytest.mark.parametrize("p, expected", [(0, 1.0), (1, 1 / math.sqrt(math.pi)), (2, 0.5)])
    def test_abs_moment(self, p, expected):
        assert gaussian_abs_moment(p) == pytest.approx(expected, rel=1e-14)

    def test_abs_moment_domain(self):
        with pytest.raises(DomainError):
            gaussian_abs_moment(-1.0)

    def test_l2_norm_is_one(self):
        est = lp_sphere_mean(7, 2.0, MonteCarloConfig(samples=200_000))
        assert _within(est, 1.0)

    def test_l2_asymptotic(self):
        assert lp_sphere_mean(200, 2.0, mode="asymptotic").value == pytest.approx(1.0, rel=5e-3)

    def test_l1_circle(self):
        ref, _ = integrate.quad(lambda t: abs(math.cos(t)) + abs(math.sin(t)), 0, 2 * math.pi,
                                points=[math.pi / 2, math.pi, 3 * math.pi / 2])
        ref /= 2 * math.pi
        est = lp_sphere_mean(2, 1.0, MonteCarloConfig(samples=500_000, master_seed=9))
        assert _within(est, ref)

    def test_l1_asymptotic_approaches_mc(self):
        est = lp_sphere_mean(400, 1.0, MonteCarloConfig(samples=20_000))
        asym = lp_sphere_mean(400, 1.0, mode="asymptotic").value
        assert asym == pytest.approx(est.value, rel=5e-3)
