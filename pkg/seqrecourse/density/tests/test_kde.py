import numpy as np
import pytest

from seqrecourse.density.kde import (
    DensityModel,
    density_quantile_threshold,
    kde_fit,
    line_average_density,
    line_coefficients,
    line_min_density,
    line_profile,
    scott_bandwidth,
)
from seqrecourse.exceptions import ConfigError, DimensionMismatchError


def naive_density(centers, h, x):
    n, d = centers.shape
    sq = np.sum((centers - x) ** 2, axis=1)
    return np.exp(-sq / (2 * h ** 2)).sum() / (n * h ** d * (2 * np.pi) ** (d / 2))


def test_scott_bandwidth():
    assert scott_bandwidth(100, 2) == pytest.approx(0.4642, abs=1e-4)


def test_auto_bandwidth_used():
    points = np.random.default_rng(0).normal(size=(100, 2))
    assert kde_fit(points).bandwidth == pytest.approx(scott_bandwidth(100, 2))
    assert kde_fit(points, bandwidth=0.3).bandwidth == 0.3


def test_matches_naive_sum():
    rng = np.random.default_rng(1)
    centers = rng.normal(size=(60, 3))
    model = DensityModel(centers, 0.7, chunk_size=7)
    queries = rng.normal(size=(1000, 3))
    expected = [naive_density(centers, 0.7, x) for x in queries]
    np.testing.assert_allclose(model.density_many(queries), expected, rtol=1e-12)
    assert model.density_at(queries[0]) == pytest.approx(expected[0], rel=1e-12)


def test_single_center_peak():
    model = DensityModel([[0.0]], 1.0)
    assert model.density_at([0.0]) == pytest.approx(1 / np.sqrt(2 * np.pi))


def test_invalid_inputs():
    with pytest.raises(ConfigError):
        DensityModel([[0.0, 0.0]], 0.0)
    with pytest.raises(ConfigError):
        kde_fit([[0.0, 0.0]], bandwidth=-1)
    with pytest.raises(DimensionMismatchError):
        DensityModel([[0.0, 0.0]], 1.0).density_many([[0.0]])


class TestLineEstimators:
    def test_default_coefficients_q2(self):
        alpha, beta = line_coefficients(2)
        np.testing.assert_allclose(alpha, [1.0, 2 / 3, 1 / 3])
        np.testing.assert_allclose(beta, [0.0, 1 / 3, 2 / 3])

    def test_inclusive_coefficients_q2(self):
        alpha, beta = line_coefficients(2, endpoint_inclusive=True)
        np.testing.assert_allclose(alpha, [1.0, 0.5, 0.0])
        np.testing.assert_allclose(beta, [0.0, 0.5, 1.0])

    def test_q_below_two_rejected(self):
        with pytest.raises(ConfigError):
            line_coefficients(1)

    def test_average_by_hand(self, first_coordinate_density):
        a, b = [0.0, 0.0], [1.0, 0.0]
        assert line_average_density(first_coordinate_density, a, b, 2) == pytest.approx(1 / 3)
        assert line_average_density(first_coordinate_density, a, b, 2, endpoint_inclusive=True) == pytest.approx(0.5)
        assert line_min_density(first_coordinate_density, b, a, 2, endpoint_inclusive=True) == 0.0

    def test_constant_density(self, constant_density):
        model = constant_density(0.25)
        assert line_average_density(model, [0.0, 0.0], [3.0, 4.0], 16) == pytest.approx(0.25)

    def test_zero_length_line_is_point_density(self, first_coordinate_density):
        assert line_average_density(first_coordinate_density, [0.7, 1.0], [0.7, 1.0], 8) == pytest.approx(0.7)

    def test_profile_broadcasts_one_end(self, first_coordinate_density):
        ends = np.array([[1.0, 0.0], [2.0, 0.0], [0.0, 0.0]])
        profile = line_profile(first_coordinate_density, [0.0, 0.0], ends, 4, endpoint_inclusive=True)
        assert profile.shape == (3, 5)
        np.testing.assert_allclose(profile[1], [0.0, 0.5, 1.0, 1.5, 2.0])
        np.testing.assert_allclose(profile[2], 0.0)

    def test_average_converges_with_q(self):
        rng = np.random.default_rng(2)
        model = kde_fit(rng.normal(size=(200, 2)))
        a, b = np.array([-1.0, 0.5]), np.array([1.5, -0.5])
        coarse = line_average_density(model, a, b, 128, endpoint_inclusive=True)
        fine = line_average_density(model, a, b, 4096, endpoint_inclusive=True)
        assert coarse == pytest.approx(fine, rel=1e-2)


class TestQuantileThreshold:
    def test_median_of_four(self, first_coordinate_density):
        points = [[1.0], [2.0], [3.0], [4.0]]
        assert density_quantile_threshold(first_coordinate_density, points, 0.5) == pytest.approx(2.5)

    @pytest.mark.parametrize('quantile', [0.0, 1.0, -0.1])
    def test_open_interval(self, first_coordinate_density, quantile):
        with pytest.raises(ConfigError):
            density_quantile_threshold(first_coordinate_density, [[1.0]], quantile)
