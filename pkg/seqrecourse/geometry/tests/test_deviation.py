import numpy as np
import pytest

from seqrecourse.exceptions import GeometryError
from seqrecourse.geometry.deviation import (
    cosine_alignment,
    deviation_bound,
    fast_path_ok,
    max_deviation_ok,
    segment_covered,
)


def test_straight_ahead_is_admissible():
    ok, check = max_deviation_ok([0.0, 0.0], [1.0, 0.0], [1.5, 0.0], 1.0)
    assert ok
    assert check.cos_angle == pytest.approx(1.0)
    assert check.bound == pytest.approx(1.0)


def test_sideways_step_rejected():
    ok, check = max_deviation_ok([0.0, 0.0], [1.0, 0.0], [0.5, 0.5], 1.0)
    assert not ok
    assert check.cos_angle == pytest.approx(np.sqrt(0.5))


def test_short_anchor_allows_wider_angle():
    # d = 0.2 eps, bound 0.6: a 45 degree step passes
    ok, _ = max_deviation_ok([0.0, 0.0], [0.2, 0.0], [0.5, 0.5], 1.0)
    assert ok


def test_overshoot_rejected():
    ok, check = max_deviation_ok([0.0, 0.0], [1.0, 0.0], [2.5, 0.0], 1.0)
    assert not ok
    assert check.step_length == pytest.approx(2.5)


def test_hypothesis_violation():
    with pytest.raises(GeometryError):
        max_deviation_ok([0.0, 0.0], [2.5, 0.0], [1.0, 0.0], 1.0)
    with pytest.raises(GeometryError):
        max_deviation_ok([0.0, 0.0], [1.0, 0.0], [0.0, 0.0], 1.0)


def test_cosine_alignment_edges():
    assert cosine_alignment([0.0, 0.0], [1.0, 2.0]) == 1.0
    assert cosine_alignment([1.0, 0.0], [-3.0, 0.0]) == -1.0
    assert deviation_bound(2.0, 1.0) == 1.5


def test_fast_path():
    assert fast_path_ok([0.0], [2.0], [2.5], 1.0)
    assert not fast_path_ok([0.0], [2.2], [2.5], 1.0)
    assert not fast_path_ok([0.0], [1.0], [2.5], 1.0)


@pytest.mark.parametrize('dim', [2, 3, 5])
def test_admissible_segments_stay_covered(dim):
    rng = np.random.default_rng(dim)
    epsilon = 0.8
    admitted = 0
    for _ in range(600):
        x1 = rng.normal(size=dim)
        direction = rng.normal(size=dim)
        direction /= np.linalg.norm(direction)
        d = rng.uniform(0.01, 1.0) * epsilon
        x2 = x1 + d * direction
        # perturb around the anchor direction so both outcomes show up
        step_dir = direction + rng.normal(scale=0.6, size=dim)
        step_dir /= np.linalg.norm(step_dir)
        xt = x1 + rng.uniform(0.01, 1.0) * (d + epsilon) * step_dir
        ok, _ = max_deviation_ok(x1, x2, xt, epsilon)
        if ok:
            admitted += 1
            assert segment_covered(x1, x2, xt, epsilon)
    assert admitted > 50
