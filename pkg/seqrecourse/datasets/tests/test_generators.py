import numpy as np
import pytest

from seqrecourse.datasets.generators import add_group_column, feature_names, generate_blobs, generate_two_moons
from seqrecourse.exceptions import ConfigError


def test_two_moons_class_sizes():
    raw, labels = generate_two_moons(101, noise=0.0, seed=0)
    assert raw.shape == (101, 2)
    assert int(np.sum(labels == 0)) == 50
    assert int(np.sum(labels == 1)) == 51


def test_two_moons_noiseless_geometry():
    raw, labels = generate_two_moons(200, noise=0.0, seed=0)
    upper = raw[labels == 0]
    lower = raw[labels == 1] - np.array([1.0, 0.5])
    np.testing.assert_allclose(np.linalg.norm(upper, axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(lower, axis=1), 1.0, atol=1e-12)
    assert np.all(upper[:, 1] >= -1e-12)
    assert np.all(lower[:, 1] <= 1e-12)


def test_two_moons_seeded():
    a = generate_two_moons(50, seed=3)
    b = generate_two_moons(50, seed=3)
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])


@pytest.mark.parametrize('n, noise', [(1, 0.1), (10, -0.5)])
def test_two_moons_invalid(n, noise):
    with pytest.raises(ConfigError):
        generate_two_moons(n, noise=noise)


def test_blobs_shape_and_labels():
    raw, labels = generate_blobs(60, d=4, seed=1)
    assert raw.shape == (60, 4)
    assert set(labels.tolist()) == {0, 1}


def test_group_column():
    raw = np.zeros((30, 2))
    extended = add_group_column(raw, seed=2)
    assert extended.shape == (30, 3)
    assert set(np.unique(extended[:, 2]).tolist()) <= {0.0, 1.0}
    assert feature_names(3, group=True) == ['x0', 'x1', 'group']
