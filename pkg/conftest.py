"""
Shared fixtures: two-moons data, fitted models, explainers and density mocks.
"""
import logging

import numpy as np
import pytest

from seqrecourse.core.preprocessing import build_dataset
from seqrecourse.datasets.generators import generate_two_moons
from seqrecourse.models.reference import fit_reference_model


class ConstantDensity:
    """Density model stand-in with f_p == value everywhere."""

    def __init__(self, value: float, d: int = 2):
        self.value = float(value)
        self.d = d

    def density_many(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.full(X.shape[0], self.value)

    def density_at(self, x):
        return self.value


class FirstCoordinateDensity:
    """f_p(x) = x[0], handy for hand-computed quantiles and line averages."""

    def density_many(self, X):
        return np.atleast_2d(np.asarray(X, dtype=float))[:, 0].copy()


@pytest.fixture
def constant_density():
    return ConstantDensity


@pytest.fixture
def first_coordinate_density():
    return FirstCoordinateDensity()


@pytest.fixture(scope='session')
def moons_dataset():
    raw, labels = generate_two_moons(1000, noise=0.15, seed=0)
    return build_dataset(raw, labels, ['x0', 'x1'])


@pytest.fixture(scope='session')
def moons_model(moons_dataset):
    return fit_reference_model(moons_dataset, kind='rbf_logistic', seed=0)


@pytest.fixture(scope='session')
def small_moons_dataset():
    raw, labels = generate_two_moons(300, noise=0.1, seed=1)
    return build_dataset(raw, labels, ['x0', 'x1'])


@pytest.fixture(scope='session')
def small_moons_model(small_moons_dataset):
    return fit_reference_model(small_moons_dataset, kind='rbf_logistic', seed=0)


@pytest.fixture(scope='session')
def moons_explainer(moons_dataset, moons_model):
    from seqrecourse.pipeline.session import RecourseExplainer
    return RecourseExplainer(moons_dataset, moons_model)


@pytest.fixture(scope='session')
def negative_rows(moons_dataset, moons_explainer):
    """Rows the model scores below T_f, in a fixed random order."""
    scores = moons_explainer.model.score_many(moons_dataset.points)
    rows = np.flatnonzero(scores < moons_explainer.config.decision_threshold)
    rng = np.random.default_rng(7)
    return [int(r) for r in rng.permutation(rows)]


@pytest.fixture
def package_caplog(caplog):
    """caplog that also sees the package logger after dictConfig turned propagation off."""
    pkg_logger = logging.getLogger('seqrecourse')
    pkg_logger.addHandler(caplog.handler)
    previous = pkg_logger.level
    pkg_logger.setLevel(logging.DEBUG)
    yield caplog
    pkg_logger.setLevel(previous)
    pkg_logger.removeHandler(caplog.handler)


@pytest.fixture(scope='session')
def moons_result(moons_explainer, moons_dataset, negative_rows):
    """The first of the shuffled negatives that explains successfully."""
    from seqrecourse.exceptions import RecourseError
    for row in negative_rows[:20]:
        try:
            return moons_explainer.explain(moons_dataset.instance(row))
        except RecourseError:
            continue
    pytest.fail('no factual among the first 20 negatives was explained')


@pytest.fixture(scope='session')
def moons_trace(moons_explainer, moons_result):
    from seqrecourse.traces.serializers import build_trace
    return build_trace(moons_explainer, moons_result)
