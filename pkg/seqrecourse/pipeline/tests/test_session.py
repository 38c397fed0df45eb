import time

import numpy as np
import pytest

from seqrecourse.core.config import ExplainerConfig
from seqrecourse.core.preprocessing import apply_standardization, build_dataset
from seqrecourse.core.types import Instance
from seqrecourse.datasets.generators import add_group_column, generate_two_moons
from seqrecourse.exceptions import (
    DimensionMismatchError,
    ExploreError,
    NoPathError,
    RecourseError,
    SeqRecourseError,
)
from seqrecourse.models.reference import fit_reference_model
from seqrecourse.pipeline import RecourseExplainer, explain
from seqrecourse.stages.exploit import EdgeWeightRule, evaluate_edges


def first_successes(explainer, rows, wanted=1, limit=20):
    """Explain rows in order until `wanted` runs succeed."""
    found = []
    for row in rows[:limit]:
        try:
            found.append(explainer.explain(explainer.dataset.instance(row)))
        except RecourseError:
            continue
        if len(found) == wanted:
            break
    return found


def assert_postconditions(explainer, result):
    config = explainer.config
    assert result.k >= 1
    np.testing.assert_allclose(result.recourse.reconstruct(), result.counterfactual.values, atol=1e-9)
    assert np.all(np.any(result.recourse.steps != 0.0, axis=1))
    assert explainer.model.score(result.counterfactual) >= config.decision_threshold
    assert len(result.path_scores) == result.k + 1
    assert len(result.path_densities) == result.k
    assert result.path[0] == 0 and result.path[-1] == result.graph.number_of_vertices - 1
    for u, v in zip(result.path[:-1], result.path[1:]):
        data = result.graph.graph.edges[u, v]
        assert data['weight'] > 0
        assert data['density_avg'] > result.density_threshold

    ledger = result.ledger
    assert ledger.sealed
    assert ledger.accessed['enhance'] <= ledger.accessed['exploit']
    assert result.graph.training_ids() <= ledger.accessed['exploit']
    cumulative = list(ledger.cumulative_fractions().values())
    assert cumulative == sorted(cumulative)
    assert cumulative[-1] == ledger.fraction() < 1.0


def test_postconditions(moons_explainer, moons_result):
    assert_postconditions(moons_explainer, moons_result)


def test_path_scores_start_below_and_end_above(moons_explainer, moons_result):
    T_f = moons_explainer.config.decision_threshold
    assert moons_result.path_scores[0] < T_f <= moons_result.path_scores[-1]


def test_deterministic(moons_explainer, moons_result):
    again = moons_explainer.explain(moons_result.factual)
    np.testing.assert_array_equal(again.recourse.steps, moons_result.recourse.steps)
    assert again.path_weight == moons_result.path_weight
    assert again.ledger.accessed == moons_result.ledger.accessed


def test_supplied_counterfactual_skips_explore(moons_explainer, moons_result):
    result = moons_explainer.explain(moons_result.factual, counterfactual=moons_result.counterfactual)
    assert result.explore_trace is None
    assert result.ledger.accessed['explore'] == set()
    np.testing.assert_array_equal(result.recourse.steps, moons_result.recourse.steps)


def test_supplied_counterfactual_must_score_high(moons_explainer, moons_dataset, negative_rows):
    factual = moons_dataset.instance(negative_rows[0])
    with pytest.raises(ExploreError):
        moons_explainer.explain(factual, counterfactual=moons_dataset.instance(negative_rows[1]))


def test_already_positive_factual(moons_explainer, moons_dataset):
    scores = moons_explainer.model.score_many(moons_dataset.points)
    row = int(np.argmax(scores))
    result = moons_explainer.explain(moons_dataset.instance(row))
    assert result.k == 0
    assert result.path == [0]
    assert result.ledger.fraction() == 0.0
    np.testing.assert_array_equal(result.counterfactual.values, result.factual.values)


def test_deep_class_one_point_scores_high(moons_explainer, moons_dataset):
    deep_point = apply_standardization([[1.0, -0.5]], moons_dataset.schema)[0]
    assert moons_explainer.model.score(deep_point) >= moons_explainer.config.decision_threshold


def test_session_is_single_use(moons_explainer, moons_dataset):
    session = moons_explainer.session()
    x = moons_dataset.instance(0)
    try:
        explain(x, session)
    except RecourseError:
        pass
    with pytest.raises(SeqRecourseError):
        explain(x, session)


def test_dimension_checked(moons_explainer):
    with pytest.raises(DimensionMismatchError):
        moons_explainer.explain(Instance([0.0, 0.0, 0.0]))


def test_failure_carries_partial_trace(moons_dataset, moons_model, negative_rows):
    config = ExplainerConfig(tp_abs=1e6, tp_quantile_ladder=(), max_exploit_iters=3)
    explainer = RecourseExplainer(moons_dataset, moons_model, config)
    seen_exploit = 0
    for row in negative_rows[:10]:
        with pytest.raises(RecourseError) as info:
            explainer.explain(moons_dataset.instance(row))
        if info.value.stage == 'exploit':
            assert isinstance(info.value, NoPathError)
            assert info.value.partial['trace'] is not None
            assert info.value.partial['graph'].number_of_edges == 0
            seen_exploit += 1
    assert seen_exploit > 0


def test_relaxed_threshold_retry(moons_dataset, moons_model, negative_rows):
    config = ExplainerConfig(tp_abs=1e6, tp_quantile_ladder=(0.01,), max_exploit_iters=100)
    explainer = RecourseExplainer(moons_dataset, moons_model, config)
    assert explainer.relaxed_threshold(1e6) == pytest.approx(explainer.quantile_threshold(0.01))
    assert explainer.relaxed_threshold(explainer.quantile_threshold(0.01)) is None
    found = first_successes(explainer, negative_rows, limit=10)
    assert found
    assert found[0].retried
    assert found[0].density_threshold == pytest.approx(explainer.quantile_threshold(0.01))


def test_reverse_direction(moons_dataset, moons_model):
    explainer = RecourseExplainer(moons_dataset, moons_model, ExplainerConfig(target_class=0))
    base = moons_model.score_many(moons_dataset.points)
    rows = [int(r) for r in np.flatnonzero(base >= 0.75)]
    found = first_successes(explainer, rows)
    assert found
    assert moons_model.score(found[0].counterfactual) <= 0.25 + 1e-12
    assert_postconditions(explainer, found[0])


def test_constrained_features_respected():
    raw, labels = generate_two_moons(600, noise=0.15, seed=4)
    dataset = build_dataset(add_group_column(raw, seed=4), labels, ['x0', 'x1', 'group'])
    dataset = dataset.with_schema(
        dataset.schema.with_constraints(immutable=['group'], bounded={'x1': (-1.5, 1.5)})
    )
    lower, upper = -1.5 / dataset.schema.features[1].std_dev, 1.5 / dataset.schema.features[1].std_dev
    model = fit_reference_model(dataset, kind='rbf_logistic', seed=0)
    explainer = RecourseExplainer(dataset, model)
    scores = model.score_many(dataset.points)
    rows = [int(r) for r in np.random.default_rng(5).permutation(np.flatnonzero(scores < 0.75))]
    found = first_successes(explainer, rows, wanted=20, limit=60)
    assert len(found) == 20
    for result in found:
        group = result.factual.values[2]
        assert np.all(result.recourse.steps[:, 2] == 0.0)
        for i in result.path:
            values = result.graph.vertices[i].values
            assert values[2] == group
            delta = values[1] - result.factual.values[1]
            assert lower - 1e-9 <= delta <= upper + 1e-9
        for position in result.explore_trace.positions:
            assert position[2] == group


def test_explain_many_keeps_order(moons_explainer, moons_dataset, negative_rows):
    factuals = [moons_dataset.instance(r) for r in negative_rows[:4]]
    sequential = moons_explainer.explain_many(factuals, workers=1, progress=False)
    threaded = moons_explainer.explain_many(factuals, workers=2, progress=False)
    assert len(sequential) == len(threaded) == 4
    for a, b, f in zip(sequential, threaded, factuals):
        assert type(a) is type(b)
        if isinstance(a, RecourseError):
            assert a.stage == b.stage
        else:
            assert a.factual.id == f.id
            np.testing.assert_array_equal(a.recourse.steps, b.recourse.steps)


@pytest.mark.slow
def test_two_moons_acceptance(moons_explainer, moons_dataset, negative_rows, record_property):
    k = moons_explainer.config.k_neighbors
    exploit_fractions = []
    for row in negative_rows[:50]:
        started = time.perf_counter()
        result = moons_explainer.explain(moons_dataset.instance(row))
        elapsed = time.perf_counter() - started
        assert elapsed < 1.0, f"row {row} took {elapsed:.2f}s"
        assert_postconditions(moons_explainer, result)
        # one k-NN query per explore step
        assert len(result.ledger.accessed['explore']) <= k * result.explore_trace.iterations
        assert result.ledger.fraction() < 0.25
        exploit_fractions.append(result.ledger.fraction('exploit'))
    assert len(exploit_fractions) == 50
    assert max(exploit_fractions) < 1.0
    record_property('exploit_fraction_mean', float(np.mean(exploit_fractions)))
    record_property('exploit_fraction_max', float(max(exploit_fractions)))


def test_strict_edges_subset_of_average(moons_dataset, moons_model, negative_rows):
    strict = RecourseExplainer(moons_dataset, moons_model, ExplainerConfig(weight_mode='strict'))
    config = strict.config
    graphs = 0
    for row in negative_rows[:20]:
        try:
            result = strict.explain(moons_dataset.instance(row))
            graph, threshold = result.graph, result.density_threshold
        except RecourseError as e:
            if 'graph' not in e.partial:
                continue
            graph, threshold = e.partial['graph'], e.partial['threshold']
        graphs += 1
        points = np.vstack([v.values for v in graph.vertices])
        i, j = np.triu_indices(len(points), k=1)
        masks = {}
        for mode in ('strict', 'average'):
            rule = EdgeWeightRule(mode, threshold, config.line_samples, config.endpoint_inclusive)
            weights, _, _ = evaluate_edges(points[i], points[j], rule, strict.density)
            masks[mode] = ~np.isnan(weights)
        assert not np.any(masks['strict'] & ~masks['average'])
        for u, v, _ in graph.edges():
            assert graph.graph.edges[u, v]['density_avg'] > threshold
    assert graphs >= 10
