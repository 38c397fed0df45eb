import copy

import pytest

from seqrecourse.traces.verification import verify_trace


def failed_checks(doc):
    return {c['check'] for c in verify_trace(doc).failures}


def test_fresh_trace_passes(moons_trace):
    report = verify_trace(moons_trace)
    assert report.ok, report.failures
    names = {c['check'] for c in report.checks}
    assert {'reconstruction', 'path_weight', 'edge_gate', 'ledger_enhance_subset'} <= names


@pytest.fixture
def doc(moons_trace):
    return copy.deepcopy(moons_trace)


def test_tampered_step(doc):
    doc['recourse']['steps'][0][0] += 0.01
    assert {'reconstruction', 'steps_match_path'} <= failed_checks(doc)


def test_zero_step(doc):
    doc['recourse']['steps'].append([0.0, 0.0])
    assert 'non_zero_steps' in failed_checks(doc)


def test_low_final_score(doc):
    doc['path']['scores'][-1] = 0.1
    assert 'final_score' in failed_checks(doc)


def test_wrong_total_weight(doc):
    doc['path']['total_weight'] += 1.0
    assert 'path_weight' in failed_checks(doc)


def test_edge_below_density_gate(doc):
    u, v = doc['path']['vertices'][:2]
    for edge in doc['graph']['edges']:
        if (edge['source'], edge['target']) == (min(u, v), max(u, v)):
            edge['density_avg'] = doc['meta']['density_threshold']
            edge['density_min'] = doc['meta']['density_threshold']
    assert 'edge_gate' in failed_checks(doc)


def test_missing_path_edge(doc):
    u, v = doc['path']['vertices'][:2]
    doc['graph']['edges'] = [
        e for e in doc['graph']['edges'] if (e['source'], e['target']) != (min(u, v), max(u, v))
    ]
    assert 'path_edges' in failed_checks(doc)


def test_immutable_change_detected(doc):
    doc['meta']['features'][0]['constraint'] = {'kind': 'immutable', 'lower_delta': 0.0, 'upper_delta': 0.0}
    if any(s[0] != 0.0 for s in doc['recourse']['steps']):
        assert 'constraints' in failed_checks(doc)


def test_enhance_outside_exploit(doc):
    doc['privacy']['accessed_ids']['enhance'].append(-5)
    assert 'ledger_enhance_subset' in failed_checks(doc)


def test_fraction_mismatch(doc):
    doc['privacy']['total_fraction'] = 0.99
    assert 'ledger_fractions' in failed_checks(doc)


def test_failed_run_reports_status(doc):
    doc['meta']['status'] = 'failed'
    doc['meta']['failure'] = {'stage': 'explore', 'message': 'boom'}
    report = verify_trace(doc)
    assert not report.ok
    assert [c['check'] for c in report.checks] == ['status']
