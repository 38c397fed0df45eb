"""
Re-check a TraceDocument's invariants without the original dataset.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from ..core.types import BOUNDED, IMMUTABLE, STAGES

logger = logging.getLogger(__name__)

TOLERANCE = 1e-9


@dataclass
class VerificationReport:
    checks: List[Dict[str, Any]] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = '') -> None:
        self.checks.append({'check': name, 'ok': bool(ok), 'detail': detail})
        if not ok:
            logger.warning(f"verify: {name} failed: {detail}")

    @property
    def ok(self) -> bool:
        return all(c['ok'] for c in self.checks)

    @property
    def failures(self) -> List[Dict[str, Any]]:
        return [c for c in self.checks if not c['ok']]


def _close(a, b, rel: bool = False) -> bool:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        return False
    if rel:
        return bool(np.allclose(a, b, rtol=TOLERANCE, atol=TOLERANCE))
    return bool(np.all(np.abs(a - b) <= TOLERANCE))


def _check_recourse(doc, report: VerificationReport) -> None:
    rec = doc['recourse']
    origin = np.asarray(rec['origin'], dtype=float)
    steps = np.asarray(rec['steps'], dtype=float).reshape(-1, origin.shape[0])
    cf = np.asarray(rec['counterfactual'], dtype=float)
    report.add('reconstruction', _close(origin + steps.sum(axis=0), cf),
               'origin + sum(steps) must equal the counterfactual')
    report.add('non_zero_steps', not np.any(np.all(steps == 0.0, axis=1)), 'no all-zero step')

    stds = np.array([f['std_dev'] for f in doc['meta']['features']], dtype=float)
    means = np.array([f['mean'] for f in doc['meta']['features']], dtype=float)
    raw_steps = np.asarray(rec['steps_raw'], dtype=float).reshape(-1, origin.shape[0])
    report.add('raw_steps', _close(raw_steps, steps * stds, rel=True), 'raw steps = steps * std_dev')
    report.add('raw_endpoints',
               _close(rec['origin_raw'], origin * stds + means, rel=True)
               and _close(rec['counterfactual_raw'], cf * stds + means, rel=True),
               'raw origin / counterfactual = values * std_dev + mean')


def _check_path(doc, report: VerificationReport) -> None:
    meta, path, graph, rec = doc['meta'], doc['path'], doc['graph'], doc['recourse']
    vertices = path['vertices']
    scores = path['scores']
    report.add('lengths',
               len(scores) == len(vertices)
               and len(path['densities']) == max(len(vertices) - 1, 0)
               and rec['k'] == max(len(vertices) - 1, 0),
               'one score per path vertex, one density and one step per path edge')
    report.add('final_score', bool(scores) and scores[-1] >= meta['decision_threshold'],
               f"final score {scores[-1] if scores else None} vs T_f {meta['decision_threshold']}")

    values = {v['index']: np.asarray(v['values'], dtype=float) for v in graph['vertices']}
    report.add('path_endpoints',
               bool(vertices) and vertices[0] == 0 and vertices[-1] == len(graph['vertices']) - 1,
               'path runs from vertex 0 to the last vertex')
    if len(vertices) > 1:
        diffs = np.diff(np.vstack([values[i] for i in vertices]), axis=0)
        report.add('steps_match_path', _close(diffs, rec['steps']), 'steps are path vertex differences')

    edges = {(e['source'], e['target']): e for e in graph['edges']}
    total = 0.0
    missing = []
    gate_failures = []
    config = meta['config']
    tp = meta['density_threshold']
    for u, v in zip(vertices[:-1], vertices[1:]):
        edge = edges.get((min(u, v), max(u, v)))
        if edge is None or not edge['weight'] > 0:
            missing.append((u, v))
            continue
        total += edge['weight']
        gate = edge['density_min'] if config['weight_mode'] == 'strict' else edge['density_avg']
        if not gate > tp:
            gate_failures.append((u, v))
    report.add('path_edges', not missing, f"missing or non-positive edges: {missing}")
    report.add('path_weight', abs(total - path['total_weight']) <= TOLERANCE * max(1.0, abs(total)),
               f"sum of edge weights {total} vs recorded {path['total_weight']}")
    report.add('edge_gate', not gate_failures, f"edges failing the density gate: {gate_failures}")

    features = meta['features']
    origin = np.asarray(rec['origin'], dtype=float)
    violations = []
    for i in vertices:
        point = values[i]
        for j, feat in enumerate(features):
            c = feat['constraint']
            delta = point[j] - origin[j]
            if c['kind'] == IMMUTABLE and delta != 0.0:
                violations.append((i, feat['name']))
            elif c['kind'] == BOUNDED and not (
                c['lower_delta'] - TOLERANCE <= delta <= c['upper_delta'] + TOLERANCE
            ):
                violations.append((i, feat['name']))
    report.add('constraints', not violations, f"constraint violations (vertex, feature): {violations}")


def _check_privacy(doc, report: VerificationReport) -> None:
    privacy = doc['privacy']
    n_total = privacy['n_total']
    ids = {stage: set(privacy['accessed_ids'][stage]) for stage in STAGES}
    report.add('ledger_enhance_subset', ids['enhance'] <= ids['exploit'],
               'enhance ids must be a subset of exploit ids')
    union = set().union(*ids.values())
    fractions_ok = all(
        abs(privacy['stages'][s]['fraction'] - len(ids[s]) / n_total) <= TOLERANCE for s in STAGES
    ) and abs(privacy['total_fraction'] - len(union) / n_total) <= TOLERANCE
    report.add('ledger_fractions', fractions_ok and 0.0 <= privacy['total_fraction'] <= 1.0,
               'fractions = |ids| / n_total')
    cumulative = [privacy['cumulative'][s] for s in STAGES]
    report.add('ledger_monotone', all(a <= b for a, b in zip(cumulative, cumulative[1:])),
               f"cumulative fractions {cumulative}")
    graph = doc.get('graph')
    if graph:
        in_graph = {v['training_id'] for v in graph['vertices']
                    if v['training_id'] is not None and v['kind'] != 'factual'}
        report.add('ledger_covers_graph', in_graph <= union, 'every graph training id is in the ledger')


def verify_trace(doc: Dict[str, Any]) -> VerificationReport:
    """
    Run every self-consistency check a TraceDocument supports.

    A failed run's partial trace reports a single failing 'status' check.
    """
    report = VerificationReport()
    meta = doc['meta']
    if meta.get('status') != 'success':
        failure = meta.get('failure') or {}
        report.add('status', False, f"run failed in {failure.get('stage')}: {failure.get('message')}")
        return report
    _check_recourse(doc, report)
    _check_path(doc, report)
    _check_privacy(doc, report)
    return report
