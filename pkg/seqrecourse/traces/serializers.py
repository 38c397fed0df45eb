"""
TraceDocument: a self-contained JSON record of one explanation.

Top-level keys: meta, explore, graph, path, recourse, privacy. Everything
needed to re-check the recourse (vertex values, steps, thresholds, feature
scaling and constraints) is inside, so `verify` never needs the dataset.
"""
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from .. import __version__
from ..core.preprocessing import inverse_standardize, steps_to_raw
from ..core.types import FeatureSchema, Instance, LocalGraph, PrivacyLedger, RecourseResult, STAGES
from ..exceptions import DataFormatError, RecourseError
from ..pipeline.privacy import privacy_report

logger = logging.getLogger(__name__)

TRACE_VERSION = 1
TRACE_KEYS = ('meta', 'explore', 'graph', 'path', 'recourse', 'privacy')


def _floats(values) -> list:
    return [float(v) for v in np.asarray(values, dtype=float).reshape(-1)]


def _matrix(rows) -> list:
    return [_floats(r) for r in rows]


def serialize_schema(schema: FeatureSchema) -> list:
    return [
        {
            'name': f.name,
            'mean': float(f.mean),
            'std_dev': float(f.std_dev),
            'constant': f.constant,
            'constraint': {
                'kind': f.constraint.kind,
                'lower_delta': float(f.constraint.lower_delta),
                'upper_delta': float(f.constraint.upper_delta),
            },
        }
        for f in schema.features
    ]


def serialize_explore(trace) -> Optional[Dict]:
    if trace is None:
        return None
    return {
        'iterations': trace.iterations,
        'positions': _matrix(trace.positions),
        'selected_ids': [int(i) for i in trace.selected_ids],
        'momenta': _matrix(trace.momenta),
        'scores': _floats(trace.scores),
        'rejected': [int(r) for r in trace.rejected],
    }


def serialize_graph(graph: Optional[LocalGraph]) -> Optional[Dict]:
    if graph is None:
        return None
    return {
        'vertices': [
            {
                'index': i,
                'training_id': v.id,
                'kind': graph.kind(i),
                'values': _floats(v.values),
            }
            for i, v in enumerate(graph.vertices)
        ],
        'edges': [
            {
                'source': i,
                'target': j,
                'weight': float(data['weight']),
                'density_avg': float(data['density_avg']),
                'density_min': float(data['density_min']),
            }
            for i, j, data in graph.edges()
        ],
    }


def serialize_privacy(ledger: Optional[PrivacyLedger]) -> Optional[Dict]:
    if ledger is None:
        return None
    report = privacy_report(ledger)
    report['accessed_ids'] = {stage: sorted(ledger.accessed[stage]) for stage in STAGES}
    return report


def _meta(explainer, factual: Instance, threshold: float, retried: bool, timestamps: bool) -> Dict:
    config = explainer.config
    meta = {
        'version': TRACE_VERSION,
        'package_version': __version__,
        'status': 'success',
        'failure': None,
        'seed': config.seed,
        'config': config.to_dict(),
        'decision_threshold': config.decision_threshold,
        'density_threshold': float(threshold),
        'retried': retried,
        'model': explainer.base_model.metadata(),
        'n_total': explainer.dataset.n,
        'factual_row': factual.id,
        'features': serialize_schema(explainer.dataset.schema),
    }
    if timestamps:
        meta['created_at'] = datetime.now(timezone.utc).isoformat()
    return meta


def build_trace(explainer, result: RecourseResult, timestamps: bool = False) -> Dict[str, Any]:
    """TraceDocument for a successful explanation."""
    schema = explainer.dataset.schema
    steps = result.recourse.steps
    return {
        'meta': _meta(explainer, result.factual, result.density_threshold, result.retried, timestamps),
        'explore': serialize_explore(result.explore_trace),
        'graph': serialize_graph(result.graph),
        'path': {
            'vertices': [int(i) for i in result.path],
            'total_weight': float(result.path_weight),
            'scores': _floats(result.path_scores),
            'densities': _floats(result.path_densities),
        },
        'recourse': {
            'k': result.recourse.k,
            'origin': _floats(result.factual.values),
            'counterfactual': _floats(result.counterfactual.values),
            'steps': _matrix(steps),
            'origin_raw': _floats(inverse_standardize(result.factual, schema)),
            'counterfactual_raw': _floats(inverse_standardize(result.counterfactual, schema)),
            'steps_raw': _matrix(steps_to_raw(steps, schema)),
        },
        'privacy': serialize_privacy(result.ledger),
    }


def build_failure_trace(
    explainer,
    factual: Instance,
    error: RecourseError,
    timestamps: bool = False,
) -> Dict[str, Any]:
    """Partial TraceDocument for a run that stopped with a RecourseError."""
    partial = error.partial
    meta = _meta(explainer, factual, partial.get('threshold', explainer.threshold), False, timestamps)
    meta['status'] = 'failed'
    meta['failure'] = {'stage': error.stage, 'message': str(error)}
    schema = explainer.dataset.schema
    return {
        'meta': meta,
        'explore': serialize_explore(partial.get('trace')),
        'graph': serialize_graph(partial.get('graph')),
        'path': None,
        'recourse': {
            'origin': _floats(factual.values),
            'origin_raw': _floats(inverse_standardize(factual, schema)),
        },
        'privacy': serialize_privacy(partial.get('ledger')),
    }


def dumps(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2, allow_nan=False) + '\n'


def write_trace(document: Dict[str, Any], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(document), encoding='utf-8')
    logger.info(f"Wrote trace to {path}")
    return path


def load_trace(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        document = json.loads(Path(path).read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{path}: not a JSON document ({e})") from e
    missing = [k for k in TRACE_KEYS if k not in document]
    if missing:
        raise DataFormatError(f"{path}: trace is missing keys {missing}")
    return document
