"""
Human-readable summaries of a TraceDocument: step table and largest changes.
"""
from typing import Any, Dict, List

import numpy as np
import pandas as pd

TOP_CHANGES = 4


def step_table(doc: Dict[str, Any]) -> pd.DataFrame:
    """
    One row per recourse point: point 0 is the factual, the last the counterfactual.

    Columns: step, score, edge_density (mean density of the edge reaching
    the point) and the raw-unit change of every feature made by that step.
    """
    names = [f['name'] for f in doc['meta']['features']]
    path = doc['path']
    rec = doc['recourse']
    raw_steps = np.asarray(rec['steps_raw'], dtype=float).reshape(-1, len(names))
    rows = []
    for i, score in enumerate(path['scores']):
        row = {
            'step': i,
            'score': score,
            'edge_density': path['densities'][i - 1] if i > 0 else np.nan,
        }
        deltas = raw_steps[i - 1] if i > 0 else np.zeros(len(names))
        row.update({f"d_{n}": float(v) for n, v in zip(names, deltas)})
        rows.append(row)
    return pd.DataFrame(rows).set_index('step')


def top_changes(doc: Dict[str, Any], top: int = TOP_CHANGES) -> List[Dict[str, Any]]:
    """Features with the largest absolute standardized change, factual to counterfactual."""
    names = [f['name'] for f in doc['meta']['features']]
    rec = doc['recourse']
    change = np.asarray(rec['counterfactual'], dtype=float) - np.asarray(rec['origin'], dtype=float)
    raw = np.asarray(rec['counterfactual_raw'], dtype=float) - np.asarray(rec['origin_raw'], dtype=float)
    order = sorted(range(len(names)), key=lambda j: (-abs(change[j]), j))
    return [
        {
            'feature': names[j],
            'standardized_change': float(change[j]),
            'raw_change': float(raw[j]),
            'raw_from': float(rec['origin_raw'][j]),
            'raw_to': float(rec['counterfactual_raw'][j]),
        }
        for j in order[:top]
        if change[j] != 0.0
    ]


def privacy_table(doc: Dict[str, Any]) -> pd.DataFrame:
    privacy = doc['privacy']
    rows = [
        {
            'stage': stage,
            'accessed': data['accessed'],
            'fraction': data['fraction'],
            'cumulative': privacy['cumulative'][stage],
        }
        for stage, data in privacy['stages'].items()
    ]
    return pd.DataFrame(rows).set_index('stage')
