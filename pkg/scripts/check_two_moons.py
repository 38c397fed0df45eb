#!/usr/bin/env python3
"""
Two-moons smoke run.

Generates the noisy two-moons set, fits the reference model, explains a
shuffled sample of negatively scored rows and prints one line per factual
plus a summary. Exits 1 when any factual fails to find recourse.

    python scripts/check_two_moons.py --samples 50 --workers 4
"""
import argparse
import logging.config
import os
import sys
import time

import numpy as np
import pandas as pd

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from seqrecourse import settings
from seqrecourse.core.config import ExplainerConfig
from seqrecourse.core.preprocessing import build_dataset
from seqrecourse.datasets.generators import feature_names, generate_two_moons
from seqrecourse.exceptions import RecourseError
from seqrecourse.models.reference import fit_reference_model
from seqrecourse.pipeline import RecourseExplainer, explain


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description='Explain negatives on two moons and summarise')
    parser.add_argument('--n', type=int, default=1000, help='Points to generate')
    parser.add_argument('--noise', type=float, default=0.15)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--samples', type=int, default=50, help='Negatives to explain')
    parser.add_argument('--model', default='rbf_logistic', choices=['rbf_logistic', 'knn_probability'])
    parser.add_argument('--weight-mode', default=settings.WEIGHT_MODE, choices=['average', 'strict'])
    parser.add_argument('--csv', help='Also write the per-factual table here')
    return parser.parse_args(argv)


def run_one(explainer, factual):
    started = time.perf_counter()
    session = explainer.session()
    try:
        result = explain(factual, session)
    except RecourseError as e:
        return {
            'row': factual.id, 'status': f'failed ({e.stage})', 'k': None,
            'privacy': session.ledger.fraction(),
            'retried': None, 'seconds': time.perf_counter() - started,
        }
    return {
        'row': factual.id, 'status': 'success', 'k': result.k,
        'privacy': result.ledger.fraction(), 'retried': result.retried,
        'seconds': time.perf_counter() - started,
    }


def main(argv=None):
    args = parse_args(argv)
    logging.config.dictConfig(settings.LOGGING)

    raw, labels = generate_two_moons(args.n, noise=args.noise, seed=args.seed)
    dataset = build_dataset(raw, labels, feature_names(2))
    model = fit_reference_model(dataset, kind=args.model, seed=args.seed)
    explainer = RecourseExplainer(dataset, model, ExplainerConfig(weight_mode=args.weight_mode))
    print(f"📊 {dataset.n} points, model {args.model}, T_f {explainer.config.decision_threshold}")

    scores = model.score_many(dataset.points)
    negatives = np.flatnonzero(scores < explainer.config.decision_threshold)
    rows = np.random.default_rng(args.seed).permutation(negatives)[:args.samples]
    print(f"🔍 Explaining {len(rows)} of {len(negatives)} negatives...")

    table = pd.DataFrame([run_one(explainer, dataset.instance(int(r))) for r in rows])
    with pd.option_context('display.max_rows', None, 'display.width', 120):
        print(table.to_string(index=False, float_format=lambda v: f'{v:.4f}'))

    ok = table[table['status'] == 'success']
    print()
    print(f"✅ success      {len(ok)}/{len(table)}")
    if len(ok):
        print(f"   k            mean {ok['k'].mean():.2f}, max {int(ok['k'].max())}")
        print(f"   privacy      mean {ok['privacy'].mean():.4f}, max {ok['privacy'].max():.4f}")
        print(f"   retried      {int(ok['retried'].sum())}")
    print(f"   time         {table['seconds'].sum():.1f}s total")

    if args.csv:
        table.to_csv(args.csv, index=False)
        print(f"💾 Table written to {args.csv}")

    if len(ok) < len(table):
        print(f"❌ {len(table) - len(ok)} factual(s) without recourse")
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
