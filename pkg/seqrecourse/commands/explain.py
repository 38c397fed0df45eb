"""
explain: generate sequential recourse for one factual (or a batch).

Usage:
    python -m seqrecourse explain --data moons.csv --model model.pkl --factual 17 --out trace.json
    python -m seqrecourse explain --data moons.csv --model model.pkl --factual=-0.4,0.9 --plot run.svg
    python -m seqrecourse explain --data moons.csv --model model.pkl --batch 50 --out traces/
"""
import logging
from pathlib import Path

import numpy as np

from .. import settings
from ..core.config import ExplainerConfig
from ..exceptions import RecourseError, UsageError
from ..models.artifacts import ModelArtifact
from ..pipeline.session import RecourseExplainer
from ..plotting.svg import emit_svg_plot
from ..traces.serializers import build_failure_trace, build_trace, write_trace
from .options import constrained_schema, load_artifact_dataset, parse_point

logger = logging.getLogger(__name__)

HELP = 'Explain a factual: explore a counterfactual, build the local graph, extract the path'


def add_arguments(parser):
    parser.add_argument('--data', required=True, help='Training CSV')
    parser.add_argument('--model', required=True, help='Model artifact from `fit`')
    target = parser.add_mutually_exclusive_group(required=True)
    target.add_argument('--factual', help='Row index, or comma-separated raw feature values')
    target.add_argument('--batch', type=int, help='Explain N random rows the model scores below T_f')
    parser.add_argument('--counterfactual', help='Known counterfactual (row index or raw values); skips explore')

    parser.add_argument('--k', type=int, default=None, help='Neighbors per query')
    parser.add_argument('--m', type=int, default=None, help='Momentum window')
    parser.add_argument('--epsilon', type=float, default=None, help='Deviation tolerance / neighborhood radius')
    parser.add_argument('--tf', type=float, default=None, help='Decision threshold T_f')
    tp = parser.add_mutually_exclusive_group()
    tp.add_argument('--tp-quantile', type=float, default=None, help='T_p as a training-density quantile')
    tp.add_argument('--tp-abs', type=float, default=None, help='T_p as an absolute density')
    parser.add_argument('--q', type=int, default=None, help='Line samples')
    parser.add_argument('--weight-mode', choices=('strict', 'average'), default=None, help='Edge weight rule')
    parser.add_argument('--max-iters', type=int, default=None, help='Iteration cap for explore and exploit')
    parser.add_argument('--patience', type=int, default=None,
                        help="Exploit iterations allowed once the walk is within epsilon of x'")
    parser.add_argument('--seed', type=int, default=settings.DEFAULT_SEED, help='Random seed')
    parser.add_argument('--target-class', type=int, choices=(0, 1), default=1,
                        help='1 seeks a positive score, 0 reverses the model (1 - f)')

    parser.add_argument('--immutable', action='append', help='Feature name(s) that may not change')
    parser.add_argument('--bounded', action='append', help='name:lower:upper allowed change, raw units')
    parser.add_argument('--fast-path', action='store_true', help='Accept steps passing the fast deviation check')
    parser.add_argument('--endpoint-inclusive', action='store_true', help='Line samples include both ends')
    parser.add_argument('--inverse-density', action='store_true', help='Average weight |v_i - v_j| / D')
    parser.add_argument('--synthetic-vertices', action='store_true',
                        help='Let explore positions join the local graph')
    parser.add_argument('--workers', type=int, default=settings.BATCH_WORKERS, help='Batch worker threads')

    parser.add_argument('--out', help='Trace JSON path (directory with --batch)')
    parser.add_argument('--plot', help='SVG plot path (d = 2 only)')
    parser.add_argument('--timestamps', action='store_true', help='Record wall-clock time in traces')


def build_config(args) -> ExplainerConfig:
    return ExplainerConfig().with_overrides(
        k_neighbors=args.k,
        momentum_window=args.m,
        epsilon=args.epsilon,
        decision_threshold=args.tf,
        tp_quantile=args.tp_quantile,
        tp_abs=args.tp_abs,
        line_samples=args.q,
        weight_mode=args.weight_mode,
        max_explore_iters=args.max_iters,
        max_exploit_iters=args.max_iters,
        exploit_patience=args.patience,
        seed=args.seed,
        target_class=args.target_class,
        use_fast_path=args.fast_path or None,
        endpoint_inclusive=args.endpoint_inclusive or None,
        inverse_density_weight=args.inverse_density or None,
        allow_synthetic_vertices=args.synthetic_vertices or None,
    )


def handle(args, stdout, stderr) -> int:
    artifact = ModelArtifact.load(args.model)
    dataset = load_artifact_dataset(args.data, artifact)
    dataset = dataset.with_schema(constrained_schema(dataset.schema, args.immutable, args.bounded))
    if args.plot and dataset.d != 2:
        raise UsageError(f"--plot needs 2 features, data has {dataset.d}")
    explainer = RecourseExplainer(dataset, artifact.model, build_config(args))

    if args.batch is not None:
        return explain_batch(explainer, args, stdout)

    factual = parse_point(args.factual, dataset, '--factual')
    counterfactual = None
    if args.counterfactual:
        counterfactual = parse_point(args.counterfactual, dataset, '--counterfactual')

    try:
        result = explainer.explain(factual, counterfactual)
    except RecourseError as e:
        document = build_failure_trace(explainer, factual, e, args.timestamps)
        if args.out:
            write_trace(document, args.out)
            print(f"⚠️  Partial trace written to {args.out}", file=stderr)
        if args.plot:
            emit_svg_plot(document, dataset, args.plot)
        raise

    document = build_trace(explainer, result, args.timestamps)
    if args.out:
        write_trace(document, args.out)
    if args.plot:
        emit_svg_plot(document, dataset, args.plot)

    privacy = document['privacy']
    relaxed = ' (relaxed once)' if result.retried else ''
    print(f"✅ Recourse found: {result.k} steps", file=stdout)
    print(f"   Score: {result.path_scores[0]:.4f} -> {result.path_scores[-1]:.4f} "
          f"(T_f = {explainer.config.decision_threshold})", file=stdout)
    print(f"   Path weight: {result.path_weight:.6g}, T_p = {result.density_threshold:.6g}{relaxed}", file=stdout)
    print(f"   Training data accessed: {privacy['total_fraction']:.2%} "
          f"({privacy['total_accessed']} of {privacy['n_total']})", file=stdout)
    if args.out:
        print(f"   Trace: {args.out}", file=stdout)
    if args.plot:
        print(f"   Plot: {args.plot}", file=stdout)
    return 0


def explain_batch(explainer: RecourseExplainer, args, stdout) -> int:
    if args.batch < 1:
        raise UsageError('--batch needs N >= 1')
    dataset = explainer.dataset
    scores = explainer.model.score_many(dataset.points)
    negatives = np.flatnonzero(scores < explainer.config.decision_threshold)
    if len(negatives) == 0:
        raise UsageError('no rows score below T_f')
    rng = np.random.default_rng(args.seed)
    rows = np.sort(rng.choice(negatives, size=min(args.batch, len(negatives)), replace=False))
    factuals = [dataset.instance(int(r)) for r in rows]

    results = explainer.explain_many(factuals, workers=args.workers)

    out_dir = Path(args.out) if args.out else None
    failures = 0
    fractions = []
    for factual, outcome in zip(factuals, results):
        if isinstance(outcome, RecourseError):
            failures += 1
            document = build_failure_trace(explainer, factual, outcome, args.timestamps)
            print(f"   ⚠️  row {factual.id}: failed {outcome}", file=stdout)
        else:
            document = build_trace(explainer, outcome, args.timestamps)
            fractions.append(document['privacy']['total_fraction'])
        if out_dir is not None:
            write_trace(document, out_dir / f"trace_{factual.id:05d}.json")

    done = len(factuals) - failures
    print(f"{'✅' if failures == 0 else '⚠️ '} Batch: {done}/{len(factuals)} succeeded", file=stdout)
    if fractions:
        print(f"   Mean training data accessed: {np.mean(fractions):.2%}", file=stdout)
    return 0 if failures == 0 else 1
