"""
report: privacy fractions, per-step table and largest feature changes of a trace.

Usage:
    python -m seqrecourse report trace.json [--top 4]
"""
import pandas as pd

from ..traces.report import TOP_CHANGES, privacy_table, step_table, top_changes
from ..traces.serializers import load_trace

HELP = 'Print privacy fractions and the recourse step table from a trace'


def add_arguments(parser):
    parser.add_argument('trace', help='Trace JSON file')
    parser.add_argument('--top', type=int, default=TOP_CHANGES, help='How many changed features to list')


def handle(args, stdout, stderr) -> int:
    doc = load_trace(args.trace)
    meta = doc['meta']

    print(f"📄 {args.trace}", file=stdout)
    print(f"   Status: {meta['status']}", file=stdout)
    if meta['failure']:
        print(f"   ⚠️  Failed in {meta['failure']['stage']}: {meta['failure']['message']}", file=stdout)
    relaxed = ' (relaxed once)' if meta['retried'] else ''
    print(f"   T_f = {meta['decision_threshold']}, T_p = {meta['density_threshold']:.6g}{relaxed}", file=stdout)

    if doc['privacy']:
        privacy = doc['privacy']
        print(file=stdout)
        print('🔒 Training data accessed', file=stdout)
        print(privacy_table(doc).to_string(float_format=lambda v: f"{v:.4%}"), file=stdout)
        print(f"   total: {privacy['total_accessed']} of {privacy['n_total']} "
              f"({privacy['total_fraction']:.4%})", file=stdout)

    if doc['path']:
        print(file=stdout)
        print('🧭 Recourse steps (raw units)', file=stdout)
        with pd.option_context('display.width', 200, 'display.max_columns', 50):
            print(step_table(doc).to_string(float_format=lambda v: f"{v:.4g}"), file=stdout)

        changes = top_changes(doc, args.top)
        print(file=stdout)
        print(f'📊 Largest changes (top {args.top})', file=stdout)
        if not changes:
            print('   none', file=stdout)
        for c in changes:
            print(
                f"   {c['feature']}: {c['raw_from']:.4g} -> {c['raw_to']:.4g} "
                f"(raw {c['raw_change']:+.4g}, standardized {c['standardized_change']:+.4g})",
                file=stdout,
            )
    return 0
