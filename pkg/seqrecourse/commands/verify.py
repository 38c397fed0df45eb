"""
verify: re-check the invariants recorded in one or more trace documents.

Usage:
    python -m seqrecourse verify trace.json [more.json ...]
"""
from ..traces.serializers import load_trace
from ..traces.verification import verify_trace

HELP = "Re-check a trace document's invariants without the dataset"


def add_arguments(parser):
    parser.add_argument('traces', nargs='+', help='Trace JSON file(s)')
    parser.add_argument('--quiet', '-q', action='store_true', help='Only print failures')


def handle(args, stdout, stderr) -> int:
    failed = 0
    for path in args.traces:
        report = verify_trace(load_trace(path))
        if report.ok:
            print(f"✅ {path}: {len(report.checks)} checks passed", file=stdout)
        else:
            failed += 1
            print(f"❌ {path}: {len(report.failures)} checks failed", file=stdout)
        if args.quiet and report.ok:
            continue
        for check in report.checks:
            if check['ok'] and args.quiet:
                continue
            mark = 'ok ' if check['ok'] else 'FAIL'
            line = f"   [{mark}] {check['check']}"
            if not check['ok']:
                line += f": {check['detail']}"
            print(line, file=stdout)
    return 0 if failed == 0 else 1
