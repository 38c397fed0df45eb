"""
gen-data: write a synthetic labelled dataset to CSV.

Usage:
    python -m seqrecourse gen-data --out moons.csv [--kind moons|blobs] [--n N]
        [--noise S] [--seed S] [--group-column]
"""
import numpy as np

from .. import settings
from ..datasets.csvio import write_csv
from ..datasets.generators import add_group_column, feature_names, generate_blobs, generate_two_moons

HELP = 'Generate a two-moons or Gaussian-blobs dataset as CSV'


def add_arguments(parser):
    parser.add_argument('--out', required=True, help='Output CSV path')
    parser.add_argument('--kind', choices=('moons', 'blobs'), default='moons', help='Dataset shape')
    parser.add_argument('--n', type=int, default=1000, help='Number of rows')
    parser.add_argument('--noise', type=float, default=0.15, help='Two-moons noise standard deviation')
    parser.add_argument('--d', type=int, default=2, help='Blobs dimension')
    parser.add_argument('--cluster-std', type=float, default=1.0, help='Blobs cluster standard deviation')
    parser.add_argument('--seed', type=int, default=settings.DEFAULT_SEED, help='Random seed')
    parser.add_argument(
        '--group-column',
        action='store_true',
        help="Append a random binary 'group' feature (for immutable-constraint demos)"
    )
    parser.add_argument('--label-column', default=settings.LABEL_COLUMN, help='Label column name')


def handle(args, stdout, stderr) -> int:
    if args.kind == 'moons':
        raw, labels = generate_two_moons(args.n, args.noise, args.seed)
    else:
        raw, labels = generate_blobs(args.n, args.d, args.cluster_std, args.seed)
    if args.group_column:
        raw = add_group_column(raw, args.seed)
    names = feature_names(raw.shape[1], group=args.group_column)
    path = write_csv(args.out, raw, labels, names, args.label_column)

    print(f"✅ Wrote {raw.shape[0]} rows x {raw.shape[1]} features to {path}", file=stdout)
    print(f"   Class balance: {int(np.sum(labels == 0))} / {int(np.sum(labels == 1))}", file=stdout)
    return 0
