"""
Settings for seqrecourse.

Every value can be overridden from the environment as SEQRECOURSE_<NAME>,
and a `.env` file in the working directory is loaded first.
"""

import os

from dotenv import load_dotenv

load_dotenv()


def _env(name, default, cast=str):
    raw = os.getenv(f'SEQRECOURSE_{name}')
    if raw is None or raw == '':
        return default
    return cast(raw)


def _floats(raw):
    return tuple(float(v) for v in raw.split(',') if v.strip())


# Explore / exploit search
K_NEIGHBORS = _env('K_NEIGHBORS', 50, int)
MOMENTUM_WINDOW = _env('MOMENTUM_WINDOW', 5, int)
EPSILON = _env('EPSILON', 1.0, float)
MAX_EXPLORE_ITERS = _env('MAX_EXPLORE_ITERS', 200, int)
MAX_EXPLOIT_ITERS = _env('MAX_EXPLOIT_ITERS', 200, int)
EXPLOIT_PATIENCE = _env('EXPLOIT_PATIENCE', 20, int)  # iterations allowed once x' is within epsilon
DEACTIVATION = _env('DEACTIVATION', 'selected')  # 'selected' or 'none'

# Thresholds
DECISION_THRESHOLD = _env('DECISION_THRESHOLD', 0.75, float)
TP_QUANTILE = _env('TP_QUANTILE', 0.20, float)
TP_QUANTILE_LADDER = _env('TP_QUANTILE_LADDER', (0.20, 0.10, 0.05, 0.01), _floats)

# Density / edge weights
LINE_SAMPLES = _env('LINE_SAMPLES', 32, int)
WEIGHT_MODE = _env('WEIGHT_MODE', 'average')  # 'strict' or 'average'
KDE_BANDWIDTH = _env('KDE_BANDWIDTH', 'auto')
KDE_CHUNK_SIZE = _env('KDE_CHUNK_SIZE', 2048, int)

# Reference models
MODEL_KIND = _env('MODEL_KIND', 'rbf_logistic')
KNN_MODEL_NEIGHBORS = _env('KNN_MODEL_NEIGHBORS', 15, int)
RBF_COMPONENTS = _env('RBF_COMPONENTS', 200, int)
RBF_GAMMA = _env('RBF_GAMMA', 1.0, float)
RBF_C = _env('RBF_C', 10.0, float)

DEFAULT_SEED = _env('SEED', 0, int)
LABEL_COLUMN = _env('LABEL_COLUMN', 'label')

# Plotting
SVG_WIDTH = _env('SVG_WIDTH', 800, int)
SVG_HEIGHT = _env('SVG_HEIGHT', 600, int)
SVG_HASH_SALT = 'seqrecourse'
CONTOUR_GRID = _env('CONTOUR_GRID', 60, int)

# Batch runs
BATCH_WORKERS = _env('BATCH_WORKERS', 1, int)

LOG_LEVEL = _env('LOG_LEVEL', 'WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'standard',
            'stream': 'ext://sys.stderr',
        },
    },
    'loggers': {
        'seqrecourse': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}
