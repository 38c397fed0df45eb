from .deviation import (
    DeviationCheck,
    cosine_alignment,
    deviation_bound,
    fast_path_ok,
    max_deviation_ok,
    segment_covered,
)

__all__ = [
    'DeviationCheck', 'cosine_alignment', 'deviation_bound', 'fast_path_ok', 'max_deviation_ok',
    'segment_covered',
]
