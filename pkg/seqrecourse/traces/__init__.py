from .report import privacy_table, step_table, top_changes
from .serializers import (
    TRACE_KEYS,
    build_failure_trace,
    build_trace,
    dumps,
    load_trace,
    write_trace,
)
from .verification import VerificationReport, verify_trace

__all__ = [
    'TRACE_KEYS', 'VerificationReport', 'build_failure_trace', 'build_trace', 'dumps', 'load_trace',
    'privacy_table', 'step_table', 'top_changes', 'verify_trace', 'write_trace',
]
