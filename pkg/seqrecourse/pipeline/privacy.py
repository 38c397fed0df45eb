"""
Privacy reporting over a finished session's ledger.
"""
import logging
from typing import Dict

from ..core.types import STAGES, PrivacyLedger

logger = logging.getLogger(__name__)


def privacy_report(ledger: PrivacyLedger) -> Dict:
    """
    Per-stage and total accessed fractions.

    Returns:
        {
            'n_total': int,
            'stages': {stage: {'accessed': int, 'fraction': float}},
            'cumulative': {stage: fraction after that stage},
            'total_accessed': int,
            'total_fraction': float,
        }
    """
    if not ledger.sealed:
        logger.debug("privacy_report on a ledger that is still open")
    return {
        'n_total': ledger.n_total,
        'stages': {
            stage: {'accessed': len(ledger.accessed[stage]), 'fraction': ledger.fraction(stage)}
            for stage in STAGES
        },
        'cumulative': ledger.cumulative_fractions(),
        'total_accessed': len(ledger.union()),
        'total_fraction': ledger.fraction(),
    }
