from ..core.constraints import apply_constraints, feasible_mask, project
from .privacy import privacy_report
from .session import RecourseExplainer, Session, explain

__all__ = [
    'RecourseExplainer', 'Session', 'apply_constraints', 'explain', 'feasible_mask', 'privacy_report',
    'project',
]
