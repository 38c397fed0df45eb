"""
ExplainerConfig: the knobs of one explanation run.

Defaults come from seqrecourse.settings so a `.env` file or SEQRECOURSE_*
environment variables change them without touching code.
"""
from dataclasses import asdict, dataclass, field, replace
from typing import Dict, Optional, Tuple, Union

from .. import settings
from ..exceptions import ConfigError

WEIGHT_MODES = ('strict', 'average')
DEACTIVATION_MODES = ('selected', 'none')


@dataclass(frozen=True)
class ExplainerConfig:
    """
    Configuration record for explore / exploit / enhance.

    The density threshold is given either as an absolute value (`tp_abs`)
    or as a quantile of training-point densities (`tp_quantile`); the
    absolute value wins when both are set.
    """
    k_neighbors: int = settings.K_NEIGHBORS
    momentum_window: int = settings.MOMENTUM_WINDOW
    epsilon: float = settings.EPSILON
    decision_threshold: float = settings.DECISION_THRESHOLD
    tp_quantile: Optional[float] = settings.TP_QUANTILE
    tp_abs: Optional[float] = None
    line_samples: int = settings.LINE_SAMPLES
    weight_mode: str = settings.WEIGHT_MODE
    max_explore_iters: int = settings.MAX_EXPLORE_ITERS
    max_exploit_iters: int = settings.MAX_EXPLOIT_ITERS
    exploit_patience: int = settings.EXPLOIT_PATIENCE
    kde_bandwidth: Union[float, str] = settings.KDE_BANDWIDTH

    tp_quantile_ladder: Tuple[float, ...] = field(default=tuple(settings.TP_QUANTILE_LADDER))
    target_class: int = 1
    deactivation: str = settings.DEACTIVATION
    use_fast_path: bool = False
    endpoint_inclusive: bool = False
    inverse_density_weight: bool = False
    allow_synthetic_vertices: bool = False
    seed: int = settings.DEFAULT_SEED

    def __post_init__(self):
        bw = self.kde_bandwidth
        if isinstance(bw, str) and bw != 'auto':
            try:
                object.__setattr__(self, 'kde_bandwidth', float(bw))
            except ValueError:
                raise ConfigError(f"kde_bandwidth must be a positive number or 'auto', got {bw!r}") from None
        object.__setattr__(self, 'tp_quantile_ladder', tuple(float(q) for q in self.tp_quantile_ladder))
        self.validate()

    def validate(self) -> 'ExplainerConfig':
        if self.k_neighbors < 1:
            raise ConfigError(f"k_neighbors must be >= 1, got {self.k_neighbors}")
        if self.momentum_window < 1:
            raise ConfigError(f"momentum_window must be >= 1, got {self.momentum_window}")
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be > 0, got {self.epsilon}")
        if not 0.0 < self.decision_threshold < 1.0:
            raise ConfigError(f"decision_threshold must be in (0, 1), got {self.decision_threshold}")
        if self.tp_abs is None and self.tp_quantile is None:
            raise ConfigError("one of tp_abs or tp_quantile is required")
        if self.tp_abs is not None and self.tp_abs < 0:
            raise ConfigError(f"tp_abs must be >= 0, got {self.tp_abs}")
        if self.tp_quantile is not None and not 0.0 < self.tp_quantile < 1.0:
            raise ConfigError(f"tp_quantile must be in (0, 1), got {self.tp_quantile}")
        if any(not 0.0 < q < 1.0 for q in self.tp_quantile_ladder):
            raise ConfigError(f"tp_quantile_ladder entries must be in (0, 1), got {self.tp_quantile_ladder}")
        if self.line_samples < 2:
            raise ConfigError(f"line_samples must be >= 2, got {self.line_samples}")
        if self.weight_mode not in WEIGHT_MODES:
            raise ConfigError(f"weight_mode must be one of {WEIGHT_MODES}, got {self.weight_mode!r}")
        if self.max_explore_iters < 1 or self.max_exploit_iters < 1:
            raise ConfigError("max_explore_iters and max_exploit_iters must be >= 1")
        if self.exploit_patience < 1:
            raise ConfigError(f"exploit_patience must be >= 1, got {self.exploit_patience}")
        if self.kde_bandwidth != 'auto' and not float(self.kde_bandwidth) > 0:
            raise ConfigError(f"kde_bandwidth must be > 0, got {self.kde_bandwidth}")
        if self.target_class not in (0, 1):
            raise ConfigError(f"target_class must be 0 or 1, got {self.target_class}")
        if self.deactivation not in DEACTIVATION_MODES:
            raise ConfigError(f"deactivation must be one of {DEACTIVATION_MODES}, got {self.deactivation!r}")
        return self

    def with_overrides(self, **changes) -> 'ExplainerConfig':
        """Copy with the non-None entries of `changes` applied."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self) -> Dict:
        data = asdict(self)
        data['tp_quantile_ladder'] = list(self.tp_quantile_ladder)
        return data
