from .kde import (
    DensityModel,
    density_quantile_threshold,
    kde_fit,
    line_average_density,
    line_coefficients,
    line_min_density,
    line_points,
    line_profile,
    scott_bandwidth,
)

__all__ = [
    'DensityModel', 'density_quantile_threshold', 'kde_fit', 'line_average_density',
    'line_coefficients', 'line_min_density', 'line_points', 'line_profile', 'scott_bandwidth',
]
