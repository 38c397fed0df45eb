from .svg import PLOT_GIDS, build_figure, count_plot_elements, emit_svg_plot

__all__ = ['PLOT_GIDS', 'build_figure', 'count_plot_elements', 'emit_svg_plot']
