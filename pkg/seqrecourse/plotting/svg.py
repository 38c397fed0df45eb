"""
Static SVG figure of a 2-D explanation: data by label, a grid-sampled
density contour, the local graph, the explore trajectory and the final path.

Each layer carries an SVG group id so the output can be inspected:

    data-points, density-contour, explore-trace, graph-edges,
    graph-vertices, recourse-path, path-vertices
"""
import logging
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Any, Dict, Optional, Union

import matplotlib
from matplotlib.collections import LineCollection
from matplotlib.figure import Figure
import numpy as np

from .. import settings
from ..core.types import Dataset
from ..density.kde import kde_fit
from ..exceptions import UnsupportedDimensionError

logger = logging.getLogger(__name__)

SVG_NS = '{http://www.w3.org/2000/svg}'
PLOT_GIDS = (
    'data-points', 'density-contour', 'explore-trace', 'graph-edges',
    'graph-vertices', 'recourse-path', 'path-vertices',
)
LABEL_COLORS = {0: '#4C72B0', 1: '#DD8452'}
DPI = 72


def _check_dimension(doc: Dict[str, Any], dataset: Dataset) -> None:
    d = len(doc['meta']['features'])
    if d != 2 or dataset.d != 2:
        raise UnsupportedDimensionError(f"SVG plots need d = 2, got trace d={d}, data d={dataset.d}")


def build_figure(doc: Dict[str, Any], dataset: Dataset, width: int = settings.SVG_WIDTH,
                 height: int = settings.SVG_HEIGHT) -> Figure:
    _check_dimension(doc, dataset)
    fig = Figure(figsize=(width / DPI, height / DPI), dpi=DPI)
    ax = fig.add_subplot(1, 1, 1)
    points = dataset.points

    pad = 0.5
    lo = points.min(axis=0) - pad
    hi = points.max(axis=0) + pad
    grid = settings.CONTOUR_GRID
    gx, gy = np.meshgrid(np.linspace(lo[0], hi[0], grid), np.linspace(lo[1], hi[1], grid))
    density = kde_fit(points, doc['meta']['config']['kde_bandwidth'])
    gz = density.density_many(np.column_stack([gx.ravel(), gy.ravel()])).reshape(gx.shape)
    contour = ax.contourf(gx, gy, gz, levels=8, cmap='Greys', alpha=0.35)
    contour.set_gid('density-contour')

    colors = [LABEL_COLORS[int(label)] for label in dataset.labels]
    ax.scatter(points[:, 0], points[:, 1], s=8, c=colors, linewidths=0, gid='data-points')

    explore = doc.get('explore')
    if explore and len(explore['positions']) > 1:
        trail = np.asarray(explore['positions'])
        ax.plot(trail[:, 0], trail[:, 1], color='#55A868', linestyle='--', linewidth=1.0, gid='explore-trace')

    graph = doc.get('graph')
    if graph:
        values = np.asarray([v['values'] for v in graph['vertices']], dtype=float)
        segments = [[values[e['source']], values[e['target']]] for e in graph['edges']]
        if segments:
            ax.add_collection(LineCollection(segments, colors='#8172B3', linewidths=0.6, alpha=0.6,
                                             gid='graph-edges'))
        ax.scatter(values[:, 0], values[:, 1], s=24, c='#8172B3', linewidths=0, gid='graph-vertices')

        path = doc.get('path')
        if path:
            route = values[path['vertices']]
            ax.plot(route[:, 0], route[:, 1], color='#C44E52', linewidth=2.0, gid='recourse-path')
            ax.scatter(route[:, 0], route[:, 1], s=40, c='#C44E52', linewidths=0, gid='path-vertices')

    names = [f['name'] for f in doc['meta']['features']]
    ax.set_xlabel(f"{names[0]} (standardized)")
    ax.set_ylabel(f"{names[1]} (standardized)")
    ax.set_xlim(lo[0], hi[0])
    ax.set_ylim(lo[1], hi[1])
    status = doc['meta']['status']
    k = doc['recourse'].get('k')
    ax.set_title(f"recourse: {status}" + (f", {k} steps" if k is not None else ''))
    return fig


def emit_svg_plot(doc: Dict[str, Any], dataset: Dataset, out_path: Union[str, Path],
                  width: int = settings.SVG_WIDTH, height: int = settings.SVG_HEIGHT) -> Path:
    """
    Write the explanation figure as SVG. Identical inputs give identical bytes.

    Raises:
        UnsupportedDimensionError: d != 2
    """
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context({'svg.hashsalt': settings.SVG_HASH_SALT, 'svg.fonttype': 'none'}):
        fig = build_figure(doc, dataset, width, height)
        fig.savefig(out_path, format='svg', metadata={'Date': None})
    logger.info(f"Wrote plot to {out_path}")
    return out_path


def count_plot_elements(svg: Union[str, Path]) -> Dict[str, int]:
    """Marker and line elements per layer: <use> plus <path> outside <defs>."""
    root = ET.parse(svg).getroot()
    counts = {}
    for group in root.iter(f'{SVG_NS}g'):
        gid = group.get('id')
        if gid not in PLOT_GIDS:
            continue
        defs = {id(p) for d in group.iter(f'{SVG_NS}defs') for p in d.iter(f'{SVG_NS}path')}
        uses = sum(1 for _ in group.iter(f'{SVG_NS}use'))
        paths = sum(1 for p in group.iter(f'{SVG_NS}path') if id(p) not in defs)
        counts[gid] = uses + paths
    return counts
