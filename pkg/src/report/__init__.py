from .style import FontSize, PlotPalette, PlotStyle, StyleManager
from .svg_surface import PlotArea, SvgSurface
from .writers import (
    MANIFEST_FILE,
    PLOT_FILE,
    RESULTS_FILE,
    SUMMARY_FILE,
    RunManifest,
    file_digest,
    write_run,
)
from .xa_plot import AgeBox, PlotSpec, PowerCurveSpec, render_power_svg, render_xa_svg

__all__ = [
    'FontSize', 'PlotPalette', 'PlotStyle', 'StyleManager', 'PlotArea', 'SvgSurface',
    'MANIFEST_FILE', 'PLOT_FILE', 'RESULTS_FILE', 'SUMMARY_FILE', 'RunManifest',
    'file_digest', 'write_run', 'AgeBox', 'PlotSpec', 'PowerCurveSpec',
    'render_power_svg', 'render_xa_svg',
]
