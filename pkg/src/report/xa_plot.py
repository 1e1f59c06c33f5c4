import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence, Tuple, Union

from errors import ValidationError
from xa.results import BoxplotStats, XAResult
from .style import FontSize, StyleManager
from .svg_surface import PlotArea, SvgSurface

logger = logging.getLogger(__name__)

MARGIN_LEFT = 70
MARGIN_RIGHT = 170
MARGIN_TOP = 40
MARGIN_BOTTOM = 55
BOX_FRACTION = 0.6
POINT_RADIUS = 4.0
TICKS = 5


@dataclass(frozen=True)
class AgeBox:
    """What the plot shows for one age."""
    t_a: float
    boxplot: BoxplotStats
    g_p: float
    valid: bool


@dataclass
class PlotSpec:
    """Everything needed to draw an aging plot.

    Attributes:
        boxes: Per-age boxplots and geometric means
        stripe_lo: Lower bound of the null stripe
        stripe_hi: Upper bound of the null stripe
        mu0: Null mean of the geometric mean
        x_range: Latency axis range
        y_range: p-value axis range
        title: Plot title
        width: Width in pixels
        height: Height in pixels
    """
    boxes: List[AgeBox]
    stripe_lo: float
    stripe_hi: float
    mu0: float
    x_range: Tuple[float, float]
    y_range: Tuple[float, float] = (0.0, 1.0)
    title: str = "Aging test"
    width: int = 900
    height: int = 520

    @classmethod
    def from_result(cls, result: XAResult, title: str = "Aging test") -> "PlotSpec":
        boxes = [AgeBox(t_a=age.t_a, boxplot=age.boxplot, g_p=age.g_p, valid=age.valid)
                 for age in result.ages]
        t = [box.t_a for box in boxes]
        half = (t[-1] - t[0]) / (len(t) - 1) / 2 if len(t) > 1 else max(abs(t[0]), 1.0) / 2
        return cls(boxes=boxes, stripe_lo=result.stripe_lo, stripe_hi=result.stripe_hi,
                   mu0=result.mu0, x_range=(t[0] - half, t[-1] + half), title=title)

    def validate(self) -> None:
        """Check that every plotted value lies inside the axis ranges.

        Raises:
            ValidationError: If a value falls outside its axis
        """
        if not self.boxes:
            raise ValidationError("Plot needs at least one age")
        if not self.y_range[0] <= self.stripe_lo < self.mu0 < self.stripe_hi <= self.y_range[1]:
            raise ValidationError(
                f"Stripe ({self.stripe_lo}, {self.stripe_hi}) around mu0={self.mu0} "
                f"does not fit the axis {self.y_range}"
            )
        for box in self.boxes:
            if not self.x_range[0] <= box.t_a <= self.x_range[1]:
                raise ValidationError(f"Age {box.t_a} outside the axis {self.x_range}")
            for value in (box.g_p, box.boxplot.whisker_lo, box.boxplot.whisker_hi):
                if not math.isnan(value) and not self.y_range[0] <= value <= self.y_range[1]:
                    raise ValidationError(f"p-value {value} outside the axis {self.y_range}")


def _box_width(plot: PlotSpec, area: PlotArea) -> float:
    if len(plot.boxes) < 2:
        return area.width * BOX_FRACTION / 2
    step = abs(area.px(plot.boxes[1].t_a) - area.px(plot.boxes[0].t_a))
    return step * BOX_FRACTION


def _draw_axes(surface: SvgSurface, area: PlotArea, x_label: str, y_label: str) -> None:
    style = StyleManager.get_instance().get_style()
    axis = style.get_color("axis")
    tick_size = style.get_font_size(FontSize.TICK)
    with surface.group(class_="axes"):
        surface.line(area.left, area.bottom, area.right, area.bottom, stroke=axis)
        surface.line(area.left, area.top, area.left, area.bottom, stroke=axis)
        for k in range(TICKS + 1):
            x = area.x_range[0] + (area.x_range[1] - area.x_range[0]) * k / TICKS
            y = area.y_range[0] + (area.y_range[1] - area.y_range[0]) * k / TICKS
            surface.line(area.px(x), area.bottom, area.px(x), area.bottom + 5, stroke=axis)
            surface.text(area.px(x), area.bottom + 18, f"{x:.4g}", tick_size, axis,
                         anchor="middle", family=style.font_family)
            surface.line(area.left - 5, area.py(y), area.left, area.py(y), stroke=axis)
            surface.line(area.left, area.py(y), area.right, area.py(y),
                         stroke=style.get_color("grid"), width=0.5)
            surface.text(area.left - 8, area.py(y) + 4, f"{y:.2f}", tick_size, axis,
                         anchor="end", family=style.font_family)
        label_size = style.get_font_size(FontSize.LABEL)
        surface.text((area.left + area.right) / 2, area.bottom + 42, x_label, label_size,
                     axis, anchor="middle", family=style.font_family)
        surface.text(area.left - 48, (area.top + area.bottom) / 2, y_label, label_size,
                     axis, anchor="middle", family=style.font_family, rotate=-90)


def _draw_legend(surface: SvgSurface, x: float, y: float,
                 entries: Sequence[Tuple[str, str, str]]) -> None:
    style = StyleManager.get_instance().get_style()
    size = style.get_font_size(FontSize.LEGEND)
    with surface.group(class_="legend"):
        for k, (kind, color, label) in enumerate(entries):
            row = y + k * 20
            if kind == "line":
                surface.line(x, row, x + 18, row, stroke=color, width=1.5, dash="3,3")
            else:
                surface.rect(x, row - 6, 18, 12, fill=color, stroke=style.get_color("box_edge"))
            surface.text(x + 26, row + 4, label, size, style.get_color("text"),
                         family=style.font_family)


def render_xa_svg(plot: PlotSpec, path: Union[str, Path]) -> Path:
    """Draw an aging plot to a self-contained SVG file.

    The plot shows one light-gray boxplot per age, the geometric mean of each
    age as a filled circle, the null stripe as a shaded band and the null mean
    as a dotted line.

    Args:
        plot: What to draw
        path: Output file

    Returns:
        Path: The written file

    Raises:
        ValidationError: If the plot spec is inconsistent
        OSError: If the file cannot be written
    """
    plot.validate()
    style = StyleManager.get_instance().get_style()
    surface = SvgSurface(plot.width, plot.height, background=style.get_color("background"))
    area = PlotArea(MARGIN_LEFT, MARGIN_TOP, plot.width - MARGIN_LEFT - MARGIN_RIGHT,
                    plot.height - MARGIN_TOP - MARGIN_BOTTOM, plot.x_range, plot.y_range)

    surface.text(plot.width / 2, MARGIN_TOP / 2 + 5, plot.title,
                 style.get_font_size(FontSize.TITLE), style.get_color("text"),
                 anchor="middle", family=style.font_family)
    _draw_axes(surface, area, "t_a", "p-value")

    surface.rect(area.left, area.py(plot.stripe_hi), area.width,
                 area.py(plot.stripe_lo) - area.py(plot.stripe_hi),
                 fill=style.get_color("stripe"), opacity=style.stripe_opacity,
                 class_="stripe", data_lo=repr(plot.stripe_lo), data_hi=repr(plot.stripe_hi))
    surface.line(area.left, area.py(plot.mu0), area.right, area.py(plot.mu0),
                 stroke=style.get_color("mu0"), width=1.5, dash="3,3",
                 class_="mu0", data_value=repr(plot.mu0))

    half = _box_width(plot, area) / 2
    edge = style.get_color("box_edge")
    for box in plot.boxes:
        stats = box.boxplot
        x = area.px(box.t_a)
        with surface.group(class_="age-box", data_t_a=repr(box.t_a),
                           data_outliers=str(stats.n_outliers),
                           data_valid=str(box.valid).lower()):
            if math.isnan(stats.median):
                continue
            surface.line(x, area.py(stats.whisker_lo), x, area.py(stats.q1), stroke=edge)
            surface.line(x, area.py(stats.q3), x, area.py(stats.whisker_hi), stroke=edge)
            for whisker in (stats.whisker_lo, stats.whisker_hi):
                surface.line(x - half / 2, area.py(whisker), x + half / 2, area.py(whisker),
                             stroke=edge)
            surface.rect(x - half, area.py(stats.q3), 2 * half,
                         max(area.py(stats.q1) - area.py(stats.q3), 0.0),
                         fill=style.get_color("box_fill"), stroke=edge)
            surface.line(x - half, area.py(stats.median), x + half, area.py(stats.median),
                         stroke=style.get_color("median"), width=1.5)

    with surface.group(class_="geometric-means"):
        for box in plot.boxes:
            if math.isnan(box.g_p):
                continue
            inside = plot.stripe_lo <= box.g_p <= plot.stripe_hi
            color = style.get_color("point" if inside else "point_outside")
            surface.circle(area.px(box.t_a), area.py(box.g_p), POINT_RADIUS, color,
                           data_g_p=repr(box.g_p))

    _draw_legend(surface, area.right + 20, area.top + 10, [
        ("rect", style.get_color("box_fill"), "p-values per age"),
        ("rect", style.get_color("point"), "geometric mean"),
        ("rect", style.get_color("stripe"), "95% null stripe"),
        ("line", style.get_color("mu0"), f"null mean {plot.mu0:.4f}"),
    ])
    written = surface.save(path)
    logger.info(f"Wrote aging plot with {len(plot.boxes)} ages to {written}")
    return written


@dataclass
class PowerCurveSpec:
    """Power curves of the lower-tailed z test.

    Attributes:
        x_label: Name of the swept parameter
        curves: Label and (x, power) points of each curve
        alpha: Significance level, drawn as a reference line
    """
    x_label: str
    curves: List[Tuple[str, List[Tuple[float, float]]]] = field(default_factory=list)
    alpha: float = 0.05
    title: str = "Power of the aging test"
    width: int = 760
    height: int = 480


def render_power_svg(plot: PowerCurveSpec, path: Union[str, Path]) -> Path:
    """Draw power curves to an SVG file."""
    points = [p for _, curve in plot.curves for p in curve]
    if not points:
        raise ValidationError("Power plot needs at least one point")
    xs = [x for x, _ in points]
    x_range = (min(xs), max(xs)) if min(xs) < max(xs) else (min(xs) - 1, max(xs) + 1)
    style = StyleManager.get_instance().get_style()
    surface = SvgSurface(plot.width, plot.height, background=style.get_color("background"))
    area = PlotArea(MARGIN_LEFT, MARGIN_TOP, plot.width - MARGIN_LEFT - MARGIN_RIGHT,
                    plot.height - MARGIN_TOP - MARGIN_BOTTOM, x_range, (0.0, 1.0))
    surface.text(plot.width / 2, MARGIN_TOP / 2 + 5, plot.title,
                 style.get_font_size(FontSize.TITLE), style.get_color("text"),
                 anchor="middle", family=style.font_family)
    _draw_axes(surface, area, plot.x_label, "power")
    surface.line(area.left, area.py(plot.alpha), area.right, area.py(plot.alpha),
                 stroke=style.get_color("mu0"), dash="3,3", class_="alpha")

    legend = []
    for label, curve in plot.curves:
        with surface.group(class_="power-curve", data_label=label):
            surface.polyline([(area.px(x), area.py(y)) for x, y in curve],
                             stroke=style.get_color("curve"))
        legend.append(("line", style.get_color("curve"), label))
    _draw_legend(surface, area.right + 20, area.top + 10, legend)
    written = surface.save(path)
    logger.info(f"Wrote power plot to {written} ({len(points)} points)")
    return written
