import xml.etree.ElementTree as ET
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional, Sequence, Tuple, Union

SVG_NS = "http://www.w3.org/2000/svg"


def _attr_name(keyword: str) -> str:
    # class_ -> class, data_t_a -> data-t-a
    return keyword.rstrip("_").replace("_", "-")


def fmt(value: float) -> str:
    """Fixed-precision pixel coordinate."""
    text = f"{value:.2f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


class SvgSurface:
    """A drawing surface that serializes to a self-contained SVG document.

    Drawing calls mirror a raster surface: shapes are appended in call order
    to the current group, so identical calls produce identical bytes.
    """

    def __init__(self, width: int, height: int, background: Optional[str] = None) -> None:
        """Initialize the surface.

        Args:
            width: Width in pixels
            height: Height in pixels
            background: Fill of a full-size background rectangle
        """
        self._width = width
        self._height = height
        self._root = ET.Element("svg", {
            "xmlns": SVG_NS,
            "width": str(width),
            "height": str(height),
            "viewBox": f"0 0 {width} {height}",
        })
        self._stack = [self._root]
        if background:
            self.rect(0, 0, width, height, fill=background)

    @property
    def width(self) -> int:
        return self._width

    @property
    def height(self) -> int:
        return self._height

    def _add(self, tag: str, attributes: dict) -> ET.Element:
        return ET.SubElement(self._stack[-1], tag, {k: v for k, v in attributes.items() if v is not None})

    @contextmanager
    def group(self, **attributes: str) -> Iterator[ET.Element]:
        """Nest subsequent shapes in a ``<g>`` element."""
        element = self._add("g", {_attr_name(k): v for k, v in attributes.items()})
        self._stack.append(element)
        try:
            yield element
        finally:
            self._stack.pop()

    def rect(self, x: float, y: float, width: float, height: float, fill: str = "none",
             stroke: Optional[str] = None, opacity: Optional[float] = None,
             **extra: str) -> ET.Element:
        attributes = {"x": fmt(x), "y": fmt(y), "width": fmt(width), "height": fmt(height),
                      "fill": fill, "stroke": stroke,
                      "fill-opacity": None if opacity is None else fmt(opacity)}
        attributes.update({_attr_name(k): v for k, v in extra.items()})
        return self._add("rect", attributes)

    def line(self, x1: float, y1: float, x2: float, y2: float, stroke: str,
             width: float = 1.0, dash: Optional[str] = None, **extra: str) -> ET.Element:
        attributes = {"x1": fmt(x1), "y1": fmt(y1), "x2": fmt(x2), "y2": fmt(y2),
                      "stroke": stroke, "stroke-width": fmt(width), "stroke-dasharray": dash}
        attributes.update({_attr_name(k): v for k, v in extra.items()})
        return self._add("line", attributes)

    def circle(self, cx: float, cy: float, r: float, fill: str, **extra: str) -> ET.Element:
        attributes = {"cx": fmt(cx), "cy": fmt(cy), "r": fmt(r), "fill": fill}
        attributes.update({_attr_name(k): v for k, v in extra.items()})
        return self._add("circle", attributes)

    def polyline(self, points: Sequence[Tuple[float, float]], stroke: str,
                 width: float = 1.5) -> ET.Element:
        return self._add("polyline", {
            "points": " ".join(f"{fmt(x)},{fmt(y)}" for x, y in points),
            "fill": "none", "stroke": stroke, "stroke-width": fmt(width),
        })

    def text(self, x: float, y: float, content: str, size: int, fill: str,
             anchor: str = "start", family: Optional[str] = None,
             rotate: Optional[float] = None) -> ET.Element:
        element = self._add("text", {
            "x": fmt(x), "y": fmt(y), "font-size": str(size), "fill": fill,
            "text-anchor": anchor, "font-family": family,
            "transform": None if rotate is None else f"rotate({fmt(rotate)} {fmt(x)} {fmt(y)})",
        })
        element.text = content
        return element

    def to_bytes(self) -> bytes:
        """Serialize the surface."""
        tree = ET.ElementTree(self._root)
        ET.indent(tree, space="  ")
        return ET.tostring(self._root, encoding="utf-8", xml_declaration=True) + b"\n"

    def save(self, path: Union[str, Path]) -> Path:
        """Write the surface to ``path``.

        Raises:
            OSError: If the path is not writable
        """
        path = Path(path)
        path.write_bytes(self.to_bytes())
        return path


class PlotArea:
    """Maps data coordinates onto a pixel rectangle of a surface."""

    def __init__(self, left: float, top: float, width: float, height: float,
                 x_range: Tuple[float, float], y_range: Tuple[float, float]) -> None:
        if not x_range[0] < x_range[1] or not y_range[0] < y_range[1]:
            raise ValueError(f"Empty axis range: x={x_range}, y={y_range}")
        self.left = left
        self.top = top
        self.width = width
        self.height = height
        self.x_range = x_range
        self.y_range = y_range

    @property
    def right(self) -> float:
        return self.left + self.width

    @property
    def bottom(self) -> float:
        return self.top + self.height

    def px(self, x: float) -> float:
        lo, hi = self.x_range
        return self.left + (x - lo) / (hi - lo) * self.width

    def py(self, y: float) -> float:
        lo, hi = self.y_range
        return self.bottom - (y - lo) / (hi - lo) * self.height
