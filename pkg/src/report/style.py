from enum import Enum
from typing import Dict, Tuple


class PlotPalette(Enum):
    SCREEN = {
        "background": (255, 255, 255),
        "axis": (40, 40, 40),
        "grid": (225, 225, 225),
        "box_fill": (211, 211, 211),   # Light gray
        "box_edge": (120, 120, 120),
        "median": (60, 60, 60),
        "point": (41, 128, 185),       # Blue
        "point_outside": (231, 76, 60),  # Red
        "stripe": (189, 195, 199),
        "mu0": (127, 140, 141),        # Gray
        "curve": (39, 174, 96),        # Green
        "text": (44, 62, 80),
    }

    PRINT = {
        "background": (255, 255, 255),
        "axis": (0, 0, 0),
        "grid": (235, 235, 235),
        "box_fill": (220, 220, 220),
        "box_edge": (80, 80, 80),
        "median": (0, 0, 0),
        "point": (0, 0, 0),
        "point_outside": (0, 0, 0),
        "stripe": (200, 200, 200),
        "mu0": (90, 90, 90),
        "curve": (0, 0, 0),
        "text": (0, 0, 0),
    }


class FontSize(Enum):
    TITLE = 16
    LABEL = 13
    TICK = 11
    LEGEND = 11


class PlotStyle:
    def __init__(self, palette: PlotPalette = PlotPalette.SCREEN):
        self.palette = palette
        self.colors = palette.value
        self.font_family = "Helvetica, Arial, sans-serif"
        self.stripe_opacity = 0.45

    def get_font_size(self, size: FontSize) -> int:
        """Get a font size in pixels"""
        return size.value

    def get_color(self, color_name: str) -> str:
        """Get a palette color as an SVG hex string"""
        return rgb_hex(self.colors[color_name])

    def set_palette(self, palette: PlotPalette):
        """Change the current color palette"""
        self.palette = palette
        self.colors = palette.value


def rgb_hex(color: Tuple[int, int, int]) -> str:
    return "#{:02x}{:02x}{:02x}".format(*color)


class StyleManager:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(StyleManager, cls).__new__(cls)
            cls._instance.current_style = PlotStyle()
        return cls._instance

    @classmethod
    def get_instance(cls) -> 'StyleManager':
        return cls()

    def get_style(self) -> PlotStyle:
        return self.current_style

    def set_style(self, palette: PlotPalette):
        self.current_style.set_palette(palette)

    def palettes(self) -> Dict[str, PlotPalette]:
        return {p.name.lower(): p for p in PlotPalette}
