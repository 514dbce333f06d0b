"""Menu capacity formulas.

Everything here is a pure function of physical quantities: how large a
letter container must appear, how big a circular crossing menu has to be
to hold n items, how many slices a circle of a given radius can carry,
and the footprint of a 3:1 dwell grid.  Angles cross the API boundary in
degrees and are converted to radians internally.

Conventions:
  * lengths in cm, angles in degrees, counts as ints
  * the letter container is char_size * (1 + 2 * margin_factor) tall,
    i.e. 3x the glyph with the default one-glyph margin
  * menu sizing uses the comfortable object chord truncated to 0.01 cm
    (see object_size_for_menus), which reproduces the published worked
    example of 5.37 cm radius and 11.7 x 3.9 cm grid
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Tolerance for floor() on quantities derived from cm values; keeps
# exact-looking ratios like 11.7 / 1.3 from landing just under an integer.
_FLOOR_EPS = 1e-9


def _check_finite(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class GeometryConfig:
    """Physical parameters feeding every capacity formula.

    Defaults are the working values of the reference setup: 12 pt glyphs
    (0.45 cm), a user at 55 cm, a remote tracker with 1.3 degrees of
    combined accuracy/precision uncertainty, and a comfortable viewing
    band of 50 to 63.5 cm.
    """

    char_size_cm: float = 0.45
    margin_factor: float = 1.0
    viewing_distance_cm: float = 55.0
    tracker_uncertainty_deg: float = 1.3
    comfortable_distance_range_cm: tuple[float, float] = (50.0, 63.5)

    def __post_init__(self) -> None:
        if self.char_size_cm <= 0:
            raise ValueError("char_size_cm must be > 0")
        if self.viewing_distance_cm <= 0:
            raise ValueError("viewing_distance_cm must be > 0")
        if self.tracker_uncertainty_deg <= 0:
            raise ValueError("tracker_uncertainty_deg must be > 0")
        if self.margin_factor < 0:
            raise ValueError("margin_factor must be >= 0")
        low, high = self.comfortable_distance_range_cm
        if not low < high:
            raise ValueError("comfortable range must satisfy low < high")

    @property
    def comfortable_distance_mean_cm(self) -> float:
        low, high = self.comfortable_distance_range_cm
        return (low + high) / 2.0


@dataclass(frozen=True)
class CapacityResult:
    """One row of the capacity table for a (config, n_items) pair."""

    vision_angle_deg: float
    obj_size_cm: float
    crossing_radius_cm: float
    max_slices: int
    grid_width_cm: float
    grid_height_cm: float
    grid_capacity: int
    usable: bool


def vision_angle(char_size_cm: float, reading_distance_cm: float,
                 margin_factor: float = 1.0) -> float:
    """Visual angle subtended by one letter container at a reading distance.

    angle = 2 * atan((container / 2) / distance), container = 3 * char size
    for the default one-glyph margin.  Returns degrees.
    """
    _check_finite(char_size_cm=char_size_cm,
                  reading_distance_cm=reading_distance_cm)
    if char_size_cm < 0:
        raise ValueError("char_size_cm must be >= 0")
    if reading_distance_cm <= 0:
        raise ValueError("reading_distance_cm must be > 0")
    container = char_size_cm * (1.0 + 2.0 * margin_factor)
    return math.degrees(2.0 * math.atan((container / 2.0) / reading_distance_cm))


def min_object_size(angle_deg: float, distance_cm: float) -> float:
    """Chord subtended by angle_deg at distance_cm: 2 * D * tan(angle/2)."""
    _check_finite(angle_deg=angle_deg, distance_cm=distance_cm)
    if not 0.0 <= angle_deg < 180.0:
        raise ValueError("angle_deg must be in [0, 180)")
    if distance_cm < 0:
        raise ValueError("distance_cm must be >= 0")
    return 2.0 * distance_cm * math.tan(math.radians(angle_deg) / 2.0)


def crossing_menu_radius(obj_size_cm: float, n_items: int) -> float:
    """Radius of a circular menu holding n_items slices of obj_size_cm.

    radius = obj / (4 * tan(360 / (4 * n))), angle in degrees.  The
    quarter-slice angle is capped at 45 degrees so the degenerate n = 1
    menu keeps the obj/4 value the n = 2 geometry gives instead of
    hitting the tangent pole.
    """
    _check_finite(obj_size_cm=obj_size_cm)
    if n_items < 1:
        raise ValueError("n_items must be >= 1")
    if obj_size_cm <= 0:
        raise ValueError("obj_size_cm must be > 0")
    quarter_slice_deg = min(360.0 / (4.0 * n_items), 45.0)
    return obj_size_cm / (4.0 * math.tan(math.radians(quarter_slice_deg)))


def max_slices(radius_cm: float, obj_size_cm: float) -> int:
    """Maximal slice count for objects of obj_size_cm on a circle of radius_cm.

    Evaluates the chain
        theta      = 2 * asin((obj / 2) / (2 * radius))      [degrees]
        arc_length = (perimeter / 360) * 2 * theta
        slices     = floor(perimeter / arc_length)
    literally, including the doubled theta in the arc length; callers
    pairing this with crossing_menu_radius should expect the two to
    disagree by one (tan vs asin conventions).
    """
    _check_finite(radius_cm=radius_cm, obj_size_cm=obj_size_cm)
    if radius_cm <= 0:
        raise ValueError("radius_cm must be > 0")
    if obj_size_cm <= 0:
        raise ValueError("obj_size_cm must be > 0")
    ratio = (obj_size_cm / 2.0) / (2.0 * radius_cm)
    if ratio > 1.0:
        raise ValueError("object larger than menu: obj_size_cm > 4 * radius_cm")
    perimeter = 2.0 * math.pi * radius_cm
    theta_deg = math.degrees(2.0 * math.asin(ratio))
    arc_length = (perimeter / 360.0) * 2.0 * theta_deg
    return math.floor(perimeter / arc_length + _FLOOR_EPS)


def max_grid_elements(width_cm: float, obj_size_cm: float) -> int:
    """Cell capacity of a 3:1 grid of width_cm filled with square objects.

    floor(W / obj) * floor(floor(W / obj) / 3).  The count includes the
    reserved center slot, so usable items are capacity - 1.
    """
    _check_finite(width_cm=width_cm, obj_size_cm=obj_size_cm)
    if width_cm <= 0 or obj_size_cm <= 0:
        raise ValueError("width_cm and obj_size_cm must be > 0")
    cols = math.floor(width_cm / obj_size_cm + _FLOOR_EPS)
    return cols * (cols // 3)


def grid_dims(obj_size_cm: float, n_items: int) -> tuple[float, float]:
    """(width, height) of the smallest 3:1 grid with >= n_items + 1 cells.

    Rows = k, columns = 3k, with k the smallest integer satisfying
    3 * k^2 >= n_items + 1 (one cell is reserved for the center slot).
    """
    _check_finite(obj_size_cm=obj_size_cm)
    if n_items < 1:
        raise ValueError("n_items must be >= 1")
    if obj_size_cm <= 0:
        raise ValueError("obj_size_cm must be > 0")
    rows = math.ceil(math.sqrt((n_items + 1) / 3.0))
    while 3 * rows * rows < n_items + 1:  # guard sqrt rounding
        rows += 1
    return (3 * rows * obj_size_cm, rows * obj_size_cm)


def comfortable_object_size(config: GeometryConfig) -> float:
    """Exact comfortable object chord for a config.

    The vision angle is taken at the midpoint of the comfortable distance
    band; the chord is evaluated at the actual viewing distance.
    """
    angle = vision_angle(config.char_size_cm,
                         config.comfortable_distance_mean_cm,
                         config.margin_factor)
    return min_object_size(angle, config.viewing_distance_cm)


def object_size_for_menus(config: GeometryConfig) -> float:
    """Comfortable object chord truncated to 0.01 cm, used for menu sizing.

    Truncation (not rounding) is what makes the default config reproduce
    the published 5.37 cm radius and 11.7 x 3.9 cm grid: the exact chord
    is 1.3084 cm, and the menus were sized from 1.30.
    """
    return math.floor(comfortable_object_size(config) * 100.0 + _FLOOR_EPS) / 100.0


def capacity_report(config: GeometryConfig, n_items: int) -> CapacityResult:
    """Assemble the full capacity row for a config and item count."""
    angle = vision_angle(config.char_size_cm,
                         config.comfortable_distance_mean_cm,
                         config.margin_factor)
    obj_exact = min_object_size(angle, config.viewing_distance_cm)
    obj_sizing = object_size_for_menus(config)
    radius = crossing_menu_radius(obj_sizing, n_items)
    width, height = grid_dims(obj_sizing, n_items)
    return CapacityResult(
        vision_angle_deg=angle,
        obj_size_cm=obj_exact,
        crossing_radius_cm=radius,
        max_slices=max_slices(radius, obj_sizing),
        grid_width_cm=width,
        grid_height_cm=height,
        grid_capacity=max_grid_elements(width, obj_sizing),
        usable=angle >= config.tracker_uncertainty_deg,
    )
