"""Positioned menus and hit testing.

Two menu shapes share one coordinate convention: menu-local cm, x to the
right, y down, origin at the menu center (circular) or tracked as an
explicit origin corner (grid).  Angles are degrees clockwise from 12
o'clock, so slice 0 of an n-slice circular menu spans [0, 360/n) starting
straight up.

Boundary tie-breaks, chosen once and used everywhere:
  * angular intervals are half-open [start, end)
  * radially, r = inner_radius belongs to the crossing band
  * r = center_region_radius belongs to the slice interior
  * shared grid cell edges belong to the lower-index cell
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from gazecross.geometry import (
    GeometryConfig,
    crossing_menu_radius,
    grid_dims,
    max_slices,
    object_size_for_menus,
)

Point = tuple[float, float]


class CapacityError(ValueError):
    """Raised when a menu cannot hold the requested number of items."""


# ---------------------------------------------------------------------------
# regions

class Region:
    """Tagged result of a hit test.

    Exactly one region matches any point.  Circular layouts produce
    center_region / slice_interior / crossing_band / outside; grid
    layouts produce cell / center_cell / no_hit (an empty cell) /
    outside.
    """

    SLICE_INTERIOR = "slice_interior"
    CROSSING_BAND = "crossing_band"
    OUTSIDE = "outside"
    CENTER_REGION = "center_region"
    CELL = "cell"
    CENTER_CELL = "center_cell"
    NO_HIT = "no_hit"

    __slots__ = ("kind", "label")

    def __init__(self, kind: str, label: str | None = None):
        self.kind = kind
        self.label = label

    def __eq__(self, other):
        return (isinstance(other, Region)
                and self.kind == other.kind and self.label == other.label)

    def __hash__(self):
        return hash((self.kind, self.label))

    def __repr__(self):
        if self.label is None:
            return f"Region({self.kind})"
        return f"Region({self.kind}, {self.label!r})"

    @classmethod
    def slice_interior(cls, label: str) -> "Region":
        return cls(cls.SLICE_INTERIOR, label)

    @classmethod
    def crossing_band(cls, label: str) -> "Region":
        return cls(cls.CROSSING_BAND, label)

    @classmethod
    def outside(cls) -> "Region":
        return cls(cls.OUTSIDE)

    @classmethod
    def center_region(cls) -> "Region":
        return cls(cls.CENTER_REGION)

    @classmethod
    def cell(cls, label: str) -> "Region":
        return cls(cls.CELL, label)

    @classmethod
    def center_cell(cls) -> "Region":
        return cls(cls.CENTER_CELL)

    @classmethod
    def no_hit(cls) -> "Region":
        return cls(cls.NO_HIT)


# ---------------------------------------------------------------------------
# circular layout

@dataclass(frozen=True)
class Slice:
    label: str
    start_angle_deg: float
    end_angle_deg: float

    @property
    def bisector_deg(self) -> float:
        return (self.start_angle_deg + self.end_angle_deg) / 2.0


@dataclass(frozen=True)
class DiscTarget:
    label: str
    center: Point
    radius_cm: float


@dataclass(frozen=True)
class CircularMenuLayout:
    center: Point
    inner_radius_cm: float
    band_width_cm: float
    center_region_radius_cm: float
    slices: tuple[Slice, ...]
    disc_targets: tuple[DiscTarget, ...]

    def slice_for(self, label: str) -> Slice:
        for s in self.slices:
            if s.label == label:
                return s
        raise KeyError(label)

    def disc_for(self, label: str) -> DiscTarget:
        for d in self.disc_targets:
            if d.label == label:
                return d
        raise KeyError(label)


def direction(angle_deg: float) -> Point:
    """Unit vector for an angle in the clockwise-from-12-o'clock convention."""
    a = math.radians(angle_deg)
    return (math.sin(a), -math.cos(a))


def point_angle_deg(center: Point, p: Point) -> float:
    """Angle of p as seen from center, in [0, 360)."""
    dx = p[0] - center[0]
    dy = p[1] - center[1]
    a = math.degrees(math.atan2(dx, -dy))
    return a % 360.0


def build_circular_layout(items: list[str], geometry: GeometryConfig,
                          band_width_cm: float | None = None,
                          inner_radius_cm: float | None = None,
                          ) -> CircularMenuLayout:
    """Circular crossing menu: n equal slices, a disc target per slice.

    The inner radius defaults to crossing_menu_radius for the item count;
    passing inner_radius_cm pins the footprint instead, in which case the
    item count is checked against the circle's slice capacity.  The
    crossing band and the disc targets sit immediately outside the inner
    circle; band width defaults to one comfortable object size.
    """
    n = len(items)
    if n < 1:
        raise ValueError("need at least one item")
    if len(set(items)) != n:
        raise ValueError("item labels must be unique")
    obj = object_size_for_menus(geometry)
    band = obj if band_width_cm is None else band_width_cm
    if band <= 0:
        raise ValueError("band_width_cm must be > 0")
    radius = (crossing_menu_radius(obj, n)
              if inner_radius_cm is None else inner_radius_cm)
    if radius <= 0:
        raise ValueError("inner_radius_cm must be > 0")
    # The tan-based radius and the asin-based count differ by one for the
    # same circle, so a menu built from its own derived radius sits at
    # limit = max_slices + 1 exactly.
    limit = max_slices(radius, obj) + 1
    if n > limit:
        raise CapacityError(
            f"{n} items exceed the {limit}-item capacity of a "
            f"{radius:.2f} cm menu at {obj:.2f} cm object size")

    width = 360.0 / n
    slices = []
    discs = []
    disc_r = obj / 2.0
    disc_dist = radius + band + disc_r
    for i, label in enumerate(items):
        start = i * width
        end = (i + 1) * width
        bis = direction((start + end) / 2.0)
        slices.append(Slice(label, start, end))
        discs.append(DiscTarget(label, (bis[0] * disc_dist, bis[1] * disc_dist),
                                disc_r))
    return CircularMenuLayout(
        center=(0.0, 0.0),
        inner_radius_cm=radius,
        band_width_cm=band,
        center_region_radius_cm=min(obj, radius / 2.0),
        slices=tuple(slices),
        disc_targets=tuple(discs),
    )


def slice_index_at(layout: CircularMenuLayout, angle_deg: float) -> int:
    width = 360.0 / len(layout.slices)
    return min(int((angle_deg % 360.0) / width), len(layout.slices) - 1)


def slice_point(layout: CircularMenuLayout, label: str,
                radial_fraction: float = 0.6) -> Point:
    """A point inside a slice, on its bisector at a fraction of the radius."""
    s = layout.slice_for(label)
    d = direction(s.bisector_deg)
    r = layout.inner_radius_cm * radial_fraction
    return (layout.center[0] + d[0] * r, layout.center[1] + d[1] * r)


# ---------------------------------------------------------------------------
# grid layout

@dataclass(frozen=True)
class Cell:
    label: str | None
    row: int
    col: int
    is_center: bool

    def rect(self, layout: "GridMenuLayout") -> tuple[float, float, float, float]:
        s = layout.cell_size_cm
        return (layout.origin[0] + self.col * s,
                layout.origin[1] + self.row * s, s, s)


@dataclass(frozen=True)
class GridMenuLayout:
    origin: Point
    cell_size_cm: float
    cols: int
    rows: int
    cells: tuple[Cell, ...]
    center_cell: tuple[int, int]

    @property
    def width_cm(self) -> float:
        return self.cols * self.cell_size_cm

    @property
    def height_cm(self) -> float:
        return self.rows * self.cell_size_cm

    def cell_at(self, row: int, col: int) -> Cell:
        return self.cells[row * self.cols + col]

    def cell_for(self, label: str) -> Cell:
        for c in self.cells:
            if c.label == label:
                return c
        raise KeyError(label)

    def cell_center(self, label: str) -> Point:
        c = self.cell_for(label)
        s = self.cell_size_cm
        return (self.origin[0] + (c.col + 0.5) * s,
                self.origin[1] + (c.row + 0.5) * s)


def build_grid_layout(items: list[str],
                      geometry: GeometryConfig) -> GridMenuLayout:
    """Dwell grid menu: 3:1 grid of square cells around a center text slot.

    Items fill cells row-major in the given order, skipping the center;
    leftover cells stay empty.  The grid is centered on the origin of the
    menu-local frame.
    """
    n = len(items)
    if n < 1:
        raise ValueError("need at least one item")
    if len(set(items)) != n:
        raise ValueError("item labels must be unique")
    obj = object_size_for_menus(geometry)
    width, height = grid_dims(obj, n)
    rows = round(height / obj)
    cols = 3 * rows
    center = (rows // 2, cols // 2)
    cells = []
    it = iter(items)
    for row in range(rows):
        for col in range(cols):
            if (row, col) == center:
                cells.append(Cell(None, row, col, True))
            else:
                cells.append(Cell(next(it, None), row, col, False))
    return GridMenuLayout(
        origin=(-width / 2.0, -height / 2.0),
        cell_size_cm=obj,
        cols=cols,
        rows=rows,
        cells=tuple(cells),
        center_cell=center,
    )


# ---------------------------------------------------------------------------
# hit testing

def _hit_circular(layout: CircularMenuLayout, p: Point) -> Region:
    dx = p[0] - layout.center[0]
    dy = p[1] - layout.center[1]
    r = math.hypot(dx, dy)
    if r >= layout.inner_radius_cm + layout.band_width_cm:
        return Region.outside()
    if r >= layout.inner_radius_cm:
        label = layout.slices[slice_index_at(layout,
                                             point_angle_deg(layout.center, p))].label
        return Region.crossing_band(label)
    if r < layout.center_region_radius_cm:
        return Region.center_region()
    label = layout.slices[slice_index_at(layout,
                                         point_angle_deg(layout.center, p))].label
    return Region.slice_interior(label)


def _grid_axis_index(coord: float, size: float, count: int) -> int | None:
    idx = math.floor(coord / size)
    # exact boundary hits belong to the lower-index cell
    if idx > 0 and coord == idx * size:
        idx -= 1
    if 0 <= idx < count and 0.0 <= coord <= count * size:
        return idx
    return None


def _hit_grid(layout: GridMenuLayout, p: Point) -> Region:
    rel_x = p[0] - layout.origin[0]
    rel_y = p[1] - layout.origin[1]
    col = _grid_axis_index(rel_x, layout.cell_size_cm, layout.cols)
    row = _grid_axis_index(rel_y, layout.cell_size_cm, layout.rows)
    if col is None or row is None:
        return Region.outside()
    cell = layout.cell_at(row, col)
    if cell.is_center:
        return Region.center_cell()
    if cell.label is None:
        return Region.no_hit()
    return Region.cell(cell.label)


def hit_test(layout: CircularMenuLayout | GridMenuLayout, p: Point) -> Region:
    """Classify a point against a layout; every point gets exactly one Region."""
    if isinstance(layout, CircularMenuLayout):
        return _hit_circular(layout, p)
    return _hit_grid(layout, p)


def segment_crossing(layout: CircularMenuLayout, p0: Point,
                     p1: Point) -> str | None:
    """Label of the slice the directed segment p0→p1 exits outward through.

    The trigger circle is r = inner_radius.  Sparse saccade samples may
    jump the whole crossing band in one step, so any outward intersection
    with the circle counts, including a segment that enters and leaves
    within one step.  Tangent grazes and purely interior segments return
    None.
    """
    cx, cy = layout.center
    rr = layout.inner_radius_cm
    dx = p1[0] - p0[0]
    dy = p1[1] - p0[1]
    fx = p0[0] - cx
    fy = p0[1] - cy
    a = dx * dx + dy * dy
    if a == 0.0:
        return None
    b = 2.0 * (fx * dx + fy * dy)
    c = fx * fx + fy * fy - rr * rr
    disc = b * b - 4.0 * a * c
    if disc <= 0.0:
        return None
    # larger root is the outward crossing (|p(t) - center| increasing)
    t_out = (-b + math.sqrt(disc)) / (2.0 * a)
    if not 0.0 < t_out <= 1.0:
        return None
    exit_point = (p0[0] + t_out * dx, p0[1] + t_out * dy)
    angle = point_angle_deg(layout.center, exit_point)
    return layout.slices[slice_index_at(layout, angle)].label


# ---------------------------------------------------------------------------
# serialization

def layout_to_json(layout: CircularMenuLayout | GridMenuLayout) -> dict:
    """Plain-dict form of a layout, lengths in cm, angles in degrees."""
    if isinstance(layout, CircularMenuLayout):
        return {
            "kind": "circular",
            "center": list(layout.center),
            "inner_radius_cm": layout.inner_radius_cm,
            "band_width_cm": layout.band_width_cm,
            "center_region_radius_cm": layout.center_region_radius_cm,
            "slices": [
                {"label": s.label, "start_angle_deg": s.start_angle_deg,
                 "end_angle_deg": s.end_angle_deg}
                for s in layout.slices
            ],
            "disc_targets": [
                {"label": d.label, "center": list(d.center),
                 "radius_cm": d.radius_cm}
                for d in layout.disc_targets
            ],
        }
    return {
        "kind": "grid",
        "origin": list(layout.origin),
        "cell_size_cm": layout.cell_size_cm,
        "cols": layout.cols,
        "rows": layout.rows,
        "center_cell": list(layout.center_cell),
        "cells": [
            {"label": c.label, "row": c.row, "col": c.col,
             "is_center": c.is_center}
            for c in layout.cells
        ],
    }
