"""Exact planar predicates and p-norm metrics.

All topological predicates (orientation, segment intersection, containment)
work on exact rational coordinates, so downstream certificates never suffer
from floating-point misclassification.  Lengths are floating point except for
the 1-norm on integer/rational inputs, which stays exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence


class Point(NamedTuple):
    x: Fraction
    y: Fraction


class Point3(NamedTuple):
    x: float
    y: float
    z: float


def pt(x, y) -> Point:
    """Build a Point, normalizing coordinates to exact rationals."""
    return Point(Fraction(x), Fraction(y))


@dataclass(frozen=True)
class PNorm:
    """The p-norm, p >= 1.  p=1 has an exact integer/rational fast path."""

    p: float = 2

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"p-norm requires p >= 1, got {self.p}")

    @property
    def is_one(self) -> bool:
        return self.p == 1

    @property
    def is_two(self) -> bool:
        return self.p == 2


def pdist(norm: PNorm, a: Point, b: Point):
    """p-norm distance.  Exact (Fraction) for p=1, float otherwise."""
    dx = abs(a.x - b.x)
    dy = abs(a.y - b.y)
    if norm.is_one:
        return dx + dy
    if norm.is_two:
        return math.hypot(float(dx), float(dy))
    p = norm.p
    return (float(dx) ** p + float(dy) ** p) ** (1.0 / p)


def pdist3(a: Point3, b: Point3) -> float:
    """Euclidean distance in R^3 (metric support only, no 3-D predicates)."""
    return math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2)


def orientation(a: Point, b: Point, c: Point) -> int:
    """Sign of the cross product (b-a) x (c-a): +1 left turn, -1 right, 0 collinear."""
    d = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    return (d > 0) - (d < 0)


class Segment(NamedTuple):
    a: Point
    b: Point


# Segment relation verdicts.

class Disjoint(NamedTuple):
    pass


class SharedEndpoint(NamedTuple):
    point: Point


class Touch(NamedTuple):
    point: Point


class Cross(NamedTuple):
    point: Point


class Overlap(NamedTuple):
    segment: Segment


SegmentRelation = Disjoint | SharedEndpoint | Touch | Cross | Overlap


def _on_segment(s: Segment, p: Point) -> bool:
    """p collinear with s assumed; is p within the closed segment?"""
    return (min(s.a.x, s.b.x) <= p.x <= max(s.a.x, s.b.x)
            and min(s.a.y, s.b.y) <= p.y <= max(s.a.y, s.b.y))


def _line_intersection(e: Segment, f: Segment) -> Point:
    """Intersection point of the two supporting lines (not parallel)."""
    x1, y1, x2, y2 = e.a.x, e.a.y, e.b.x, e.b.y
    x3, y3, x4, y4 = f.a.x, f.a.y, f.b.x, f.b.y
    den = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4)
    t = ((x1 - x3) * (y3 - y4) - (y1 - y3) * (x3 - x4)) / den
    return Point(x1 + t * (x2 - x1), y1 + t * (y2 - y1))


def segment_relation(e: Segment, f: Segment) -> SegmentRelation:
    """Exact classification of how two closed segments intersect."""
    if e.a == e.b or f.a == f.b:
        raise ValueError("degenerate segment")

    o1 = orientation(f.a, f.b, e.a)
    o2 = orientation(f.a, f.b, e.b)
    o3 = orientation(e.a, e.b, f.a)
    o4 = orientation(e.a, e.b, f.b)

    if o1 == 0 and o2 == 0:
        # Collinear: compare 1-D parameters along the dominant axis.
        axis = 0 if e.a.x != e.b.x else 1
        ea, eb = sorted((e.a[axis], e.b[axis]))
        fa, fb = sorted((f.a[axis], f.b[axis]))
        lo, hi = max(ea, fa), min(eb, fb)
        if lo > hi:
            return Disjoint()
        if lo == hi:
            # Touching at a single collinear point: an endpoint of both.
            p = e.a if e.a[axis] == lo else e.b
            return SharedEndpoint(p)
        def at(seg, v):
            return seg.a if seg.a[axis] == v else (seg.b if seg.b[axis] == v else None)
        lo_pt = at(e, lo) or at(f, lo)
        hi_pt = at(e, hi) or at(f, hi)
        return Overlap(Segment(lo_pt, hi_pt))

    # Endpoint lying on the other segment (at most one such point when not collinear).
    touch_pt = None
    if o1 == 0 and _on_segment(f, e.a):
        touch_pt = e.a
    elif o2 == 0 and _on_segment(f, e.b):
        touch_pt = e.b
    elif o3 == 0 and _on_segment(e, f.a):
        touch_pt = f.a
    elif o4 == 0 and _on_segment(e, f.b):
        touch_pt = f.b
    if touch_pt is not None:
        if touch_pt in (e.a, e.b) and touch_pt in (f.a, f.b):
            return SharedEndpoint(touch_pt)
        return Touch(touch_pt)

    if o1 != o2 and o3 != o4:
        return Cross(_line_intersection(e, f))
    return Disjoint()


class NonSimplePolygonError(ValueError):
    pass


def polygon_edges(poly: Sequence[Point]) -> list[Segment]:
    return [Segment(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly))]


def is_simple_polygon(poly: Sequence[Point]) -> bool:
    n = len(poly)
    if n < 3 or len(set(poly)) != n:
        return False
    edges = polygon_edges(poly)
    for i in range(n):
        for j in range(i + 1, n):
            rel = segment_relation(edges[i], edges[j])
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                if not isinstance(rel, SharedEndpoint):
                    return False
            elif not isinstance(rel, Disjoint):
                return False
    return True


def point_in_polygon(p: Point, poly: Sequence[Point], *, assume_simple: bool = False) -> str:
    """Exact ray-casting verdict: 'interior', 'boundary', or 'exterior'.

    The polygon must be simple; pass assume_simple=True to skip the O(n^2)
    verification when the caller already knows it.
    """
    if not assume_simple and not is_simple_polygon(poly):
        raise NonSimplePolygonError("point_in_polygon requires a simple polygon")

    for seg in polygon_edges(poly):
        if orientation(seg.a, seg.b, p) == 0 and _on_segment(seg, p):
            return "boundary"

    # Horizontal ray towards +x; count strict crossings with exact rationals.
    inside = False
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if (a.y > p.y) != (b.y > p.y):
            x_int = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if x_int > p.x:
                inside = not inside
    return "interior" if inside else "exterior"


def bounding_box(points: Sequence[Point]) -> tuple[Fraction, Fraction]:
    """Side lengths (d_x, d_y) of the axis-aligned bounding rectangle."""
    if not points:
        raise ValueError("bounding_box of empty point set")
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    return max(xs) - min(xs), max(ys) - min(ys)


def perimeter_lower_bound(poly: Sequence[Point], norm: PNorm):
    """2 * (d_x^p + d_y^p)^(1/p) for the polygon's bounding box.

    Any closed walk through the polygon's vertices has p-perimeter at least
    this value; callers compare it against the measured perimeter.
    """
    if len(poly) < 2:
        raise ValueError("need at least 2 points")
    dx, dy = bounding_box(poly)
    return 2 * pdist(norm, pt(0, 0), Point(dx, dy))
