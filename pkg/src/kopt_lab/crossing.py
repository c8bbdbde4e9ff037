"""Crossing detection between two tours and the crossing-free subdivision.

Every crossing between an edge of T and an edge of S is a rational point;
adding these points to the instance and subdividing both tours yields a pair
of tours tracing the same polygons (hence the same lengths) with no
remaining crossings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geometry import Cross, Disjoint, Overlap, Point, SharedEndpoint, Touch, segment_relation
from .tour import Instance, Tour, is_simple


class GeneralPositionViolation(ValueError):
    def __init__(self, t_edge, s_edge, relation):
        self.t_edge = t_edge
        self.s_edge = s_edge
        self.relation = relation
        super().__init__(
            f"tour edges {t_edge} and {s_edge} are in relation {type(relation).__name__}, "
            "which the crossing-free transform refuses to resolve"
        )


@dataclass
class CrossingFreePair:
    instance: Instance          # extended instance V'
    tprime: Tour
    sprime: Tour
    crossings: int
    # provenance[i] is ("original", old_index) or ("crossing", (t_edge, s_edge))
    provenance: list


def find_crossings(inst: Instance, t: Tour, s: Tour) -> list[tuple[tuple, tuple, Point]]:
    """All (T-edge, S-edge, point) crossings; Touch/Overlap raise."""
    for tour in (t, s):
        verdict = is_simple(inst, tour)
        if not verdict.simple:
            raise ValueError(f"tour is not simple; crossing pair {verdict.witness}")
    out = []
    s_edges = s.edges()
    for te in t.edges():
        seg_t = inst.segment(*te)
        for se in s_edges:
            if frozenset(te) == frozenset(se):
                continue  # shared identical edge, not a crossing
            rel = segment_relation(seg_t, inst.segment(*se))
            if isinstance(rel, Cross):
                out.append((te, se, rel.point))
            elif isinstance(rel, (Touch, Overlap)):
                raise GeneralPositionViolation(te, se, rel)
    return out


def _edge_param(a: Point, b: Point, p: Point) -> Fraction:
    """Position of p along segment a->b, as an exact rational in (0, 1)."""
    if b.x != a.x:
        return (p.x - a.x) / (b.x - a.x)
    return (p.y - a.y) / (b.y - a.y)


def make_crossing_free(inst: Instance, t: Tour, s: Tour) -> CrossingFreePair:
    """Subdivide both tours at all mutual crossings (merged rational points)."""
    crossings = find_crossings(inst, t, s)

    new_points: dict[Point, tuple] = {}  # point -> provenance tag
    splits_t: dict[tuple, list[Point]] = {}
    splits_s: dict[tuple, list[Point]] = {}
    for te, se, p in crossings:
        new_points.setdefault(p, ("crossing", (te, se)))
        splits_t.setdefault(te, []).append(p)
        splits_s.setdefault(se, []).append(p)

    points = list(inst.points)
    provenance = [("original", i) for i in range(inst.n)]
    index_of = {}
    for p in sorted(new_points):
        index_of[p] = len(points)
        points.append(p)
        provenance.append(new_points[p])

    vprime = Instance(points, inst.norm, name=f"{inst.name}+crossings" if inst.name else "")

    def subdivide(tour: Tour, splits: dict) -> Tour:
        order = []
        for u, v in tour.edges():
            order.append(u)
            pts = splits.get((u, v), [])
            a, b = inst.points[u], inst.points[v]
            for p in sorted(set(pts), key=lambda q: _edge_param(a, b, q)):
                order.append(index_of[p])
        return Tour(tuple(order))

    return CrossingFreePair(
        instance=vprime,
        tprime=subdivide(t, splits_t),
        sprime=subdivide(s, splits_s),
        crossings=len(crossings),
        provenance=provenance,
    )
