"""Tours, 2-Opt/3-Opt local search, k-optimality checks, exact small solvers.

Everything is parametrized by the instance's distance oracle, so 2-D p-norm
instances and 3-D Euclidean instances share the same engine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .geometry import (
    Cross,
    Disjoint,
    PNorm,
    Point,
    Point3,
    Segment,
    SharedEndpoint,
    orientation,
    pdist,
    pdist3,
    segment_relation,
)

DEFAULT_GAIN_EPS = 1e-9


class Instance:
    """A finite set of distinct points plus a norm; the distance oracle."""

    def __init__(self, points: Sequence, norm: PNorm = PNorm(2), name: str = ""):
        points = list(points)
        if len(set(points)) != len(points):
            raise ValueError("instance points must be pairwise distinct")
        self.points = points
        self.norm = norm
        self.name = name
        self.dim = 3 if points and isinstance(points[0], Point3) else 2
        if self.dim == 3 and not norm.is_two:
            raise ValueError("3-D instances support the Euclidean norm only")
        # Exact arithmetic applies for the 1-norm on integer coordinates.
        self.exact = (
            self.dim == 2
            and norm.is_one
            and all(p.x.denominator == 1 and p.y.denominator == 1 for p in points)
        )

    @property
    def n(self) -> int:
        return len(self.points)

    def dist(self, i: int, j: int):
        if self.dim == 3:
            return pdist3(self.points[i], self.points[j])
        return pdist(self.norm, self.points[i], self.points[j])

    def segment(self, i: int, j: int) -> Segment:
        return Segment(self.points[i], self.points[j])


class Tour(NamedTuple):
    """An oriented cycle given as a permutation of vertex indices."""

    order: tuple

    @property
    def n(self) -> int:
        return len(self.order)

    def edges(self):
        o = self.order
        return [(o[i], o[(i + 1) % len(o)]) for i in range(len(o))]

    def validate(self, inst: Instance):
        if sorted(self.order) != list(range(inst.n)):
            raise ValueError("tour is not a permutation of the instance vertices")


class TwoMove(NamedTuple):
    """Replace directed tour edges at positions i < j; reverses the middle segment."""

    i: int
    j: int
    gain: float


def tour_length(inst: Instance, t: Tour):
    t.validate(inst)
    o = t.order
    return sum(inst.dist(o[i], o[(i + 1) % len(o)]) for i in range(len(o)))


def _gain_threshold(inst: Instance, removed_total) -> float:
    if inst.exact:
        return 0
    return DEFAULT_GAIN_EPS * float(removed_total)


def find_improving_2move(inst: Instance, t: Tour) -> Optional[TwoMove]:
    """First improving 2-move in lexicographic (i, j) scan order, if any."""
    o = t.order
    n = len(o)
    if inst.exact:
        # Integer fast path: avoids Fraction overhead on large exact scans.
        xs = [int(p.x) for p in inst.points]
        ys = [int(p.y) for p in inst.points]

        def d(u, v):
            return abs(xs[u] - xs[v]) + abs(ys[u] - ys[v])
    else:
        d = inst.dist
    for i in range(n - 1):
        a, b = o[i], o[i + 1]
        c_ab = d(a, b)
        j_hi = n if i > 0 else n - 1  # edges (i, j) must be non-adjacent in the cycle
        for j in range(i + 2, j_hi):
            x, y = o[j], o[(j + 1) % n]
            removed = c_ab + d(x, y)
            gain = removed - d(a, x) - d(b, y)
            if gain > _gain_threshold(inst, removed):
                return TwoMove(i, j, gain)
    return None


def apply_2move(t: Tour, m: TwoMove) -> Tour:
    o = t.order
    n = len(o)
    if not (0 <= m.i < m.j < n) or m.j == m.i + 1 or (m.i == 0 and m.j == n - 1):
        raise ValueError(f"invalid 2-move positions ({m.i}, {m.j}) for tour of size {n}")
    new = o[: m.i + 1] + tuple(reversed(o[m.i + 1 : m.j + 1])) + o[m.j + 1 :]
    return Tour(new)


def two_opt(inst: Instance, start: Tour) -> Tour:
    """Run the 2-Opt heuristic to a local optimum (first-improvement pivot)."""
    start.validate(inst)
    t = start
    while True:
        m = find_improving_2move(inst, t)
        if m is None:
            return t
        t = apply_2move(t, m)


class KOptVerdict(NamedTuple):
    optimal: bool
    witness: Optional[tuple]  # positions of the replaced edges, plus the new tour


def _find_improving_3move(inst: Instance, t: Tour):
    o = t.order
    n = len(o)
    d = inst.dist

    def seg(lo, hi):  # inclusive cyclic slice
        if lo <= hi:
            return o[lo : hi + 1]
        return o[lo:] + o[: hi + 1]

    for i, j, k in itertools.combinations(range(n), 3):
        s1 = seg(i + 1, j)
        s2 = seg(j + 1, k)
        s3 = seg((k + 1) % n, i)
        removed = d(o[i], o[i + 1]) + d(o[j], o[j + 1]) + d(o[k], o[(k + 1) % n])
        eps = _gain_threshold(inst, removed)
        for xa, ya in ((s1, s2), (s2, s1)):
            for xr in (False, True):
                for yr in (False, True):
                    if (xa, xr, yr) == (s1, False, False):
                        continue  # identity reconnection
                    x = tuple(reversed(xa)) if xr else xa
                    y = tuple(reversed(ya)) if yr else ya
                    added = d(s3[-1], x[0]) + d(x[-1], y[0]) + d(y[-1], s3[0])
                    if removed - added > eps:
                        return (i, j, k), Tour(tuple(s3) + tuple(x) + tuple(y))
    return None


def is_k_optimal(inst: Instance, t: Tour, k: int) -> KOptVerdict:
    """Exhaustively check k-optimality for k in {2, 3}."""
    t.validate(inst)
    if k == 2:
        m = find_improving_2move(inst, t)
        if m is None:
            return KOptVerdict(True, None)
        return KOptVerdict(False, ((m.i, m.j), apply_2move(t, m)))
    if k == 3:
        if inst.n > 400:
            raise ValueError("3-optimality scan limited to n <= 400")
        hit = _find_improving_3move(inst, t)
        if hit is None:
            return KOptVerdict(True, None)
        return KOptVerdict(False, hit)
    raise ValueError(f"unsupported k={k}; only k in {{2, 3}}")


def _held_karp(inst: Instance) -> tuple[Tour, object]:
    n = inst.n
    dist = [[inst.dist(i, j) for j in range(n)] for i in range(n)]
    full = 1 << (n - 1)  # subsets of vertices 1..n-1, vertex 0 is the anchor
    INF = float("inf")
    dp = [dict() for _ in range(full)]
    for v in range(1, n):
        dp[1 << (v - 1)][v] = (dist[0][v], 0)
    for mask in range(1, full):
        row = dp[mask]
        if not row:
            continue
        for last, (cost, _) in list(row.items()):
            for v in range(1, n):
                bit = 1 << (v - 1)
                if mask & bit:
                    continue
                nmask = mask | bit
                ncost = cost + dist[last][v]
                cur = dp[nmask].get(v)
                if cur is None or ncost < cur[0]:
                    dp[nmask][v] = (ncost, last)
    best, best_last = INF, None
    for last, (cost, _) in dp[full - 1].items():
        total = cost + dist[last][0]
        if total < best:
            best, best_last = total, last
    order = [0]
    mask, last = full - 1, best_last
    chain = []
    while last != 0:
        chain.append(last)
        _, prev = dp[mask][last]
        mask ^= 1 << (last - 1)
        last = prev
    order += list(reversed(chain))
    return Tour(tuple(order)), best


def _brute_force_opt(inst: Instance) -> tuple[Tour, object]:
    n = inst.n
    best_t, best = None, None
    for perm in itertools.permutations(range(1, n)):
        t = Tour((0,) + perm)
        length = tour_length(inst, t)
        if best is None or length < best:
            best_t, best = t, length
    return best_t, best


def exact_opt(inst: Instance, cross_check: bool = False) -> tuple[Tour, object]:
    """Provably optimal tour via Held-Karp (n <= 18); optional brute-force cross-check."""
    if inst.n < 3:
        raise ValueError("need n >= 3")
    if inst.n > 18:
        raise ValueError(f"exact_opt limited to n <= 18, got {inst.n}")
    tour, length = _held_karp(inst)
    if cross_check:
        if inst.n > 9:
            raise ValueError("cross-check mode limited to n <= 9")
        _, bf_length = _brute_force_opt(inst)
        if abs(float(length) - float(bf_length)) > 1e-12 * max(1.0, abs(float(bf_length))):
            raise AssertionError(
                f"Held-Karp ({length}) disagrees with brute force ({bf_length})"
            )
    return tour, length


class SimpleVerdict(NamedTuple):
    simple: bool
    witness: Optional[tuple]  # pair of crossing tour edges


def is_simple(inst: Instance, t: Tour) -> SimpleVerdict:
    """No two tour edges intersect in a point interior to either segment."""
    if inst.dim != 2:
        raise ValueError("is_simple supports 2-D instances only")
    t.validate(inst)
    edges = t.edges()
    n = len(edges)
    for i in range(n):
        si = inst.segment(*edges[i])
        for j in range(i + 1, n):
            rel = segment_relation(si, inst.segment(*edges[j]))
            if not isinstance(rel, (Disjoint, SharedEndpoint)):
                return SimpleVerdict(False, (edges[i], edges[j]))
    return SimpleVerdict(True, None)


def is_degenerate(inst: Instance) -> bool:
    """True iff all points lie on one line (exact orientation tests)."""
    if inst.dim != 2:
        raise ValueError("is_degenerate supports 2-D instances only")
    pts = inst.points
    if len(pts) <= 2:
        return True
    a, b = pts[0], pts[1]
    return all(orientation(a, b, c) == 0 for c in pts[2:])
