"""Lattice polygons, integer convex lifts, regular subdivisions and their dual
tropical curves.

All combinatorics is exact: vertices are integer tuples, areas are twice-areas
(integers), and cell linear functions are solved with ``Fraction``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

Point = tuple[int, int]


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Sequence[int]]) -> list[Point]:
    """Monotone chain hull, counterclockwise, collinear points dropped."""
    pts = sorted({(int(p[0]), int(p[1])) for p in points})
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(int(x) // g for x in v)


def lattice_length(p: Point, q: Point) -> int:
    return math.gcd(abs(q[0] - p[0]), abs(q[1] - p[1]))


@dataclass(frozen=True)
class LatticePolygon:
    """Convex lattice polygon with vertices in counterclockwise order.

    A single vertex or a segment is allowed as a *face* (used for truncations)
    but ``twice_area`` is zero for those and 2d-only operations reject them.
    """

    vertices: tuple[Point, ...]

    @classmethod
    def hull(cls, points: Iterable[Sequence[int]]) -> "LatticePolygon":
        v = convex_hull(points)
        if not v:
            raise ValueError("empty point set has no convex hull")
        return cls(tuple(v))

    @property
    def dim(self) -> int:
        return min(len(self.vertices) - 1, 2)

    def twice_area(self) -> int:
        v = self.vertices
        if len(v) < 3:
            return 0
        s = 0
        for i in range(len(v)):
            x0, y0 = v[i]
            x1, y1 = v[(i + 1) % len(v)]
            s += x0 * y1 - x1 * y0
        return s

    def require_2d(self):
        if self.twice_area() <= 0:
            raise ValueError(f"degenerate polygon {self.vertices}")

    def edges(self) -> list[tuple[Point, Point]]:
        v = self.vertices
        if len(v) == 1:
            return []
        if len(v) == 2:
            return [(v[0], v[1])]
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def contains(self, p: Sequence[int]) -> bool:
        p = (int(p[0]), int(p[1]))
        v = self.vertices
        if len(v) == 1:
            return p == v[0]
        if len(v) == 2:
            a, b = v
            if _cross(a, b, p) != 0:
                return False
            return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
        return all(_cross(a, b, p) >= 0 for a, b in self.edges())

    def strictly_inside(self, p: Sequence[int]) -> bool:
        if len(self.vertices) < 3:
            return False
        return all(_cross(a, b, p) > 0 for a, b in self.edges())

    def lattice_points(self) -> list[Point]:
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return [(x, y) for x in range(min(xs), max(xs) + 1)
                for y in range(min(ys), max(ys) + 1) if self.contains((x, y))]

    def interior_points(self) -> list[Point]:
        return [p for p in self.lattice_points() if self.strictly_inside(p)]

    def inner_normal(self, edge: tuple[Point, Point]) -> tuple[int, int]:
        """Primitive normal of a ccw edge pointing into the polygon."""
        (x0, y0), (x1, y1) = edge
        n = primitive((-(y1 - y0), x1 - x0))
        return n[0], n[1]

    def __eq__(self, other):
        if not isinstance(other, LatticePolygon):
            return NotImplemented
        return set(self.vertices) == set(other.vertices)

    def __hash__(self):
        return hash(frozenset(self.vertices))

    def to_list(self):
        return [list(p) for p in self.vertices]


def minkowski_sum(p: LatticePolygon, q: LatticePolygon) -> LatticePolygon:
    return LatticePolygon.hull((a[0] + b[0], a[1] + b[1]) for a in p.vertices for b in q.vertices)


def mixed_area_twice(p: LatticePolygon, q: LatticePolygon) -> int:
    """2·MV(P,Q) = A(P+Q) - A(P) - A(Q) in twice-area units; the BKK count."""
    return (minkowski_sum(p, q).twice_area() - p.twice_area() - q.twice_area()) // 2


@dataclass(frozen=True)
class ConvexLift:
    domain: LatticePolygon
    values: dict

    def __post_init__(self):
        missing = [p for p in self.domain.lattice_points() if p not in self.values]
        if missing:
            raise ValueError(f"lift undefined at {missing[:3]}")
        for v in self.values.values():
            if int(v) != v:
                raise ValueError("lift values must be integers")

    def __call__(self, p) -> int:
        return int(self.values[(int(p[0]), int(p[1]))])

    def to_json(self):
        return {"polygon": self.domain.to_list(),
                "lift": [{"p": list(p), "v": int(v)} for p, v in sorted(self.values.items())]}

    @classmethod
    def from_json(cls, obj) -> "ConvexLift":
        dom = LatticePolygon.hull(obj["polygon"])
        vals = {(int(e["p"][0]), int(e["p"][1])): int(e["v"]) for e in obj["lift"]}
        return cls(dom, vals)

    @classmethod
    def from_function(cls, domain: LatticePolygon, fn) -> "ConvexLift":
        return cls(domain, {p: int(fn(p)) for p in domain.lattice_points()})


@dataclass(frozen=True)
class LinearPiece:
    """nu(j) = g1*j1 + g2*j2 + c on a cell."""

    g: tuple[int, int]
    c: int

    def __call__(self, p) -> int:
        return self.g[0] * p[0] + self.g[1] * p[1] + self.c


@dataclass(frozen=True)
class InteriorEdge:
    cells: tuple[int, int]
    edge: tuple[Point, Point]

    @property
    def length(self) -> int:
        return lattice_length(*self.edge)

    @property
    def direction(self) -> tuple[int, int]:
        (x0, y0), (x1, y1) = self.edge
        d = primitive((x1 - x0, y1 - y0))
        return d[0], d[1]


@dataclass
class Subdivision:
    parent: LatticePolygon
    cells: list[LatticePolygon]
    interior_edges: list[InteriorEdge] = field(default_factory=list)

    def __post_init__(self):
        if not self.interior_edges:
            self.interior_edges = _shared_edges(self.cells)

    def same_cells(self, other: "Subdivision") -> bool:
        return set(self.cells) == set(other.cells) and self.parent == other.parent

    def boundary_edges(self, k: int) -> list[tuple[Point, Point]]:
        """Edges of cell k lying on the boundary of the parent polygon."""
        shared = {frozenset(e.edge) for e in self.interior_edges if k in e.cells}
        return [e for e in self.cells[k].edges() if frozenset(e) not in shared]


def _shared_edges(cells: list[LatticePolygon]) -> list[InteriorEdge]:
    owner: dict = {}
    for k, c in enumerate(cells):
        for e in c.edges():
            owner.setdefault(frozenset(e), []).append((k, e))
    out = []
    for key, lst in owner.items():
        if len(lst) == 2:
            (k, e), (l, _) = lst
            out.append(InteriorEdge((k, l), e))
        elif len(lst) > 2:
            raise ValueError("edge shared by more than two cells")
    out.sort(key=lambda e: (e.cells, e.edge))
    return out


def subdivision_from_lift(lift: ConvexLift) -> Subdivision:
    """Project the lower faces of the lifted lattice points.

    Brute force over triples; fine for the desk-scale polygons used here.
    """
    dom = lift.domain
    dom.require_2d()
    pts = dom.lattice_points()
    lifted = [(p[0], p[1], lift(p)) for p in pts]
    faces = set()
    for a, b, c in combinations(lifted, 3):
        u = (b[0] - a[0], b[1] - a[1], b[2] - a[2])
        v = (c[0] - a[0], c[1] - a[1], c[2] - a[2])
        n = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
        if n[2] == 0:
            continue
        if n[2] < 0:
            n = (-n[0], -n[1], -n[2])
        on = []
        ok = True
        for q in lifted:
            s = n[0] * (q[0] - a[0]) + n[1] * (q[1] - a[1]) + n[2] * (q[2] - a[2])
            if s < 0:
                ok = False
                break
            if s == 0:
                on.append((q[0], q[1]))
        if ok:
            faces.add(frozenset(on))
    cells = [LatticePolygon.hull(f) for f in faces]
    cells = [c for c in cells if c.twice_area() > 0]
    cells.sort(key=lambda c: (min(c.vertices)[1], min(c.vertices)[0], sorted(c.vertices)))
    if sum(c.twice_area() for c in cells) != dom.twice_area():
        raise RuntimeError("lower hull cells do not tile the polygon")
    return Subdivision(dom, cells)


def certify_convex(lift: ConvexLift, claimed: Subdivision) -> bool:
    return subdivision_from_lift(lift).same_cells(claimed)


def cell_linear_function(lift: ConvexLift, cell: LatticePolygon) -> LinearPiece:
    v = cell.vertices
    for p, q, r in combinations(v, 3):
        det = _cross(p, q, r)
        if det != 0:
            break
    else:
        raise ValueError("degenerate cell")
    # solve g·(q-p) = nu(q)-nu(p), g·(r-p) = nu(r)-nu(p)
    a11, a12, b1 = q[0] - p[0], q[1] - p[1], lift(q) - lift(p)
    a21, a22, b2 = r[0] - p[0], r[1] - p[1], lift(r) - lift(p)
    g1 = Fraction(b1 * a22 - a12 * b2, det)
    g2 = Fraction(a11 * b2 - b1 * a21, det)
    c = lift(p) - g1 * p[0] - g2 * p[1]
    if g1.denominator != 1 or g2.denominator != 1 or Fraction(c).denominator != 1:
        raise ValueError("cell linear function is not integral")
    piece = LinearPiece((int(g1), int(g2)), int(c))
    for pt in cell.lattice_points():
        if piece(pt) != lift(pt):
            raise ValueError("lift is not linear on the claimed cell")
    return piece


@dataclass(frozen=True)
class TropicalEdge:
    start: tuple[Fraction, Fraction]
    end: tuple[Fraction, Fraction] | None  # None for rays
    direction: tuple[int, int]
    weight: int
    dual: tuple[Point, Point]
    cells: tuple[int, ...]

    @property
    def bounded(self) -> bool:
        return self.end is not None


@dataclass
class TropicalCurve:
    vertices: list[tuple[Fraction, Fraction]]
    edges: list[TropicalEdge]

    def bounded_edges(self) -> list[TropicalEdge]:
        return [e for e in self.edges if e.bounded]

    def balancing_defects(self) -> list[tuple[int, int]]:
        out = []
        for k, v in enumerate(self.vertices):
            sx = sy = 0
            for e in self.edges:
                if k not in e.cells:
                    continue
                if e.bounded:
                    other = e.end if e.start == v else e.start
                    d = primitive((int(other[0] - v[0]), int(other[1] - v[1])))
                else:
                    d = e.direction
                sx += e.weight * d[0]
                sy += e.weight * d[1]
            out.append((sx, sy))
        return out


def dual_tropical_curve(sub: Subdivision, lift: ConvexLift) -> TropicalCurve:
    """Vertex of a cell is +grad(nu|cell): the limit of Log_t on that cell's
    region with Log_t = -log|.|/log t."""
    if not certify_convex(lift, sub):
        raise ValueError("subdivision does not match lift")
    pieces = [cell_linear_function(lift, c) for c in sub.cells]
    verts = [(Fraction(p.g[0]), Fraction(p.g[1])) for p in pieces]
    edges = []
    for ie in sub.interior_edges:
        k, l = ie.cells
        a, b = verts[k], verts[l]
        d = primitive((int(b[0] - a[0]), int(b[1] - a[1])))
        edges.append(TropicalEdge(a, b, (d[0], d[1]), ie.length, ie.edge, (k, l)))
    for k, c in enumerate(sub.cells):
        for e in sub.boundary_edges(k):
            n = c.inner_normal(e)
            edges.append(TropicalEdge(verts[k], None, (-n[0], -n[1]), lattice_length(*e), e, (k,)))
    return TropicalCurve(verts, edges)


def midpoint(edge: TropicalEdge) -> tuple[Fraction, Fraction]:
    if not edge.bounded:
        raise ValueError("unbounded edge has no midpoint")
    return ((edge.start[0] + edge.end[0]) / 2, (edge.start[1] + edge.end[1]) / 2)


def segment_midpoint(p, q) -> tuple[Fraction, Fraction]:
    return (Fraction(p[0]) + Fraction(q[0])) / 2, (Fraction(p[1]) + Fraction(q[1])) / 2


def _ext_gcd(a: int, b: int):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def unimodular_with_first_row(n: Sequence[int]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Rows (n, m) of an integer matrix of determinant +1."""
    g, x, y = _ext_gcd(int(n[0]), int(n[1]))
    if g != 1:
        raise ValueError("first row must be primitive")
    # n0*x + n1*y = 1, so m = (-y, x) gives n0*x - n1*(-y) = 1
    return (int(n[0]), int(n[1])), (-y, x)


def edge_frame(edge: tuple[Point, Point], normal: tuple[int, int]):
    """Rows (n, m) with det 1 and the offset h = <n, edge>, so that in the new
    exponents j' = (<n,j> - h, <m,j>) the edge sits on j1' = 0."""
    n, m = unimodular_with_first_row(normal)
    h = n[0] * edge[0][0] + n[1] * edge[0][1]
    if n[0] * edge[1][0] + n[1] * edge[1][1] != h:
        raise ValueError("normal is not orthogonal to the edge")
    return n, m, h
