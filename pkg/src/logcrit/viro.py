"""Viro families f_t = sum a_j t^nu(j) z^j, their cells, nodes of the
limit curve C_0, and the checks that make a patchwork prediction valid."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .gauss import branch_distance_to_real, log_inflection_points
from .lattice import (ConvexLift, LatticePolygon, LinearPiece, Subdivision,
                      TropicalCurve, cell_linear_function, dual_tropical_curve, primitive,
                      subdivision_from_lift)
from .numerics import CONFIG, NonConvergence, roots, solve_system
from .poly import LaurentPolynomial, newton_polygon, truncate

DEFAULT_EPS = 0.1


@dataclass
class ViroFamily:
    base: LaurentPolynomial
    lift: ConvexLift

    def __post_init__(self):
        if self.base.arity != 2:
            raise ValueError("base polynomial must be bivariate")
        pts = set(self.lift.domain.lattice_points())
        outside = [e for e in self.base.support() if e not in pts]
        if outside:
            raise ValueError(f"support point {outside[0]} outside the lift domain")
        for k, c in enumerate(self.subdivision.cells):
            if truncate(self.base, c).is_zero():
                raise ValueError(f"cell {k} has zero truncation")

    @cached_property
    def subdivision(self) -> Subdivision:
        return subdivision_from_lift(self.lift)

    @cached_property
    def tropical(self) -> TropicalCurve:
        return dual_tropical_curve(self.subdivision, self.lift)

    @cached_property
    def pieces(self) -> list[LinearPiece]:
        return [cell_linear_function(self.lift, c) for c in self.subdivision.cells]

    @property
    def cells(self) -> list[LatticePolygon]:
        return self.subdivision.cells

    @property
    def nu(self) -> dict:
        return {e: self.lift(e) for e in self.base.support()}

    @cached_property
    def trivariate(self) -> LaurentPolynomial:
        """sum a_j z^j1 w^j2 t^nu(j)."""
        return LaurentPolynomial({(e[0], e[1], self.lift(e)): c for e, c in self.base.items()}, 3)

    def cell_trivariate(self, k: int) -> LaurentPolynomial:
        """f_t in the coordinates of cell k: z = t^(-g_k) z', divided by
        t^(c_k), so that the exponent of t vanishes exactly on the cell."""
        p = self.pieces[k]
        return LaurentPolynomial({(e[0], e[1], self.lift(e) - p(e)): c for e, c in self.base.items()}, 3)

    def to_json(self) -> dict:
        return {"polynomial": self.base.to_json(), "lift": self.lift.to_json()}

    @classmethod
    def from_json(cls, obj) -> "ViroFamily":
        return cls(LaurentPolynomial.from_json(obj["polynomial"]), ConvexLift.from_json(obj["lift"]))


def evaluate_family(fam: ViroFamily, t: complex) -> LaurentPolynomial:
    if t == 0:
        raise ValueError("t = 0 is not a member of the family; use cell_polynomial for the limit")
    t = complex(t)
    return LaurentPolynomial({e: c * t ** fam.lift(e) for e, c in fam.base.items()}, 2)


def cell_polynomial(fam: ViroFamily, k: int) -> LaurentPolynomial:
    if not 0 <= k < len(fam.cells):
        raise IndexError(f"no cell {k}")
    return truncate(fam.base, fam.cells[k])


# ---------------------------------------------------------------------------
# edge polynomials and nodes


def edge_coefficients(f: LaurentPolynomial, edge) -> tuple[list[complex], tuple[int, int]]:
    """Coefficients c_k of a_{p0 + k d} along an edge, d its primitive direction."""
    p0, p1 = edge
    d = primitive((p1[0] - p0[0], p1[1] - p0[1]))
    n = math.gcd(abs(p1[0] - p0[0]), abs(p1[1] - p0[1]))
    return [f.coeff((p0[0] + k * d[0], p0[1] + k * d[1])) for k in range(n + 1)], (d[0], d[1])


def simple_roots(coeffs, rel: float = 1e-6):
    """Roots of sum c_k x^k and whether all of them are simple."""
    r = roots(coeffs, merge=False).roots
    ok = True
    for i in range(len(r)):
        for j in range(i + 1, len(r)):
            if abs(r[i] - r[j]) <= rel * max(1.0, abs(r[i])):
                ok = False
    return r, ok


@dataclass(frozen=True)
class Node:
    index: int
    edge_index: int
    edge: tuple
    cells: tuple[int, int]
    xi: complex  # value of the character chi^d at the node, d = edge direction
    direction: tuple[int, int]
    weight: int

    def to_json(self):
        return {"index": self.index, "edge": [list(p) for p in self.edge], "cells": list(self.cells),
                "xi": [self.xi.real, self.xi.imag], "weight": self.weight}


def nodes_of_C0(fam: ViroFamily) -> list[Node]:
    out = []
    for ei, ie in enumerate(fam.subdivision.interior_edges):
        coeffs, d = edge_coefficients(fam.base, ie.edge)
        if coeffs[0] == 0 or coeffs[-1] == 0:
            raise ValueError(f"edge {ie.edge} has a vanishing endpoint coefficient")
        r, ok = simple_roots(coeffs)
        if not ok:
            raise ValueError(f"degenerate node on edge {ie.edge}")
        for x in sorted(r, key=lambda c: (round(c.real, 12), round(c.imag, 12))):
            out.append(Node(len(out), ei, ie.edge, ie.cells, complex(x), d, ie.length))
    return out


# ---------------------------------------------------------------------------
# certification reports


@dataclass
class CellCheck:
    cell: int
    ok: bool
    smooth: bool = True
    transverse: bool = True
    branch_distance: float = float("inf")
    witnesses: list = field(default_factory=list)

    def to_json(self):
        return {"cell": self.cell, "ok": self.ok, "smooth": self.smooth, "transverse": self.transverse,
                "branch_distance": self.branch_distance, "witnesses": [str(w) for w in self.witnesses]}


@dataclass
class Report:
    ok: bool
    cells: list = field(default_factory=list)
    nodes: list = field(default_factory=list)

    def to_json(self):
        return {"ok": self.ok, "cells": [c.to_json() for c in self.cells], "nodes": self.nodes}


def singular_points(f: LaurentPolynomial, tol=None) -> list:
    """Points of (C*)^2 with f = f_z = f_w = 0."""
    tol = tol or CONFIG
    zf = f.log_partial("z")
    wf = f.log_partial("w")
    if zf.is_zero() or wf.is_zero():
        return []
    sol = solve_system(zf, wf, tol)
    bad = []
    for p in sol.points:
        scale = sum(abs(c * p[0] ** e[0] * p[1] ** e[1]) for e, c in f.items())
        if abs(f.evaluate(p)) <= 1e-8 * scale:
            bad.append(p)
    return bad


def check_nondegenerate(fam: ViroFamily, tol=None) -> Report:
    out = []
    for k, cell in enumerate(fam.cells):
        f = cell_polynomial(fam, k)
        chk = CellCheck(k, True)
        if newton_polygon(f) != cell:
            chk.ok = chk.transverse = False
            chk.witnesses.append("missing vertex coefficient")
            out.append(chk)
            continue
        try:
            sing = singular_points(f, tol)
        except NonConvergence as exc:
            sing = [str(exc)]
        if sing:
            chk.ok = chk.smooth = False
            chk.witnesses.extend(sing)
        for e in cell.edges():
            coeffs, _ = edge_coefficients(f, e)
            if len(coeffs) > 2:
                r, ok = simple_roots(coeffs)
                if not ok:
                    chk.ok = chk.transverse = False
                    chk.witnesses.append(("double root on edge", e))
        out.append(chk)
    return Report(all(c.ok for c in out), out)


def check_log_nondegenerate(fam: ViroFamily, tol=None, threshold: float | None = None) -> Report:
    """Cell curves must have Log-inflection values off RP^1, and no cell may
    have an inflection point at a node (detected by the support pattern of
    the node normalization)."""
    from .asymptotics import normalize_at_node

    tol = tol or CONFIG
    thr = tol.branch_threshold if threshold is None else threshold
    base = check_nondegenerate(fam, tol)
    if not base.ok:
        return base
    for chk in base.cells:
        f = cell_polynomial(fam, chk.cell)
        infl = log_inflection_points(f, tol)
        chk.branch_distance = branch_distance_to_real(infl)
        if chk.branch_distance <= thr:
            chk.ok = False
            chk.witnesses.append(("inflection value on RP^1", chk.branch_distance))
    nodes = []
    for node in nodes_of_C0(fam):
        try:
            normalize_at_node(fam, node)
            nodes.append({"node": node.index, "ok": True})
        except ValueError as exc:
            nodes.append({"node": node.index, "ok": False, "reason": str(exc)})
    ok = all(c.ok for c in base.cells) and all(n["ok"] for n in nodes)
    return Report(ok, base.cells, nodes)


# ---------------------------------------------------------------------------
# the good parameter set U


@dataclass
class NodeDiagnostic:
    node: int
    ok: bool
    gammas: list  # two (u, v) pairs in the original chart
    defects: list  # Im(u conj v) of each
    points: list
    predicted: list

    def to_json(self):
        return {"node": self.node, "ok": self.ok,
                "gamma": [[[complex(x).real, complex(x).imag] for x in g] for g in self.gammas],
                "imag_parts": self.defects}


@dataclass
class Membership:
    t: complex
    ok: bool
    nodes: list

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"t": [self.t.real, self.t.imag], "ok": self.ok, "nodes": [n.to_json() for n in self.nodes]}


def membership_in_U(fam: ViroFamily, t: complex, eps: float = DEFAULT_EPS, tol=None) -> Membership:
    """t is accepted when, at every node, the two node-local inflection
    values lie strictly on opposite sides of RP^1."""
    from .asymptotics import node_inflection_points, normalize_at_node

    t = complex(t)
    if not 0 < abs(t) < eps:
        raise ValueError(f"|t| = {abs(t):.3g} outside certified disc of radius {eps}")
    diags = []
    for node in nodes_of_C0(fam):
        norm = normalize_at_node(fam, node)
        try:
            pts = node_inflection_points(fam, norm, t, tol)
        except NonConvergence as exc:
            raise NonConvergence(f"inflection refinement failed at node {node.index}: {exc}") from exc
        g = [p.gamma for p in pts]
        im = [float((u * np.conj(v)).imag / (abs(u) ** 2 + abs(v) ** 2)) for u, v in g]
        ok = len(im) == 2 and im[0] * im[1] < 0
        diags.append(NodeDiagnostic(node.index, ok, g, im, [p.point for p in pts], [p.predicted for p in pts]))
    return Membership(t, all(d.ok for d in diags), diags)
