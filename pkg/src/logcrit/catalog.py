"""Rational curves w q(z) + p(z) with prescribed Log-critical locus, and the
patchwork construction of curves of degree d whose Log-critical locus has a
prescribed number b of components.

Three variants share the parameters b_1 < a_1 < ... < b_d < a_d < a_{d+1} < 0:

    F:  w prod (z - b_j)            + prod (z - a_j)
    G:  w prod (z - (b_j - λi))     + prod (z - (a_j - λi))
    H:  w prod (z - (-b_j - λi))    + prod (z - (a_j - λi))

Each is parametrized by z -> (z, -p(z)/q(z)), so components of Cr are
components of gamma~^{-1}(RP^1) on the source line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial import polynomial as P

from .critlocus import MonodromyResult, monodromy_b0
from .lattice import ConvexLift, LatticePolygon
from .poly import LaurentPolynomial, from_roots, w_
from .viro import ViroFamily

VARIANTS = ("F", "G", "H")
HALVINGS = 5


@dataclass(frozen=True)
class RationalFamilyParams:
    a: tuple
    b: tuple
    lam: float = 0.0
    variant: str = "F"

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if len(self.a) != len(self.b) + 1:
            raise ValueError("need len(a) = len(b) + 1")
        seq = [x for pair in zip(self.b, self.a) for x in pair] + [self.a[-1]]
        if any(x >= y for x, y in zip(seq, seq[1:])) or seq[-1] >= 0:
            raise ValueError("parameters violate b_1 < a_1 < ... < b_d < a_d < a_{d+1} < 0")
        if self.variant == "F" and self.lam != 0:
            raise ValueError("variant F has no λ; use G")

    @property
    def d(self) -> int:
        return len(self.b)

    @property
    def eps(self) -> float:
        return max((a - b for a, b in zip(self.a, self.b)), default=0.0)

    @property
    def centers(self) -> list[float]:
        return [(a + b) / 2 for a, b in zip(self.a, self.b)]

    def p_roots(self) -> np.ndarray:
        return np.array(self.a) - 1j * self.lam

    def q_roots(self) -> np.ndarray:
        b = -np.array(self.b) if self.variant == "H" else np.array(self.b)
        return b - 1j * self.lam

    def shrink(self, factor: float = 0.5) -> "RationalFamilyParams":
        """Scale every a_j - b_j (and λ) by factor, keeping the centers."""
        a = list(self.a)
        b = list(self.b)
        for j, c in enumerate(self.centers):
            h = (self.a[j] - self.b[j]) * factor / 2
            a[j], b[j] = c + h, c - h
        return replace(self, a=tuple(a), b=tuple(b), lam=self.lam * factor)

    def to_json(self):
        return {"d": self.d, "a": list(self.a), "b": list(self.b), "lam": self.lam,
                "variant": self.variant, "eps": self.eps}

    @classmethod
    def from_json(cls, obj) -> "RationalFamilyParams":
        p = cls(obj["a"], obj["b"], float(obj.get("lam", 0.0)), obj.get("variant", "F"))
        if "d" in obj and int(obj["d"]) != p.d:
            raise ValueError("d does not match the parameter lists")
        return p


def rational_polynomial(p_roots, q_roots, lead: complex = 1.0) -> LaurentPolynomial:
    return (w_() * from_roots(q_roots) + from_roots(p_roots)) * lead


def build_rational(params: RationalFamilyParams) -> LaurentPolynomial:
    return rational_polynomial(params.p_roots(), params.q_roots())


def parametrization(params: RationalFamilyParams, z: complex) -> tuple[complex, complex]:
    """ρ(z) = (z, -p(z)/q(z))."""
    z = complex(z)
    return z, -np.prod(z - params.p_roots()) / np.prod(z - params.q_roots())


def gamma_tilde(params: RationalFamilyParams, z: complex) -> complex:
    """gamma o ρ in the chart [u:v] -> u/v, in partial fractions:
    -1 + sum B/(z-B) - sum A/(z-A) over the roots B of q and A of p."""
    z = complex(z)
    A, B = params.p_roots(), params.q_roots()
    roots = np.concatenate([A, B])
    if np.min(np.abs(z - roots) / (1 + np.abs(roots))) < 1e-14:
        raise ValueError(f"z = {z} is a pole of gamma~")
    return complex(-1 + np.sum(B / (z - B)) - np.sum(A / (z - A)))


# ---------------------------------------------------------------------------
# real polynomial algebra for the λ = 0 statements


def _numden(params: RationalFamilyParams):
    """gamma~ = N / D with N = z (q' p - p' q), D = p q (ascending coefficients)."""
    p = P.polyfromroots(params.p_roots())
    q = P.polyfromroots(params.q_roots())
    N = P.polymulx(P.polysub(P.polymul(P.polyder(q), p), P.polymul(P.polyder(p), q)))
    return N, P.polymul(p, q)


def _polished_roots(c, iters: int = 50) -> np.ndarray:
    c = np.trim_zeros(np.asarray(c, complex), "b")
    r = P.polyroots(c).astype(complex)
    dc = P.polyder(c)
    for _ in range(iters):
        step = P.polyval(r, c) / np.where(P.polyval(r, dc) == 0, 1, P.polyval(r, dc))
        r = r - step
        if np.all(np.abs(step) <= 1e-15 * (1 + np.abs(r))):
            break
    return r


def _real(r: np.ndarray, rel: float = 1e-7):
    mask = np.abs(r.imag) <= rel * (1 + np.abs(r.real))
    return np.sort(r[mask].real), r[~mask]


@dataclass
class CatalogReport:
    name: str
    ok: bool
    params: dict
    checks: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    def to_json(self):
        return {"check": self.name, "ok": self.ok, "params": self.params, "checks": self.checks,
                "data": self.data}


def check_prop_eps(params: RationalFamilyParams) -> CatalogReport:
    """gamma~ on RP^1: 2d+1 real zeros, 2d simple real critical points with
    negative critical values, p_j < b_j < q_j < a_j."""
    if params.lam != 0:
        raise ValueError("this statement is about λ = 0")
    d = params.d
    N, D = _numden(params)
    zeros, _ = _real(_polished_roots(N))
    crit_num = P.polysub(P.polymul(P.polyder(N), D), P.polymul(N, P.polyder(D)))
    crit_all = _polished_roots(crit_num)
    crit, cplx = _real(crit_all)
    values = [gamma_tilde(params, x).real for x in crit]
    sep = min((abs(x - y) for i, x in enumerate(crit_all) for y in crit_all[i + 1:]), default=np.inf)
    lo = [-np.inf] + list(params.a[:-1])
    inter = []
    for j in range(d):
        left = [x for x in crit if lo[j] < x < params.b[j]]
        right = [x for x in crit if params.b[j] < x < params.a[j]]
        inter.append(len(left) == 1 and len(right) == 1)
    checks = {
        "zeros": len(zeros) == 2 * d + 1,
        "critical_points": len(crit) == 2 * d,
        "simple": bool(sep > 1e-8 * (1 + max(abs(x) for x in params.b + params.a))),
        "negative_values": bool(values) and all(v < 0 for v in values),
        "interlacing": all(inter),
    }
    data = {"zeros": list(map(float, zeros)), "critical_points": list(map(float, crit)),
            "critical_values": values, "nonreal_critical_points": len(cplx)}
    return CatalogReport("eps", all(checks.values()), params.to_json(), checks, data)


# ---------------------------------------------------------------------------
# λ = 0: gamma~^{-1}(RP^1) = RP^1 plus circles, traced as level sets


def _gamma_vec(params, Z):
    A, B = params.p_roots(), params.q_roots()
    Z = np.asarray(Z, complex)[..., None]
    g = -1 + np.sum(B / (Z - B), axis=-1) - np.sum(A / (Z - A), axis=-1)
    dg = -np.sum(B / (Z - B) ** 2, axis=-1) + np.sum(A / (Z - A) ** 2, axis=-1)
    return g, dg


def _trace_arc(params, x0: float, rel: float = 0.01, max_steps: int = 100000):
    """Follow Im gamma~ = 0 from the real critical point x0 into the upper
    half plane until it returns to the real axis.  Steps are a fixed
    fraction of the distance to the nearest pole (all poles are real)."""
    poles = np.concatenate([params.p_roots(), params.q_roots()])
    size = lambda z: rel * float(np.min(np.abs(z - poles)))
    z = complex(x0, size(x0))
    direction = 1j
    pts = [complex(x0, 0.0)]
    for _ in range(max_steps):
        for _ in range(8):  # corrector: minimal step onto Im gamma~ = 0
            g, dg = _gamma_vec(params, z)
            dz = -1j * g.imag / dg
            z += dz
            if abs(dz) < 1e-14 * (1 + abs(z)):
                break
        pts.append(z)
        g, dg = _gamma_vec(params, z)
        tan = np.conj(dg) / abs(dg)
        if (tan * np.conj(direction)).real < 0:
            tan = -tan
        direction = tan
        h = size(z)
        if z.imag + h * tan.imag <= 0:  # the next step would cross the real axis
            x1 = z.real - z.imag * tan.real / tan.imag
            pts.append(complex(x1, 0.0))
            return float(x1), h, np.array(pts)
        z = z + h * tan
    raise RuntimeError(f"arc from {x0} did not return to the real axis")


def check_prop_critloc(params: RationalFamilyParams, grid: int = 400) -> CatalogReport:
    """Components of gamma~^{-1}(RP^1) on the source line: RP^1 itself plus
    one circle through each pair p_j, q_j near c_j.  At λ = 0 these circles
    cross RP^1, so the count uses the level set Im gamma~ = 0 directly."""
    eps_rep = check_prop_eps(params)
    crit = eps_rep.data["critical_points"]
    scale = max(abs(x) for x in params.b + params.a)
    arcs = {}
    clouds = {}
    for i, x0 in enumerate(crit):
        x1, h, pts = _trace_arc(params, x0)
        j = min(range(len(crit)), key=lambda j: abs(crit[j] - x1))
        if abs(crit[j] - x1) > 2 * h:
            raise RuntimeError(f"arc from {x0} lands at {x1}, not at a critical point")
        key = tuple(sorted((i, j)))
        if key not in arcs:
            arcs[key] = (crit[key[0]], crit[key[1]])
            clouds[key] = np.concatenate([pts, np.conj(pts)])
    circles = list(arcs.values())
    # circle j crosses at p_j in (a_{j-1}, b_j) and at q_j in (b_j, a_j), the
    # latter within ε of c_j (p_j only approaches c_j like ε^(1/3))
    lo = [-np.inf] + list(params.a[:-1])
    near = set()
    for p, q in circles:
        for j, c in enumerate(params.centers):
            if lo[j] < p < params.b[j] < q < params.a[j] and abs(q - c) < params.eps:
                near.add(j)
    keys = list(clouds)
    gap = np.inf
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            A, B = clouds[keys[i]], clouds[keys[j]]
            gap = min(gap, float(np.min(np.abs(A[:, None] - B[None, :]))))
    # independent scan of the upper half plane for level-set crossings not on a traced arc
    xs = np.linspace(-4 * scale, 2 * scale, grid)
    ys = np.linspace(3 * scale / grid, 3 * scale, grid // 2)
    X, Y = np.meshgrid(xs, ys)
    S = np.sign(_gamma_vec(params, X + 1j * Y)[0].imag)
    flips = np.concatenate([((X[:, 1:] + X[:, :-1]) / 2 + 1j * Y[:, 1:])[S[:, 1:] != S[:, :-1]],
                            (X[1:] + 1j * (Y[1:] + Y[:-1]) / 2)[S[1:] != S[:-1]]])
    allpts = np.concatenate(list(clouds.values())) if clouds else np.zeros(0, complex)
    step = max(xs[1] - xs[0], ys[1] - ys[0])
    unexplained = 0
    for f in flips:
        if allpts.size == 0 or np.min(np.abs(allpts - f)) > 2 * step:
            unexplained += 1
    components = 1 + len(circles)
    checks = {
        "components": components == params.d + 1,
        "circles_near_centers": len(near) == len(circles) == params.d,
        "disjoint": bool(gap > 0),
        "no_other_circles": unexplained == 0,
    }
    data = {"components": components, "circles": [list(c) for c in circles], "min_gap": gap,
            "unexplained_crossings": unexplained}
    return CatalogReport("critloc", all(checks.values()), params.to_json(), checks, data)


# ---------------------------------------------------------------------------
# λ ≠ 0: components by monodromy, membership through the divisor points


def divisor_points(params: RationalFamilyParams):
    """(name, edge kind, z-value or None) for the 2d+3 points of the closure
    of the curve on the toric divisors."""
    out = [("lam_i", "left", None), ("inf", "slanted", None)]
    out += [(f"a{j + 1}", "bottom", complex(x)) for j, x in enumerate(params.p_roots())]
    out += [(f"b{j + 1}", "top", complex(x)) for j, x in enumerate(params.q_roots())]
    return out


def _edge_kind(edge) -> str:
    (x0, y0), (x1, y1) = edge
    if y0 == y1 == 0:
        return "bottom"
    if y0 == y1:
        return "top"
    if x0 == x1 == 0:
        return "left"
    return "slanted"


def divisor_labels(params: RationalFamilyParams, res: MonodromyResult) -> dict:
    """Component label of each divisor point, read off the divisor crossings
    of the sweep."""
    from .critlocus import FiberSystem

    sys = FiberSystem(build_rational(params))
    lab = res.labels()
    pts = divisor_points(params)
    out = {}
    for ev in res.events:
        kind = _edge_kind(sys.edges[ev.edge])
        d = sys.edge_dirs[ev.edge]
        m = sys.mrows[ev.edge]
        xi = ev.coordinate ** int(round(m[0] * d[0] + m[1] * d[1]))
        cand = [p for p in pts if p[1] == kind]
        if kind in ("bottom", "top"):
            zval = xi ** d[0]
            name = min(cand, key=lambda p: abs(p[2] - zval))[0]
        else:
            name = cand[0][0]
        out.setdefault(name, set()).add(lab[ev.strand])
    return out


def check_prop_deformation(params: RationalFamilyParams, n_theta: int | None = None) -> CatalogReport:
    """Variant G with small λ ≠ 0: d+1 components, one through λi, the a_j
    and ∞, each other one through exactly one b_j."""
    if params.lam == 0:
        raise ValueError("this statement needs λ ≠ 0")
    params = replace(params, variant="G")
    res = monodromy_b0(build_rational(params), n_theta)
    labels = divisor_labels(params, res)
    d = params.d
    names = [p[0] for p in divisor_points(params)]
    seen = all(n in labels and len(labels[n]) == 1 for n in names)
    checks = {"components": res.b0 == d + 1, "all_divisor_points_seen": seen}
    if seen:
        lab = {n: next(iter(labels[n])) for n in names}
        main = lab["lam_i"]
        checks["main_component"] = all(lab[n] == main for n in names if n[0] == "a" or n == "inf")
        bs = [lab[f"b{j + 1}"] for j in range(d)]
        checks["one_b_each"] = len(set(bs)) == d and main not in bs
    data = {"b0": res.b0, "labels": {k: sorted(v) for k, v in labels.items()},
            "min_branch_distance": res.min_branch_distance}
    return CatalogReport("deformation", all(checks.values()) and len(checks) == 4, params.to_json(), checks, data)


def cyclic_position(values_by_side: dict, side_order: list) -> bool:
    """Points on RP^1 (given by real parameters, inf allowed) in maximal
    cyclic position: the points of each side are consecutive and the sides
    occur in the cyclic order of the polygon, in one of the two directions."""
    pts = sorted((v, s) for s, vals in values_by_side.items() for v in vals)
    seq = [s for _, s in pts]
    runs = [s for i, s in enumerate(seq) if i == 0 or s != seq[i - 1]]
    if len(runs) > 1 and runs[0] == runs[-1]:
        runs.pop()
    if sorted(runs) != sorted(side_order):
        return False
    n = len(side_order)
    i = side_order.index(runs[0])
    fwd = [side_order[(i + k) % n] for k in range(n)]
    bwd = [side_order[(i - k) % n] for k in range(n)]
    return runs in (fwd, bwd)


def check_harnack_connected(params: RationalFamilyParams, n_theta: int | None = None) -> CatalogReport:
    """Variant H: Cr is connected; at λ = 0 the divisor points are also in
    maximal cyclic position."""
    params = replace(params, variant="H")
    res = monodromy_b0(build_rational(params), n_theta)
    checks = {"connected": res.b0 == 1}
    if params.lam == 0:
        sides = {"bottom": list(params.a), "left": [0.0], "top": [-x for x in params.b],
                 "slanted": [math.inf]}
        checks["cyclic_position"] = cyclic_position(sides, ["bottom", "slanted", "top", "left"])
    data = {"b0": res.b0, "min_branch_distance": res.min_branch_distance}
    return CatalogReport("harnack", all(checks.values()), params.to_json(), checks, data)


CHECKS = {"eps": check_prop_eps, "critloc": check_prop_critloc,
          "deformation": check_prop_deformation, "harnack": check_harnack_connected}


def run_with_halving(check, params: RationalFamilyParams, tries: int = HALVINGS) -> CatalogReport:
    """The statements hold for ε (and |λ|) small enough; shrink both by half
    and re-run, at most ``tries`` times, reporting the values that were used."""
    rep = None
    for k in range(tries + 1):
        try:
            rep = check(params)
        except Exception as exc:  # numerical refusal counts as a failed attempt
            rep = CatalogReport(getattr(check, "__name__", "check"), False, params.to_json(),
                                {"ran": False}, {"error": str(exc)})
        rep.data["halvings"] = k
        if rep.ok:
            return rep
        params = params.shrink(0.5)
    return rep


def random_params(rng: np.random.Generator, d: int, variant: str = "F", lam_sign: float = 1.0,
                  gap=(3.0, 10.0)) -> RationalFamilyParams:
    """Interlacing parameters with ε = 0.1 min gap (times a factor in [0.5, 1])
    and λ = 0.1 ε."""
    last = -rng.uniform(1.0, 3.0)
    centers = []
    x = last
    for _ in range(d):
        x -= rng.uniform(*gap)
        centers.append(x)
    centers = centers[::-1]
    pts = centers + [last]
    min_gap = min(q - p for p, q in zip(pts, pts[1:]))
    eps = 0.1 * min_gap * rng.uniform(0.5, 1.0)
    a = [c + eps / 2 for c in centers] + [last]
    b = [c - eps / 2 for c in centers]
    lam = 0.0 if variant == "F" else lam_sign * 0.1 * eps
    return RationalFamilyParams(a, b, lam, variant)


# ---------------------------------------------------------------------------
# degree d curves with b components


def theorem12_indices(d: int, b: int) -> tuple[int, int, int]:
    """(k, l, r): C(k-1,2)+1 < b <= C(k,2)+1, l = d-1-k, r = l + b - C(k-1,2);
    b = 1 uses k = 1.  r lies in [l+2, d-1]; r = d-1 is the line cell, where
    both variants coincide."""
    if d < 3:
        raise ValueError("degree must be at least 3")
    top = math.comb(d - 1, 2) + 1
    if not 1 <= b <= top:
        raise ValueError(f"b must lie in [1, {top}] for degree {d}")
    if b == 1:
        k = 1
    else:
        k = next(k for k in range(2, d) if math.comb(k - 1, 2) + 1 < b <= math.comb(k, 2) + 1)
    ell = d - 1 - k
    r = ell + b - math.comb(k - 1, 2)
    return k, ell, r


def counting_identity(d: int, b: int) -> bool:
    _, ell, _ = theorem12_indices(d, b)
    return 1 + (b + 1 - d + ell) + (d - 2 - ell) == b


def theorem12_lift(d: int) -> ConvexLift:
    """nu(x, y) = sum_{i=1}^{d-1} max(0, y-i) + max(0, 1-x) on the triangle of
    size d: its cells are the trapezoids T_j (x >= 1, j-1 <= y <= j), the
    unit squares S_j and the corner triangle S_d."""
    dom = LatticePolygon.hull([(0, 0), (d, 0), (0, d)])
    return ConvexLift.from_function(
        dom, lambda p: sum(max(0, p[1] - i) for i in range(1, d)) + max(0, 1 - p[0]))


@dataclass
class Theorem12Construction:
    d: int
    b: int
    k: int
    ell: int
    r: int
    variants: list  # variant of T_1 .. T_{d-1}
    cells: list  # per T_j: p roots, q roots, λ, σ
    family: ViroFamily
    flags: list = field(default_factory=list)
    cell_params: list = field(default_factory=list)

    def to_json(self):
        return {"d": self.d, "b": self.b, "k": self.k, "l": self.ell, "r": self.r,
                "variants": self.variants, "flags": self.flags, "family": self.family.to_json()}


def recipe_variants(d: int, b: int) -> list[str]:
    """G on T_1..T_l and on T_r when r > l, H elsewhere."""
    _, ell, r = theorem12_indices(d, b)
    return ["G" if j <= ell or (j == r and r > ell) else "H" for j in range(1, d)]


def certify_cell(params: RationalFamilyParams) -> bool:
    """The trapezoid curve has the Cr topology the construction relies on."""
    if params.d == 0:
        return True
    if params.variant == "H":
        return check_harnack_connected(params).ok
    flat = replace(params, lam=0.0, variant="F")
    return check_prop_eps(flat).ok and check_prop_deformation(params).ok


def theorem12_construction(d: int, b: int, variants: list | None = None, gap: float = 3.0,
                           eps: float = 0.1, lam: float = 0.01, certify: bool = True,
                           tries: int = HALVINGS) -> Theorem12Construction:
    """Assemble the family; with ``certify`` each trapezoid curve is checked
    against the statements it is used for, halving ε and λ on failure."""
    k, ell, r = theorem12_indices(d, b)
    variants = list(variants or recipe_variants(d, b))
    if len(variants) != d - 1:
        raise ValueError("one variant per trapezoid T_1 .. T_{d-1}")
    for attempt in range(tries + 1):
        con = _assemble(d, b, k, ell, r, variants, gap, eps, lam)
        if not certify or all(certify_cell(p) for p in con.cell_params):
            if attempt:
                con.flags.append(f"ε halved {attempt} times to {eps:.4g}")
            return con
        eps, lam = eps / 2, lam / 2
    raise ValueError(f"trapezoid curves fail their checks down to ε = {eps * 2:.3g}")


def _assemble(d, b, k, ell, r, variants, gap, eps, lam) -> Theorem12Construction:
    coeffs: dict = {}
    owner: dict = {}

    def put(cell, poly: LaurentPolynomial, shift):
        for e, c in poly.items():
            p = (e[0] + shift[0], e[1] + shift[1])
            if p in coeffs and abs(coeffs[p] - c) > 1e-9 * max(1.0, abs(c)):
                raise ValueError(f"cells {owner[p]} and {cell} disagree at {p} on their shared edge")
            coeffs.setdefault(p, c)
            owner.setdefault(p, cell)

    # trapezoids: T_j = z w^{j-1} P_j(σ_j z, w), P_j of variant G or H
    A = [-gap * (d - m) for m in range(1, d)]
    # (monic in both w-parts: a toric translation w -> ±w of P_j(σ_j z, w))
    sigma, lm = 1, lam
    cells, params = [], []
    for j in range(1, d):
        B = [x - eps for x in A[:-1]]
        prm = RationalFamilyParams(A, B, lm, variants[j - 1])
        pr, qr = sigma * prm.p_roots(), sigma * prm.q_roots()
        poly = rational_polynomial(pr, qr)
        cells.append({"p": pr, "q": qr, "lam": lm, "sigma": sigma, "variant": prm.variant})
        params.append(prm)
        put(f"T{j}", poly, (1, j - 1))
        # the next trapezoid's a are these b; an H cell mirrors z and λ
        if prm.variant == "H":
            sigma, lm = -sigma, -lm
        A = B
    # unit squares S_j = s_j w^{j-1} H(α_j z, β_j w), H = 1 + z + zw - w
    s = 1.0 + 0j
    for j in range(1, d):
        c0, c1 = coeffs[(1, j - 1)], coeffs[(1, j)]
        if j > 1:
            s = coeffs[(0, j - 1)]
        alpha = c0 / s
        beta = c1 / c0
        sq = LaurentPolynomial({(0, 0): s, (1, 0): s * alpha, (1, 1): s * alpha * beta, (0, 1): -s * beta})
        put(f"S{j}", sq, (0, j - 1))
    # S_d: a line through the two coefficients on its lower edge
    flags = []
    top = abs(coeffs[(0, d - 1)])
    put(f"S{d}", LaurentPolynomial({(0, 1): top}), (0, d - 1))
    flags.append(f"S{d} free coefficient fixed to |a(0,{d - 1})| = {top:.6g}")
    fam = ViroFamily(LaurentPolynomial(coeffs), theorem12_lift(d))
    return Theorem12Construction(d, b, k, ell, r, variants, cells, fam, flags, params)


def build_theorem12_family(d: int, b: int) -> ViroFamily:
    return theorem12_construction(d, b).family


# ---------------------------------------------------------------------------
# named curves used in examples and tests


FTILDE_T = 0.003


def ftilde_family() -> ViroFamily:
    """w(z+2.6+0.5i) + (z+2.5+0.5i)(z+1+0.5i) + t w^2, with t on w^2 only."""
    z, w = LaurentPolynomial.var("z"), LaurentPolynomial.var("w")
    c = lambda x: LaurentPolynomial.constant(x)
    base = w * (z + c(2.6 + 0.5j)) + (z + c(2.5 + 0.5j)) * (z + c(1 + 0.5j)) + w * w
    dom = LatticePolygon.hull([(0, 0), (2, 0), (0, 2)])
    return ViroFamily(base, ConvexLift.from_function(dom, lambda p: 1 if tuple(p) == (0, 2) else 0))


def ftilde(t: complex = FTILDE_T) -> LaurentPolynomial:
    from .viro import evaluate_family

    return evaluate_family(ftilde_family(), t)


def hhat(t: complex = FTILDE_T, eps: float = 8e-7) -> LaurentPolynomial:
    """z f~_t - eps (w+1)(w+10)(w+100): a cubic with connected Cr."""
    z, w = LaurentPolynomial.var("z"), LaurentPolynomial.var("w")
    c = lambda x: LaurentPolynomial.constant(x)
    return z * ftilde(t) - c(eps) * (w + c(1)) * (w + c(10)) * (w + c(100))
