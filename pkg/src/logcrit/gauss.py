"""The logarithmic Gauss map gamma = [z f_z : w f_w], its ramification
(Log-inflection) points, and a distance-to-real diagnostic for branch values.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import LatticePolygon
from .numerics import CONFIG, SystemSolution, Tolerances, solve_system
from .poly import LaurentPolynomial, newton_polygon


@dataclass(frozen=True)
class ProjectiveValue:
    u: complex
    v: complex

    @classmethod
    def normalized(cls, u: complex, v: complex) -> "ProjectiveValue":
        m = max(abs(u), abs(v))
        if m == 0:
            raise ValueError("(0, 0) is not a projective point")
        return cls(complex(u) / m, complex(v) / m)

    def real_defect(self) -> float:
        """Im(u conj v) / (|u|^2 + |v|^2): zero exactly on RP^1."""
        return float((self.u * self.v.conjugate()).imag / (abs(self.u) ** 2 + abs(self.v) ** 2))

    def affine(self) -> complex:
        """u / v (inf when v = 0)."""
        return self.u / self.v if self.v != 0 else complex("inf")

    def close_to(self, other: "ProjectiveValue", tol: float = 1e-10) -> bool:
        return abs(self.u * other.v - self.v * other.u) <= tol


def gauss_pair(f: LaurentPolynomial, p) -> tuple[complex, complex]:
    z, w = p
    u = v = 0j
    for e, c in f.items():
        m = c * complex(z) ** e[0] * complex(w) ** e[1]
        u += e[0] * m
        v += e[1] * m
    return u, v


def gauss_value(f: LaurentPolynomial, p, tol: Tolerances | None = None) -> ProjectiveValue:
    tol = tol or CONFIG
    u, v = gauss_pair(f, p)
    scale = sum(abs(c * complex(p[0]) ** e[0] * complex(p[1]) ** e[1]) for e, c in f.items())
    if max(abs(u), abs(v)) < 1e-13 * max(scale, 1e-300):
        raise ValueError("singular point of C")
    return ProjectiveValue.normalized(u, v)


def gauss_degree(delta: LatticePolygon) -> int:
    """Degree of gamma for a generic curve with Newton polygon delta."""
    a = delta.twice_area()
    if a <= 0:
        raise ValueError("degenerate Newton polygon")
    return a


def ramification_count(delta: LatticePolygon) -> int:
    """Riemann–Hurwitz: 2D + 2g - 2 with g = interior lattice points."""
    return 2 * gauss_degree(delta) + 2 * len(delta.interior_points()) - 2


def inflection_numerator(f: LaurentPolynomial, strip: bool = True) -> LaurentPolynomial:
    """N = f_z Γ_w - f_w Γ_z with Γ_x = ∂_x(z f_z)·(w f_w) - z f_z·∂_x(w f_w).

    The Jacobian determinant of (f, γ) is N / (w f_w)^2.  With ``strip`` the
    common monomial factor in z, w is removed (t is left alone).
    """
    fz = f.partial("z")
    fw = f.partial("w")
    zfz = f.log_partial("z")
    wfw = f.log_partial("w")
    gz = zfz.partial("z") * wfw - zfz * wfw.partial("z")
    gw = zfz.partial("w") * wfw - zfz * wfw.partial("w")
    N = fz * gw - fw * gz
    return N.strip_monomial() if strip and not N.is_zero() else N


@dataclass
class InflectionSet:
    points: list
    gamma_values: list
    residuals: list
    boundary: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)


def log_inflection_points(f: LaurentPolynomial, tol: Tolerances | None = None,
                          expected: int | None = None) -> InflectionSet:
    tol = tol or CONFIG
    N = inflection_numerator(f)
    if N.is_zero():
        return InflectionSet([], [], [])
    if expected is None:
        expected = ramification_count(newton_polygon(f)) if newton_polygon(f).twice_area() > 0 else None
    sol: SystemSolution = solve_system(f, N, tol, expected=expected)
    vals = []
    pts = []
    res = []
    for p, r in zip(sol.points, sol.residuals):
        try:
            vals.append(gauss_value(f, p, tol))
        except ValueError:
            continue
        pts.append(p)
        res.append(r)
    return InflectionSet(pts, vals, res, sol.boundary)


def branch_distance_to_real(infl: InflectionSet | list) -> float:
    vals = infl.gamma_values if isinstance(infl, InflectionSet) else infl
    if not vals:
        return float("inf")
    return min(abs(v.real_defect()) for v in vals)
