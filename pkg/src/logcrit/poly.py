"""Laurent polynomials with exact integer exponents and complex coefficients.

Two or three variables: (z, w) or (z, w, t).  Values are immutable; every
operation returns a new polynomial.  Terms whose magnitude falls below
``DROP_REL`` times the largest coefficient are dropped after arithmetic so
that Newton polygons are not inflated by rounding noise.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .lattice import LatticePolygon

DROP_REL = 1e-14
VARS = {"z": 0, "w": 1, "t": 2}


def _clean(terms: Mapping, arity: int, drop_rel: float = DROP_REL) -> dict:
    out = {}
    for e, c in terms.items():
        c = complex(c)
        if c != 0:
            out[tuple(int(x) for x in e)] = c
    if out and drop_rel > 0:
        cmax = max(abs(c) for c in out.values())
        out = {e: c for e, c in out.items() if abs(c) >= drop_rel * cmax}
    for e in out:
        if len(e) != arity:
            raise ValueError(f"exponent {e} has wrong arity (expected {arity})")
    return out


class LaurentPolynomial:
    """Finite map exponent -> complex coefficient."""

    __slots__ = ("_terms", "arity")

    def __init__(self, terms: Mapping | None = None, arity: int = 2, clean: bool = True,
                 drop_rel: float = 0.0):
        if arity not in (2, 3):
            raise ValueError("arity must be 2 or 3")
        self.arity = arity
        self._terms = _clean(terms or {}, arity, drop_rel) if clean else dict(terms or {})

    @classmethod
    def _arith(cls, terms, arity):
        # results of arithmetic get the relative noise floor
        return cls(terms, arity, drop_rel=DROP_REL)

    # -- construction -------------------------------------------------------
    @classmethod
    def monomial(cls, exp: Sequence[int], coeff: complex = 1.0) -> "LaurentPolynomial":
        return cls({tuple(exp): coeff}, arity=len(exp))

    @classmethod
    def var(cls, name: str, arity: int = 2) -> "LaurentPolynomial":
        e = [0] * arity
        e[VARS[name]] = 1
        return cls({tuple(e): 1.0}, arity)

    @classmethod
    def constant(cls, c: complex, arity: int = 2) -> "LaurentPolynomial":
        return cls({(0,) * arity: c}, arity)

    @classmethod
    def from_univariate(cls, coeffs: Sequence[complex], var: str = "z", arity: int = 2):
        """Ascending coefficient list in one variable."""
        terms = {}
        for k, c in enumerate(coeffs):
            e = [0] * arity
            e[VARS[var]] = k
            terms[tuple(e)] = c
        return cls(terms, arity)

    # -- basic access -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[tuple[int, ...]]:
        return sorted(self._terms)

    def coeff(self, exp: Sequence[int]) -> complex:
        return self._terms.get(tuple(exp), 0j)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def max_abs(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def __repr__(self):
        parts = []
        for e, c in sorted(self._terms.items()):
            parts.append(f"({c:.6g})*" + "*".join(f"{v}^{k}" for v, k in zip("zwt", e) if k))
        return "LaurentPolynomial(" + (" + ".join(parts) if parts else "0") + ")"

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other):
        if isinstance(other, (int, float, complex)):
            return LaurentPolynomial.constant(other, self.arity)
        if other.arity != self.arity:
            raise ValueError("arity mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0j) + c
        return LaurentPolynomial._arith(terms, self.arity)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self._terms.items()}, self.arity, clean=False)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return LaurentPolynomial({e: c * other for e, c in self._terms.items()}, self.arity)
        other = self._check(other)
        acc: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc.setdefault(e, []).append(c1 * c2)
        return LaurentPolynomial._arith({e: _csum(v) for e, v in acc.items()}, self.arity)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers only for monomials; use monomial()")
        out = LaurentPolynomial.constant(1.0, self.arity)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def almost_equal(self, other: "LaurentPolynomial", rel: float = 1e-12) -> bool:
        scale = max(self.max_abs(), other.max_abs(), 1e-300)
        keys = set(self._terms) | set(other._terms)
        return all(abs(self.coeff(k) - other.coeff(k)) <= rel * scale for k in keys)

    # -- calculus and evaluation -------------------------------------------
    def partial(self, var: str | int) -> "LaurentPolynomial":
        i = VARS[var] if isinstance(var, str) else var
        terms = {}
        for e, c in self._terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                terms[tuple(e2)] = c * e[i]
        return LaurentPolynomial._arith(terms, self.arity)

    def log_partial(self, var: str | int) -> "LaurentPolynomial":
        """x ∂_x f, which keeps the support."""
        i = VARS[var] if isinstance(var, str) else var
        return LaurentPolynomial({e: c * e[i] for e, c in self._terms.items()}, self.arity)

    def evaluate(self, point: Sequence[complex]) -> complex:
        """Direct sum ordered by increasing magnitude to limit cancellation."""
        if len(point) != self.arity:
            raise ValueError("point has wrong arity")
        vals = []
        for e, c in self._terms.items():
            v = c
            for x, k in zip(point, e):
                if k < 0 and x == 0:
                    raise ZeroDivisionError("negative exponent evaluated at zero")
                v = v * complex(x) ** k
            vals.append(v)
        vals.sort(key=abs)
        return _csum(vals)

    def __call__(self, *point):
        return self.evaluate(point)

    def substitute(self, var: str, value: complex) -> "LaurentPolynomial":
        """Specialize one variable; the result keeps the same arity."""
        i = VARS[var]
        terms: dict = {}
        for e, c in self._terms.items():
            e2 = list(e)
            e2[i] = 0
            terms.setdefault(tuple(e2), []).append(c * complex(value) ** e[i])
        return LaurentPolynomial({e: _csum(v) for e, v in terms.items()}, self.arity)

    def drop_variable(self, var: str = "t") -> "LaurentPolynomial":
        """Arity-3 -> arity-2 after the variable has been specialized away."""
        i = VARS[var]
        if self.arity != 3 or i != 2:
            raise ValueError("only t can be dropped from a trivariate polynomial")
        if any(e[2] for e in self._terms):
            raise ValueError("polynomial still depends on t")
        return LaurentPolynomial({e[:2]: c for e, c in self._terms.items()}, 2)

    def with_t(self) -> "LaurentPolynomial":
        if self.arity == 3:
            return self
        return LaurentPolynomial({e + (0,): c for e, c in self._terms.items()}, 3, clean=False)

    def scale_variables(self, factors: Sequence[complex]) -> "LaurentPolynomial":
        """f(λ1 z, λ2 w, ...)."""
        terms = {}
        for e, c in self._terms.items():
            v = c
            for lam, k in zip(factors, e):
                v *= complex(lam) ** k
            terms[e] = v
        return LaurentPolynomial(terms, self.arity)

    # -- exponent bookkeeping -----------------------------------------------
    def min_exponents(self) -> tuple[int, ...]:
        return tuple(min(e[i] for e in self._terms) for i in range(self.arity))

    def strip_monomial(self) -> "LaurentPolynomial":
        """Divide by the largest monomial z^a w^b (t untouched) so that the
        minimal z- and w-exponents are 0."""
        if self.is_zero():
            return self
        m = self.min_exponents()
        shift = [m[0], m[1]] + ([0] if self.arity == 3 else [])
        return self.shift_exponents([-x for x in shift])

    def shift_exponents(self, v: Sequence[int]) -> "LaurentPolynomial":
        return LaurentPolynomial({tuple(a + b for a, b in zip(e, v)): c for e, c in self._terms.items()},
                                 self.arity, clean=False)

    def degree_in(self, var: str) -> int:
        i = VARS[var]
        return max(e[i] for e in self._terms) - min(e[i] for e in self._terms)

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {"terms": [{"e": list(e), "c": [c.real, c.imag]} for e, c in sorted(self._terms.items())]}

    @classmethod
    def from_json(cls, obj) -> "LaurentPolynomial":
        if isinstance(obj, str):
            obj = json.loads(obj)
        terms = obj["terms"]
        if not terms:
            return cls({}, 2)
        arity = len(terms[0]["e"])
        acc: dict = {}
        for t in terms:
            e = tuple(int(x) for x in t["e"])
            c = t["c"]
            c = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
            acc[e] = acc.get(e, 0j) + c
        return cls(acc, arity)

    def arrays(self):
        """(exponents int array, coefficients complex array) for vector code."""
        items = sorted(self._terms.items())
        E = np.array([e for e, _ in items], dtype=np.int64).reshape(-1, self.arity)
        C = np.array([c for _, c in items], dtype=complex)
        return E, C


def _csum(vals) -> complex:
    vals = list(vals)
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


# ---------------------------------------------------------------------------
# Newton polygons and truncations


def newton_polygon(f: LaurentPolynomial) -> LatticePolygon:
    if f.is_zero():
        raise ValueError("zero polynomial has no Newton polygon")
    return LatticePolygon.hull(e[:2] for e in f.support())


def truncate(f: LaurentPolynomial, face) -> LaurentPolynomial:
    """Terms whose (z, w)-exponent lies in ``face``: a LatticePolygon, an edge
    given as a pair of points, or a single vertex."""
    if isinstance(face, LatticePolygon):
        poly = face
    else:
        pts = [face] if isinstance(face[0], (int, np.integer)) else list(face)
        poly = LatticePolygon.hull(pts)
    return LaurentPolynomial({e: c for e, c in f.items() if poly.contains(e[:2])}, f.arity, clean=False)


# ---------------------------------------------------------------------------
# Lattice maps


@dataclass(frozen=True)
class AffineLatticeMap:
    """Exponent map j -> A j + b with det A = ±1."""

    matrix: tuple[tuple[int, ...], ...]
    translation: tuple[int, ...]

    def __post_init__(self):
        A = np.array(self.matrix, dtype=np.int64)
        if A.shape[0] != A.shape[1] or A.shape[0] != len(self.translation):
            raise ValueError("shape mismatch")
        det = round(np.linalg.det(A))
        if det not in (1, -1):
            raise ValueError("lattice map must be unimodular (det ±1)")

    @classmethod
    def linear(cls, matrix, translation=None):
        n = len(matrix)
        return cls(tuple(tuple(int(x) for x in r) for r in matrix),
                   tuple(int(x) for x in (translation or [0] * n)))

    @classmethod
    def identity(cls, n: int, translation=None):
        return cls.linear([[int(i == j) for j in range(n)] for i in range(n)], translation)

    @property
    def dim(self) -> int:
        return len(self.translation)

    def apply_point(self, p: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * x for a, x in zip(row, p)) + b for row, b in zip(self.matrix, self.translation))

    def inverse(self) -> "AffineLatticeMap":
        A = np.array(self.matrix, dtype=np.int64)
        inv = np.rint(np.linalg.inv(A)).astype(np.int64)
        if not np.array_equal(inv @ A, np.eye(len(A), dtype=np.int64)):
            raise ValueError("integer inverse failed")
        b = -inv @ np.array(self.translation, dtype=np.int64)
        return AffineLatticeMap.linear(inv.tolist(), b.tolist())

    def compose(self, other: "AffineLatticeMap") -> "AffineLatticeMap":
        """self ∘ other."""
        A = np.array(self.matrix, dtype=np.int64)
        B = np.array(other.matrix, dtype=np.int64)
        b = A @ np.array(other.translation, dtype=np.int64) + np.array(self.translation, dtype=np.int64)
        return AffineLatticeMap.linear((A @ B).tolist(), b.tolist())


def apply_lattice_map(f: LaurentPolynomial, m: AffineLatticeMap) -> LaurentPolynomial:
    if m.dim != f.arity:
        raise ValueError("map dimension does not match polynomial arity")
    return LaurentPolynomial({m.apply_point(e): c for e, c in f.items()}, f.arity, clean=False)


def shift_w(f: LaurentPolynomial, by: complex = 1.0) -> LaurentPolynomial:
    """Substitute w = w~ + by and expand binomially (f polynomial in w)."""
    if any(e[1] < 0 for e in f.support()):
        raise ValueError("shift_w needs nonnegative w-exponents")
    acc: dict = {}
    by = complex(by)
    for e, c in f.items():
        n = e[1]
        for k in range(n + 1):
            e2 = list(e)
            e2[1] = k
            acc.setdefault(tuple(e2), []).append(c * math.comb(n, k) * by ** (n - k))
    return LaurentPolynomial._arith({e: _csum(v) for e, v in acc.items()}, f.arity)


def from_roots(roots: Sequence[complex], var: str = "z", lead: complex = 1.0, arity: int = 2):
    """lead * prod (x - r)."""
    p = np.array([complex(lead)])
    for r in roots:
        p = np.convolve(p, np.array([1.0, -complex(r)]))
    return LaurentPolynomial.from_univariate(p[::-1], var, arity)


def z_(arity: int = 2):
    return LaurentPolynomial.var("z", arity)


def w_(arity: int = 2):
    return LaurentPolynomial.var("w", arity)


def t_():
    return LaurentPolynomial.var("t", 3)
