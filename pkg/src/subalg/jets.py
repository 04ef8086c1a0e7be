"""Truncated derivative tables at finite point sets.

A jet records the raw derivative values d^a f(p) for every base point p
and every partial multiset a up to a fixed order cap.  Two facts make
jets useful here.  First, any functional built from derivative atoms at
the base points factors through the jet, provided its atoms stay within
the cap.  Second, jets multiply: the Leibniz rule expresses d^a (fg)(p)
as a binomial convolution of lower derivatives of f and g at the same
point, so the (truncated) jet of a product is determined by the jets of
the factors.

Jets are stored as sparse rows indexed by a fixed coordinate
enumeration, which keeps the linear algebra exact and deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .functionals import LinearFunctional
from .linalg import SparseRow
from .poly import (
    Monomial,
    Point,
    Poly,
    as_point,
    monomials_up_to,
    partials_factorial,
)


def _binomial_product(a: Monomial, b: Monomial) -> int:
    out = 1
    for x, y in zip(a, b):
        out *= comb(x + y, y)
    return out


class JetSpace:
    """Derivative coordinates d^a f(p), |a| <= cap, over an ordered point list."""

    __slots__ = ("n", "points", "cap", "coords", "_index", "_by_point")

    def __init__(self, points, cap: int, n: int):
        self.n = n
        self.points: tuple[Point, ...] = tuple(as_point(p, n) for p in points)
        if len(set(self.points)) != len(self.points):
            raise ValueError("jet base points must be pairwise distinct")
        if not self.points:
            raise ValueError("a jet space needs at least one base point")
        self.cap = cap
        partials = sorted(monomials_up_to(n, cap), key=lambda m: (sum(m), m))
        self.coords: tuple[tuple[int, Monomial], ...] = tuple(
            (pi, a) for pi in range(len(self.points)) for a in partials
        )
        self._index = {c: i for i, c in enumerate(self.coords)}
        self._by_point = len(partials)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def point_index(self, point) -> int:
        return self.points.index(as_point(point, self.n))

    def index(self, point_index: int, partials: Monomial) -> int:
        return self._index[(point_index, partials)]

    def jet(self, f: Poly) -> SparseRow:
        """Raw derivative values of ``f``; exact via shifted expansion."""
        out: SparseRow = {}
        for pi, point in enumerate(self.points):
            shifted = f.translate(point)
            for mono, coeff in shifted.terms():
                if sum(mono) <= self.cap:
                    out[self._index[(pi, mono)]] = coeff * partials_factorial(mono)
        return out

    def product(self, u: SparseRow, v: SparseRow) -> SparseRow:
        """Jet of a product from jets of the factors (per-point convolution)."""
        by_point_u: dict[int, list[tuple[Monomial, Fraction]]] = {}
        for c, val in u.items():
            pi, a = self.coords[c]
            by_point_u.setdefault(pi, []).append((a, val))
        by_point_v: dict[int, list[tuple[Monomial, Fraction]]] = {}
        for c, val in v.items():
            pi, a = self.coords[c]
            by_point_v.setdefault(pi, []).append((a, val))
        out: SparseRow = {}
        for pi, left in by_point_u.items():
            right = by_point_v.get(pi)
            if right is None:
                continue
            for a, av in left:
                for b, bv in right:
                    s = tuple(x + y for x, y in zip(a, b))
                    if sum(s) > self.cap:
                        continue
                    c = self._index[(pi, s)]
                    value = out.get(c, Fraction(0)) + _binomial_product(a, b) * av * bv
                    if value:
                        out[c] = value
                    else:
                        out.pop(c, None)
        return out

    def functional_covector(self, functional: LinearFunctional) -> SparseRow:
        """The functional as a row over jet coordinates.

        Every atom must sit at a base point with order within the cap,
        so that applying the functional to f equals pairing the row
        with jet(f).
        """
        out: SparseRow = {}
        for atom in functional.atoms:
            if atom.order > self.cap:
                raise ValueError("functional atom order exceeds the jet cap")
            try:
                pi = self.points.index(atom.point)
            except ValueError:
                raise ValueError("functional atom at a point outside the jet base")
            c = self._index[(pi, atom.partials)]
            value = out.get(c, Fraction(0)) + atom.coeff
            if value:
                out[c] = value
            else:
                out.pop(c, None)
        return out

    def evaluation_covector(self, point) -> SparseRow:
        pi = self.point_index(point)
        return {self._index[(pi, (0,) * self.n)]: Fraction(1)}

    def pair(self, covector: SparseRow, vector: SparseRow) -> Fraction:
        if len(covector) > len(vector):
            covector, vector = vector, covector
        total = Fraction(0)
        for c, val in covector.items():
            other = vector.get(c)
            if other is not None:
                total += val * other
        return total
