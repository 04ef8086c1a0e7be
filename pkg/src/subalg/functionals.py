"""Linear functionals built from derivative evaluations at rational points.

A functional is a finite sum of atoms ``c * (f -> f^(d)(p))`` where d is
a multiset of partial derivatives (as per-variable counts) and p is a
point.  Character differences ``f -> c*(f(a) - f(b))`` and point
derivations are both of this shape, which is why one class covers every
condition the rest of the package works with.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateCondition, DimensionMismatch
from .linalg import solve
from .poly import Partials, Point, Poly, as_fraction, as_point


@dataclass(frozen=True)
class DerivativeAtom:
    """One weighted derivative evaluation: coeff * f^(partials)(point)."""

    coeff: Fraction
    point: Point
    partials: Partials

    @property
    def order(self) -> int:
        return sum(self.partials)

    def apply(self, f: Poly) -> Fraction:
        return self.coeff * f.derive(self.partials).evaluate(self.point)


def _atom_sort_key(atom: DerivativeAtom):
    return (atom.point, atom.order, atom.partials)


class LinearFunctional:
    """A finite Fraction-combination of derivative evaluations.

    Atoms are merged, zero atoms dropped, and the remainder sorted by
    point then derivative order, so two functionals built differently
    compare equal whenever they are equal term by term.
    """

    __slots__ = ("n", "atoms")

    def __init__(self, n: int, atoms: Sequence[DerivativeAtom] = ()):
        merged: dict[tuple[Point, Partials], Fraction] = {}
        for atom in atoms:
            if len(atom.point) != n or len(atom.partials) != n:
                raise DimensionMismatch("atom does not fit a functional in "
                                        f"{n} variables")
            key = (atom.point, atom.partials)
            merged[key] = merged.get(key, Fraction(0)) + atom.coeff
        clean = [
            DerivativeAtom(coeff, point, partials)
            for (point, partials), coeff in merged.items()
            if coeff
        ]
        clean.sort(key=_atom_sort_key)
        self.n = n
        self.atoms = tuple(clean)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> LinearFunctional:
        return cls(n)

    @classmethod
    def evaluation(cls, point: Sequence, coeff=1) -> LinearFunctional:
        pt = as_point(point)
        n = len(pt)
        return cls(n, [DerivativeAtom(as_fraction(coeff), pt, (0,) * n)])

    @classmethod
    def partial_at(cls, point: Sequence, partials: Sequence[int], coeff=1) -> LinearFunctional:
        pt = as_point(point)
        return cls(len(pt), [DerivativeAtom(as_fraction(coeff), pt, tuple(partials))])

    @classmethod
    def directional_at(cls, point: Sequence, direction: Sequence, coeff=1) -> LinearFunctional:
        """First-order derivative along ``direction``, split into pure partials."""
        pt = as_point(point)
        vec = as_point(direction)
        if len(vec) != len(pt):
            raise DimensionMismatch("direction and point sizes differ")
        if all(v == 0 for v in vec):
            raise DegenerateCondition("direction vector must be nonzero")
        n = len(pt)
        c = as_fraction(coeff)
        atoms = []
        for i, weight in enumerate(vec):
            if weight == 0:
                continue
            unit = tuple(1 if j == i else 0 for j in range(n))
            atoms.append(DerivativeAtom(c * weight, pt, unit))
        return cls(n, atoms)

    # -- algebra ------------------------------------------------------

    def apply(self, f: Poly) -> Fraction:
        if f.n != self.n:
            raise DimensionMismatch("polynomial and functional sizes differ")
        return sum((atom.apply(f) for atom in self.atoms), Fraction(0))

    def __add__(self, other: LinearFunctional) -> LinearFunctional:
        if self.n != other.n:
            raise DimensionMismatch("cannot add functionals of different sizes")
        return LinearFunctional(self.n, self.atoms + other.atoms)

    def __sub__(self, other: LinearFunctional) -> LinearFunctional:
        return self + other.scale(-1)

    def scale(self, factor) -> LinearFunctional:
        c = as_fraction(factor)
        return LinearFunctional(
            self.n,
            [DerivativeAtom(a.coeff * c, a.point, a.partials) for a in self.atoms],
        )

    __rmul__ = scale

    def is_zero(self) -> bool:
        return not self.atoms

    @property
    def max_order(self) -> int:
        """Highest derivative order among atoms; 0 for the zero functional."""
        return max((a.order for a in self.atoms), default=0)

    def points(self) -> tuple[Point, ...]:
        seen: dict[Point, None] = {}
        for atom in self.atoms:
            seen.setdefault(atom.point, None)
        return tuple(sorted(seen))

    def __eq__(self, other):
        if not isinstance(other, LinearFunctional):
            return NotImplemented
        return self.n == other.n and self.atoms == other.atoms

    def __hash__(self):
        return hash((self.n, self.atoms))

    def __repr__(self):
        pieces = []
        for a in self.atoms:
            pt = ",".join(str(c) for c in a.point)
            d = "".join(f"d{i + 1}^{k}" if k > 1 else f"d{i + 1}"
                        for i, k in enumerate(a.partials) if k)
            d = d or "eval"
            pieces.append(f"{a.coeff}*{d}@({pt})")
        return "Functional[" + (" + ".join(pieces) or "0") + "]"


def character_difference(alpha: Sequence, beta: Sequence, coeff=1) -> LinearFunctional:
    """The functional f -> coeff * (f(alpha) - f(beta)), alpha != beta."""
    a = as_point(alpha)
    b = as_point(beta)
    if len(a) != len(b):
        raise DimensionMismatch("points of a character difference differ in size")
    if a == b:
        raise DegenerateCondition("character difference needs two distinct points")
    c = as_fraction(coeff)
    if c == 0:
        raise DegenerateCondition("character difference needs a nonzero scale")
    n = len(a)
    unit = (0,) * n
    return LinearFunctional(n, [DerivativeAtom(c, a, unit), DerivativeAtom(-c, b, unit)])


@dataclass(frozen=True)
class ConditionKind:
    """Declared shape of a condition: the (alpha, beta) of its Leibniz rule.

    Character differences have alpha != beta; derivations have beta ==
    alpha.
    """

    name: str  # "chardiff" or "derivation"
    alpha: Point
    beta: Point

    @classmethod
    def chardiff(cls, alpha: Sequence, beta: Sequence) -> ConditionKind:
        return cls("chardiff", as_point(alpha), as_point(beta))

    @classmethod
    def derivation(cls, point: Sequence) -> ConditionKind:
        pt = as_point(point)
        return cls("derivation", pt, pt)


@dataclass(frozen=True)
class Condition:
    """A functional together with its declared kind."""

    functional: LinearFunctional
    kind: ConditionKind


def check_leibniz(
    functional: LinearFunctional,
    alpha: Sequence,
    beta: Sequence,
    span: Sequence[Poly],
) -> bool:
    """Test L(fg) = f(alpha) L(g) + g(beta) L(f) on all ordered pairs from span.

    ``span`` should be a spanning set of the algebra being tested,
    truncated by the caller to the degree bound that makes the pair test
    conclusive for it.
    """
    a = as_point(alpha, functional.n)
    b = as_point(beta, functional.n)
    values = [functional.apply(f) for f in span]
    at_alpha = [f.evaluate(a) for f in span]
    at_beta = [f.evaluate(b) for f in span]
    for i, f in enumerate(span):
        for j, g in enumerate(span):
            left = functional.apply(f * g)
            right = at_alpha[i] * values[j] + at_beta[j] * values[i]
            if left != right:
                return False
    return True


def express_in_span(
    functional: LinearFunctional,
    basis: Sequence[LinearFunctional],
    test_space: Sequence[Poly],
) -> list[Fraction] | None:
    """Coefficients c with L = sum c_i basis_i as functions on span(test_space).

    Returns None when no exact combination matches on the test space.
    """
    matrix = [[b.apply(t) for b in basis] for t in test_space]
    rhs = [functional.apply(t) for t in test_space]
    solution = solve(matrix, rhs)
    if solution is None:
        return None
    if len(solution) < len(basis):
        solution = solution + [Fraction(0)] * (len(basis) - len(solution))
    return solution
