"""Subalgebra bases with the subduction algorithm.

A basis here is a finite set of monic nonconstant generators whose
leading monomials generate, as a semigroup under exponent addition, the
leading monomials of the whole subalgebra.  Membership then reduces to
subduction: repeatedly cancel the leading term against a product of
generators until nothing fits.

Bases are kept in a canonical shape: generators sorted by ascending
leading monomial, each monic, and each with every trailing monomial
outside the leading-monomial semigroup.  Canonical shape makes equal
subalgebras produce byte-identical generator lists, which the golden
tests and the command line rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidFiltration, NotAProperCondition, RedundantCondition
from .functionals import Condition, LinearFunctional, check_leibniz
from .poly import (
    Monomial,
    Poly,
    TermOrder,
    monomials_of_degree,
)

_ZERO_STEP_GUARD = 10_000


def _witness_search(
    target: Monomial,
    degrees: Sequence[Monomial],
    memo: dict[Monomial, tuple[int, ...] | None],
) -> tuple[int, ...] | None:
    """Multiplicities e with sum e_i * degrees_i == target, or None.

    The zero target always succeeds with the empty product.  Generators
    all have positive total degree, so the recursion grounds out.
    """
    if not any(target):
        return (0,) * len(degrees)
    hit = memo.get(target, _witness_search)
    if hit is not _witness_search:
        return hit
    result = None
    for idx, d in enumerate(degrees):
        if all(t >= c for t, c in zip(target, d)):
            rest = _witness_search(
                tuple(t - c for t, c in zip(target, d)), degrees, memo
            )
            if rest is not None:
                picked = list(rest)
                picked[idx] += 1
                result = tuple(picked)
                break
    memo[target] = result
    return result


class SagbiBasis:
    """Canonicalized generators of a subalgebra, plus cached reductions."""

    __slots__ = ("n", "order", "gens", "_degrees", "_witness_memo", "_canon")

    def __init__(self, n: int, order: TermOrder, gens: Sequence[Poly]):
        self.n = n
        self.order = order
        self.gens = tuple(gens)
        self._degrees = tuple(g.leading_monomial(order) for g in self.gens)
        if len(set(self._degrees)) != len(self._degrees):
            raise ValueError("generators must have pairwise distinct leading monomials")
        self._witness_memo: dict[Monomial, tuple[int, ...] | None] = {}
        self._canon: dict[Monomial, Poly] = {}

    def degrees(self) -> tuple[Monomial, ...]:
        """Leading monomials of the generators, ascending."""
        return self._degrees

    def max_generator_degree(self) -> int:
        return max((g.total_degree() for g in self.gens), default=0)

    def witness(self, mono: Monomial) -> tuple[int, ...] | None:
        return _witness_search(tuple(mono), self._degrees, self._witness_memo)

    def contains_monomial(self, mono: Monomial) -> bool:
        return self.witness(mono) is not None

    def product_for_exponents(self, exponents: Sequence[int]) -> Poly:
        out = Poly.constant(self.n, 1)
        for g, k in zip(self.gens, exponents):
            if k:
                out = out * g**k
        return out

    def product_for(self, mono: Monomial) -> Poly:
        """The monic generator product with leading monomial ``mono``."""
        e = self.witness(mono)
        if e is None:
            raise ValueError(f"{mono} is not in the leading-monomial semigroup")
        return self.product_for_exponents(e)

    def canonical_element(self, mono: Monomial) -> Poly:
        """The unique monic member with head ``mono`` and reduced tail.

        Every monomial below the head lies outside the leading-monomial
        semigroup, so these elements form a triangular vector-space
        basis of the subalgebra.
        """
        cached = self._canon.get(mono)
        if cached is not None:
            return cached
        e = self.witness(mono)
        if e is None:
            raise ValueError(f"{mono} is not in the leading-monomial semigroup")
        if sum(e) == 0:
            result = Poly.constant(self.n, 1)
        else:
            # Peel one generator and recurse: the cached lower element is
            # already tail-reduced, so the product stays sparse no matter
            # how large the witness exponents are.
            i = next(k for k, count in enumerate(e) if count)
            rest = tuple(m - d for m, d in zip(mono, self._degrees[i]))
            if sum(rest) == 0:
                base = self.gens[i]
            else:
                base = self.canonical_element(rest) * self.gens[i]
            result = self._reduce_tail(base, mono)
        self._canon[mono] = result
        return result

    def _reduce_tail(self, p: Poly, head: Monomial) -> Poly:
        # Tails of canonical elements avoid the semigroup entirely, so a
        # single pass over the starting monomials is complete.
        out = p
        for mono, coeff in p.terms():
            if mono == head:
                continue
            if self.contains_monomial(mono):
                out = out - coeff * self.canonical_element(mono)
        return out

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def __repr__(self):
        inner = ", ".join(str(g) for g in self.gens)
        return f"SagbiBasis[{inner}]"


@dataclass(frozen=True)
class SubductionStep:
    """One cancellation: subtract ``coeff`` times the product with exponents ``e``."""

    coeff: Fraction
    exponents: tuple[int, ...]


@dataclass(frozen=True)
class SubductionResult:
    remainder: Poly
    steps: tuple[SubductionStep, ...]


def subduce(f: Poly, basis: SagbiBasis) -> SubductionResult:
    """Cancel leading terms of ``f`` against generator products.

    Stops when the remainder is zero or its leading monomial falls
    outside the leading-monomial semigroup.  The leading monomial
    strictly decreases at every step; both exit conditions are checked.
    """
    steps: list[SubductionStep] = []
    rem = f
    order = basis.order
    previous_key = None
    guard = 0
    while not rem.is_zero():
        mono, coeff = rem.leading(order)
        key = order.key(mono)
        assert previous_key is None or key < previous_key, "subduction failed to descend"
        previous_key = key
        exponents = basis.witness(mono)
        if exponents is None:
            break
        rem = rem - coeff * basis.product_for(mono)
        steps.append(SubductionStep(coeff, exponents))
        guard += 1
        if guard > _ZERO_STEP_GUARD:
            raise RuntimeError("subduction exceeded the step guard")
    assert rem.is_zero() or basis.witness(rem.leading_monomial(order)) is None
    return SubductionResult(rem, tuple(steps))


def is_member(f: Poly, basis: SagbiBasis) -> bool:
    """Exact membership via subduction; valid when ``basis`` is a true basis."""
    return subduce(f, basis).remainder.is_zero()


def minimalize(gens: Iterable[Poly], order: TermOrder, n: int | None = None) -> SagbiBasis:
    """Drop superfluous generators and normalize the survivors.

    A generator is superfluous when its leading monomial already lies in
    the semigroup spanned by the other leading monomials.  Survivors are
    made monic and tail-reduced into canonical shape.
    """
    pool: list[Poly] = []
    for g in gens:
        if n is None:
            n = g.n
        if g.is_zero() or g.is_constant():
            continue
        pool.append(g.monic(order))
    if n is None:
        raise ValueError("cannot infer the variable count from an empty list")
    if not pool:
        return SagbiBasis(n, order, ())

    by_lm: dict[Monomial, Poly] = {}
    for g in pool:
        by_lm.setdefault(g.leading_monomial(order), g)
    lms = sorted(by_lm, key=order.key)
    kept: list[Monomial] = []
    for lm in lms:
        others = tuple(m for m in lms if m != lm)
        if _witness_search(lm, others, {}) is None:
            kept.append(lm)

    rough = SagbiBasis(n, order, [by_lm[lm] for lm in kept])
    return SagbiBasis(n, order, [rough.canonical_element(lm) for lm in kept])


def kernel_sagbi_raw(basis: SagbiBasis, functional: LinearFunctional) -> list[Poly]:
    """The unminimalized generator set for the kernel of ``functional``.

    With j the first generator index where the functional is nonzero,
    the set contains the corrected other generators, all corrected
    products with generator j, and the corrected cube of generator j.
    """
    values = [functional.apply(g) for g in basis.gens]
    j = next((i for i, v in enumerate(values) if v != 0), None)
    if j is None:
        raise NotAProperCondition(
            "functional vanishes on every generator of the algebra"
        )
    gj = basis.gens[j]
    vj = values[j]
    out: list[Poly] = []
    for i, g in enumerate(basis.gens):
        if i == j:
            continue
        out.append(g - (values[i] / vj) * gj)
    for g in basis.gens:
        p = g * gj
        out.append(p - (functional.apply(p) / vj) * gj)
    cube = gj * gj * gj
    out.append(cube - (functional.apply(cube) / vj) * gj)
    return out


def kernel_sagbi(basis: SagbiBasis, functional: LinearFunctional) -> SagbiBasis:
    """Minimal basis of the kernel of a valid condition inside the algebra."""
    return minimalize(kernel_sagbi_raw(basis, functional), basis.order, basis.n)


def dropped_degree(basis: SagbiBasis, functional: LinearFunctional) -> Monomial:
    """The leading monomial that leaves the semigroup when cutting the kernel."""
    for g in basis.gens:
        value = functional.apply(g)
        if value != 0:
            return g.leading_monomial(basis.order)
    raise NotAProperCondition("functional vanishes on every generator of the algebra")


def variables_basis(n: int, order: TermOrder) -> SagbiBasis:
    """The basis {x1, ..., xn} of the full polynomial ring."""
    return minimalize([Poly.variable(n, i + 1) for i in range(n)], order, n)


# -- codimension ------------------------------------------------------


@dataclass(frozen=True)
class CodimReport:
    """Codimension, the missing monomials, and the conductor degree.

    ``conductor`` is one more than the largest missing total degree;
    every monomial of at least that degree lies in the semigroup.
    """

    codim: int
    missing: tuple[Monomial, ...]
    conductor: int


def _scan_missing(basis: SagbiBasis, target: int, degree_cap: int) -> list[Monomial]:
    missing: list[Monomial] = []
    degree = 0
    while len(missing) < target and degree <= degree_cap:
        for mono in sorted(monomials_of_degree(basis.n, degree), key=basis.order.key):
            if not basis.contains_monomial(mono):
                missing.append(mono)
        degree += 1
    return missing


def codimension_certified(basis: SagbiBasis, codim: int) -> CodimReport:
    """Codimension report when the codimension is already certified.

    The certificate lets the degree scan stop exactly when ``codim``
    missing monomials have been found.
    """
    cap = (codim + 1) * (basis.max_generator_degree() + 1) + basis.n + 2
    missing = _scan_missing(basis, codim, cap)
    if len(missing) != codim:
        raise RuntimeError(
            f"certified codimension {codim} inconsistent with scan ({len(missing)} found)"
        )
    conductor = 1 + max((sum(m) for m in missing), default=-1)
    return CodimReport(codim, tuple(missing), conductor)


def codimension_scan(
    basis: SagbiBasis, degree_cap: int, known_codim: int | None = None
) -> tuple[CodimReport, bool]:
    """Standalone scan up to ``degree_cap``; the bool says whether it is exact.

    The scan always produces a lower bound: the missing monomials found
    so far.  It is exact when either an externally certified codimension
    matches, or the top ``max_generator_degree`` scanned degrees contain
    no missing monomial.  In the latter case any higher monomial
    contains a full-semigroup monomial from that window, so induction on
    degree shows nothing above the window is missing.
    """
    missing: list[Monomial] = []
    for degree in range(degree_cap + 1):
        for mono in sorted(monomials_of_degree(basis.n, degree), key=basis.order.key):
            if not basis.contains_monomial(mono):
                missing.append(mono)
    conductor = 1 + max((sum(m) for m in missing), default=-1)
    report = CodimReport(len(missing), tuple(missing), conductor)
    conclusive = known_codim is not None and len(missing) == known_codim
    window = basis.max_generator_degree()
    if window >= 1 and degree_cap >= window and conductor <= degree_cap - window + 1:
        conclusive = True
    return report, conclusive


# -- filtrations ------------------------------------------------------


@dataclass(frozen=True)
class FiltrationLevel:
    condition: Condition
    basis: SagbiBasis
    report: CodimReport


class ConditionFiltration:
    """A chain of algebras cut one condition at a time from K[x]."""

    __slots__ = ("n", "order", "base", "levels")

    def __init__(
        self,
        n: int,
        order: TermOrder,
        base: SagbiBasis,
        levels: Sequence[FiltrationLevel],
    ):
        self.n = n
        self.order = order
        self.base = base
        self.levels = tuple(levels)

    @property
    def codim(self) -> int:
        return len(self.levels)

    @property
    def final_basis(self) -> SagbiBasis:
        return self.levels[-1].basis if self.levels else self.base

    @property
    def final_report(self) -> CodimReport:
        if self.levels:
            return self.levels[-1].report
        return CodimReport(0, (), 0)

    def conditions(self) -> tuple[Condition, ...]:
        return tuple(level.condition for level in self.levels)

    def prefix(self, length: int) -> ConditionFiltration:
        return ConditionFiltration(self.n, self.order, self.base, self.levels[:length])


def truncated_algebra_basis(
    basis: SagbiBasis, report: CodimReport, max_degree: int
) -> list[Poly]:
    """Canonical elements for every head monomial of degree <= max_degree.

    With the missing set certified, semigroup membership is a set lookup
    and the result is a vector-space basis of the degree slice (under
    degree-compatible orders).
    """
    missing = set(report.missing)
    out: list[Poly] = []
    for degree in range(max_degree + 1):
        for mono in sorted(monomials_of_degree(basis.n, degree), key=basis.order.key):
            if mono not in missing:
                out.append(basis.canonical_element(mono))
    return out


def build_from_conditions(
    n: int,
    conditions: Sequence[Condition],
    order: TermOrder,
) -> ConditionFiltration:
    """Validate conditions level by level and cut the kernel chain.

    Each condition must satisfy the Leibniz rule for its declared points
    on the algebra it cuts, and must not vanish on all of it.  The
    codimension grows by exactly one per level; the scan certificate and
    the dropped leading monomial are cross-checked on every step.
    """
    base = variables_basis(n, order)
    current = base
    report = CodimReport(0, (), 0)
    levels: list[FiltrationLevel] = []
    for index, condition in enumerate(conditions, start=1):
        functional = condition.functional
        if functional.n != n:
            raise InvalidFiltration(index, "condition has the wrong variable count")
        bound = functional.max_order + report.conductor
        span = truncated_algebra_basis(current, report, bound)
        kind = condition.kind
        if not check_leibniz(functional, kind.alpha, kind.beta, span):
            raise InvalidFiltration(index, "condition fails the Leibniz rule on its level")
        # For a functional that does satisfy the Leibniz rule, vanishing on
        # the generators forces vanishing on the whole level.
        if functional.is_zero() or all(
            functional.apply(g) == 0 for g in current.gens
        ):
            raise RedundantCondition(index, "condition vanishes on its level")
        dropped = dropped_degree(current, functional)
        current = kernel_sagbi(current, functional)
        report = codimension_certified(current, len(levels) + 1)
        if set(report.missing) != set(levels[-1].report.missing if levels else ()) | {dropped}:
            raise RuntimeError("kernel step did not drop exactly the expected monomial")
        levels.append(FiltrationLevel(condition, current, report))
    return ConditionFiltration(n, order, base, levels)


def bases_equivalent(left: SagbiBasis, right: SagbiBasis) -> bool:
    """Two-sided subduction: every generator of each lies in the other."""
    return all(is_member(g, right) for g in left.gens) and all(
        is_member(g, left) for g in right.gens
    )


# -- completion from raw generators -----------------------------------


def _representations(
    target: Monomial, degrees: Sequence[Monomial], idx: int = 0
) -> Iterable[tuple[int, ...]]:
    if not any(target):
        yield (0,) * (len(degrees) - idx)
        return
    if idx == len(degrees):
        return
    d = degrees[idx]
    top = min(
        (t // c for t, c in zip(target, d) if c), default=sum(target)
    )
    for k in range(top, -1, -1):
        rest = tuple(t - k * c for t, c in zip(target, d))
        if any(v < 0 for v in rest):
            continue
        for tail in _representations(rest, degrees, idx + 1):
            yield (k,) + tail


def sagbi_from_generators(
    gens: Sequence[Poly], order: TermOrder, degree_cap: int
) -> SagbiBasis:
    """Desk-scale completion of a raw generator list into a basis.

    The raw pool is repeatedly minimalized; pool members that fail to
    subduce to zero contribute their remainders back, as do differences
    of distinct generator products sharing a leading monomial (searched
    up to ``degree_cap``).  For finite-codimension algebras this
    stabilizes quickly at small scale; the cap keeps the search finite.
    """
    n = gens[0].n if gens else None
    pool = [g for g in gens if not (g.is_zero() or g.is_constant())]
    current = minimalize(pool, order, n)
    for _ in range(256):
        added = None
        for g in pool:
            rem = subduce(g, current).remainder
            if not rem.is_zero():
                added = rem
                break
        if added is None:
            degrees = current.degrees()
            for degree in range(2, degree_cap + 1):
                for mono in sorted(
                    monomials_of_degree(current.n, degree), key=order.key
                ):
                    reps = []
                    for e in _representations(mono, degrees):
                        reps.append(e)
                        if len(reps) > 8:
                            break
                    if len(reps) < 2:
                        continue
                    base_product = current.product_for_exponents(reps[0])
                    for e in reps[1:]:
                        difference = base_product - current.product_for_exponents(e)
                        rem = subduce(difference, current).remainder
                        if not rem.is_zero():
                            added = rem
                            break
                    if added is not None:
                        break
                if added is not None:
                    break
        if added is None:
            return current
        pool.append(added)
        current = minimalize(pool, order, current.n)
    raise RuntimeError("completion did not stabilize within the iteration guard")
