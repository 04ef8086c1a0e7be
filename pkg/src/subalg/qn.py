"""Point-set algebras with prescribed vanishing derivatives, two ways.

Fix a finite set S of rational points and an order bound N.  Two
constructions describe the same subalgebra of K[x1..xn]:

* the direct sum of the constants with the ideal generated by all
  products picking one degree-N monomial in shifted variables per point
  of S, and
* the kernel of a condition filtration: character differences gluing
  the values on S, followed by every pure derivative of order below N
  at each point.

The verifiers here certify that agreement instance by instance, along
with the expected derivation-space dimensions, using exact linear
algebra and subduction.  Results come back as reports of named checks
rather than booleans so a caller can show which side failed and why.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Sequence

from .functionals import (
    Condition,
    ConditionKind,
    LinearFunctional,
    character_difference,
    check_leibniz,
    express_in_span,
)
from .linalg import Echelon
from .poly import (
    DEGREVLEX,
    Monomial,
    Point,
    Poly,
    TermOrder,
    as_point,
    count_monomials_up_to,
    format_poly,
    monomials_of_degree,
    monomials_up_to,
)
from .sagbi import (
    CodimReport,
    ConditionFiltration,
    SagbiBasis,
    build_from_conditions,
    subduce,
    truncated_algebra_basis,
)
from .spectrum import ansatz_bound, cotangent_dimension, derivation_space, spectrum

PointSet = tuple[Point, ...]


def point_set(points: Sequence[Sequence], n: int | None = None) -> PointSet:
    """Freeze a sequence of pairwise distinct points of a common length."""
    frozen: list[Point] = []
    for values in points:
        if n is None:
            n = len(values)
        frozen.append(as_point(values, n))
    if not frozen:
        raise ValueError("a point set needs at least one point")
    if len(set(frozen)) != len(frozen):
        raise ValueError("points must be pairwise distinct")
    return tuple(frozen)


def p_n(alpha: Sequence, level: int) -> list[Poly]:
    """All monomials of total degree ``level`` in the variables shifted by ``alpha``.

    There are C(n + level - 1, level) of them, one per exponent vector.
    """
    if level < 1:
        raise ValueError("the degree level must be at least 1")
    point = as_point(alpha, len(alpha))
    n = len(point)
    shifted = [
        Poly.variable(n, i + 1) - Poly.constant(n, point[i]) for i in range(n)
    ]
    out = []
    for mono in monomials_of_degree(n, level):
        product = Poly.constant(n, 1)
        for i, exponent in enumerate(mono):
            if exponent:
                product = product * shifted[i] ** exponent
        out.append(product)
    return out


def pi_n(points: Sequence[Sequence], level: int) -> list[Poly]:
    """All products choosing one degree-``level`` shifted monomial per point.

    The result has C(n + level - 1, level) ** len(points) entries, each of
    total degree ``level * len(points)``, enumerated with the first point's
    factor varying slowest.
    """
    pts = point_set(points)
    families = [p_n(alpha, level) for alpha in pts]
    out = []
    for combo in itertools.product(*families):
        product = combo[0]
        for factor in combo[1:]:
            product = product * factor
        out.append(product)
    return out


# -- the general product rule, two flavours ---------------------------


def power_multisets(counts: Monomial) -> list[tuple[Monomial, int]]:
    """Sub-derivatives of a pure higher partial, with multiplicities.

    Choosing a sub-multiset of a multiset of unit directions amounts to
    choosing how many copies of each variable to keep; the multiplicity
    counts the index subsets realizing that choice.
    """
    out = []
    for sub in itertools.product(*(range(c + 1) for c in counts)):
        multiplicity = 1
        for have, take in zip(counts, sub):
            multiplicity *= comb(have, take)
        out.append((tuple(sub), multiplicity))
    return out


def leibniz_expand(f: Poly, g: Poly, counts: Monomial) -> Poly:
    """The pure partial of f*g expanded by the product rule, term by term."""
    total = Poly.zero(f.n)
    for sub, multiplicity in power_multisets(counts):
        rest = tuple(a - b for a, b in zip(counts, sub))
        total = total + multiplicity * (f.derive(sub) * g.derive(rest))
    return total


def leibniz_expand_directions(f: Poly, g: Poly, directions: Sequence[Sequence]) -> Poly:
    """The iterated directional derivative of f*g via index-subset expansion."""
    total = Poly.zero(f.n)
    for picks in itertools.product((False, True), repeat=len(directions)):
        left, right = f, g
        for direction, take in zip(directions, picks):
            if take:
                left = left.directional(direction)
            else:
                right = right.directional(direction)
        total = total + left * right
    return total


# -- the condition-side construction ----------------------------------


@dataclass(frozen=True)
class QnSpec:
    """A point set with its derived, filtration-ordered condition list."""

    points: PointSet
    level: int
    conditions: tuple[Condition, ...]


def qn_spec(points: Sequence[Sequence], level: int) -> QnSpec:
    """Conditions cutting the algebra: value gluing first, then derivatives.

    Points are sorted; character differences all target the smallest
    point; derivative conditions come in increasing order, then point,
    then exponent enumeration order.  That ordering keeps every level of
    the resulting filtration valid.
    """
    if level < 1:
        raise ValueError("the degree level must be at least 1")
    pts = tuple(sorted(point_set(points)))
    n = len(pts[0])
    conditions: list[Condition] = []
    base = pts[0]
    for other in pts[1:]:
        conditions.append(
            Condition(character_difference(other, base), ConditionKind.chardiff(other, base))
        )
    for order_k in range(1, level):
        for pt in pts:
            for partials in monomials_of_degree(n, order_k):
                conditions.append(
                    Condition(
                        LinearFunctional.partial_at(pt, partials),
                        ConditionKind.derivation(pt),
                    )
                )
    return QnSpec(pts, level, tuple(conditions))


def qn_build(spec: QnSpec, order: TermOrder = DEGREVLEX) -> ConditionFiltration:
    """Cut the kernel filtration for the spec's conditions.

    Every condition drops the codimension by exactly one, so the final
    codimension must equal the condition count; that is asserted.
    """
    n = len(spec.points[0])
    flt = build_from_conditions(n, spec.conditions, order)
    assert flt.codim == len(spec.conditions), "every condition must cut exactly once"
    return flt


# -- membership in the constants-plus-ideal description ---------------


def _monomial_frame(n: int, cap: int, order: TermOrder):
    """Monomials up to ``cap`` sorted descending, with their column indices."""
    monos = sorted(monomials_up_to(n, cap), key=order.key, reverse=True)
    return monos, {mono: i for i, mono in enumerate(monos)}


def _poly_row(f: Poly, index: dict[Monomial, int]) -> dict[int, Fraction]:
    return {index[mono]: coeff for mono, coeff in f.terms()}


def qprime_membership(
    f: Poly, points: Sequence[Sequence], level: int, degree_cap: int
) -> bool:
    """Is f a constant plus an element of the degree-capped ideal slice?

    The slice is spanned by the shifted-monomial products times all
    monomials that keep the total degree within ``degree_cap``; the test
    is exact row reduction over that spanning set plus the constants.
    """
    pts = point_set(points)
    n = len(pts[0])
    if f.total_degree() > degree_cap:
        raise ValueError("the degree cap must cover the tested polynomial")
    monos, index = _monomial_frame(n, degree_cap, DEGREVLEX)
    ech = Echelon()
    ech.add(_poly_row(Poly.constant(n, 1), index))
    width = level * len(pts)
    if degree_cap >= width:
        for product in pi_n(pts, level):
            for shift in monomials_up_to(n, degree_cap - width):
                ech.add(_poly_row(product * Poly.monomial(shift), index))
    return ech.contains(_poly_row(f, index))


# -- reports ----------------------------------------------------------


@dataclass(frozen=True)
class CheckItem:
    """One named verification step with enough detail to debug a failure."""

    check: str
    passed: bool
    details: dict

    def to_json(self) -> dict:
        return {"check": self.check, "pass": self.passed, "details": self.details}


@dataclass(frozen=True)
class Report:
    items: tuple[CheckItem, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def failures(self) -> list[CheckItem]:
        return [item for item in self.items if not item.passed]

    def to_json(self) -> list[dict]:
        return [item.to_json() for item in self.items]


# -- two-sided equality of the descriptions ---------------------------


def verify_qprime_eq_q(
    points: Sequence[Sequence],
    level: int,
    order: TermOrder = DEGREVLEX,
    degree_cap: int | None = None,
) -> Report:
    """Check both inclusions between the two descriptions of the algebra.

    With D the certified conductor plus the ideal generation degree:
    every basis generator must land in the constants-plus-ideal slice,
    every ideal spanning element of degree at most D must subduce to
    zero, and the complement of the slice's leading monomials must
    reproduce the certified missing set exactly.
    """
    spec = qn_spec(points, level)
    flt = qn_build(spec, order)
    basis = flt.final_basis
    report = flt.final_report
    pts = spec.points
    n = len(pts[0])
    width = level * len(pts)
    cap = degree_cap if degree_cap is not None else report.conductor + width
    items: list[CheckItem] = []

    gen_cap = max(cap, basis.max_generator_degree())
    failing = [
        format_poly(g)
        for g in basis.gens
        if not qprime_membership(g, pts, level, gen_cap)
    ]
    items.append(
        CheckItem(
            "generators_in_ideal_sum",
            not failing,
            {"degree_cap": gen_cap, "generators": len(basis.gens), "failing": failing},
        )
    )

    stuck: list[str] = []
    total = 0
    if cap >= width:
        for product in pi_n(pts, level):
            for shift in monomials_up_to(n, cap - width):
                total += 1
                remainder = subduce(product * Poly.monomial(shift), basis).remainder
                if not remainder.is_zero():
                    stuck.append(format_poly(product * Poly.monomial(shift)))
    items.append(
        CheckItem(
            "ideal_slice_subduces",
            not stuck,
            {"degree_cap": cap, "elements": total, "failing": stuck},
        )
    )

    monos, index = _monomial_frame(n, cap, order)
    ech = Echelon()
    ech.add(_poly_row(Poly.constant(n, 1), index))
    if cap >= width:
        for product in pi_n(pts, level):
            for shift in monomials_up_to(n, cap - width):
                ech.add(_poly_row(product * Poly.monomial(shift), index))
    pivots = set(ech.pivots())
    complement = sorted(
        monos[i] for i in range(len(monos)) if i not in pivots
    )
    expected = sorted(report.missing)
    items.append(
        CheckItem(
            "missing_complement_match",
            complement == expected,
            {
                "slice_rank": ech.rank,
                "expected_missing": [format_poly(Poly.monomial(m)) for m in expected],
                "complement": [format_poly(Poly.monomial(m)) for m in complement],
            },
        )
    )
    return Report(tuple(items))


# -- derivation spaces of the built algebras --------------------------


def verify_d_of_q(
    points: Sequence[Sequence],
    level: int,
    alpha: Sequence,
    order: TermOrder = DEGREVLEX,
) -> Report:
    """Check the derivation space of the built algebra at one of its points.

    The expected dimension counts pure partials of order between the
    level and twice the level minus one, once per point (the points are
    glued into a single cluster, so every point contributes).  The
    computed dimension must also match the independent cotangent count,
    the expected partials must pass the product-rule check, and the
    computed basis must be expressible over them.
    """
    spec = qn_spec(points, level)
    pts = spec.points
    n = len(pts[0])
    point = as_point(alpha, n)
    if point not in pts:
        raise ValueError("the base point must belong to the point set")
    flt = qn_build(spec, order)
    report = flt.final_report
    space = derivation_space(flt, point)
    per_point = count_monomials_up_to(n, 2 * level - 1) - count_monomials_up_to(
        n, level - 1
    )
    expected = per_point * len(pts)
    items: list[CheckItem] = []
    items.append(
        CheckItem(
            "derivation_dimension",
            space.dimension == expected,
            {"computed": space.dimension, "expected": expected},
        )
    )
    cot = cotangent_dimension(flt, point)
    items.append(
        CheckItem(
            "cotangent_dimension",
            cot == space.dimension,
            {"cotangent": cot, "derivations": space.dimension},
        )
    )

    span = truncated_algebra_basis(
        flt.final_basis, report, 2 * level - 1 + report.conductor
    )
    expected_partials = [
        (pt, partials)
        for pt in pts
        for k in range(level, 2 * level)
        for partials in monomials_of_degree(n, k)
    ]
    bad_leibniz = [
        f"order {sum(partials)} at {tuple(str(c) for c in pt)}"
        for pt, partials in expected_partials
        if not check_leibniz(
            LinearFunctional.partial_at(pt, partials), point, point, span
        )
    ]
    items.append(
        CheckItem(
            "leibniz_high_orders",
            not bad_leibniz,
            {"functionals": len(expected_partials), "failing": bad_leibniz},
        )
    )

    span_functionals = [
        LinearFunctional.partial_at(pt, partials) for pt, partials in expected_partials
    ]
    unexpressed = [
        repr(functional)
        for functional in space.basis
        if express_in_span(functional, span_functionals, span) is None
    ]
    items.append(
        CheckItem(
            "basis_in_partial_span",
            not unexpressed,
            {"basis_size": space.dimension, "failing": unexpressed},
        )
    )
    return Report(tuple(items))


# -- fast exact membership for bulk containment checks ----------------


def _int_terms(f: Poly) -> dict[Monomial, int]:
    """Clear denominators; scaling does not change membership."""
    den = lcm(*(coeff.denominator for _, coeff in f.terms()))
    return {mono: int(coeff * den) for mono, coeff in f.terms()}


def _int_mul(a: dict[Monomial, int], b: dict[Monomial, int]) -> dict[Monomial, int]:
    out: dict[Monomial, int] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            key = tuple(x + y for x, y in zip(ma, mb))
            value = out.get(key, 0) + ca * cb
            if value:
                out[key] = value
            elif key in out:
                del out[key]
    return out


class _MembershipTable:
    """Single-pass membership residues against cached canonical tails.

    Canonical elements have tails outside the leading-monomial
    semigroup, so cancelling every semigroup term of a polynomial in
    one sweep leaves a residue supported on missing monomials and the
    constants; membership is residue flatness.  Tails are stored over a
    common denominator so the sweep runs in integer arithmetic.
    """

    def __init__(self, basis: SagbiBasis, report: CodimReport, cap: int):
        self.cap = cap
        missing = set(report.missing)
        tails: dict[Monomial, list[tuple[Monomial, Fraction]]] = {}
        denominators = [1]
        for degree in range(1, cap + 1):
            for mono in sorted(monomials_of_degree(basis.n, degree), key=basis.order.key):
                if mono in missing:
                    continue
                element = basis.canonical_element(mono)
                tail = [
                    (m, c) for m, c in element.terms() if m != mono and sum(m) > 0
                ]
                tails[mono] = tail
                denominators.extend(c.denominator for _, c in tail)
        self.scale = lcm(*denominators)
        self.tails: dict[Monomial, tuple[tuple[Monomial, int], ...]] = {
            mono: tuple((m, int(c * self.scale)) for m, c in tail)
            for mono, tail in tails.items()
        }

    def member(self, int_poly: dict[Monomial, int], shift: Monomial) -> bool:
        acc: dict[Monomial, int] = {}
        tails = self.tails
        scale = self.scale
        for mono, coeff in int_poly.items():
            key = tuple(x + y for x, y in zip(mono, shift))
            degree = sum(key)
            if degree == 0:
                continue
            if degree > self.cap:
                raise ValueError("membership table cap exceeded")
            tail = tails.get(key)
            if tail is None:
                acc[key] = acc.get(key, 0) + coeff * scale
            else:
                for m, t in tail:
                    acc[m] = acc.get(m, 0) - coeff * t
        return all(value == 0 for value in acc.values())


def _containment_counts(
    flt: ConditionFiltration, pts: PointSet, level: int, cap: int
) -> tuple[int, int]:
    """(checked, failed) counts for the capped ideal-in-algebra sweep."""
    n = flt.n
    width = level * len(pts)
    if cap < width:
        return 0, 0
    table = _MembershipTable(flt.final_basis, flt.final_report, cap)
    families = [[_int_terms(q) for q in p_n(alpha, level)] for alpha in pts]
    shifts = list(monomials_up_to(n, cap - width))
    checked = 0
    failed = 0

    def walk(idx: int, acc: dict[Monomial, int]):
        nonlocal checked, failed
        if idx == len(families):
            for shift in shifts:
                checked += 1
                if not table.member(acc, shift):
                    failed += 1
            return
        for factor in families[idx]:
            walk(idx + 1, _int_mul(acc, factor))

    walk(0, {(0,) * n: 1})
    return checked, failed


def smallest_containment_level(flt: ConditionFiltration, limit: int | None = None) -> int | None:
    """The least level whose shifted-product ideal fits inside the algebra.

    Scans levels from 1 up to the derivative-order budget (or ``limit``);
    returns None when none passes, which does not happen for validated
    filtrations.
    """
    sp = spectrum(flt)
    if not sp.points:
        return 1
    top = limit if limit is not None else ansatz_bound(flt)
    report = flt.final_report
    for level in range(1, top + 1):
        cap = report.conductor + level * len(sp.points)
        checked, failed = _containment_counts(flt, sp.points, level, cap)
        if checked and not failed:
            return level
    return None


def verify_main_theorem(
    flt: ConditionFiltration,
    alpha: Sequence,
    containment_cap: int | None = None,
    probe_smallest: bool = False,
) -> Report:
    """Cross-check the derivation-space pipeline on a validated filtration.

    Three checks: the capped sweep of shifted-product multiples must lie
    in the algebra, the candidate-ansatz derivation dimension must equal
    the independent cotangent count, and every computed basis derivation
    must satisfy the product rule on fresh random pairs of members.
    """
    n = flt.n
    point = as_point(alpha, n)
    sp = spectrum(flt)
    report = flt.final_report
    level = ansatz_bound(flt)
    items: list[CheckItem] = []

    if sp.points:
        cap = (
            containment_cap
            if containment_cap is not None
            else report.conductor + level * len(sp.points)
        )
        checked, failed = _containment_counts(flt, sp.points, level, cap)
        details = {
            "level": level,
            "degree_cap": cap,
            "checked": checked,
            "failed": failed,
        }
        if probe_smallest:
            details["smallest_passing_level"] = smallest_containment_level(flt)
        items.append(CheckItem("ideal_containment", failed == 0, details))
    else:
        items.append(
            CheckItem(
                "ideal_containment",
                True,
                {"level": level, "checked": 0, "note": "empty spectrum"},
            )
        )

    space = derivation_space(flt, point)
    cot = cotangent_dimension(flt, point)
    items.append(
        CheckItem(
            "derivation_vs_cotangent",
            space.dimension == cot,
            {"derivations": space.dimension, "cotangent": cot},
        )
    )

    max_order = max((f.max_order for f in space.basis), default=1)
    span = truncated_algebra_basis(
        flt.final_basis, report, report.conductor + max_order
    )
    rng = random.Random(7)
    pairs_per_basis = 10
    bad_pairs = 0
    total_pairs = 0
    for functional in space.basis:
        for _ in range(pairs_per_basis):
            f = _random_member(rng, span, n)
            g = _random_member(rng, span, n)
            total_pairs += 1
            left = functional.apply(f * g)
            right = f.evaluate(point) * functional.apply(g) + g.evaluate(
                point
            ) * functional.apply(f)
            if left != right:
                bad_pairs += 1
    items.append(
        CheckItem(
            "leibniz_random_pairs",
            bad_pairs == 0,
            {"pairs": total_pairs, "failed": bad_pairs},
        )
    )
    return Report(tuple(items))


def _random_member(rng: random.Random, span: Sequence[Poly], n: int) -> Poly:
    out = Poly.constant(n, rng.randint(-2, 2))
    for element in rng.sample(span, k=min(3, len(span))):
        out = out + rng.randint(-3, 3) * element
    return out
