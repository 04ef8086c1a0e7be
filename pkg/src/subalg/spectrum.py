"""Spectrum, clusters, and derivation spaces of a condition filtration.

The spectrum collects every evaluation point used by the conditions.
Two spectrum points are clustered together when the whole algebra
evaluates equally at them, which is decided on the generators.

Derivation spaces at a point are computed along two fully independent
routes.  The primary route spans candidate functionals (pure partial
derivatives at the cluster of the point) and keeps the combinations
that kill the square of the maximal ideal, modulo combinations that
kill the whole algebra; squares are handled through truncated jet
products, so no degree-capped polynomial heuristics enter.  The
cotangent route never looks at candidate functionals: it builds the
maximal ideal explicitly from shifted generator products, certifies
its jet rank, and measures the quotient by the square.  The two
dimensions must agree, and the test suites check that they do.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .functionals import LinearFunctional
from .jets import JetSpace
from .linalg import Echelon, SparseRow, kernel_basis
from .poly import Monomial, Point, Poly, as_point, monomials_up_to
from .sagbi import ConditionFiltration, SagbiBasis


def are_equivalent(alpha, beta, basis: SagbiBasis) -> bool:
    """True when every generator takes the same value at both points.

    Generators generate, so agreement on them is agreement on the
    whole subalgebra.
    """
    a = as_point(alpha, basis.n)
    b = as_point(beta, basis.n)
    if a == b:
        return True
    return all(g.evaluate(a) == g.evaluate(b) for g in basis.gens)


@dataclass(frozen=True)
class Spectrum:
    """Condition points and their indistinguishability classes."""

    points: tuple[Point, ...]
    clusters: tuple[tuple[Point, ...], ...]

    def cluster_of(self, point) -> tuple[Point, ...] | None:
        for cluster in self.clusters:
            if point in cluster:
                return cluster
        return None


def spectrum(flt: ConditionFiltration) -> Spectrum:
    """All condition points, partitioned into clusters of the final algebra."""
    seen: set[Point] = set()
    for level in flt.levels:
        for atom in level.condition.functional.atoms:
            seen.add(atom.point)
    points = tuple(sorted(seen))
    final = flt.final_basis
    groups: list[list[Point]] = []
    for p in points:
        for group in groups:
            if are_equivalent(p, group[0], final):
                group.append(p)
                break
        else:
            groups.append([p])
    clusters = tuple(sorted(tuple(sorted(g)) for g in groups))
    for level in flt.levels:
        kind = level.condition.kind
        if kind.name == "chardiff":
            assert are_equivalent(kind.alpha, kind.beta, final), (
                "character difference points failed to merge"
            )
    return Spectrum(points, clusters)


def ansatz_bound(flt: ConditionFiltration) -> int:
    """Derivative order budget: each derivation level doubles it."""
    doublings = sum(
        1 for level in flt.levels if level.condition.kind.name == "derivation"
    )
    return 2**doublings


@dataclass(frozen=True)
class DerivationSpace:
    """Basis of the derivations of the algebra at one point.

    ``basis`` elements are honest functionals on the polynomial ring;
    restricted to the algebra they satisfy the one-point Leibniz rule
    and are linearly independent.  ``ansatz_order`` is the order bound
    2N that shaped the candidate set, ``candidates`` its size, and
    ``relations`` the dimension of candidate combinations that vanish
    on the whole algebra (quotiented away).
    """

    point: Point
    basis: tuple[LinearFunctional, ...]
    ansatz_order: int
    candidates: int
    relations: int

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _sparse_kernel(rows: list[SparseRow], ncols: int) -> list[SparseRow]:
    dense = [[row.get(j, Fraction(0)) for j in range(ncols)] for row in rows]
    vectors = kernel_basis(dense, ncols)
    return [
        {j: value for j, value in enumerate(vec) if value} for vec in vectors
    ]


def _ordered_partials(n: int, low: int, high: int) -> list[Monomial]:
    out = [m for m in monomials_up_to(n, high) if low <= sum(m) <= high]
    out.sort(key=lambda m: (sum(m), m))
    return out


def derivation_space(flt: ConditionFiltration, alpha) -> DerivationSpace:
    """Derivations at ``alpha`` from the pure-partial candidate ansatz.

    A functional L with L(1) = 0 is a derivation at alpha exactly when
    it kills the square of the maximal ideal m of the algebra at alpha.
    Candidate combinations are therefore intersected with the
    annihilator of the jets of m·m, then reduced modulo combinations
    that vanish on the whole algebra (those act as zero).
    """
    n = flt.n
    point = as_point(alpha, n)
    spec = spectrum(flt)
    in_spectrum = point in spec.points
    cluster = spec.cluster_of(point) if in_spectrum else (point,)
    N = ansatz_bound(flt)
    cand_cap = 2 * N - 1 if in_spectrum else 1
    functionals = [level.condition.functional for level in flt.levels]
    max_atom = max((f.max_order for f in functionals), default=0)
    cap = max(cand_cap, max_atom)
    base_points = list(spec.points)
    if not in_spectrum:
        base_points.append(point)
    space = JetSpace(base_points, cap, n)

    condition_rows = [space.functional_covector(f) for f in functionals]
    eval_row = space.evaluation_covector(point)
    ideal_jets = _sparse_kernel(condition_rows + [eval_row], space.dim)

    candidates: list[tuple[int, Monomial]] = []
    for p in cluster:
        pi = space.point_index(p)
        for a in _ordered_partials(n, 1, cand_cap):
            candidates.append((pi, a))
    slot_of = {space.index(pi, a): s for s, (pi, a) in enumerate(candidates)}

    # Span of jets of m·m, seen through the candidate coordinates only.
    square_span = Echelon()
    covered: set[int] = set()
    for i, u in enumerate(ideal_jets):
        for v in ideal_jets[i:]:
            product = space.product(u, v)
            projected = {
                slot_of[c]: value for c, value in product.items() if c in slot_of
            }
            if not projected:
                continue
            if len(projected) == 1:
                slot = next(iter(projected))
                if slot in covered:
                    continue
                covered.add(slot)
            square_span.add(projected)

    annihilator = _sparse_kernel(list(square_span.rows()), len(candidates))

    # Candidate combinations that vanish on the whole algebra: exactly the
    # elements of the condition row space supported on candidate coordinates.
    outside: set[int] = set()
    for row in condition_rows:
        outside.update(c for c in row if c not in slot_of)
    outside_coords = sorted(outside)
    system = [
        [row.get(c, Fraction(0)) for c in outside_coords]
        for row in condition_rows
    ]
    transposed = [
        [system[j][i] for j in range(len(condition_rows))]
        for i in range(len(outside_coords))
    ]
    vanishing: list[SparseRow] = []
    for s in kernel_basis(transposed, len(condition_rows)):
        combo: SparseRow = {}
        for j, weight in enumerate(s):
            if not weight:
                continue
            for c, value in condition_rows[j].items():
                slot = slot_of[c]
                entry = combo.get(slot, Fraction(0)) + weight * value
                if entry:
                    combo[slot] = entry
                else:
                    combo.pop(slot, None)
        if combo:
            vanishing.append(combo)

    for z in vanishing:
        for row in square_span.rows():
            assert space.pair(z, row) == 0, "vanishing combination misses the square"

    quotient = Echelon()
    for z in vanishing:
        quotient.add(z)
    relations = quotient.rank
    representatives: list[SparseRow] = []
    for t in annihilator:
        if quotient.add(t) is not None:
            representatives.append(t)

    basis = []
    for t in representatives:
        functional = LinearFunctional.zero(n)
        for slot in sorted(t):
            pi, a = candidates[slot]
            functional = functional + LinearFunctional.partial_at(
                space.points[pi], a, t[slot]
            )
        basis.append(functional)
    return DerivationSpace(
        point=point,
        basis=tuple(basis),
        ansatz_order=2 * N,
        candidates=len(candidates),
        relations=relations,
    )


def cotangent_dimension(flt: ConditionFiltration, alpha) -> int:
    """dim m/m² at ``alpha``, from explicit shifted generator products.

    The maximal ideal m is spanned by products of shifted generators
    g − g(alpha) with at least one factor.  Their jets are accumulated
    in increasing product degree until the rank certificate is met:
    the jet space dimension minus one row per condition and one for
    evaluation.  Pairwise truncated products of that spanning set give
    the jets of m·m; derivatives beyond twice the largest condition
    order cannot see the quotient, which keeps the cap small.
    """
    n = flt.n
    point = as_point(alpha, n)
    spec = spectrum(flt)
    functionals = [level.condition.functional for level in flt.levels]
    max_atom = max((f.max_order for f in functionals), default=0)
    cap = 2 * (1 + max_atom) - 1
    base_points = sorted(set(spec.points) | {point})
    space = JetSpace(base_points, cap, n)
    target_rank = space.dim - (len(functionals) + 1)

    final = flt.final_basis
    degrees = [g.total_degree() for g in final.gens]
    shifted_jets = [
        space.jet(g - Poly.constant(n, g.evaluate(point))) for g in final.gens
    ]
    unit = space.jet(Poly.constant(n, 1))

    ideal_span = Echelon()

    def absorb(jet: SparseRow) -> bool:
        ideal_span.add(dict(jet))
        return ideal_span.rank >= target_rank

    class _Done(Exception):
        pass

    def scan(idx: int, remaining: int, jet: SparseRow) -> None:
        if remaining == 0:
            if absorb(jet):
                raise _Done
            return
        if idx == len(degrees):
            return
        current = jet
        multiples = 0
        while True:
            scan(idx + 1, remaining - multiples * degrees[idx], current)
            multiples += 1
            if multiples * degrees[idx] > remaining:
                return
            current = space.product(current, shifted_jets[idx])

    hard_cap = cap * len(base_points) + flt.final_report.conductor
    hard_cap += max(degrees, default=0) + 4
    try:
        for degree in range(1, hard_cap + 1):
            scan(0, degree, unit)
    except _Done:
        pass
    if ideal_span.rank != target_rank:
        raise RuntimeError(
            "maximal ideal span failed to reach its certified jet rank"
        )

    ideal_rows = list(ideal_span.rows())
    square_span = Echelon()
    for i, u in enumerate(ideal_rows):
        for v in ideal_rows[i:]:
            square_span.add(space.product(u, v))
    return target_rank - square_span.rank
