import random
from fractions import Fraction

import pytest

from subalg.errors import DegenerateCondition, DimensionMismatch
from subalg.functionals import (
    ConditionKind,
    DerivativeAtom,
    LinearFunctional,
    character_difference,
    check_leibniz,
    express_in_span,
)
from subalg.poly import Poly, parse_poly

F = Fraction


def P(text, n):
    return parse_poly(text, n)


def test_partial_atom_apply():
    second_at_zero = LinearFunctional.partial_at((0,), (2,))
    assert second_at_zero.apply(P("x1^3 + x1^2", 1)) == 2
    assert second_at_zero.apply(P("x1", 1)) == 0


def test_evaluation_and_scale():
    ev = LinearFunctional.evaluation((F(1, 2),), coeff=3)
    assert ev.apply(P("x1^2", 1)) == F(3, 4)


def test_character_difference_on_members():
    # f(1) - f(-1) kills x^3 - x and x^2
    e = character_difference((1,), (-1,))
    assert e.apply(P("x1^3 - x1", 1)) == 0
    assert e.apply(P("x1^2", 1)) == 0
    assert e.apply(P("x1", 1)) == 2


def test_character_difference_rejects_equal_points():
    with pytest.raises(DegenerateCondition):
        character_difference((1, 2), (1, 2))
    with pytest.raises(DegenerateCondition):
        character_difference((1,), (0,), coeff=0)
    with pytest.raises(DimensionMismatch):
        character_difference((1,), (0, 0))


def test_directional_splits_into_pure_partials():
    d = LinearFunctional.directional_at((0, 1), (2, -3))
    assert len(d.atoms) == 2
    f = P("x1*x2", 2)
    # 2*f_x1 - 3*f_x2 at (0,1) = 2*1 - 3*0
    assert d.apply(f) == 2
    with pytest.raises(DegenerateCondition):
        LinearFunctional.directional_at((0, 0), (0, 0))


def test_normalization_merges_and_sorts():
    a = DerivativeAtom(F(1), (F(0),), (1,))
    b = DerivativeAtom(F(2), (F(0),), (1,))
    c = DerivativeAtom(F(-3), (F(0),), (1,))
    combined = LinearFunctional(1, [a, b, c])
    assert combined.is_zero()
    mixed = LinearFunctional(
        1,
        [
            DerivativeAtom(F(1), (F(1),), (0,)),
            DerivativeAtom(F(1), (F(0),), (2,)),
            DerivativeAtom(F(1), (F(0),), (1,)),
        ],
    )
    # sorted by point, then derivative order
    assert [atom.point for atom in mixed.atoms] == [(F(0),), (F(0),), (F(1),)]
    assert [atom.order for atom in mixed.atoms] == [1, 2, 0]


def test_functional_linear_combinations():
    e1 = LinearFunctional.evaluation((1,))
    e2 = LinearFunctional.evaluation((2,))
    diff = e1 - e2
    assert diff == character_difference((1,), (2,))
    assert (2 * e1).apply(P("x1", 1)) == 2
    assert e1 + e2.scale(-1) == diff


def test_max_order_and_points():
    mixed = LinearFunctional(
        2,
        [
            DerivativeAtom(F(1), (F(0), F(0)), (1, 2)),
            DerivativeAtom(F(5), (F(1), F(1)), (0, 0)),
        ],
    )
    assert mixed.max_order == 3
    assert mixed.points() == ((F(0), F(0)), (F(1), F(1)))


def test_check_leibniz_second_derivative():
    # On K + x^2 K[x] the second derivative at 0 is a derivation ...
    span = [Poly.constant(1, 1)] + [P(f"x1^{a}", 1) for a in range(2, 7)]
    second = LinearFunctional.partial_at((0,), (2,))
    assert check_leibniz(second, (0,), (0,), span)
    # ... but not on all of K[x]
    full = [Poly.constant(1, 1)] + [P(f"x1^{a}", 1) for a in range(1, 5)]
    assert not check_leibniz(second, (0,), (0,), full)


def test_check_leibniz_chardiff_any_span():
    rng = random.Random(21)
    e = character_difference((1,), (-1,), coeff=F(5, 3))
    for _ in range(20):
        span = []
        for _ in range(4):
            terms = {
                (rng.randint(0, 4),): F(rng.randint(-4, 4)) for _ in range(3)
            }
            span.append(Poly(1, terms))
        assert check_leibniz(e, (1,), (-1,), span)


def test_chardiff_is_not_a_derivation():
    # the two-point rule holds, the one-point rule fails on K[x]
    e = character_difference((1,), (-1,))
    span = [Poly.constant(1, 1)] + [P(f"x1^{a}", 1) for a in range(1, 4)]
    assert check_leibniz(e, (1,), (-1,), span)
    assert not check_leibniz(e, (1,), (1,), span)
    assert not check_leibniz(e, (-1,), (-1,), span)


def test_express_in_span_telescoping():
    target = character_difference((2,), (0,))
    basis = [character_difference((2,), (1,)), character_difference((1,), (0,))]
    test_space = [P(f"x1^{a}", 1) for a in range(5)]
    assert express_in_span(target, basis, test_space) == [F(1), F(1)]


def test_express_in_span_failure():
    target = LinearFunctional.partial_at((0,), (1,))
    basis = [character_difference((1,), (0,))]
    test_space = [P(f"x1^{a}", 1) for a in range(5)]
    assert express_in_span(target, basis, test_space) is None


def test_express_in_span_random_combinations():
    rng = random.Random(22)
    for _ in range(30):
        n = rng.randint(1, 2)
        points = []
        while len(points) < 3:
            pt = tuple(F(rng.randint(-3, 3)) for _ in range(n))
            if pt not in points:
                points.append(pt)
        basis = [
            LinearFunctional.partial_at(pt, tuple(rng.randint(0, 2) for _ in range(n)))
            for pt in points
        ]
        coeffs = [F(rng.randint(-5, 5)) for _ in basis]
        target = LinearFunctional.zero(n)
        for c, b in zip(coeffs, basis):
            target = target + b.scale(c)
        test_space = [
            Poly.monomial(mono)
            for mono in [tuple(rng.randint(0, 3) for _ in range(n)) for _ in range(12)]
        ]
        found = express_in_span(target, basis, test_space)
        assert found is not None
        rebuilt = LinearFunctional.zero(n)
        for c, b in zip(found, basis):
            rebuilt = rebuilt + b.scale(c)
        for t in test_space:
            assert rebuilt.apply(t) == target.apply(t)


def test_condition_kind_constructors():
    kind = ConditionKind.chardiff((1,), (2,))
    assert kind.name == "chardiff"
    assert kind.alpha != kind.beta
    deriv = ConditionKind.derivation((0, 0))
    assert deriv.alpha == deriv.beta
