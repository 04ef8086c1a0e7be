import random
from fractions import Fraction

import pytest

from subalg.errors import (
    DimensionMismatch,
    InvalidDirection,
    PolyParseError,
    ZeroLeadingTerm,
)
from subalg.poly import (
    Poly,
    TermOrder,
    format_poly,
    monomials_of_degree,
    monomials_up_to,
    parse_poly,
    partials_from_indices,
)

F = Fraction


def P(text, n):
    return parse_poly(text, n)


def random_poly(rng, n, max_degree, max_terms):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        mono = tuple(rng.randint(0, max_degree) for _ in range(n))
        num = rng.randint(-9, 9)
        den = rng.randint(1, 9)
        terms[mono] = terms.get(mono, F(0)) + F(num, den)
    return Poly(n, terms)


def random_point(rng, n):
    return tuple(F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n))


def test_parse_basic():
    p = P("x1^2*x2 - 2*x1 + 3/2", 2)
    assert p.coeff((2, 1)) == 1
    assert p.coeff((1, 0)) == -2
    assert p.coeff((0, 0)) == F(3, 2)
    assert p.total_degree() == 3


def test_parse_y_alias():
    assert P("y1*y2 - 2*y1 - y2", 2) == P("x1*x2 - 2*x1 - x2", 2)


def test_parse_whitespace_and_signs():
    assert P("  -x1 +  2", 1) == P("2 - x1", 1)
    assert P("3 / 2 * x1", 1) == P("3/2*x1", 1)


def test_parse_errors_carry_position():
    with pytest.raises(PolyParseError) as info:
        P("x1 + @", 1)
    assert info.value.position == 5
    with pytest.raises(PolyParseError):
        P("x3", 2)
    with pytest.raises(PolyParseError):
        P("x1^-2", 1)
    with pytest.raises(PolyParseError):
        P("x1 x2", 2)


def test_format_round_trip():
    text = "x1^2*x2 - 2*x1 + 3/2"
    assert format_poly(P(text, 2)) == text
    assert format_poly(Poly.zero(3)) == "0"
    assert format_poly(P("-x1^2", 1)) == "-x1^2"


def test_format_orders_terms_by_degrevlex():
    p = P("x2 + x1 + x1*x2^2 + x1^2*x2", 2)
    assert format_poly(p) == "x1^2*x2 + x1*x2^2 + x1 + x2"


def test_leading_degrevlex_spec_case():
    p = P("x1*x2^2 + x1^2*x2", 2)
    mono, coeff = p.leading(TermOrder("degrevlex"))
    assert mono == (2, 1)
    assert coeff == 1


def test_leading_all_orders():
    # x1^3 vs x2^4: lex picks the x1 power, graded orders pick degree 4
    p = P("x1^3 + x2^4", 2)
    assert p.leading_monomial(TermOrder("lex")) == (3, 0)
    assert p.leading_monomial(TermOrder("deglex")) == (0, 4)
    assert p.leading_monomial(TermOrder("degrevlex")) == (0, 4)
    # same total degree, deglex and degrevlex disagree:
    q = P("x1*x2*x3 + x2^3", 3)
    assert q.leading_monomial(TermOrder("deglex")) == (1, 1, 1)
    assert q.leading_monomial(TermOrder("degrevlex")) == (0, 3, 0)


def test_zero_has_no_leading_term():
    with pytest.raises(ZeroLeadingTerm):
        Poly.zero(2).leading(TermOrder("degrevlex"))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        P("x1", 1) + P("x1", 2)
    with pytest.raises(DimensionMismatch):
        P("x1", 1).evaluate((1, 2))


def test_arithmetic_example():
    x = Poly.variable(1, 1)
    one = Poly.constant(1, 1)
    assert (x + one) * (x + one) == P("x1^2 + 2*x1 + 1", 1)
    assert (x + one) ** 3 == P("x1^3 + 3*x1^2 + 3*x1 + 1", 1)


def test_evaluate_exact():
    p = P("x1^2*x2 - 2*x1 + 3/2", 2)
    assert p.evaluate((F(1, 2), F(3))) == F(1, 4) * 3 - 1 + F(3, 2)


def test_derive():
    p = P("x1^3", 1)
    assert p.derive((2,)) == P("6*x1", 1)
    q = P("x1^2*x2^3", 2)
    assert q.derive((1, 2)) == P("12*x1*x2", 2)
    assert q.derive((3, 0)).is_zero()
    assert q.derive((0, 0)) == q


def test_directional():
    f = P("x1^2*x2", 2)
    assert f.directional((1, 2)) == P("2*x1*x2 + 2*x1^2", 2)
    with pytest.raises(InvalidDirection):
        f.directional((0, 0))


def test_translate():
    assert P("x1^2", 1).translate((1,)) == P("x1^2 + 2*x1 + 1", 1)
    f = P("x1*x2 - x2^2", 2)
    shift = (F(1), F(-2))
    rng = random.Random(7)
    for _ in range(20):
        pt = random_point(rng, 2)
        moved = tuple(a + s for a, s in zip(pt, shift))
        assert f.translate(shift).evaluate(pt) == f.evaluate(moved)


def test_ring_axioms_random():
    rng = random.Random(101)
    for _ in range(60):
        n = rng.randint(1, 3)
        f = random_poly(rng, n, 3, 4)
        g = random_poly(rng, n, 3, 4)
        h = random_poly(rng, n, 3, 4)
        assert f + g == g + f
        assert f * g == g * f
        assert (f + g) + h == f + (g + h)
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f - f == Poly.zero(n)


def test_leading_term_is_multiplicative():
    rng = random.Random(102)
    orders = [TermOrder(name) for name in ("lex", "deglex", "degrevlex")]
    for _ in range(60):
        n = rng.randint(1, 3)
        f = random_poly(rng, n, 3, 4)
        g = random_poly(rng, n, 3, 4)
        if f.is_zero() or g.is_zero():
            continue
        for order in orders:
            fm, fc = f.leading(order)
            gm, gc = g.leading(order)
            pm, pc = (f * g).leading(order)
            assert pm == tuple(a + b for a, b in zip(fm, gm))
            assert pc == fc * gc


def test_order_respects_multiplication():
    rng = random.Random(103)
    orders = [TermOrder(name) for name in ("lex", "deglex", "degrevlex")]
    for _ in range(200):
        n = rng.randint(1, 4)
        u = tuple(rng.randint(0, 4) for _ in range(n))
        v = tuple(rng.randint(0, 4) for _ in range(n))
        w = tuple(rng.randint(0, 4) for _ in range(n))
        for order in orders:
            # 1 is minimal
            assert order.key((0,) * n) <= order.key(u)
            if order.key(u) < order.key(v):
                shifted_u = tuple(a + b for a, b in zip(u, w))
                shifted_v = tuple(a + b for a, b in zip(v, w))
                assert order.key(shifted_u) < order.key(shifted_v)


def test_derivatives_commute():
    rng = random.Random(104)
    for _ in range(40):
        n = rng.randint(1, 3)
        f = random_poly(rng, n, 4, 5)
        a = tuple(rng.randint(0, 2) for _ in range(n))
        b = tuple(rng.randint(0, 2) for _ in range(n))
        both = tuple(x + y for x, y in zip(a, b))
        assert f.derive(a).derive(b) == f.derive(both)
        assert f.derive(b).derive(a) == f.derive(both)


def test_directional_product_rule():
    rng = random.Random(105)
    for _ in range(40):
        n = rng.randint(1, 3)
        f = random_poly(rng, n, 3, 4)
        g = random_poly(rng, n, 3, 4)
        u = [F(rng.randint(-3, 3)) for _ in range(n)]
        if all(c == 0 for c in u):
            u[0] = F(1)
        left = (f * g).directional(u)
        right = f.directional(u) * g + f * g.directional(u)
        assert left == right


def test_translate_is_a_ring_morphism():
    rng = random.Random(106)
    for _ in range(30):
        n = rng.randint(1, 3)
        f = random_poly(rng, n, 3, 4)
        g = random_poly(rng, n, 3, 4)
        shift = random_point(rng, n)
        assert (f * g).translate(shift) == f.translate(shift) * g.translate(shift)
        assert (f + g).translate(shift) == f.translate(shift) + g.translate(shift)
        back = tuple(-s for s in shift)
        assert f.translate(shift).translate(back) == f


def test_monomial_enumeration():
    assert list(monomials_of_degree(2, 2)) == [(2, 0), (1, 1), (0, 2)]
    assert len(list(monomials_up_to(3, 4))) == 35  # C(7,3)
    assert list(monomials_up_to(1, 2)) == [(0,), (1,), (2,)]


def test_partials_from_indices():
    assert partials_from_indices([1, 1, 2], 3) == (2, 1, 0)
    assert partials_from_indices([], 2) == (0, 0)
    with pytest.raises(DimensionMismatch):
        partials_from_indices([3], 2)
