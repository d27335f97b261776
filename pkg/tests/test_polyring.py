from fractions import Fraction

import pytest

from lndkernel.polyring import (
    R,
    MonomialOrder,
    Polynomial,
    PolynomialSyntaxError,
    VariableSet,
    lcm_monomial,
    monomial_divides,
    parse,
)

GAMMA0 = "2*x^3*t - s^2"
DELTA0 = "3*x^6*u - 3*x^3*s*t + s^3"
G = "9*x^6*u^2 - 18*x^3*s*t*u + 6*s^3*u + 8*x^3*t^3 - 3*s^2*t^2"


def test_parse_gamma0_has_two_terms():
    p = parse(GAMMA0)
    assert len(p.terms) == 2
    assert p.coefficient((3, 0, 1, 0, 0)) == 2
    assert p.coefficient((0, 2, 0, 0, 0)) == -1


def test_parse_zero_is_empty():
    z = parse("0")
    assert z.is_zero() and not z.terms


def test_parse_g_has_five_terms():
    assert len(parse(G).terms) == 5


def test_parse_accepts_juxtaposition_parentheses_and_fractions():
    assert parse("2xs^2") == parse("2*x*s^2")
    assert parse("(x+s)^2") == parse("x^2 + 2*x*s + s^2")
    assert parse("x/2 - (-s)") == parse("1/2*x + s")
    assert parse("3/6*t").coefficient((0, 0, 1, 0, 0)) == Fraction(1, 2)


@pytest.mark.parametrize("bad", ["x^", "2**x", "(x+s", "y", "x^-1", "", "x + * s", "1/0"])
def test_parse_rejects_malformed(bad):
    with pytest.raises((PolynomialSyntaxError, ZeroDivisionError)):
        parse(bad)


def test_syntax_error_reports_position():
    with pytest.raises(PolynomialSyntaxError) as info:
        parse("x + ?")
    assert info.value.pos == 4


def test_gamma_cubed_plus_delta_squared_is_x6_g():
    assert parse(GAMMA0) ** 3 + parse(DELTA0) ** 2 == parse("x^6") * parse(G)


def test_additive_identity():
    p = parse(G)
    assert p + Polynomial.zero(R) == p


def test_beta_square_expansion():
    lhs = parse("(x*v - s)^2") - parse("x*v^2 - 2*s*v + 2*x^2*t") * parse("x")
    assert lhs == parse("s^2 - 2*x^3*t")


def test_leading_terms():
    lex_u_high = MonomialOrder.lex(R, ("u", "t", "s", "x", "v"))
    lt = parse(GAMMA0).leading_term(lex_u_high)
    assert lt.monomial == (3, 0, 1, 0, 0) and lt.coefficient == 2
    lt = parse("t*v - v").leading_term(R.default_order())
    assert lt.monomial == (0, 0, 1, 0, 1)
    assert parse("x").leading_monomial() == (1, 0, 0, 0, 0)


def test_default_order_is_lex_v_u_t_s_x():
    order = R.default_order()
    assert order.greater((0, 0, 0, 0, 1), (0, 0, 0, 9, 0))
    assert order.greater((0, 0, 0, 1, 0), (0, 0, 9, 0, 0))
    assert order.greater((0, 9, 0, 0, 0), (9, 0, 0, 0, 0)) is True


def test_block_order_separates_blocks():
    ring = VariableSet(("x", "s", "y1", "y2"), block_split=2)
    order = ring.default_order()
    assert order.greater((1, 0, 0, 0), (0, 0, 5, 5))
    assert order.greater((0, 1, 0, 0), (1, 0, 0, 0))
    assert order.greater((0, 0, 0, 1), (0, 0, 7, 0))


def test_partial_derivatives():
    assert parse("s^2").diff("s") == parse("2*s")
    assert parse(GAMMA0).diff("t") == parse("2*x^3")
    assert parse(GAMMA0).diff("v").is_zero()


def test_substitution():
    p = parse(DELTA0) ** 1 * parse(GAMMA0) ** 0
    sub = p.substitute({"t": 0, "u": parse("s") * Fraction(1, 3)})
    assert sub == parse("x^6*s + s^3")
    assert p.substitute({}) == p
    assert parse(GAMMA0).substitute({"x": 0}) == parse("-s^2")


def test_degree_helpers_and_coefficient_in():
    p = parse("x*v^2 - 2*s*v + 2*x^2*t")
    assert p.degree_in("v") == 2
    assert p.coefficient_in("v", 1) == parse("-2*s")
    assert p.coefficient_in("v", 5).is_zero()
    with pytest.raises(ValueError):
        Polynomial.zero(R).degree_in("v")


def test_ring_conversion_by_name():
    big = R.extend("w")
    p = parse("x*w + s", big)
    with pytest.raises(ValueError):
        p.to_ring(R)
    assert parse("x + v").to_ring(big).to_ring(R) == parse("x + v")


def test_monomial_helpers():
    assert monomial_divides((1, 0, 2), (1, 1, 2))
    assert not monomial_divides((2, 0, 0), (1, 5, 5))
    assert lcm_monomial((1, 3, 0), (2, 0, 1)) == (2, 3, 1)


def test_monic_and_primitive():
    p = parse("4*x^3*t - 2*s^2")
    assert p.primitive() == parse("2*x^3*t - s^2")
    assert p.monic(MonomialOrder.lex(R, ("t", "s", "x", "u", "v"))) == parse("x^3*t - 1/2*s^2")


def test_printing_round_trips():
    for text in (G, GAMMA0, "1/3*x - v^4", "0", "-7"):
        p = parse(text)
        assert parse(str(p)) == p
        assert parse(p.to_str(MonomialOrder.lex(R, ("x", "s", "t", "u", "v")))) == p


def test_polynomials_are_hashable_values():
    assert {parse("x + s"): 1}[parse("s + x")] == 1
    assert parse("x") != parse("s")
