import pytest

from lndkernel.grading import (
    DEG,
    NEG_INF,
    RHO,
    bidegree,
    count_kernel_monomials,
    is_homogeneous,
    kernel_monomial_solutions,
    r_slice_basis,
    slice_basis,
    v_degree,
    weighted_degree,
    x_degree,
)
from lndkernel.polyring import R, Polynomial, parse

G = parse("9*x^6*u^2 - 18*x^3*s*t*u + 6*s^3*u + 8*x^3*t^3 - 3*s^2*t^2")
GAMMA0 = parse("2*x^3*t - s^2")


def test_weights_of_g():
    assert weighted_degree(G, DEG) == 12
    assert weighted_degree(G, RHO) == 6
    assert bidegree(G) == (12, 6)


def test_weights_of_variables():
    assert weighted_degree(parse("x"), DEG) == 1
    assert weighted_degree(parse("x"), RHO) == 0
    assert weighted_degree(GAMMA0, RHO) == 2
    assert weighted_degree(parse("v"), DEG) == 2 and weighted_degree(parse("v"), RHO) == 1


def test_zero_has_degree_minus_infinity():
    assert weighted_degree(Polynomial.zero(R)) == NEG_INF


def test_homogeneity():
    assert is_homogeneous(GAMMA0, DEG) and is_homogeneous(GAMMA0, RHO)
    assert not is_homogeneous(parse("x + s"), DEG)
    assert is_homogeneous(Polynomial.zero(R), DEG)


def test_bidegree_rejects_inhomogeneous():
    with pytest.raises(ValueError):
        bidegree(parse("x + s"))


def test_v_and_x_degrees():
    assert v_degree(parse("x*v - s")) == 1
    assert x_degree(G) == 6
    assert v_degree(GAMMA0) == 0


def test_slice_bases():
    assert slice_basis(1, 0).basis == ((1, 0, 0, 0, 0),)
    assert set(slice_basis(6, 2).polynomials()) == {parse("x^3*t"), parse("s^2")}
    assert len(slice_basis(0, 1)) == 0
    assert len(slice_basis(-1, 0)) == 0


def test_every_slice_member_has_its_bidegree():
    for a, k in [(12, 6), (9, 3), (20, 7)]:
        for p in slice_basis(a, k).polynomials():
            assert bidegree(p) == (a, k)
            assert v_degree(p) == 0
        for p in r_slice_basis(a, k).polynomials():
            assert bidegree(p) == (a, k)


def test_r_slice_contains_v_monomials():
    assert parse("x*v") in r_slice_basis(3, 1).polynomials()


@pytest.mark.parametrize("n,expected", [(0, 1), (3, 3), (5, 3), (6, 3), (9, 6)])
def test_kernel_monomial_counts(n, expected):
    assert count_kernel_monomials(n) == expected


def test_kernel_monomial_count_pattern():
    for n in range(41):
        k, i = divmod(n, 6)
        want = (k + 1) * (k + 2) // 2 if i in (0, 1, 2, 4) else (k + 2) * (k + 3) // 2
        assert count_kernel_monomials(n) == want
        assert len(kernel_monomial_solutions(n)) == want
