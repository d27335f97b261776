"""The ten acceptance criteria, each with its runtime bound.

Memo caches are cleared before every criterion so timings are cold.
The conftest prints one PASS/FAIL line per criterion at the end of the run.
"""

import math
import time
from fractions import Fraction

import pytest

from lndkernel import families, fgideal, grading, imagekernel
from lndkernel.derivation import ALPHA_RING, DELTA, apply, exp_action, is_invariant
from lndkernel.families import build_archive, expected_bidegree, expected_leading_term, verify_archive
from lndkernel.fgideal import (
    conductor_checks,
    fg_ideal_summary,
    g_exclusion,
    square_membership,
    v0_base_values,
    v0_relation,
    verify_fixed_point_ideals,
)
from lndkernel.grading import bidegree, count_kernel_monomials
from lndkernel.groebner import is_groebner
from lndkernel.imagekernel import (
    J_ORDER,
    J_RING,
    KERNEL_GENERATORS,
    binomial_determinant,
    image_membership,
    truncation_dims,
)
from lndkernel.polyring import Polynomial, parse
from lndkernel.sagbi import RELATION_FAMILIES, relation_instances, verify_sagbi

import test_properties


def criterion(number, title):
    return pytest.mark.criterion(number, title)


@pytest.fixture(autouse=True)
def cold_caches():
    families._cached_family.cache_clear()
    grading.slice_basis.cache_clear()
    imagekernel.kernel_slice.cache_clear()
    imagekernel.r_kernel_slice.cache_clear()
    imagekernel._j_basis.cache_clear()
    fgideal._TAIL_CACHE.clear()
    yield


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f} s, limit {self.limit} s"


@criterion(1, "seed fidelity")
def test_criterion_01_seed_fidelity():
    with Timer(1):
        a = build_archive(1)
        want = {
            ("beta", 0): "x",
            ("gamma", 0): "2*x^3*t - s^2",
            ("delta", 0): "3*x^6*u - 3*x^3*s*t + s^3",
            ("beta", 1): "x*v - s",
            ("gamma", 1): "(2*x^3*t - s^2)*v + x^2*s*t - 3*x^5*u",
            ("delta", 1): "(3*x^6*u - 3*x^3*s*t + s^3)*v - 3*x^5*s*u + 4*x^5*t^2 - x^2*s^2*t",
        }
        for (kind, n), text in want.items():
            p = a.eta(kind, n)
            assert p == parse(text)
            assert is_invariant(p)
        assert a.g == parse("9*x^6*u^2 - 18*x^3*s*t*u + 6*s^3*u + 8*x^3*t^3 - 3*s^2*t^2")
        assert is_invariant(a.g)


@criterion(2, "group action")
def test_criterion_02_group_action():
    with Timer(1):
        ring = ALPHA_RING
        want = {
            "x": "x",
            "s": "s + alpha*x^3",
            "t": "t + alpha*s + 1/2*alpha^2*x^3",
            "u": "u + alpha*t + 1/2*alpha^2*s + 1/6*alpha^3*x^3",
            "v": "v + alpha*x^2",
        }
        for var, text in want.items():
            assert exp_action(parse(var)) == parse(text, ring)
        # the action is a group action: exp(a D) exp(b D) = exp((a + b) D)
        a, b = Fraction(2, 3), Fraction(-5, 7)
        for var in want:
            p = parse(var)
            assert exp_action(exp_action(p, b), a) == exp_action(p, a + b)


@criterion(3, "families to n = 10")
def test_criterion_03_families():
    with Timer(300):
        archive = build_archive(10)
        for kind in ("beta", "gamma", "delta"):
            for n in range(11):
                p = archive.eta(kind, n)
                assert is_invariant(p)
                assert bidegree(p) == expected_bidegree(kind, n)
                lt = p.leading_term()
                assert Polynomial.monomial(p.ring, lt.monomial, lt.coefficient) == expected_leading_term(kind, n)
                for j in range(n + 1):
                    assert p.coefficient_in("v", j) == archive.tail(kind, n - j) * math.comb(n, j)
        rep = verify_archive(archive)
        assert rep.ok, [c.line() for c in rep.failures()]


@criterion(4, "image membership")
def test_criterion_04_image_membership():
    with Timer(60):
        y = lambda text: parse(text, J_RING)
        g = KERNEL_GENERATORS[3]
        for k in range(5):
            res = image_membership(parse("x^2") * g**k)
            assert not res.member
            assert res.normal_form == y("y1^2*s") * y("y4") ** k
        for a in (parse("x^3"), parse("x^2*(2*x^3*t - s^2)"), parse("x^2*(3*x^6*u - 3*x^3*s*t + s^3)")):
            res = image_membership(a)
            assert res.member and apply(DELTA, res.preimage) == a
        assert image_membership(parse("x^3")).preimage == parse("s")


@criterion(5, "Groebner basis of the elimination ideal")
def test_criterion_05_groebner():
    with Timer(30):
        gb = imagekernel._j_basis(0, parse("x^3"), KERNEL_GENERATORS)
        assert is_groebner(gb)
        got = {p.monic(J_ORDER) for p in gb}
        y = lambda text: parse(text, J_RING).monic(J_ORDER)
        for text in ["x - y1", "s^2 + y2", "s*y2 + y3", "s*y3 - y2^2", "y1^3", "y2^3 + y3^2"]:
            assert y(text) in got
        # the eighth element: the constant term is y4 (the fourth kernel generator)
        assert y("6*y3*u + 3*y2*t^2 - y4") in got
        assert len(gb) == 8


@criterion(6, "counting claims")
def test_criterion_06_counts():
    with Timer(120):
        for n in range(41):
            k, i = divmod(n, 6)
            want = (k + 1) * (k + 2) // 2 if i in (0, 1, 2, 4) else (k + 2) * (k + 3) // 2
            assert count_kernel_monomials(n) == want
        dets = [binomial_determinant(k) for k in range(9)]
        assert dets[1] == 2 and all(dets)


@criterion(6, "counting claims")
def test_criterion_06_truncation_k_plus_1():
    with Timer(120):
        for n in range(24):
            k, i = divmod(n, 6)
            t = truncation_dims(n)
            assert t.dim_piN == t.dim_piM
            if i in (0, 1, 2, 4):
                assert t.dim_piN == k + 1


@criterion(6, "counting claims")
def test_criterion_06_truncation_k_plus_2():
    """Stated value k+2 for n = 6k+3 and 6k+5.

    The computed projections have dimension k+1 there as well; only the
    untruncated space N reaches k+2.  Left failing on purpose.
    """
    with Timer(120):
        got = {}
        for n in range(24):
            k, i = divmod(n, 6)
            if i in (3, 5):
                t = truncation_dims(n)
                got[n] = (t.dim_piM, t.dim_piN, t.dim_N, k + 2)
        bad = {n: v for n, v in got.items() if v[0] != v[3] or v[1] != v[3]}
        assert not bad, f"n: (dim piM, dim piN, dim N, stated) = {bad}"


@criterion(7, "SAGBI suite at N = 6")
def test_criterion_07_sagbi():
    with Timer(600):
        archive = build_archive(6)
        insts = relation_instances(6)
        assert {i.family for i in insts} == set(RELATION_FAMILIES) | {"delta-delta-g"}
        rep = verify_sagbi(archive, 6, degree_bound=13)
        assert rep.ok, [c.line() for c in rep.failures()][:10]
        assert sum("subducts to 0" in c.label for c in rep.checks) > len(insts)


@criterion(8, "finite generation ideal suite at N = 4")
def test_criterion_08_fg_ideal():
    with Timer(900):
        archive = build_archive(16)
        assert v0_base_values(archive)["beta"] == -archive.eta("gamma", 0)
        for kind in ("beta", "gamma", "delta"):
            assert v0_relation(archive, kind, 1, 1, 0, 2).ok
            for n in range(3):
                pm = square_membership(archive, kind, n)
                assert pm is not None and pm.certificate.check()
        assert square_membership(archive, "beta", 2).power == 4
        for N in range(1, 5):
            assert conductor_checks(N, archive).ok
        exclusion = g_exclusion(4, archive)
        assert exclusion.ok
        assert sum("no invariants" in c.label for c in exclusion.checks) == 12
        assert sum("not in Delta(S)" in c.label for c in exclusion.checks) == 5
        rep = fg_ideal_summary(4)
        assert rep.ok, [c.line() for c in rep.failures()]


@criterion(9, "fixed point, plinth and nullcone ideals")
def test_criterion_09_fixed_point_ideals():
    with Timer(60):
        rep = verify_fixed_point_ideals(build_archive(6))
        assert rep.ok, [c.line() for c in rep.failures()]
        assert sum(c.label.startswith("nullcone:") for c in rep.checks) >= 3 * 7


@criterion(10, "property suites")
def test_criterion_10_properties():
    suites = [
        test_properties.test_ring_axioms,
        test_properties.test_leibniz_rule,
        test_properties.test_leading_monomial_is_multiplicative,
        test_properties.test_normal_form_reconstruction,
        test_properties.test_subduction_soundness,
    ]
    assert test_properties.PROPERTY.max_examples >= 1000
    for suite in suites:
        suite()
