import pytest

from lndkernel.derivation import is_invariant
from lndkernel.families import (
    HEADER,
    KINDS,
    ArchiveFormatError,
    alternating_sum,
    build_archive,
    dump_archive,
    expected_bidegree,
    expected_leading_term,
    load_archive,
    seed_archive,
    uniqueness_window,
    verify_archive,
)
from lndkernel.grading import bidegree
from lndkernel.polyring import parse


@pytest.fixture(scope="module")
def archive():
    return build_archive(10)


def test_seeds():
    a = seed_archive()
    assert a.eta("beta", 0) == parse("x")
    assert a.eta("gamma", 0) == parse("2*x^3*t - s^2")
    assert a.eta("delta", 0) == parse("3*x^6*u - 3*x^3*s*t + s^3")
    assert a.eta("gamma", 1) == parse("(2*x^3*t - s^2)*v + x^2*s*t - 3*x^5*u")
    assert a.g == parse("9*x^6*u^2 - 18*x^3*s*t*u + 6*s^3*u + 8*x^3*t^3 - 3*s^2*t^2")
    assert a.upto == 1


def test_second_members(archive):
    assert archive.eta("beta", 2) == parse("x*v^2 - 2*s*v + 2*x^2*t")
    want = parse("(2*x^3*t - s^2)*v^2 + 2*(x^2*s*t - 3*x^5*u)*v + 6*x^4*s*u - 4*x^4*t^2")
    assert archive.eta("gamma", 2) == want


def test_binomial_layer_of_beta3(archive):
    assert archive.eta("beta", 3).coefficient_in("v", 1) == parse("6*x^2*t")


def test_all_members_through_ten(archive):
    for kind in KINDS:
        for n in range(11):
            p = archive.eta(kind, n)
            assert is_invariant(p)
            assert bidegree(p) == expected_bidegree(kind, n)
            lt = p.leading_term()
            assert lt.monomial == expected_leading_term(kind, n).leading_monomial()
            assert p.degree_in("v") == n


def test_expected_bidegrees():
    assert expected_bidegree("beta", 4) == (9, 4)
    assert expected_bidegree("gamma", 4) == (14, 6)
    assert expected_bidegree("delta", 4) == (17, 7)


def test_verify_archive_passes(archive):
    rep = verify_archive(archive)
    assert rep.ok, [c.line() for c in rep.failures()]
    assert rep.count("PASS") >= 300


def test_reference_layer_disagreements_are_notes_not_failures(archive):
    notes = [c.label for c in verify_archive(archive).notes()]
    assert any(lbl.startswith("gamma_2 reference v^1") for lbl in notes)
    assert not any("beta" in lbl and "reference" in lbl for lbl in notes)


def test_alternating_sum_top_layer(archive):
    etas = [archive.eta("beta", k) for k in range(3)]
    f = alternating_sum(etas, 2)
    assert f.degree_in("v") == 3
    assert f.coefficient_in("v", 3) == parse("x")


def test_uniqueness_windows():
    assert [n for n in range(13) if n not in uniqueness_window("beta", 12)] == [0, 6, 12]
    assert [n for n in range(11) if n not in uniqueness_window("gamma", 10)] == [0, 4, 6, 10]
    assert [n for n in range(10) if n not in uniqueness_window("delta", 9)] == [0, 3, 5, 6, 9]


def test_archive_round_trip(archive):
    text = dump_archive(build_archive(4))
    assert text.startswith(HEADER)
    back = load_archive(text)
    for kind in KINDS:
        for n in range(5):
            assert back.eta(kind, n) == archive.eta(kind, n)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda t: t.replace(HEADER, "NOT AN ARCHIVE"),
        lambda t: t.replace("beta 2 ", "beta 7 "),
        lambda t: "\n".join(ln for ln in t.splitlines() if not ln.startswith("g ")),
        lambda t: t + "beta 1 x*v - s\n",
        lambda t: t + "epsilon 0 x\n",
        lambda t: "\n".join(("beta 2 x*v^2" if ln.startswith("beta 2 ") else ln) for ln in t.splitlines()),
    ],
)
def test_load_rejects_bad_archives(mutate):
    text = dump_archive(build_archive(3))
    with pytest.raises(ArchiveFormatError):
        load_archive(mutate(text))


def test_dump_is_a_fixed_point_of_load():
    text = dump_archive(build_archive(6))
    assert dump_archive(load_archive(text)) == text
