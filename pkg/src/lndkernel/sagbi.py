"""Subduction against finite generator sets and the leading-term relation checks.

The generator set ``S_N`` holds ``beta_i, gamma_i, delta_i`` for ``i <= N``
together with ``g``.  Their leading monomials under the R-order are
``b_i = x v^i``, ``c_i = x^3 t v^i``, ``d_i = x^6 u v^i`` and ``e = x^6 u^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .families import FamilyArchive, KINDS
from .imagekernel import r_kernel_slice
from .polyring import R, MonomialOrder, Polynomial, parse
from .report import Report

__all__ = [
    "LeadingMonomialSet",
    "SubductionResult",
    "SubductionError",
    "decompose_monomial",
    "lt_algebra_membership",
    "subduct",
    "generator_set",
    "RelationInstance",
    "relation_instances",
    "check_relation_identities",
    "invariants_up_to_degree",
    "verify_sagbi",
]


def _mono(x=0, s=0, t=0, u=0, v=0):
    return (x, s, t, u, v)


@dataclass(frozen=True)
class LeadingMonomialSet:
    """``b_i, c_i, d_i`` for ``0 <= i <= N`` and ``e``, as exponent tuples."""

    N: int

    @property
    def entries(self) -> dict:
        out = {}
        for i in range(self.N + 1):
            out[("b", i)] = _mono(x=1, v=i)
            out[("c", i)] = _mono(x=3, t=1, v=i)
            out[("d", i)] = _mono(x=6, u=1, v=i)
        out[("e",)] = _mono(x=6, u=2)
        return out

    def coefficient(self, label) -> int:
        return {"b": 1, "c": 2, "d": 3, "e": 9}[label[0]]


def decompose_monomial(m: tuple, lms, order: MonomialOrder | None = None):
    """Exponents ``k`` with ``sum(k_j * lms[j]) == m``, or ``None``.

    Generators are tried from the largest leading monomial down, each with
    its largest feasible multiplicity first; the first solution found wins.
    """
    order = order or R.default_order()
    idx = sorted(range(len(lms)), key=lambda j: order.key(lms[j]), reverse=True)
    nv = len(m)
    dead = set()

    def rec(rem, pos):
        if not any(rem):
            return {}
        if pos == len(idx) or (rem, pos) in dead:
            return None
        j = idx[pos]
        lm = lms[j]
        cap = None
        for a, b in zip(rem, lm):
            if b:
                q = a // b
                cap = q if cap is None else min(cap, q)
        if cap is None:  # constant generator contributes nothing
            cap = 0
        for k in range(cap, -1, -1):
            nxt = tuple(a - k * b for a, b in zip(rem, lm)) if k else rem
            sol = rec(nxt, pos + 1)
            if sol is not None:
                if k:
                    sol = dict(sol)
                    sol[j] = k
                return sol
        dead.add((rem, pos))
        return None

    if len(m) != nv:
        raise ValueError("monomial length mismatch")
    return rec(tuple(m), 0)


def lt_algebra_membership(m: tuple, lmset: LeadingMonomialSet):
    """Multiset ``{label: count}`` of set monomials with product ``m``, or ``None``."""
    entries = lmset.entries
    labels = list(entries)
    sol = decompose_monomial(tuple(m), [entries[k] for k in labels])
    if sol is None:
        return None
    return {labels[j]: k for j, k in sorted(sol.items())}


@dataclass(frozen=True)
class SubductionResult:
    residue: Polynomial
    # (coefficient, ((generator index, multiplicity), ...)) per step
    expression: tuple

    def evaluate(self, gens) -> Polynomial:
        acc = Polynomial.zero(self.residue.ring)
        for c, parts in self.expression:
            p = Polynomial.constant(self.residue.ring, c)
            for j, k in parts:
                p = p * gens[j] ** k
            acc = acc + p
        return acc

    @property
    def reduced_to_zero(self) -> bool:
        return self.residue.is_zero()


class SubductionError(RuntimeError):
    pass


class _PowerCache:
    def __init__(self, gens):
        self.gens = gens
        self.cache = {}

    def power(self, j, k):
        key = (j, k)
        p = self.cache.get(key)
        if p is None:
            if k == 1:
                p = self.gens[j]
            else:
                half = self.power(j, k // 2)
                p = half * half
                if k % 2:
                    p = p * self.gens[j]
            self.cache[key] = p
        return p

    def product(self, parts):
        p = None
        for j, k in parts:
            q = self.power(j, k)
            p = q if p is None else p * q
        return p if p is not None else Polynomial.constant(self.gens[0].ring, 1)


def subduct(f: Polynomial, gens, order: MonomialOrder | None = None, max_steps: int = 100000):
    """SAGBI normal form of ``f`` against ``gens``.

    While the leading monomial of the current remainder is a product of
    leading monomials of ``gens``, the matching scaled product is subtracted.
    ``f == result.evaluate(gens) + result.residue`` holds exactly.
    """
    gens = list(gens)
    order = order or f.ring.default_order()
    if any(g.is_zero() for g in gens):
        raise ValueError("zero generator")
    lms = [g.leading_monomial(order) for g in gens]
    lcs = [g.leading_coefficient(order) for g in gens]
    powers = _PowerCache(gens)
    expression = []
    cur = f
    prev_key = None
    steps = 0
    while cur:
        lt = cur.leading_term(order)
        key = order.key(lt.monomial)
        if prev_key is not None and not key < prev_key:
            raise SubductionError("leading monomial failed to decrease")
        prev_key = key
        sol = decompose_monomial(lt.monomial, lms, order)
        if sol is None:
            break
        parts = tuple(sorted(sol.items()))
        lc = Fraction(1)
        for j, k in parts:
            lc *= Fraction(lcs[j]) ** k
        c = Fraction(lt.coefficient) / lc
        if c.denominator == 1:
            c = c.numerator
        cur = cur - powers.product(parts) * c
        expression.append((c, parts))
        steps += 1
        if steps > max_steps:
            raise SubductionError("step limit exceeded")
    return SubductionResult(cur, tuple(expression))


def generator_set(archive: FamilyArchive, N: int):
    """``(labels, polynomials)`` of ``S_N``: beta, gamma, delta up to ``N``, then ``g``."""
    labels, gens = [], []
    for kind in KINDS:
        for i in range(N + 1):
            labels.append((kind, i))
            gens.append(archive.eta(kind, i))
    labels.append(("g",))
    gens.append(archive.g)
    return labels, gens


# ---------------------------------------------------------------------------
# leading-term relations

_B0, _G0, _D0 = parse("x"), parse("2*x^3*t - s^2"), parse("3*x^6*u - 3*x^3*s*t + s^3")
_G = parse("9*x^6*u^2 - 18*x^3*s*t*u + 6*s^3*u + 8*x^3*t^3 - 3*s^2*t^2")

# family -> (first kind, second kind, drop in v-degree, coefficient(n, m, n', m'))
RELATION_FAMILIES = {
    "beta-beta": ("beta", "beta", 2, lambda n, m, n2, m2: -(n * m - n2 * m2) * _G0),
    "beta-gamma": ("beta", "gamma", 1, lambda n, m, n2, m2: (m2 - m) * _D0),
    "beta-delta": ("beta", "delta", 1, lambda n, m, n2, m2: (m - m2) * _G0**2),
    "gamma-delta": ("gamma", "delta", 1, lambda n, m, n2, m2: (n2 - n) * _B0**5 * _G),
    "gamma-gamma": ("gamma", "gamma", 2, lambda n, m, n2, m2: (n * m - n2 * m2) * _B0**4 * _G),
    "delta-delta": (
        "delta",
        "delta",
        2,
        lambda n, m, n2, m2: (n * m - n2 * m2) * _B0**4 * _G0 * _G,
    ),
}


@dataclass(frozen=True)
class RelationInstance:
    family: str
    indices: tuple  # (n, m, n', m') or (n, m, (m_1, ..., m_6))

    @property
    def label(self) -> str:
        return f"{self.family}{self.indices}"


def relation_instances(N: int) -> list:
    """All relation instances with index sum at most ``N``."""
    out = []
    for fam, (k1, k2, _, _) in RELATION_FAMILIES.items():
        sym = k1 == k2
        for s in range(N + 1):
            pairs = [(n, s - n) for n in range(s + 1)]
            if sym:
                pairs = [p for p in pairs if p[0] <= p[1]]
            for i, (n, m) in enumerate(pairs):
                for n2, m2 in pairs[i + 1 :]:
                    out.append(RelationInstance(fam, (n, m, n2, m2)))
    for s in range(N + 1):
        for n in range(s // 2 + 1):
            for ms in combinations_with_replacement(range(s + 1), 6):
                if sum(ms) == s:
                    out.append(RelationInstance("delta-delta-g", (n, s - n, ms)))
    return out


def relation_polynomial(archive: FamilyArchive, inst: RelationInstance) -> Polynomial:
    e = archive.eta
    if inst.family == "delta-delta-g":
        n, m, ms = inst.indices
        p = archive.g
        for i in ms:
            p = p * e("beta", i)
        return e("delta", n) * e("delta", m) - p
    k1, k2, _, _ = RELATION_FAMILIES[inst.family]
    n, m, n2, m2 = inst.indices
    return e(k1, n) * e(k2, m) - e(k1, n2) * e(k2, m2)


def expected_relation(inst: RelationInstance):
    """``(v-degree, expected coefficient)`` of the top surviving v-layer."""
    if inst.family == "delta-delta-g":
        n, m, _ = inst.indices
        return n + m, -(_G0**3)
    _, _, drop, coef = RELATION_FAMILIES[inst.family]
    n, m, n2, m2 = inst.indices
    return n + m - drop, coef(n, m, n2, m2)


def _lt_poly(p: Polynomial) -> Polynomial:
    lt = p.leading_term()
    return Polynomial.monomial(R, lt.monomial, lt.coefficient)


def check_relation_identities(archive: FamilyArchive, N: int, subduct_against: int | None = None) -> Report:
    """Check each relation's top v-layer, leading term and subduction to zero.

    Layers above the expected one must vanish, the expected layer must equal
    the stated coefficient, and the leading term must be the leading term of
    that coefficient times the matching power of v.
    """
    rep = Report("sagbi-relations")
    rep.note(
        "gamma-delta layer",
        "coefficient is (n'-n) x^5 g; x^4 g has degree 16, the layer has degree 17",
    )
    rep.note(
        "delta-delta leading term",
        "x^4 gamma0 g has leading term 18 x^13 t u^2, not 9 x^13 t u^2",
    )
    M = N if subduct_against is None else subduct_against
    labels, gens = generator_set(archive, M)
    v = Polynomial.var(R, "v")
    for inst in relation_instances(N):
        p = relation_polynomial(archive, inst)
        top, coef = expected_relation(inst)
        s = sum(inst.indices[:2])
        vanish = all(p.coefficient_in("v", j).is_zero() for j in range(top + 1, s + 1))
        layer = p.coefficient_in("v", top)
        ok_layer = vanish and layer == coef
        rep.check(
            ok_layer,
            f"{inst.label} v^{top} coefficient",
            "" if ok_layer else f"computed {layer} ; expected {coef}",
        )
        if coef:
            want = _lt_poly(coef * v**top)
            got = _lt_poly(p) if p else Polynomial.zero(R)
            rep.check(got == want, f"{inst.label} leading term", f"{got}" if got == want else f"computed {got} ; expected {want}")
        else:
            rep.check(
                p.degree_in("v") < top if p else True,
                f"{inst.label} leading term",
                "expected coefficient vanishes",
            )
        res = subduct(p, gens)
        if res.evaluate(gens) + res.residue != p:
            rep.check(False, f"{inst.label} subduction soundness")
        rep.check(res.reduced_to_zero, f"{inst.label} subducts to 0", "" if res.reduced_to_zero else f"residue {res.residue}")
    return rep


def invariants_up_to_degree(max_degree: int) -> list:
    """``(bidegree, basis)`` of ``ker D`` on every nonzero R-slice of degree <= bound."""
    out = []
    for a in range(1, max_degree + 1):
        for k in range(a + 1):
            basis = r_kernel_slice(a, k)
            if basis:
                out.append(((a, k), basis))
    return out


def verify_sagbi(archive: FamilyArchive, N: int, degree_bound: int | None = None) -> Report:
    """Relation instances and independently found invariants all subduct to 0."""
    rep = Report("sagbi")
    rep.extend(check_relation_identities(archive, N))
    bound = 2 * N + 1 if degree_bound is None else degree_bound
    labels, gens = generator_set(archive, N)
    lmset = LeadingMonomialSet(N)
    for g, lab in zip(gens, labels):
        ok = lt_algebra_membership(g.leading_monomial(), lmset) is not None
        rep.check(ok, f"LM of {lab} in the leading-term algebra")
    for (a, k), basis in invariants_up_to_degree(bound):
        for i, p in enumerate(basis):
            res = subduct(p, gens)
            ok = res.reduced_to_zero and res.evaluate(gens) == p
            rep.check(ok, f"invariant ({a},{k})#{i} subducts to 0", "" if ok else f"residue {res.residue}")
    return rep
