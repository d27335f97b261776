"""Buchberger's algorithm, multivariate division, ideal and radical membership."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .polyring import (
    MonomialOrder,
    Polynomial,
    VariableSet,
    lcm_monomial,
    monomial_divides,
)

__all__ = [
    "IdealBasis",
    "NormalFormResult",
    "MembershipCertificate",
    "NonMember",
    "normal_form",
    "reduce_polynomial",
    "s_polynomial",
    "buchberger",
    "is_groebner",
    "ideal_membership",
    "radical_membership",
    "divide_exact",
    "read_ideal_file",
]


def _flat(k):
    if isinstance(k, tuple):
        for x in k:
            yield from _flat(x)
    else:
        yield k


def _heap_key(order):
    key = order.key
    if order.kind == "lex" or order.inner == "lex":
        return lambda m: tuple(-x for x in key(m))
    return lambda m: tuple(-x for x in _flat(key(m)))


@dataclass(frozen=True)
class IdealBasis:
    generators: tuple
    order: MonomialOrder
    groebner_flag: bool = False
    # representation[i][j]: coefficient of source[j] in generators[i]
    source: tuple | None = None
    representation: tuple | None = None

    @property
    def ring(self) -> VariableSet:
        return self.generators[0].ring

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


@dataclass(frozen=True)
class NormalFormResult:
    remainder: Polynomial
    quotients: tuple

    def reconstruct(self, generators) -> Polynomial:
        acc = self.remainder
        for q, g in zip(self.quotients, generators):
            acc = acc + q * g
        return acc


def _as_list(basis):
    if isinstance(basis, IdealBasis):
        return list(basis.generators), basis.order
    return list(basis), None


def _divide(p: Polynomial, gens, order: MonomialOrder, want_quotients: bool):
    ring = p.ring
    hk = _heap_key(order)
    lts = []
    for g in gens:
        if g.ring != ring:
            raise ValueError("mismatched variable sets")
        lt = g.leading_term(order)
        rest = [(m, c) for m, c in g.items() if m != lt.monomial]
        lts.append((lt.monomial, lt.coefficient, rest))
    work = dict(p.terms)
    heap = [(hk(m), m) for m in work]
    heapq.heapify(heap)
    remainder = {}
    quotients = [dict() for _ in gens] if want_quotients else None
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, None)
        if c is None:
            continue
        for j, (lm, lc, rest) in enumerate(lts):
            if monomial_divides(lm, m):
                q = Fraction(c) / lc
                if q.denominator == 1:
                    q = q.numerator
                shift = tuple(a - b for a, b in zip(m, lm))
                for gm, gc in rest:
                    mm = tuple(a + b for a, b in zip(gm, shift))
                    old = work.get(mm)
                    new = (0 if old is None else old) - q * gc
                    if type(new) is Fraction and new.denominator == 1:
                        new = new.numerator
                    if new:
                        if old is None:
                            heapq.heappush(heap, (hk(mm), mm))
                        work[mm] = new
                    elif old is not None:
                        del work[mm]
                if want_quotients:
                    qd = quotients[j]
                    v = qd.get(shift, 0) + q
                    if v:
                        qd[shift] = v
                    else:
                        qd.pop(shift, None)
                break
        else:
            remainder[m] = c
    rem = Polynomial(ring, remainder)
    if not want_quotients:
        return rem, None
    return rem, tuple(Polynomial(ring, q) for q in quotients)


def normal_form(p: Polynomial, basis, order: MonomialOrder | None = None) -> NormalFormResult:
    """Full multivariate division of ``p`` by the basis elements, in order.

    ``p = sum(quotients[i] * basis[i]) + remainder`` and no term of the
    remainder is divisible by a leading monomial of the basis.
    """
    gens, bo = _as_list(basis)
    order = order or bo or p.ring.default_order()
    if not gens:
        return NormalFormResult(p, ())
    rem, quots = _divide(p, gens, order, True)
    return NormalFormResult(rem, quots)


def reduce_polynomial(p: Polynomial, gens, order: MonomialOrder) -> Polynomial:
    if not gens:
        return p
    return _divide(p, list(gens), order, False)[0]


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    ltf, ltg = f.leading_term(order), g.leading_term(order)
    lcm = lcm_monomial(ltf.monomial, ltg.monomial)
    sf = tuple(a - b for a, b in zip(lcm, ltf.monomial))
    sg = tuple(a - b for a, b in zip(lcm, ltg.monomial))
    return f.shift(sf, Fraction(1) / ltf.coefficient).add_scaled(
        g, -Fraction(1) / ltg.coefficient, sg
    )


def _combine(reps_a, ca, sa, reps_b, cb, sb):
    """ca*x^sa*reps_a + cb*x^sb*reps_b, elementwise."""
    return [a.shift(sa, ca).add_scaled(b, cb, sb) for a, b in zip(reps_a, reps_b)]


def buchberger(gens, order: MonomialOrder | None = None, track: bool = False) -> IdealBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Pairs are processed smallest-lcm first, skipping pairs with coprime
    leading monomials and pairs caught by the chain criterion.  The result is
    interreduced, monic, and sorted by leading monomial ascending.  With
    ``track=True`` every output element carries its expression in ``gens``.
    """
    gens = [g for g in gens]
    if not gens:
        raise ValueError("buchberger needs at least one generator")
    ring = gens[0].ring
    order = order or ring.default_order()
    key = order.key
    one = Polynomial.constant(ring, 1)
    zero = Polynomial.zero(ring)
    n_src = len(gens)

    basis = []
    reps = []
    for i, g in enumerate(gens):
        if g.is_zero():
            continue
        basis.append(g)
        if track:
            reps.append([one if j == i else zero for j in range(n_src)])
    if not basis:
        return IdealBasis((zero,), order, True, tuple(gens) if track else None,
                          ((zero,) * n_src,) if track else None)

    lms = [g.leading_monomial(order) for g in basis]
    pairs = set(combinations(range(len(basis)), 2))
    done = set()

    def lcm_of(pair):
        return lcm_monomial(lms[pair[0]], lms[pair[1]])

    while pairs:
        pair = min(pairs, key=lambda pr: (key(lcm_of(pr)), pr))
        pairs.discard(pair)
        i, j = pair
        lcm = lcm_of(pair)
        done.add(pair)
        if all(a == 0 or b == 0 for a, b in zip(lms[i], lms[j])):
            continue
        chain = False
        for k in range(len(basis)):
            if k in (i, j) or not monomial_divides(lms[k], lcm):
                continue
            if (min(i, k), max(i, k)) in done and (min(j, k), max(j, k)) in done:
                chain = True
                break
        if chain:
            continue
        f, g = basis[i], basis[j]
        ltf, ltg = f.leading_term(order), g.leading_term(order)
        sf = tuple(a - b for a, b in zip(lcm, ltf.monomial))
        sg = tuple(a - b for a, b in zip(lcm, ltg.monomial))
        cf, cg = Fraction(1) / ltf.coefficient, -Fraction(1) / ltg.coefficient
        sp = f.shift(sf, cf).add_scaled(g, cg, sg)
        if track:
            nf = normal_form(sp, basis, order)
            h = nf.remainder
            if h.is_zero():
                continue
            rep = _combine(reps[i], cf, sf, reps[j], cg, sg)
            for q, r in zip(nf.quotients, reps):
                if q:
                    rep = [a - q * b for a, b in zip(rep, r)]
        else:
            h = reduce_polynomial(sp, basis, order)
            if h.is_zero():
                continue
        new = len(basis)
        basis.append(h)
        lms.append(h.leading_monomial(order))
        if track:
            reps.append(rep)
        for k in range(new):
            pairs.add((k, new))

    # minimal basis
    keep = []
    for i, m in enumerate(lms):
        dominated = False
        for j, m2 in enumerate(lms):
            if j == i or not monomial_divides(m2, m):
                continue
            if m2 != m or j < i:
                dominated = True
                break
        if not dominated:
            keep.append(i)
    # interreduce against the other minimal elements
    final = []
    final_reps = []
    for i in keep:
        others = [basis[j] for j in keep if j != i]
        g = basis[i]
        if track:
            nf = normal_form(g, others, order)
            r = nf.remainder
            rep = list(reps[i])
            other_reps = [reps[j] for j in keep if j != i]
            for q, orp in zip(nf.quotients, other_reps):
                if q:
                    rep = [a - q * b for a, b in zip(rep, orp)]
        else:
            r = reduce_polynomial(g, others, order)
        lc = r.leading_coefficient(order)
        final.append(r / lc)
        if track:
            final_reps.append([a / lc for a in rep])
    idx = sorted(range(len(final)), key=lambda k: key(final[k].leading_monomial(order)))
    gens_out = tuple(final[k] for k in idx)
    if track:
        return IdealBasis(
            gens_out, order, True, tuple(gens), tuple(tuple(final_reps[k]) for k in idx)
        )
    return IdealBasis(gens_out, order, True)


def is_groebner(basis: IdealBasis) -> bool:
    """Every S-polynomial of a pair reduces to zero."""
    gens, order = list(basis.generators), basis.order
    for f, g in combinations(gens, 2):
        if reduce_polynomial(s_polynomial(f, g, order), gens, order):
            return False
    return True


@dataclass(frozen=True)
class MembershipCertificate:
    """``target == sum(quotients[i] * generators[i])``."""

    target: Polynomial
    generators: tuple
    quotients: tuple

    member = True

    def check(self) -> bool:
        acc = Polynomial.zero(self.target.ring)
        for q, g in zip(self.quotients, self.generators):
            acc = acc + q * g
        return acc == self.target


@dataclass(frozen=True)
class NonMember:
    target: Polynomial
    normal_form: Polynomial

    member = False


def ideal_membership(p: Polynomial, gens, order: MonomialOrder | None = None):
    """Decide ``p in (gens)``; members come with quotients over ``gens``."""
    gens = tuple(gens)
    order = order or p.ring.default_order()
    gb = buchberger(gens, order, track=True)
    nf = normal_form(p, gb)
    if nf.remainder:
        return NonMember(p, nf.remainder)
    zero = Polynomial.zero(p.ring)
    quots = [zero] * len(gens)
    for h, rep in zip(nf.quotients, gb.representation):
        if h:
            quots = [a + h * b for a, b in zip(quots, rep)]
    cert = MembershipCertificate(p, gens, tuple(quots))
    assert cert.check(), "membership certificate failed to reconstruct"
    return cert


def radical_membership(p: Polynomial, gens, order: MonomialOrder | None = None) -> bool:
    """``p`` lies in the radical of ``(gens)`` iff ``1 in (gens, 1 - w p)``.

    ``w`` is a fresh variable placed last (least significant) in the order.
    """
    ring = p.ring
    order = order or ring.default_order()
    fresh = "w"
    while fresh in ring:
        fresh += "_"
    big = ring.extend(fresh)
    if order.kind == "lex":
        ext = MonomialOrder(order.ranking + (len(ring),))
    else:
        ext = MonomialOrder(order.ranking + (len(ring),), "block", order.split, order.inner)
    lifted = [g.to_ring(big) for g in gens]
    w = Polynomial.var(big, fresh)
    lifted.append(1 - w * p.to_ring(big))
    gb = buchberger(lifted, ext)
    return len(gb) == 1 and gb.generators[0] == 1


def divide_exact(p: Polynomial, d: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
    """``p / d`` when ``d`` divides ``p``; raises ``ArithmeticError`` otherwise."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    nf = normal_form(p, [d], order)
    if nf.remainder:
        raise ArithmeticError(f"{d} does not divide {p}")
    return nf.quotients[0]


def read_ideal_file(path, ring: VariableSet):
    """One polynomial per line; ``#`` starts a comment; blank lines ignored."""
    from .polyring import parse

    gens = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                gens.append(parse(line, ring))
    return gens
