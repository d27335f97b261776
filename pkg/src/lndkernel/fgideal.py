"""Ideal-level checks around the finite generation ideal of the kernel of D.

Membership in ``(beta0, gamma0, delta0) R^D`` is decided one bidegree at a
time.  An invariant whose v-free part vanishes is zero (compare v-layers of
``D(v^j mu)``), so ``T = beta0 p1 + gamma0 p2 + delta0 p3`` holds as soon as
it holds after setting ``v = 0``.  The cofactors are searched among
products of family members and ``g`` of the right bidegree: on v-free parts
this is a finite linear system over products of tails, and the solution is
lifted back by replacing each tail with its family member and checked
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .derivation import D, apply, check_plinth, is_invariant, plinth_certificates
from .families import KINDS, FamilyArchive, build_archive, expected_bidegree
from .grading import bidegree
from .groebner import ideal_membership, radical_membership
from .imagekernel import image_membership, r_kernel_slice
from .linalg import solve
from .polyring import R, Polynomial, parse
from .report import Report
from .sagbi import LeadingMonomialSet, generator_set, lt_algebra_membership, subduct

__all__ = [
    "MembershipCertificate",
    "ObstructionWitness",
    "Combination",
    "product_multisets",
    "find_certificate",
    "verify_fixed_point_ideals",
    "relation_lambda",
    "v0_relation",
    "v0_base_values",
    "PowerMembership",
    "square_membership",
    "g_exclusion",
    "conductor_checks",
    "fg_ideal_summary",
]

_ETA0 = ("beta", "gamma", "delta")
_X, _S = parse("x"), parse("s")


# ---------------------------------------------------------------------------
# formal combinations of products of archive entries

def _label_bidegree(label) -> tuple:
    if label[0] == "g":
        return (12, 6)
    return expected_bidegree(label[0], label[1])


class Combination:
    """Finite sum ``sum c * prod(entries)``; keys are sorted label tuples."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def atom(cls, *labels, coef=1):
        return cls({tuple(sorted(labels)): coef})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Combination(out)

    def scale(self, c):
        return Combination({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(sorted(k1 + k2))
                out[k] = out.get(k, 0) + v1 * v2
        return Combination(out)

    def evaluate(self, archive: FamilyArchive) -> Polynomial:
        acc = Polynomial.zero(R)
        for k, c in sorted(self.terms.items()):
            acc = acc + _entry_product(archive, k) * c
        return acc

    def __len__(self):
        return len(self.terms)

    def describe(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms.items()):
            names = "*".join(_label_name(lb) for lb in k) or "1"
            parts.append(f"{c}*{names}")
        return " + ".join(parts)


def _label_name(label) -> str:
    return "g" if label[0] == "g" else f"{label[0]}_{label[1]}"


def _entry(archive, label, tail=False) -> Polynomial:
    if label[0] == "g":
        return archive.g
    return archive.tail(*label) if tail else archive.eta(*label)


def _entry_product(archive, labels, tail=False) -> Polynomial:
    p = Polynomial.constant(R, 1)
    for lb in labels:
        p = p * _entry(archive, lb, tail)
    return p


def product_multisets(a: int, k: int, max_index: int) -> list:
    """Multisets of family members (index <= max_index) and ``g`` of bidegree ``(a, k)``.

    Every entry has ``deg - 2 rho >= 0``, which bounds the search.
    """
    atoms = [("g",)] + [(kind, i) for kind in KINDS for i in range(max_index + 1)]
    bds = [_label_bidegree(lb) for lb in atoms]
    out = []

    def rec(pos, ra, rk, acc):
        if ra == 0 and rk == 0:
            out.append(tuple(sorted(acc)))
            return
        if pos == len(atoms) or rk < 0 or ra - 2 * rk < 0:
            return
        da, dk = bds[pos]
        count = 0
        while True:
            rec(pos + 1, ra - count * da, rk - count * dk, acc + [atoms[pos]] * count)
            count += 1
            if ra - count * da < 0 or rk - count * dk < 0:
                break

    if a >= 0 and k >= 0:
        rec(0, a, k, [])
    return sorted(set(out))


@dataclass(frozen=True)
class MembershipCertificate:
    """``target == beta0*p1 + gamma0*p2 + delta0*p3`` with invariant cofactors."""

    target: Polynomial
    combinations: tuple  # three Combination values
    combiners: tuple  # the evaluated cofactors p1, p2, p3
    slack: Polynomial

    def check(self) -> bool:
        b0, c0, d0 = parse("x"), parse("2*x^3*t - s^2"), parse("3*x^6*u - 3*x^3*s*t + s^3")
        p1, p2, p3 = self.combiners
        return (
            self.slack.is_zero()
            and self.target == b0 * p1 + c0 * p2 + d0 * p3
            and all(is_invariant(p) for p in self.combiners)
        )

    def describe(self) -> str:
        names = ("beta0", "gamma0", "delta0")
        return " + ".join(
            f"{n}*({c.describe()})" for n, c in zip(names, self.combinations) if len(c)
        ) or "0"


def _make_certificate(archive, target, combos) -> MembershipCertificate:
    ps = tuple(c.evaluate(archive) for c in combos)
    eta0 = [archive.eta(k, 0) for k in _ETA0]
    slack = target - sum((e * p for e, p in zip(eta0, ps)), Polynomial.zero(R))
    return MembershipCertificate(target, tuple(combos), ps, slack)


def find_certificate(archive: FamilyArchive, target: Polynomial, max_index: int | None = None):
    """Certificate for ``target in (beta0, gamma0, delta0) R^D``, or ``None``.

    ``target`` must be an invariant homogeneous in both gradings.
    """
    if max_index is None:
        max_index = archive.upto
    empty = (Combination(), Combination(), Combination())
    if target.is_zero():
        return _make_certificate(archive, target, empty)
    if not is_invariant(target):
        raise ValueError("target is not invariant")
    a, k = bidegree(target)
    t0 = target.coefficient_in("v", 0)
    cols, meta = [], []
    for slot, kind in enumerate(_ETA0):
        e0 = archive.eta(kind, 0)
        da, dk = expected_bidegree(kind, 0)
        for ms in product_multisets(a - da, k - dk, max_index):
            cols.append(dict((e0 * _tail_product(archive, ms)).terms))
            meta.append((slot, ms))
    coeffs = solve(cols, dict(t0.terms))
    if coeffs is None:
        return None
    combos = [dict(), dict(), dict()]
    for (slot, ms), c in zip(meta, coeffs):
        if c:
            combos[slot][ms] = c
    cert = _make_certificate(archive, target, [Combination(c) for c in combos])
    if not cert.check():
        raise ArithmeticError("lifted certificate failed exact verification")
    return cert


_TAIL_CACHE: dict = {}


def _tail_product(archive, ms) -> Polynomial:
    key = (id(archive.beta), id(archive.gamma), id(archive.delta), ms)
    p = _TAIL_CACHE.get(key)
    if p is None:
        if len(ms) <= 1:
            p = _entry_product(archive, ms, tail=True)
        else:
            p = _tail_product(archive, ms[:-1]) * _entry(archive, ms[-1], tail=True)
        _TAIL_CACHE[key] = p
    return p


# ---------------------------------------------------------------------------
# fixed points, plinth ideal and nullcone at the level of ideals

def _radical_equal(rep, label, left, right):
    for p in left:
        rep.check(radical_membership(p, right), f"{label}: {p} in rad({', '.join(map(str, right))})")
    for p in right:
        rep.check(radical_membership(p, left), f"{label}: {p} in rad({', '.join(map(str, left))})")


def verify_fixed_point_ideals(archive: FamilyArchive | None = None) -> Report:
    """Radical identities for the fixed points, plinth ideal and nullcone."""
    archive = archive or build_archive(2)
    rep = Report("fixed-points-plinth-nullcone")
    images = [apply(D, Polynomial.var(R, n)) for n in R.names]
    images = [p for p in images if p]
    _radical_equal(rep, "fixed points", images, [parse("x"), parse("s"), parse("t")])
    certs = plinth_certificates()
    for name, cert in certs.items():
        rep.check(check_plinth(cert), f"plinth certificate {name}", f"D({cert.element}) = {cert.image}")
    plinth = [c.image for c in certs.values()]
    _radical_equal(rep, "plinth", plinth, [parse("x"), parse("s")])
    xs = [parse("x"), parse("s")]
    entries = [("g", archive.g)] + [
        (f"{k}_{e.n}", e.polynomial) for k in KINDS for e in archive.family(k).entries
    ]
    for name, p in entries:
        res = ideal_membership(p, xs)
        ok = getattr(res, "member", False) and res.check()
        rep.check(ok, f"nullcone: {name} in (x, s)R")
    return rep


# ---------------------------------------------------------------------------
# relations among v-free parts

def relation_lambda(n: int, i: int, i2: int) -> int:
    """``-(i j - i' j')`` with ``j = n - i`` and ``j' = n - i'``."""
    return -(i * (n - i) - i2 * (n - i2))


def _correction(archive, kind, n, i, i2) -> Polynomial:
    lam = relation_lambda(n, i, i2)
    if kind == "beta":
        return archive.tail("gamma", n - 2) * lam
    x3g = parse("x^3") * archive.g
    if kind == "gamma":
        return x3g * archive.tail("beta", n - 2) * (-lam)
    return x3g * archive.eta("gamma", 0) * archive.tail("beta", n - 2) * (-lam)


def _ideal_over_tails(archive, r: Polynomial, max_index: int):
    """Coefficients exhibiting ``r`` in ``b0*C + c0*C + d0*C`` (C: tail products)."""
    if r.is_zero():
        return {}
    a, k = bidegree(r)
    cols, meta = [], []
    for kind in _ETA0:
        e0 = archive.eta(kind, 0)
        da, dk = expected_bidegree(kind, 0)
        for ms in product_multisets(a - da, k - dk, max_index):
            cols.append(dict((e0 * _tail_product(archive, ms)).terms))
            meta.append((kind, ms))
    coeffs = solve(cols, dict(r.terms))
    if coeffs is None:
        return None
    return {m: c for m, c in zip(meta, coeffs) if c}


def v0_relation(archive: FamilyArchive, kind: str, i: int, j: int, i2: int, j2: int) -> Report:
    """``e_i e_j - e_i' e_j'`` equals the leading correction plus an ideal part.

    The corrections are ``lambda c_(n-2)`` for beta, ``-lambda x^3 g b_(n-2)``
    for gamma and ``-lambda x^3 gamma0 g b_(n-2)`` for delta, where ``e_k``
    are the v-free parts and ``lambda = -(i j - i' j')``.  These signs agree
    with the top v-layers of the matching products of family members; for
    ``n = 2`` the remainder vanishes.
    """
    n = i + j
    if i2 + j2 != n or n < 2:
        raise ValueError("need i + j = i' + j' >= 2")
    rep = Report(f"v0-{kind}")
    t = archive.tail
    lhs = t(kind, i) * t(kind, j) - t(kind, i2) * t(kind, j2)
    corr = _correction(archive, kind, n, i, i2)
    r = lhs - corr
    label = f"{kind} ({i},{j},{i2},{j2})"
    sol = _ideal_over_tails(archive, r, max(archive.upto, n))
    rep.check(sol is not None, f"{label} remainder in (b0, c0, d0)C", "" if sol is not None else f"residual {r}")
    if n == 2:
        rep.check(r.is_zero(), f"{label} equals its correction", f"{lhs}")
    return rep


def v0_base_values(archive: FamilyArchive) -> dict:
    """The three n = 2 instances, as exact polynomials."""
    t = archive.tail
    return {
        "beta": t("beta", 1) ** 2 - t("beta", 2) * t("beta", 0),
        "gamma": t("gamma", 0) * t("gamma", 2) - t("gamma", 1) ** 2,
        "delta": t("delta", 0) * t("delta", 2) - t("delta", 1) ** 2,
    }


# ---------------------------------------------------------------------------
# powers of family members in (beta0, gamma0, delta0) R^D

@dataclass(frozen=True)
class PowerMembership:
    kind: str
    n: int
    power: int
    certificate: MembershipCertificate
    route: str


def _cert_from_combos(archive, target, combos):
    cert = _make_certificate(archive, target, combos)
    if not cert.check():
        raise ArithmeticError(f"certificate for {target} failed")
    return cert


def _square_certificate(archive, kind, m, idx):
    if m == 0:
        combos = [Combination(), Combination(), Combination()]
        combos[_ETA0.index(kind)] = Combination.atom((kind, 0))
        return _cert_from_combos(archive, archive.eta(kind, 0) ** 2, combos)
    return find_certificate(archive, archive.eta(kind, m) ** 2, idx)


def _split_square(archive, n):
    """Write ``beta_n^2 - beta0 beta_2n`` as ``A' + Gamma``.

    ``A'`` collects subduction terms with a factor ``beta0``, ``gamma0`` or
    ``delta0`` (three combinations, one per slot); ``Gamma`` is the rest,
    a combination of terms like ``gamma_(2n-2)`` and ``g gamma_(2n-8)``.
    """
    eta = archive.eta("beta", n)
    rest = eta * eta - archive.eta("beta", 0) * archive.eta("beta", 2 * n)
    labels, gens = generator_set(archive, 2 * n)
    res = subduct(rest, gens)
    if not res.reduced_to_zero:
        return None
    ideal = [Combination(), Combination(), Combination()]
    gamma = Combination()
    for c, parts in res.expression:
        key = []
        for j, k in parts:
            key += [labels[j]] * k
        slot = next((i for i, kind in enumerate(_ETA0) if (kind, 0) in key), None)
        if slot is None:
            gamma = gamma + Combination.atom(*key, coef=c)
        else:
            key.remove((_ETA0[slot], 0))
            ideal[slot] = ideal[slot] + Combination.atom(*key, coef=c)
    return ideal, gamma


def square_membership(archive: FamilyArchive, kind: str, n: int) -> PowerMembership | None:
    """A certified power of ``eta_n`` in ``(beta0, gamma0, delta0) R^D``.

    gamma and delta: the square.  beta: the fourth power.  Subduction splits
    ``beta_n^2 = A + Gamma`` with ``A`` in the ideal (it contains
    ``beta0 beta_2n``) and ``Gamma`` built from gamma members and ``g``; then
    ``beta_n^4 = A (beta_n^2 + Gamma) + Gamma^2`` and ``Gamma^2`` is
    certified separately.  Index 0 uses the first power.
    """
    idx = max(archive.upto, 4 * n)
    if archive.upto < idx:
        archive = build_archive(idx)
    eta = archive.eta(kind, n)
    if n == 0:
        slot = _ETA0.index(kind)
        combos = [Combination(), Combination(), Combination()]
        combos[slot] = Combination({(): 1})
        return PowerMembership(kind, 0, 1, _cert_from_combos(archive, eta, combos), "generator")
    if kind != "beta":
        cert = _square_certificate(archive, kind, n, idx)
        return None if cert is None else PowerMembership(kind, n, 2, cert, "square")
    split = _split_square(archive, n)
    if split is None:
        return None
    a_combos, gamma = split
    a_combos[0] = a_combos[0] + Combination.atom(("beta", 2 * n))
    if not len(gamma):
        cert = _cert_from_combos(archive, eta * eta, a_combos)
        return PowerMembership(kind, n, 2, cert, "square decomposition")
    gsq_combos = None
    (key, c), *more = gamma.terms.items()
    if not more and len(key) == 1 and key[0][0] != "g":
        # the usual case lambda * gamma_(2n-2): reuse the square certificate
        gsq = _square_certificate(archive, key[0][0], key[0][1], idx)
        gsq_combos = None if gsq is None else [x.scale(c * c) for x in gsq.combinations]
    if gsq_combos is None:
        gsq = find_certificate(archive, gamma.evaluate(archive) ** 2, idx)
        gsq_combos = None if gsq is None else list(gsq.combinations)
    if gsq_combos is None:
        return None
    factor = Combination.atom(("beta", n), ("beta", n)) + gamma
    combos = [a * factor + g for a, g in zip(a_combos, gsq_combos)]
    cert = _cert_from_combos(archive, eta**4, combos)
    return PowerMembership(kind, n, 4, cert, "square decomposition then fourth power")


# ---------------------------------------------------------------------------
# g is not in the radical

@dataclass(frozen=True)
class ObstructionWitness:
    target: Polynomial
    reason: str  # "bidegree-infeasible" or "image-membership-negative"
    data: object


def g_exclusion(k_max: int, archive: FamilyArchive | None = None) -> Report:
    """Two independent obstructions to ``g^k`` in ``(beta0, gamma0, delta0) R^D``."""
    archive = archive or build_archive(2)
    rep = Report("g-exclusion")
    x2 = parse("x^2")
    witnesses = []
    for k in range(k_max + 1):
        if k:
            empty = True
            slots = []
            for kind in _ETA0:
                da, dk = expected_bidegree(kind, 0)
                bd = (12 * k - da, 6 * k - dk)
                kern = r_kernel_slice(*bd)
                slots.append(bd)
                rep.check(not kern, f"k={k} cofactor of {kind}0 at {bd}: no invariants")
                empty = empty and not kern
            if empty:
                witnesses.append(ObstructionWitness(archive.g**k, "bidegree-infeasible", tuple(slots)))
            cert = find_certificate(archive, archive.g**k, max(archive.upto, 2 * k))
            rep.check(cert is None, f"k={k} no certificate for g^{k}")
        res = image_membership(x2 * archive.g**k)
        want = parse(f"s*y1^2*y4^{k}".replace("*y4^0", ""), res.normal_form.ring)
        ok = not res.member and res.normal_form == want
        rep.check(ok, f"k={k} x^2 g^{k} not in Delta(S)", f"q~ = {res.normal_form}")
        witnesses.append(ObstructionWitness(x2 * archive.g**k, "image-membership-negative", res))
    return rep


# ---------------------------------------------------------------------------
# conductor

def conductor_checks(N: int, archive: FamilyArchive | None = None) -> Report:
    """``eta_0 * eta'_(N+1)`` cancels to v-degree N against ``eta_1 eta'_N`` and lies in ``B_N``.

    Meaningful for ``N >= 1``; at ``N = 0`` the membership checks fail since
    ``beta_0 beta_1 = x^2 v - x s`` is not in ``B_0``.
    """
    archive = archive or build_archive(N + 1)
    if archive.upto < N + 1:
        archive = build_archive(N + 1)
    rep = Report(f"conductor-N{N}")
    _, gens = generator_set(archive, N)
    for k1 in _ETA0:
        for k2 in _ETA0:
            e = archive.eta
            diff = e(k1, 0) * e(k2, N + 1) - e(k1, 1) * e(k2, N)
            dv = diff.degree_in("v") if diff else -1
            rep.check(dv <= N, f"deg_v({k1}_0 {k2}_{N + 1} - {k1}_1 {k2}_{N}) <= {N}", f"{dv}")
            prod = e(k1, 0) * e(k2, N + 1)
            res = subduct(prod, gens)
            ok = res.reduced_to_zero and res.evaluate(gens) == prod
            rep.check(ok, f"{k1}_0 {k2}_{N + 1} in B_{N}")
    return rep


# ---------------------------------------------------------------------------
# summary

def fg_ideal_summary(N: int, k_max: int | None = None) -> Report:
    """Membership side, exclusion side and leading-term side in one report."""
    archive = build_archive(max(4 * N, N + 1, 2))
    rep = Report(f"fg-ideal-N{N}")
    lmset = LeadingMonomialSet(N)
    for kind in _ETA0:
        for n in range(N + 1):
            pm = square_membership(archive, kind, n)
            ok = pm is not None and pm.certificate.check()
            rep.check(ok, f"{kind}_{n}^{pm.power if pm else '?'} in (beta0, gamma0, delta0)R^D",
                      pm.route if pm else "no certificate")
            lm = archive.eta(kind, n).leading_monomial()
            dec = lt_algebra_membership(lm, lmset)
            rep.check(dec is not None and ("e",) not in dec, f"LM({kind}_{n}) over b, c, d")
    for kind in _ETA0:
        for n in range(2, N + 1):
            for i in range(n + 1):
                for i2 in range(i + 1, n + 1):
                    rep.extend(v0_relation(archive, kind, i, n - i, i2, n - i2))
    rep.extend(g_exclusion(N if k_max is None else k_max, archive))
    # at N = 0 the products carry v while B_0 lies in k[x, s, t, u]
    for NN in range(1, N + 1):
        rep.extend(conductor_checks(NN, archive))
    for k in (1, 2, 3):
        basis = r_kernel_slice(12 * k, 6 * k)
        ok = len(basis) == 1 and basis[0].primitive() == (archive.g**k).primitive()
        rep.check(ok, f"invariants at bidegree of g^{k} are spanned by g^{k}", f"dimension {len(basis)}")
    rep.note("quotient by the radical", "one-variable polynomial ring checked on slices of g, g^2, g^3 only")
    return rep
