"""Image membership for Delta on S, and exact linear algebra on graded slices.

``image_membership`` decides whether ``a`` lies in ``Delta(S)`` using a local
slice ``p`` with ``d = Delta(p)`` in the kernel: with ``m`` the nilpotency
index of ``a``,

    q = sum_{i=0}^{m} (-1)^i / (i+1)! * Delta^i(a) * p^(i+1) * d^(m-i)

is reduced modulo ``J_m = (y_1 - f_1, ..., y_4 - f_4, d^(m+1))`` in
``k[x, s, t, u, y1..y4]`` under an elimination order with the x-block on top.
``a`` is an image exactly when the normal form only involves the ``y_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .derivation import D, DELTA, Derivation, apply, nilpotency_index
from .grading import GradedSlice, bidegree, r_slice_basis, slice_basis
from .groebner import IdealBasis, buchberger, divide_exact, normal_form
from .linalg import bareiss_det, nullspace, rank, solve
from .polyring import R, MonomialOrder, Polynomial, VariableSet, parse

__all__ = [
    "J_RING",
    "J_ORDER",
    "KERNEL_GENERATORS",
    "ImageMembershipResult",
    "SliceMap",
    "TruncationSpaces",
    "image_membership",
    "slice_map",
    "kernel_slice",
    "r_kernel_slice",
    "preimage_in_slice",
    "truncation_dims",
    "binomial_determinant",
    "kernel_product_rank",
    "product_table_bidegree",
]

J_RING = VariableSet(("x", "s", "t", "u", "y1", "y2", "y3", "y4"), block_split=4)
J_ORDER = MonomialOrder.lex(J_RING, ("u", "t", "s", "x", "y4", "y3", "y2", "y1"))

BETA0 = parse("x")
GAMMA0 = parse("2*x^3*t - s^2")
DELTA0 = parse("3*x^6*u - 3*x^3*s*t + s^3")
G = parse("9*x^6*u^2 - 18*x^3*s*t*u + 6*s^3*u + 8*x^3*t^3 - 3*s^2*t^2")
KERNEL_GENERATORS = (BETA0, GAMMA0, DELTA0, G)

_Y = tuple(Polynomial.var(J_RING, f"y{i}") for i in range(1, 5))
_X_BLOCK = 4


@dataclass(frozen=True)
class ImageMembershipResult:
    target: Polynomial
    member: bool
    normal_form: Polynomial  # in J_RING
    preimage: Polynomial | None
    m: int

    def describe(self) -> str:
        nf = self.normal_form.to_str(J_ORDER)
        if self.member:
            return f"MEMBER preimage = {self.preimage} (q~ = {nf})"
        return f"NOT-MEMBER q~ = {nf}"


@lru_cache(maxsize=64)
def _j_basis(m: int, d: Polynomial, gens: tuple) -> IdealBasis:
    lifted = [y - f.to_ring(J_RING) for y, f in zip(_Y, gens)]
    lifted.append(d.to_ring(J_RING) ** (m + 1))
    return buchberger(lifted, J_ORDER)


def _in_y_only(p: Polynomial) -> bool:
    return all(not any(mono[:_X_BLOCK]) for mono in p.terms)


def image_membership(
    a: Polynomial,
    slice_p: Polynomial | None = None,
    kernel_gens=KERNEL_GENERATORS,
    der: Derivation = DELTA,
) -> ImageMembershipResult:
    """Decide ``a in Delta(S)``; members come with a checked preimage."""
    if a and a.degree_in("v") > 0:
        raise ValueError("image_membership works on S = k[x, s, t, u]")
    p = parse("s") if slice_p is None else slice_p
    d = apply(der, p)
    if d.is_zero() or apply(der, d):
        raise ValueError(f"{p} is not a local slice")
    kernel_gens = tuple(kernel_gens)
    if len(kernel_gens) != len(_Y):
        raise ValueError("expected four kernel generators")
    if a.is_zero():
        return ImageMembershipResult(a, True, Polynomial.zero(J_RING), a, 0)
    m = nilpotency_index(der, a)
    q = Polynomial.zero(R)
    da = a
    for i in range(m + 1):
        q = q + da * p ** (i + 1) * d ** (m - i) * Fraction((-1) ** i, factorial(i + 1))
        da = apply(der, da)
    basis = _j_basis(m, d, kernel_gens)
    qt = normal_form(q.to_ring(J_RING), basis).remainder
    if not _in_y_only(qt):
        return ImageMembershipResult(a, False, qt, None, m)
    bindings = {f"y{i}": f for i, f in enumerate(kernel_gens, 1)}
    back = qt.substitute(bindings, R)
    try:
        b = divide_exact(q - back, d ** (m + 1))
    except ArithmeticError as exc:
        raise ArithmeticError(
            "preimage division failed; kernel generators incomplete?"
        ) from exc
    if apply(der, b) != a:
        raise ArithmeticError(f"computed preimage {b} does not map to {a}")
    return ImageMembershipResult(a, True, qt, b, m)


@dataclass(frozen=True)
class SliceMap:
    domain: GradedSlice
    codomain: GradedSlice
    matrix: tuple  # rows indexed by codomain basis, columns by domain basis

    def column(self, j: int) -> dict:
        return {self.codomain.basis[i]: row[j] for i, row in enumerate(self.matrix) if row[j]}


def _image_columns(basis, der):
    return [dict(apply(der, Polynomial.monomial(R, m)).terms) for m in basis]


def slice_map(a: int, k: int, der: Derivation = DELTA) -> SliceMap:
    """Matrix of ``Delta: S_(a,k) -> S_(a,k-1)`` in the monomial bases."""
    dom, cod = slice_basis(a, k), slice_basis(a, k - 1)
    cols = _image_columns(dom.basis, der)
    idx = {m: i for i, m in enumerate(cod.basis)}
    mat = [[0] * len(dom) for _ in cod.basis]
    for j, col in enumerate(cols):
        for m, c in col.items():
            mat[idx[m]][j] = c
    return SliceMap(dom, cod, tuple(tuple(r) for r in mat))


def _kernel_polys(basis, cols):
    out = []
    for vec in nullspace(cols):
        p = Polynomial(R, {m: c for m, c in zip(basis, vec) if c})
        out.append(p.primitive())
    return out


@lru_cache(maxsize=None)
def kernel_slice(a: int, k: int) -> tuple:
    """Basis of ``ker(Delta)`` on ``S_(a,k)`` with primitive integer coefficients."""
    basis = slice_basis(a, k).basis
    return tuple(_kernel_polys(basis, _image_columns(basis, DELTA)))


@lru_cache(maxsize=None)
def r_kernel_slice(a: int, k: int) -> tuple:
    """Basis of ``ker(D)`` on the bidegree ``(a, k)`` part of R (v included)."""
    basis = r_slice_basis(a, k).basis
    return tuple(_kernel_polys(basis, _image_columns(basis, D)))


def preimage_in_slice(target: Polynomial, der: Derivation = DELTA, domain=None):
    """Some ``h`` with ``der(h) = target`` in the slice one rho-step above.

    Returns ``None`` when no such ``h`` exists.  Among all solutions the one
    from back substitution with free coordinates set to zero is returned; the
    slice basis order is fixed, so the answer is reproducible.  ``domain``
    overrides the bidegree ``(a, k)`` searched.
    """
    if target.is_zero():
        return Polynomial.zero(target.ring)
    if domain is None:
        a, k = bidegree(target)
        k += 1
    else:
        a, k = domain
    uses_v = der is D or target.degree_in("v") > 0
    basis = (r_slice_basis if uses_v else slice_basis)(a, k).basis
    cols = _image_columns(basis, der)
    coeffs = solve(cols, dict(target.terms))
    if coeffs is None:
        return None
    h = Polynomial(R, {m: c for m, c in zip(basis, coeffs) if c})
    assert apply(der, h) == target
    return h


@dataclass(frozen=True)
class TruncationSpaces:
    n: int
    degree: int
    rho: int
    dim_M: int
    dim_N: int
    dim_piM: int
    dim_piN: int


def _truncated_rank(vectors, cut: int) -> int:
    return rank([{m: c for m, c in v.items() if m[0] < cut} for v in vectors])


def truncation_dims(n: int) -> TruncationSpaces:
    """Dimensions of ``pi(M)`` and ``pi(N)`` on the slice ``S_(3n+9, n+3)``.

    ``M`` holds the slice elements whose Delta-image is divisible by
    ``x^(n+1)``, ``N`` is the Delta-kernel of the slice, and ``pi`` drops
    every term of x-degree at least ``n+1``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    a, k = 3 * n + 9, n + 3
    basis = slice_basis(a, k).basis
    cols = _image_columns(basis, DELTA)
    low = [{m: c for m, c in col.items() if m[0] <= n} for col in cols]

    def span(vectors):
        return [{m: c for m, c in zip(basis, v) if c} for v in vectors]

    M = span(nullspace(low))
    N = span(nullspace(cols))
    cut = n + 1
    return TruncationSpaces(
        n, a, k, len(M), len(N), _truncated_rank(M, cut), _truncated_rank(N, cut)
    )


def binomial_determinant(k: int):
    """``det(C(2p, i))`` for ``0 <= i, p <= k``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return bareiss_det([[comb(2 * p, i) for p in range(k + 1)] for i in range(k + 1)])


def _kernel_products(a: int, k: int):
    """Products ``beta0^a gamma0^b delta0^c g^d`` of bidegree ``(a, k)``."""
    out = []
    for dd in range(k // 6 + 1):
        for c in range((k - 6 * dd) // 3 + 1):
            rest = k - 6 * dd - 3 * c
            if rest % 2:
                continue
            b = rest // 2
            al = a - 6 * b - 9 * c - 12 * dd
            if al >= 0:
                out.append((al, b, c, dd))
    return out


_POW_CACHE: dict = {}


def _gen_power(i: int, e: int) -> Polynomial:
    key = (i, e)
    p = _POW_CACHE.get(key)
    if p is None:
        p = KERNEL_GENERATORS[i] ** e
        _POW_CACHE[key] = p
    return p


def kernel_product_rank(a: int, k: int) -> int:
    """Rank of the span of generator products at ``(a, k)``."""
    vecs = []
    for exps in _kernel_products(a, k):
        p = Polynomial.constant(R, 1)
        for i, e in enumerate(exps):
            if e:
                p = p * _gen_power(i, e)
        vecs.append(dict(p.terms))
    return rank(vecs)


def product_table_bidegree(kind: str, n: int) -> tuple:
    """Bidegree of the tail products ``e0^(i+1) e0^(j)`` with ``i + j = n``."""
    table = {"beta": (2 * n + 4, n + 1), "gamma": (2 * n + 14, n + 5), "delta": (2 * n + 20, n + 7)}
    if kind not in table:
        raise ValueError(f"unknown family {kind!r}")
    return table[kind]
