"""Weight gradings on k[x, s, t, u, v] and enumeration of graded slices.

Two gradings are used throughout: the torus degree ``deg`` with weights
``x:1, s:3, t:3, u:3, v:2`` and the rho-degree with weights
``x:0, s:1, t:2, u:3, v:1``.  A bidegree ``(a, k)`` means ``deg = a`` and
``rho = k``.  The derivation D preserves ``deg`` and lowers ``rho`` by one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .polyring import R, Polynomial

__all__ = [
    "WeightVector",
    "NEG_INF",
    "DEG",
    "RHO",
    "weighted_degree",
    "is_homogeneous",
    "bidegree",
    "v_degree",
    "x_degree",
    "GradedSlice",
    "slice_basis",
    "r_slice_basis",
    "count_kernel_monomials",
    "kernel_monomial_solutions",
]

# Degree of the zero polynomial.  Compares below every integer.
NEG_INF = -math.inf


@dataclass(frozen=True)
class WeightVector:
    name: str
    weights: tuple  # (variable, weight) pairs

    def as_dict(self):
        return dict(self.weights)

    def of_monomial(self, ring, mono) -> int:
        w = self.as_dict()
        total = 0
        for name, e in zip(ring.names, mono):
            if e:
                if name not in w:
                    raise ValueError(f"variable {name!r} carries no {self.name} weight")
                total += w[name] * e
        return total


DEG = WeightVector("deg", (("x", 1), ("s", 3), ("t", 3), ("u", 3), ("v", 2)))
RHO = WeightVector("rho", (("x", 0), ("s", 1), ("t", 2), ("u", 3), ("v", 1)))


def weighted_degree(p: Polynomial, w: WeightVector = DEG):
    """Largest weight of a term of ``p``; ``NEG_INF`` for the zero polynomial."""
    if p.is_zero():
        return NEG_INF
    return max(w.of_monomial(p.ring, m) for m in p.terms)


def is_homogeneous(p: Polynomial, w: WeightVector = DEG) -> bool:
    return len({w.of_monomial(p.ring, m) for m in p.terms}) <= 1


def bidegree(p: Polynomial) -> tuple:
    """``(deg, rho)`` of a polynomial homogeneous in both gradings."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no bidegree")
    if not (is_homogeneous(p, DEG) and is_homogeneous(p, RHO)):
        raise ValueError(f"not bihomogeneous: {p}")
    m = next(iter(p.terms))
    return DEG.of_monomial(p.ring, m), RHO.of_monomial(p.ring, m)


def v_degree(p: Polynomial) -> int:
    return p.degree_in("v")


def x_degree(p: Polynomial) -> int:
    return p.degree_in("x")


@dataclass(frozen=True)
class GradedSlice:
    degree: int
    rho: int
    basis: tuple  # exponent tuples over (x, s, t, u, v)

    def __len__(self):
        return len(self.basis)

    def polynomials(self):
        return [Polynomial.monomial(R, m) for m in self.basis]


@lru_cache(maxsize=None)
def slice_basis(a: int, k: int) -> GradedSlice:
    """Monomials x^al s^be t^ga u^de of S with deg ``a`` and rho ``k``.

    Solutions of ``al + 3(be+ga+de) = a`` and ``be + 2 ga + 3 de = k``,
    listed lexicographically in ``(al, be, ga, de)``.
    """
    out = []
    if a >= 0 and k >= 0:
        for de in range(k // 3 + 1):
            for ga in range((k - 3 * de) // 2 + 1):
                be = k - 3 * de - 2 * ga
                al = a - 3 * (be + ga + de)
                if al >= 0:
                    out.append((al, be, ga, de, 0))
    out.sort()
    return GradedSlice(a, k, tuple(out))


@lru_cache(maxsize=None)
def r_slice_basis(a: int, k: int) -> GradedSlice:
    """Monomials of R (v included, weights (2, 1)) of bidegree ``(a, k)``.

    Ordered by v-exponent, then as in :func:`slice_basis`.
    """
    out = []
    for ve in range(min(a // 2, k) + 1 if a >= 0 and k >= 0 else 0):
        for m in slice_basis(a - 2 * ve, k - ve).basis:
            out.append(m[:4] + (ve,))
    return GradedSlice(a, k, tuple(out))


def kernel_monomial_solutions(n: int) -> list:
    """Exponents (a, b, c, d) with beta0^a gamma0^b delta0^c g^d at (3n+9, n+3).

    These solve ``a + 6b + 9c + 12d = 3n + 9`` and ``2b + 3c + 6d = n + 3``.
    """
    deg, rho = 3 * n + 9, n + 3
    out = []
    for d in range(rho // 6 + 1):
        for c in range((rho - 6 * d) // 3 + 1):
            rest = rho - 6 * d - 3 * c
            if rest % 2:
                continue
            b = rest // 2
            a = deg - 6 * b - 9 * c - 12 * d
            if a >= 0:
                out.append((a, b, c, d))
    return sorted(out)


def count_kernel_monomials(n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    return len(kernel_monomial_solutions(n))
