"""Exact linear algebra on sparse rational vectors.

Vectors are dicts from comparable keys (usually exponent tuples) to nonzero
coefficients.  :class:`Echelon` keeps an echelon basis keyed by each row's
largest key and records how every row was formed from the inserted vectors,
so the same pass yields ranks, kernels and particular solutions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

__all__ = ["Echelon", "nullspace", "solve", "rank", "bareiss_det", "primitive_vector"]


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _axpy(y, a, x):
    """y += a * x, in place, dropping zeros."""
    for k, v in x.items():
        w = _norm(y.get(k, 0) + a * v)
        if w:
            y[k] = w
        else:
            y.pop(k, None)


class Echelon:
    """Row-echelon basis built one vector at a time."""

    def __init__(self):
        self.rows = {}  # pivot key -> (vector with 1 at pivot, combination)

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec, combo=None):
        """Eliminate leading keys of ``vec`` while they are pivots.

        Returns the reduced vector and the combination with
        ``original = reduced + sum(c * inserted[label])``.
        """
        vec = dict(vec)
        combo = {} if combo is None else dict(combo)
        while vec:
            p = max(vec)
            row = self.rows.get(p)
            if row is None:
                break
            a = vec[p]
            _axpy(vec, -a, row[0])
            _axpy(combo, a, row[1])
        return vec, combo

    def add(self, vec, label):
        """Insert ``vec``; return a relation ``{label: coeff}`` if dependent.

        The relation satisfies ``sum(coeff * inserted[label]) == 0`` and has
        coefficient 1 on ``label``.
        """
        rem, combo = self.reduce(vec)
        if not rem:
            rel = {k: -v for k, v in combo.items()}
            rel[label] = 1
            return rel
        p = max(rem)
        inv = Fraction(1) / rem[p]
        row = {k: _norm(v * inv) for k, v in rem.items()}
        # combination expresses row in terms of inserted vectors
        rc = {k: _norm(-v * inv) for k, v in combo.items()}
        rc[label] = _norm(rc.get(label, 0) + inv)
        self.rows[p] = (row, rc)
        return None

    def contains(self, vec) -> bool:
        return not self.reduce(vec)[0]

    def express(self, vec):
        """Combination of inserted vectors equal to ``vec``, or ``None``."""
        rem, combo = self.reduce(vec)
        if rem:
            return None
        return combo

    def canonical(self, vec):
        """Representative of ``vec`` modulo the span with zero pivot coordinates."""
        vec = dict(vec)
        for p in sorted(self.rows, reverse=True):
            a = vec.get(p)
            if a:
                _axpy(vec, -a, self.rows[p][0])
        return vec


def nullspace(columns):
    """Basis of ``{c : sum(c[j] * columns[j]) == 0}`` as dense coefficient lists.

    Column ``j`` yields a basis vector exactly when it depends on the columns
    before it; that vector has a 1 in position ``j`` and zeros at the other
    dependent positions, as with free variables in reduced row echelon form.
    """
    ech = Echelon()
    out = []
    n = len(columns)
    for j, col in enumerate(columns):
        rel = ech.add(col, j)
        if rel is not None:
            v = [0] * n
            for k, c in rel.items():
                v[k] = c
            out.append(v)
    return out


def solve(columns, target):
    """Some ``c`` with ``sum(c[j] * columns[j]) == target``, or ``None``.

    Dependent columns get coefficient zero, so the answer is the
    back-substitution solution with free variables set to zero.
    """
    ech = Echelon()
    for j, col in enumerate(columns):
        ech.add(col, j)
    combo = ech.express(target)
    if combo is None:
        return None
    c = [0] * len(columns)
    for k, v in combo.items():
        c[k] = v
    return c


def rank(vectors) -> int:
    ech = Echelon()
    for j, v in enumerate(vectors):
        ech.add(v, j)
    return len(ech)


def primitive_vector(v):
    """Scale a rational vector to coprime integers, first nonzero entry positive."""
    den = 1
    for c in v:
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    ints = [int(c * den) for c in v]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if g == 0:
        return ints
    ints = [c // g for c in ints]
    first = next(c for c in ints if c)
    if first < 0:
        ints = [-c for c in ints]
    return ints


def bareiss_det(matrix) -> int | Fraction:
    """Determinant by fraction-free (Bareiss) elimination.

    Integer input stays integral at every step.
    """
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
            a[i][k] = 0
        prev = a[k][k]
    return _norm(sign * a[n - 1][n - 1])
