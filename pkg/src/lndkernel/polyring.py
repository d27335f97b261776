"""Sparse multivariate polynomials over the rationals.

A :class:`Polynomial` is an immutable mapping from exponent tuples to
nonzero rational coefficients, tied to a :class:`VariableSet`.  Coefficients
are kept as ``int`` whenever they are integral and as
:class:`fractions.Fraction` otherwise.

Monomial comparisons are never baked into storage.  Every operation that needs
a leading term takes a :class:`MonomialOrder`; when none is given the ring's
default order is used.  For the base ring ``(x, s, t, u, v)`` the default is
lex in which the *last* variable is the most significant, i.e.
``v > u > t > s > x``: a monomial is larger when it has the larger exponent at
the largest variable index where the two differ.  Restricted to
``(x, s, t, u)`` this is lex with ``x < s < t < u``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, NamedTuple

__all__ = [
    "VariableSet",
    "MonomialOrder",
    "Polynomial",
    "Term",
    "PolynomialSyntaxError",
    "R",
    "parse",
    "lcm_monomial",
    "monomial_divides",
]


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _to_coefficient(c):
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return _norm(c)
    if isinstance(c, Rational):
        return _norm(Fraction(c.numerator, c.denominator))
    if isinstance(c, str):
        return _norm(Fraction(c))
    raise TypeError(f"not an exact rational: {c!r}")


class VariableSet:
    """Ordered, distinct variable names with an optional X/Y block split.

    ``block_split`` is the number of leading names forming the X-block.
    """

    __slots__ = ("names", "block_split", "_index")

    def __init__(self, names: Iterable[str], block_split: int | None = None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValueError(f"bad variable name {name!r}")
        if block_split is not None and not 0 < block_split < len(names):
            raise ValueError("block_split must separate two nonempty blocks")
        self.names = names
        self.block_split = block_split
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None

    def extend(self, *names: str, block_split: int | None = None) -> "VariableSet":
        return VariableSet(self.names + tuple(names), block_split)

    def default_order(self) -> "MonomialOrder":
        n = len(self.names)
        if self.block_split is None:
            return MonomialOrder(tuple(range(n - 1, -1, -1)))
        k = self.block_split
        ranking = tuple(range(k - 1, -1, -1)) + tuple(range(n - 1, k - 1, -1))
        return MonomialOrder(ranking, kind="block", split=k)

    def __eq__(self, other):
        return (
            isinstance(other, VariableSet)
            and self.names == other.names
            and self.block_split == other.block_split
        )

    def __hash__(self):
        return hash((self.names, self.block_split))

    def __repr__(self):
        split = "" if self.block_split is None else f", block_split={self.block_split}"
        return f"VariableSet({list(self.names)!r}{split})"


class MonomialOrder:
    """A lex order or a two-block elimination order on exponent tuples.

    ``ranking`` lists variable indices from most to least significant.  For
    ``kind="block"`` the first ``split`` entries of the ranking form the
    X-block, which dominates the Y-block.  Inside each block the comparison is
    lex along the ranking (``inner="lex"``) or degree reverse lex
    (``inner="grevlex"``).  A block order with lex inside coincides with lex on
    the concatenated ranking.
    """

    __slots__ = ("ranking", "kind", "split", "inner", "key")

    def __init__(self, ranking, kind="lex", split=None, inner="lex"):
        ranking = tuple(ranking)
        if sorted(ranking) != list(range(len(ranking))):
            raise ValueError("ranking must be a permutation of variable indices")
        if kind not in ("lex", "block"):
            raise ValueError(f"unknown order kind {kind!r}")
        if kind == "block":
            if split is None or not 0 < split < len(ranking):
                raise ValueError("block order needs 0 < split < nvars")
            if inner not in ("lex", "grevlex"):
                raise ValueError(f"unknown inner order {inner!r}")
        self.ranking = ranking
        self.kind = kind
        self.split = split
        self.inner = inner
        if kind == "lex" or inner == "lex":
            r = ranking

            def key(e):
                return tuple(e[i] for i in r)
        else:
            xs, ys = ranking[:split], ranking[split:]
            xr, yr = xs[::-1], ys[::-1]

            def key(e):
                return (
                    sum(e[i] for i in xs),
                    tuple(-e[i] for i in xr),
                    sum(e[i] for i in ys),
                    tuple(-e[i] for i in yr),
                )

        self.key = key

    @classmethod
    def lex(cls, ring: VariableSet, names_high_to_low: Iterable[str]) -> "MonomialOrder":
        return cls(tuple(ring.index(n) for n in names_high_to_low))

    @classmethod
    def block(
        cls, ring: VariableSet, x_high_to_low, y_high_to_low, inner="lex"
    ) -> "MonomialOrder":
        xs = tuple(ring.index(n) for n in x_high_to_low)
        ys = tuple(ring.index(n) for n in y_high_to_low)
        return cls(xs + ys, kind="block", split=len(xs), inner=inner)

    def greater(self, a, b) -> bool:
        return self.key(a) > self.key(b)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (
            self.ranking, self.kind, self.split, self.inner
        ) == (other.ranking, other.kind, other.split, other.inner)

    def __hash__(self):
        return hash((self.ranking, self.kind, self.split, self.inner))

    def __repr__(self):
        if self.kind == "lex":
            return f"MonomialOrder(lex {self.ranking})"
        return f"MonomialOrder(block {self.ranking} split={self.split} inner={self.inner})"


class Term(NamedTuple):
    coefficient: int | Fraction
    monomial: tuple


def monomial_divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm_monomial(a, b) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


class PolynomialSyntaxError(ValueError):
    def __init__(self, message, text, pos):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class Polynomial:
    """Immutable sparse polynomial; see the module docstring."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: VariableSet, terms: Mapping | None = None):
        self.ring = ring
        clean = {}
        n = len(ring)
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != n or any((not isinstance(e, int)) or e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for {ring}")
            c = _to_coefficient(c)
            if c:
                c = _norm(clean.get(mono, 0) + c)
                if c:
                    clean[mono] = c
                else:
                    clean.pop(mono, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        p = cls.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ring):
        return cls._raw(ring, {})

    @classmethod
    def constant(cls, ring, c):
        c = _to_coefficient(c)
        return cls._raw(ring, {(0,) * len(ring): c} if c else {})

    @classmethod
    def var(cls, ring, name):
        e = [0] * len(ring)
        e[ring.index(name)] = 1
        return cls._raw(ring, {tuple(e): 1})

    @classmethod
    def monomial(cls, ring, exps, c=1):
        return cls(ring, {tuple(exps): c})

    # -- basic queries ------------------------------------------------------

    @property
    def terms(self) -> Mapping:
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def coefficient(self, mono) -> int | Fraction:
        return self._terms.get(tuple(mono), 0)

    def variables(self) -> set:
        used = set()
        for mono in self._terms:
            for i, e in enumerate(mono):
                if e:
                    used.add(self.ring.names[i])
        return used

    def degree_in(self, name: str) -> int:
        if not self._terms:
            raise ValueError("degree of the zero polynomial")
        i = self.ring.index(name)
        return max(m[i] for m in self._terms)

    def total_degree(self) -> int:
        if not self._terms:
            raise ValueError("degree of the zero polynomial")
        return max(sum(m) for m in self._terms)

    def _order(self, order):
        return self.ring.default_order() if order is None else order

    def leading_term(self, order: MonomialOrder | None = None) -> Term:
        if not self._terms:
            raise ValueError("leading term of the zero polynomial")
        key = self._order(order).key
        mono = max(self._terms, key=key)
        return Term(self._terms[mono], mono)

    def leading_monomial(self, order=None) -> tuple:
        return self.leading_term(order).monomial

    def leading_coefficient(self, order=None):
        return self.leading_term(order).coefficient

    def sorted_terms(self, order=None) -> list:
        key = self._order(order).key
        return [Term(self._terms[m], m) for m in sorted(self._terms, key=key, reverse=True)]

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError(f"mismatched variable sets: {self.ring} vs {other.ring}")
            return other
        try:
            return Polynomial.constant(self.ring, other)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = dict(a)
        for m, c in b.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = _norm(v + c)
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.add_scaled(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other.add_scaled(self, -1)

    def add_scaled(self, other: "Polynomial", c, shift=None) -> "Polynomial":
        """Return ``self + c * x^shift * other``."""
        if other.ring != self.ring:
            raise ValueError(f"mismatched variable sets: {self.ring} vs {other.ring}")
        c = _to_coefficient(c)
        out = dict(self._terms)
        if not c:
            return Polynomial._raw(self.ring, out)
        for m, oc in other._terms.items():
            if shift is not None:
                m = tuple(a + b for a, b in zip(m, shift))
            v = _norm(out.get(m, 0) + c * oc)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    def scale(self, c) -> "Polynomial":
        c = _to_coefficient(c)
        if not c:
            return Polynomial.zero(self.ring)
        return Polynomial._raw(self.ring, {m: _norm(v * c) for m, v in self._terms.items()})

    def shift(self, mono, c=1) -> "Polynomial":
        """Return ``c * x^mono * self``."""
        c = _to_coefficient(c)
        if not c:
            return Polynomial.zero(self.ring)
        return Polynomial._raw(
            self.ring,
            {tuple(a + b for a, b in zip(m, mono)): _norm(v * c) for m, v in self._terms.items()},
        )

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        if other.ring != self.ring:
            raise ValueError(f"mismatched variable sets: {self.ring} vs {other.ring}")
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = get(m, 0) + ca * cb
        clean = {}
        for m, c in out.items():
            if c:
                clean[m] = _norm(c)
        return Polynomial._raw(self.ring, clean)

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c):
        c = _to_coefficient(c)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self.scale(Fraction(1) / c)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        try:
            c = _to_coefficient(other)
        except TypeError:
            return NotImplemented
        return self._terms == ({(0,) * len(self.ring): c} if c else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and substitution -----------------------------------------

    def diff(self, name: str) -> "Polynomial":
        """Formal partial derivative with respect to ``name``."""
        i = self.ring.index(name)
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                out[m[:i] + (e - 1,) + m[i + 1 :]] = _norm(c * e)
        return Polynomial._raw(self.ring, out)

    def substitute(self, bindings: Mapping, ring: VariableSet | None = None) -> "Polynomial":
        """Simultaneously replace variables by polynomials or rationals.

        The result lives in ``ring`` (default: this polynomial's ring).  Every
        unbound variable that occurs must also exist in the target ring, where
        it is mapped by name.
        """
        target = self.ring if ring is None else ring
        images = []
        for i, name in enumerate(self.ring.names):
            if name in bindings:
                b = bindings[name]
                if isinstance(b, Polynomial):
                    if b.ring != target:
                        b = b.to_ring(target)
                else:
                    b = Polynomial.constant(target, b)
                images.append(b)
            elif name in target:
                images.append(Polynomial.var(target, name))
            else:
                images.append(None)
        powers = [dict() for _ in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                if images[i] is None:
                    raise ValueError(
                        f"variable {self.ring.names[i]!r} is unbound and absent from target ring"
                    )
                cache[e] = images[i] ** e
            return cache[e]

        result = Polynomial.zero(target)
        one = (0,) * len(target)
        for m, c in self._terms.items():
            acc = Polynomial._raw(target, {one: c})
            for i, e in enumerate(m):
                if e:
                    acc = acc * power(i, e)
            result = result + acc
        return result

    def to_ring(self, ring: VariableSet) -> "Polynomial":
        """Re-express in another variable set by matching names."""
        if ring == self.ring:
            return self
        idx = []
        for i, name in enumerate(self.ring.names):
            idx.append(ring.index(name) if name in ring else None)
        n = len(ring)
        out = {}
        for m, c in self._terms.items():
            e = [0] * n
            for i, k in enumerate(m):
                if k:
                    if idx[i] is None:
                        raise ValueError(
                            f"variable {self.ring.names[i]!r} does not exist in {ring}"
                        )
                    e[idx[i]] = k
            out[tuple(e)] = c
        return Polynomial._raw(ring, out)

    def evaluate(self, values: Mapping):
        total = Fraction(0)
        for m, c in self._terms.items():
            acc = Fraction(c)
            for i, e in enumerate(m):
                if e:
                    acc *= Fraction(values[self.ring.names[i]]) ** e
            total += acc
        return _norm(total)

    def coefficient_in(self, name: str, k: int) -> "Polynomial":
        """Coefficient of ``name**k``, as a polynomial free of ``name``."""
        i = self.ring.index(name)
        out = {}
        for m, c in self._terms.items():
            if m[i] == k:
                out[m[:i] + (0,) + m[i + 1 :]] = c
        return Polynomial._raw(self.ring, out)

    def monic(self, order=None) -> "Polynomial":
        if not self._terms:
            return self
        return self / self.leading_coefficient(order)

    def primitive(self, order=None) -> "Polynomial":
        """Scale to coprime integer coefficients with positive leading coefficient."""
        if not self._terms:
            return self
        from math import gcd, lcm

        den = 1
        for c in self._terms.values():
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self._terms.values()]
        g = 0
        for v in ints:
            g = gcd(g, v)
        p = self.scale(Fraction(den, g))
        if p.leading_coefficient(order) < 0:
            p = -p
        return p

    # -- printing -----------------------------------------------------------

    def to_str(self, order: MonomialOrder | None = None) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for c, m in self.sorted_terms(order):
            factors = []
            for name, e in zip(self.ring.names, m):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            neg = c < 0
            a = -c if neg else c
            if factors:
                body = "*".join(factors) if a == 1 else f"{a}*" + "*".join(factors)
            else:
                body = str(a)
            if not pieces:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f" - {body}" if neg else f" + {body}")
        return "".join(pieces)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"


R = VariableSet(("x", "s", "t", "u", "v"))

# -- parsing ------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text, ring):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError("unexpected character", text, pos + stripped)
        start = m.start(m.lastgroup)
        if m.group("num") is not None:
            tokens.append(("num", int(m.group("num")), start))
        elif m.group("name") is not None:
            for name, off in _split_name(m.group("name"), ring, text, start):
                tokens.append(("var", name, start + off))
        else:
            tokens.append((m.group("op"), None, start))
        pos = m.end()
    tokens.append(("end", None, n))
    return tokens


def _split_name(word, ring, text, start):
    """Split a juxtaposed identifier like ``xv`` or ``y1s`` into variables."""
    if word in ring:
        return [(word, 0)]
    names = sorted(ring.names, key=len, reverse=True)
    out = []
    i = 0
    while i < len(word):
        for name in names:
            if word.startswith(name, i):
                out.append((name, i))
                i += len(name)
                break
        else:
            raise PolynomialSyntaxError(f"unknown variable {word!r}", text, start)
    return out


class _Parser:
    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text, ring)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise PolynomialSyntaxError(f"expected {kind!r}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            raise PolynomialSyntaxError("empty expression", self.text, 0)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolynomialSyntaxError(f"unexpected {tok[0]!r}", self.text, tok[2])
        return p

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        acc = self.power()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                acc = acc * self.power()
            elif kind == "/":
                tok = self.take()
                den = self.take("num")[1]
                if den == 0:
                    raise PolynomialSyntaxError("division by zero", self.text, tok[2])
                acc = acc * Fraction(1, den)
            elif kind in ("num", "var", "("):
                acc = acc * self.power()
            else:
                return acc

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            exp = self.take("num")[1]
            base = base ** exp
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return Polynomial.constant(self.ring, tok[1])
        if tok[0] == "var":
            self.take()
            return Polynomial.var(self.ring, tok[1])
        if tok[0] == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        raise PolynomialSyntaxError(
            "unexpected end of input" if tok[0] == "end" else f"unexpected {tok[0]!r}",
            self.text,
            tok[2],
        )


def parse(text: str, ring: VariableSet = R) -> Polynomial:
    """Parse polynomial text such as ``"2*x^3*t - s^2"`` or ``"1/2 x^2"``.

    ``*`` may be omitted between factors, juxtaposed names such as ``xv`` are
    split into known variables, and parentheses are accepted.
    """
    return _Parser(text, ring).parse()
