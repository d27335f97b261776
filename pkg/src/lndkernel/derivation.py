"""Derivations of polynomial rings and the additive group action they induce."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping

from .polyring import R, Polynomial, parse

__all__ = [
    "Derivation",
    "D",
    "DELTA",
    "PlinthCertificate",
    "NotNilpotentError",
    "apply",
    "apply_power",
    "nilpotency_index",
    "exp_action",
    "is_invariant",
    "check_plinth",
    "ALPHA_RING",
]


class NotNilpotentError(RuntimeError):
    pass


class Derivation:
    """A derivation given by the images of the variables.

    Variables without an image are sent to zero.  Application follows the
    Leibniz rule: ``der(p) = sum(images[var] * dp/dvar)``.
    """

    def __init__(self, images: Mapping[str, Polynomial], name: str = "der"):
        self.images = dict(images)
        self.name = name
        rings = {p.ring for p in self.images.values()}
        if len(rings) > 1:
            raise ValueError("derivation images live in different rings")

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply(self, p)

    def __repr__(self):
        body = ", ".join(f"{k} -> {v}" for k, v in self.images.items())
        return f"Derivation({self.name}: {body})"


def _image_in(der, name, ring):
    img = der.images[name]
    return img if img.ring == ring else img.to_ring(ring)


def _monomial_images(der, ring):
    key = (id(der), ring)
    cached = _MONO_CACHE.get(key)
    if cached is None:
        cached = []
        for i, name in enumerate(ring.names):
            if name not in der.images:
                continue
            img = _image_in(der, name, ring)
            if img.is_zero():
                continue
            if len(img) != 1:
                cached = False
                break
            (m, c), = img.items()
            cached.append((i, m, c))
        _MONO_CACHE[key] = (der, cached)
    else:
        cached = cached[1]
    return cached


_MONO_CACHE: dict = {}


def apply(der: Derivation, p: Polynomial) -> Polynomial:
    ring = p.ring
    images = _monomial_images(der, ring)
    if images is not False:
        out = {}
        get = out.get
        for m, c in p.items():
            for i, im, ic in images:
                e = m[i]
                if e:
                    lowered = m[:i] + (e - 1,) + m[i + 1 :]
                    key = tuple(a + b for a, b in zip(lowered, im))
                    out[key] = get(key, 0) + c * e * ic
        return Polynomial(ring, {k: v for k, v in out.items() if v})
    out = Polynomial.zero(ring)
    for i, name in enumerate(ring.names):
        if name not in der.images or not any(m[i] for m in p.terms):
            continue
        img = _image_in(der, name, ring)
        if img.is_zero():
            continue
        out = out + img * p.diff(name)
    return out


def apply_power(der: Derivation, p: Polynomial, i: int) -> Polynomial:
    if i < 0:
        raise ValueError("power must be non-negative")
    for _ in range(i):
        if p.is_zero():
            break
        p = apply(der, p)
    return p


def nilpotency_index(der: Derivation, p: Polynomial) -> int:
    """The ``m`` with ``der^m(p) != 0`` and ``der^(m+1)(p) == 0``.

    Gives up after ``4 * total_degree + 16`` steps.
    """
    if p.is_zero():
        raise ValueError("nilpotency index of the zero polynomial")
    cap = 4 * p.total_degree() + 16
    m = 0
    q = apply(der, p)
    while q:
        m += 1
        if m > cap:
            raise NotNilpotentError(f"{der.name} is not nilpotent on {p} within {cap} steps")
        q = apply(der, q)
    return m


_x, _s, _t = (Polynomial.var(R, n) for n in "xst")

D = Derivation({"x": Polynomial.zero(R), "s": _x**3, "t": _s, "u": _t, "v": _x**2}, "D")
# D restricted to k[x, s, t, u]; acts on polynomials with no v.
DELTA = Derivation({"x": Polynomial.zero(R), "s": _x**3, "t": _s, "u": _t}, "Delta")

ALPHA_RING = R.extend("alpha")


def exp_action(p: Polynomial, alpha=None, der: Derivation = D) -> Polynomial:
    """``exp(alpha der)(p) = sum_i alpha^i / i! der^i(p)``.

    With ``alpha=None`` the result is in ``ALPHA_RING`` with ``alpha`` formal.
    """
    if alpha is None:
        ring = ALPHA_RING
        a = Polynomial.var(ring, "alpha")
    else:
        ring = p.ring
        a = Polynomial.constant(ring, alpha)
    out = Polynomial.zero(ring)
    q = p
    i = 0
    apow = Polynomial.constant(ring, 1)
    while q:
        term = q.to_ring(ring) if q.ring != ring else q
        out = out + (apow * term) * Fraction(1, factorial(i))
        q = apply(der, q)
        apow = apow * a
        i += 1
    return out


def is_invariant(p: Polynomial, der: Derivation = D) -> bool:
    return apply(der, p).is_zero()


@dataclass(frozen=True)
class PlinthCertificate:
    """A local slice ``element`` together with its image ``image = D(element)``."""

    element: Polynomial
    image: Polynomial


def check_plinth(cert: PlinthCertificate, der: Derivation = D) -> bool:
    d = apply(der, cert.element)
    return bool(cert.image) and d == cert.image and apply(der, d).is_zero()


def plinth_certificates() -> dict:
    """The three local slices exhibiting x^3, gamma0, delta0 as D-images."""
    return {
        "beta0^3": PlinthCertificate(parse("s"), parse("x^3")),
        "gamma0": PlinthCertificate(parse("3*x^3*u - s*t"), parse("2*x^3*t - s^2")),
        "delta0": PlinthCertificate(
            parse("3*x^3*s*u - 4*x^3*t^2 + s^2*t"), parse("3*x^6*u - 3*x^3*s*t + s^3")
        ),
    }
