"""Random LFT self-maps of prescribed dynamic type, built from normal forms.

Elliptic maps come from ``A z / (C z + 1)`` with ``|A| + |C| <= 1``
conjugated by an involution; maps with a boundary Denjoy-Wolff point come
from ``w -> A w + B`` on the right half-plane pulled back through a Cayley
map at a random point of the circle.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .classify import HalfPlaneAffine, MapTag, from_halfplane
from .moebius import Moebius, compose_all, involution, normalize


def _unit(rng: np.random.Generator) -> complex:
    return cmath.exp(1j * rng.uniform(-math.pi, math.pi))


def _disk_point(rng: np.random.Generator, rmax: float = 0.8) -> complex:
    return math.sqrt(rng.uniform(0, rmax**2)) * _unit(rng)


def elliptic_from_normal_form(p: complex, A: complex, C: complex) -> Moebius:
    s = involution(p)
    return normalize(compose_all([s, Moebius(A, 0.0, C, 1.0), s]))


def random_map(rng: np.random.Generator, tag: MapTag) -> Moebius:
    tag = MapTag(tag)
    if tag is MapTag.IDENTITY:
        return Moebius.identity()
    if tag is MapTag.ELLIPTIC_AUT:
        theta = rng.uniform(0.05, 2 * math.pi - 0.05)
        return elliptic_from_normal_form(_disk_point(rng), cmath.exp(1j * theta), 0.0)
    if tag is MapTag.ELLIPTIC_NON_AUT:
        r = rng.uniform(0.05, 0.95)
        A = r * _unit(rng)
        C = (1 - r) * rng.uniform(0, 1) * _unit(rng)
        return elliptic_from_normal_form(_disk_point(rng), A, C)
    tau = _unit(rng)
    y = rng.uniform(-5, 5)
    x = rng.uniform(0.05, 5)
    if tag is MapTag.HYPERBOLIC_AUT:
        h = HalfPlaneAffine(rng.uniform(1.2, 8.0), complex(0.0, y), tau)
    elif tag is MapTag.HYPERBOLIC_NON_AUT:
        h = HalfPlaneAffine(rng.uniform(1.2, 8.0), complex(x, y), tau)
    elif tag is MapTag.PARABOLIC_AUT:
        h = HalfPlaneAffine(1.0, complex(0.0, math.copysign(rng.uniform(0.1, 5), y)), tau)
    else:
        h = HalfPlaneAffine(1.0, complex(x, y), tau)
    return from_halfplane(h)


def random_halfplane_map(rng: np.random.Generator, parabolic: bool, automorphism: bool):
    """A boundary-type map together with its half-plane data (tau, A, B)."""
    tau = _unit(rng)
    A = 1.0 if parabolic else rng.uniform(1.2, 8.0)
    re = 0.0 if automorphism else rng.uniform(0.05, 5)
    im = rng.uniform(-5, 5)
    if parabolic and automorphism:
        im = math.copysign(rng.uniform(0.1, 5), im)
    h = HalfPlaneAffine(A, complex(re, im), tau)
    return from_halfplane(h), h


def random_quadruples(rng: np.random.Generator, n: int) -> tuple[np.ndarray, ...]:
    """n random complex quadruples (a, b, c, d) with |d| > |c|."""
    a, b, c, d = (rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(4))
    swap = np.abs(c) > np.abs(d)
    c2 = np.where(swap, d, c)
    d2 = np.where(swap, c, d)
    return a, b, c2, d2
