"""Projective algebra of 2x2 complex matrices acting on the Riemann sphere.

A :class:`Moebius` is stored as the raw quadruple ``(a, b, c, d)`` of
``z -> (a z + b) / (c z + d)``; two quadruples describe the same map when
they are proportional.  Points of the sphere are homogeneous pairs so that
infinity needs no special casing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT
from .errors import DegenerateMap, ParseError, PoleAtPoint

INF = complex(math.inf, 0.0)


def _as_complex(x, name: str = "value") -> complex:
    z = complex(x)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z!r}")
    return z


@dataclass(frozen=True)
class SpherePoint:
    """Homogeneous coordinates ``(u, v)`` of the point ``u / v``."""

    u: complex
    v: complex = 1.0

    def __post_init__(self):
        u = _as_complex(self.u, "u")
        v = _as_complex(self.v, "v")
        if u == 0 and v == 0:
            raise ValueError("(0, 0) is not a point of the sphere")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def of(cls, z) -> "SpherePoint":
        if isinstance(z, SpherePoint):
            return z
        z = complex(z)
        if cmath.isinf(z):
            return cls(1.0, 0.0)
        return cls(z, 1.0)

    @classmethod
    def infinity(cls) -> "SpherePoint":
        return cls(1.0, 0.0)

    @property
    def is_infinite(self) -> bool:
        return abs(self.v) <= 1e-15 * abs(self.u)

    def to_complex(self) -> complex:
        if self.is_infinite:
            return INF
        return self.u / self.v

    def chordal(self, other: "SpherePoint") -> float:
        """Chordal distance, normalised so that antipodal points are at 1."""
        other = SpherePoint.of(other)
        num = abs(self.u * other.v - other.u * self.v)
        den = math.hypot(abs(self.u), abs(self.v)) * math.hypot(abs(other.u), abs(other.v))
        return num / den

    def __repr__(self):
        if self.is_infinite:
            return "SpherePoint(inf)"
        return f"SpherePoint({self.to_complex()!r})"


def chordal(z, w) -> float:
    return SpherePoint.of(z).chordal(SpherePoint.of(w))


@dataclass(frozen=True)
class Moebius:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, _as_complex(getattr(self, name), name))
        scale = self.scale
        if scale == 0 or abs(self.det) <= DEFAULT.degenerate * scale * scale:
            raise DegenerateMap(f"ad - bc = {self.det!r} is numerically zero")

    @classmethod
    def _unchecked(cls, a, b, c, d) -> "Moebius":
        # products of valid maps: skip the relative degeneracy test, which
        # would reject high iterates of hyperbolic maps
        m = object.__new__(cls)
        for name, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(m, name, complex(v))
        if m.det == 0:
            raise DegenerateMap("product of maps collapsed to a singular matrix")
        return m

    @classmethod
    def identity(cls) -> "Moebius":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, m) -> "Moebius":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def coefficients(self) -> tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @property
    def scale(self) -> float:
        return max(abs(x) for x in self.coefficients)

    def __call__(self, z):
        """Evaluate at finite points (scalars or numpy arrays)."""
        return (self.a * z + self.b) / (self.c * z + self.d)

    def __matmul__(self, other: "Moebius") -> "Moebius":
        return compose(self, other)

    def to_json(self) -> dict:
        return {k: [v.real, v.imag] for k, v in zip("abcd", self.coefficients)}

    @classmethod
    def from_json(cls, obj) -> "Moebius":
        if not isinstance(obj, dict):
            raise ParseError("expected an object with keys a, b, c, d")
        missing = [k for k in "abcd" if k not in obj]
        if missing:
            raise ParseError(f"missing coefficient(s) {missing}")
        try:
            return cls(*(complex_from_json(obj[k], k) for k in "abcd"))
        except DegenerateMap:
            raise
        except ValueError as exc:
            raise ParseError(str(exc)) from exc

    def __repr__(self):
        return "Moebius(a={}, b={}, c={}, d={})".format(*(_fmt(x) for x in self.coefficients))


def _fmt(z: complex) -> str:
    if z.imag == 0:
        return f"{z.real:.6g}"
    return f"({z.real:.6g}{z.imag:+.6g}j)"


def complex_from_json(x, field: str = "value") -> complex:
    if (
        not isinstance(x, (list, tuple))
        or len(x) != 2
        or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in x)
    ):
        raise ParseError(f"complex numbers are [re, im] pairs, got {x!r}", field)
    z = complex(x[0], x[1])
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ParseError("non-finite complex value", field)
    return z


def complex_to_json(z) -> list[float] | str:
    if isinstance(z, SpherePoint):
        if z.is_infinite:
            return "inf"
        z = z.to_complex()
    z = complex(z)
    if cmath.isinf(z):
        return "inf"
    return [z.real, z.imag]


def point_from_json(x, field: str = "point") -> SpherePoint:
    if x == "inf":
        return SpherePoint.infinity()
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(t, (list, tuple)) for t in x):
        return SpherePoint(complex_from_json(x[0], field), complex_from_json(x[1], field))
    return SpherePoint.of(complex_from_json(x, field))


def normalize(m: Moebius) -> Moebius:
    """Determinant-one representative with a deterministic sign.

    The first coefficient (in the order a, b, c, d) that is not negligible
    gets its argument in (-pi/2, pi/2].
    """
    s = cmath.sqrt(m.det)
    coef = [x / s for x in m.coefficients]
    cutoff = 1e-14 * max(abs(x) for x in coef)
    for x in coef:
        if abs(x) > cutoff:
            arg = cmath.phase(x)
            if not (-math.pi / 2 < arg <= math.pi / 2):
                coef = [-y for y in coef]
            break
    return Moebius._unchecked(*coef)


def apply(m: Moebius, z) -> SpherePoint:
    p = SpherePoint.of(z)
    return SpherePoint(m.a * p.u + m.b * p.v, m.c * p.u + m.d * p.v)


def _rescaled(a, b, c, d) -> Moebius:
    s = max(abs(a), abs(b), abs(c), abs(d))
    return Moebius._unchecked(a / s, b / s, c / s, d / s)


def compose(m1: Moebius, m2: Moebius) -> Moebius:
    """The map ``m1 o m2``."""
    return _rescaled(
        m1.a * m2.a + m1.b * m2.c,
        m1.a * m2.b + m1.b * m2.d,
        m1.c * m2.a + m1.d * m2.c,
        m1.c * m2.b + m1.d * m2.d,
    )


def compose_all(maps: Iterable[Moebius]) -> Moebius:
    """Compose left to right as written: ``compose_all([f, g, h]) = f o g o h``."""
    out = Moebius.identity()
    for m in maps:
        out = compose(out, m)
    return out


def inverse(m: Moebius) -> Moebius:
    return _rescaled(m.d, -m.b, -m.c, m.a)


def iterate_n(m: Moebius, n: int) -> Moebius:
    """n-fold composition by binary powering (``n = 0`` gives the identity)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    result = Moebius.identity()
    base = m
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def proj_distance(m1: Moebius, m2: Moebius) -> float:
    """Distance between determinant-one representatives after the best unit rescaling."""
    x = normalize(m1).coefficients
    y = normalize(m2).coefficients
    inner = sum(xi * yi.conjugate() for xi, yi in zip(x, y))
    s = inner / abs(inner) if inner != 0 else 1.0
    return max(abs(xi - s * yi) for xi, yi in zip(x, y))


def is_identity(m: Moebius, tol: float = 1e-12) -> bool:
    return proj_distance(m, Moebius.identity()) < tol


@dataclass(frozen=True)
class FixedPointSet:
    """Fixed points on the sphere.

    ``everywhere`` marks the identity; ``double`` marks a single fixed point
    of multiplicity two.
    """

    points: tuple[SpherePoint, ...]
    double: bool = False
    everywhere: bool = False

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def finite(self) -> list[complex]:
        return [p.to_complex() for p in self.points if not p.is_infinite]


def fixed_points(m: Moebius, tol=DEFAULT) -> FixedPointSet:
    """Roots of c z^2 + (d - a) z - b on the sphere."""
    if is_identity(m):
        return FixedPointSet((), everywhere=True)
    n = normalize(m)
    a, b, c, d = n.coefficients
    size = 1.0 + sum(abs(x) ** 2 for x in n.coefficients)
    disc = (a + d) ** 2 - 4.0
    double = abs(disc) <= tol.double_root * size
    c_is_zero = abs(c) <= 1e-14 * math.sqrt(size)

    if c_is_zero:
        inf = SpherePoint.infinity()
        if double or abs(d - a) <= 1e-14 * math.sqrt(size):
            return FixedPointSet((inf,), double=True)
        return FixedPointSet((SpherePoint.of(b / (d - a)), inf))

    if double:
        return FixedPointSet((SpherePoint.of((a - d) / (2 * c)),), double=True)
    # stable quadratic formula: pick the sign that avoids cancellation
    root = cmath.sqrt(disc)
    p = d - a
    if (p.conjugate() * root).real < 0:
        root = -root
    q = -0.5 * (p + root)
    z1 = q / c
    z2 = -b / q if q != 0 else (a - d) / c - z1
    return FixedPointSet((SpherePoint.of(z1), SpherePoint.of(z2)))


@dataclass(frozen=True)
class Jet:
    value: complex
    d1: complex
    d2: complex


def jet_at(m: Moebius, z0) -> Jet:
    z0 = complex(z0)
    den = m.c * z0 + m.d
    if abs(den) <= 1e-14 * m.scale * max(1.0, abs(z0)):
        raise PoleAtPoint(f"{z0!r} is a pole of the map")
    det = m.det
    return Jet(
        value=(m.a * z0 + m.b) / den,
        d1=det / den**2,
        d2=-2.0 * m.c * det / den**3,
    )


def involution(p) -> Moebius:
    """The disk automorphism ``z -> (p - z) / (1 - conj(p) z)`` swapping p and 0."""
    p = complex(p)
    return Moebius(-1.0, p, -p.conjugate(), 1.0)


def rotation(lam) -> Moebius:
    return Moebius(complex(lam), 0, 0, 1)


def disk_automorphism(p, lam=1.0) -> Moebius:
    """``z -> lam * (z - p) / (1 - conj(p) z)``: sends p to 0 and rotates."""
    p = complex(p)
    lam = complex(lam)
    return Moebius(lam, -lam * p, -p.conjugate(), 1.0)
