"""Self-map tests, dynamic classification and half-plane normal forms."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import InvalidAffine, InvalidUnitRoot, NotSelfMap, WrongClass
from .moebius import (
    Moebius,
    SpherePoint,
    complex_to_json,
    compose_all,
    fixed_points,
    is_identity,
    jet_at,
    normalize,
)


class MapTag(str, Enum):
    IDENTITY = "Identity"
    ELLIPTIC_AUT = "EllipticAut"
    ELLIPTIC_NON_AUT = "EllipticNonAut"
    HYPERBOLIC_AUT = "HyperbolicAut"
    HYPERBOLIC_NON_AUT = "HyperbolicNonAut"
    PARABOLIC_AUT = "ParabolicAut"
    PARABOLIC_NON_AUT = "ParabolicNonAut"

    @property
    def family(self) -> str:
        if self is MapTag.IDENTITY:
            return "identity"
        return self.value.replace("NonAut", "").replace("Aut", "").lower()

    @property
    def is_automorphism(self) -> bool:
        return self in (MapTag.IDENTITY, MapTag.ELLIPTIC_AUT, MapTag.HYPERBOLIC_AUT, MapTag.PARABOLIC_AUT)

    @property
    def boundary_dw(self) -> bool:
        return self.family in ("hyperbolic", "parabolic")


def self_map_margins(a, b, c, d):
    """Slack in the two self-map criteria (nonnegative for self-maps).

    Returns ``(lemma, prop)`` where ``lemma`` is
    ``|c|^2+|d|^2-|a|^2-|b|^2 - 2|a conj(b) - c conj(d)|`` and ``prop`` is
    ``|d|^2-|c|^2 - |b conj(d) - a conj(c)| - |ad - bc|``.  Works elementwise
    on numpy arrays.
    """
    abs2 = np.abs if isinstance(a, np.ndarray) else abs
    lemma = (
        abs2(c) ** 2 + abs2(d) ** 2 - abs2(a) ** 2 - abs2(b) ** 2
        - 2 * abs2(a * np.conj(b) - c * np.conj(d))
    )
    prop = abs2(d) ** 2 - abs2(c) ** 2 - abs2(b * np.conj(d) - a * np.conj(c)) - abs2(a * d - b * c)
    return lemma, prop


@dataclass(frozen=True)
class SelfMapReport:
    is_self_map: bool
    margin_lemma: float
    margin_prop: float
    is_automorphism: bool
    # the image touches the unit circle (lemma margin within tolerance of 0)
    boundary_case: bool = False

    def to_json(self) -> dict:
        return {
            "is_self_map": self.is_self_map,
            "margin_lemma": self.margin_lemma,
            "margin_prop": self.margin_prop,
            "is_automorphism": self.is_automorphism,
            "boundary_case": self.boundary_case,
        }


def self_map_report(m: Moebius, tol: Tolerances = DEFAULT) -> SelfMapReport:
    a, b, c, d = normalize(m).coefficients
    lemma, prop = self_map_margins(a, b, c, d)
    size = abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d) ** 2
    eps = tol.classify * size
    is_self = abs(d) > abs(c) and lemma >= -eps
    gap = abs(c) ** 2 + abs(d) ** 2 - abs(a) ** 2 - abs(b) ** 2
    is_aut = is_self and abs(gap) <= eps and abs(a * b.conjugate() - c * d.conjugate()) <= eps
    return SelfMapReport(
        is_self_map=bool(is_self),
        margin_lemma=float(lemma),
        margin_prop=float(prop),
        is_automorphism=bool(is_aut),
        boundary_case=bool(abs(lemma) <= eps),
    )


@dataclass(frozen=True)
class DiskMapClass:
    tag: MapTag
    dw_point: SpherePoint | None = None
    multiplier: complex | None = None
    parabolic_defect: float | None = None
    # the remaining fixed point on the sphere (None for identity and parabolic maps)
    other_fixed_point: SpherePoint | None = None
    boundary_case: bool = False

    @property
    def p(self) -> complex:
        return self.dw_point.to_complex()

    def to_json(self) -> dict:
        out = {"tag": self.tag.value}
        if self.dw_point is not None:
            out["dw_point"] = complex_to_json(self.dw_point)
            out["multiplier"] = complex_to_json(self.multiplier)
        if self.parabolic_defect is not None:
            out["defect"] = self.parabolic_defect
        if self.other_fixed_point is not None:
            out["other_fixed_point"] = complex_to_json(self.other_fixed_point)
        out["boundary_case"] = self.boundary_case
        return out


def _fixed_point_multipliers(m: Moebius, points) -> list[complex]:
    """Derivatives of a det-1 map at its two simple fixed points.

    With (z, 1) an eigenvector, c z + d is the eigenvalue mu and the
    derivative is 1 / mu^2.  mu is evaluated at the fixed point nearer 0 and
    the other is its reciprocal, which avoids cancellation far from the disk.
    """
    near = min(range(2), key=lambda i: abs(points[i].to_complex()) if not points[i].is_infinite else math.inf)
    mu = m.c * points[near].to_complex() + m.d
    mus = [mu, 1 / mu] if near == 0 else [1 / mu, mu]
    return [1 / (x * x) for x in mus]


def classify(m: Moebius, tol: Tolerances = DEFAULT) -> DiskMapClass:
    """Denjoy-Wolff data and the seven-way dynamic tag of an LFT self-map."""
    if is_identity(m):
        return DiskMapClass(MapTag.IDENTITY)
    report = self_map_report(m, tol)
    if not report.is_self_map:
        raise NotSelfMap(f"{m!r} does not map the unit disk into itself")
    m = normalize(m)
    fps = fixed_points(m, tol)

    if fps.double:
        z = fps.points[0]
        if z.is_infinite:
            raise NotSelfMap("a parabolic self-map cannot be fixed only at infinity")
        p = z.to_complex()
        flagged = abs(abs(p) - 1.0) > tol.classify
        p = p / abs(p)
        jet = jet_at(m, p)
        a = p * jet.d2
        defect = float(a.real)
        aut = abs(defect) <= tol.classify * max(1.0, abs(a))
        return DiskMapClass(
            MapTag.PARABOLIC_AUT if aut else MapTag.PARABOLIC_NON_AUT,
            dw_point=SpherePoint.of(p),
            multiplier=1.0 + 0j,
            parabolic_defect=0.0 if aut else defect,
            boundary_case=flagged,
        )

    finite = [(z, lam) for z, lam in zip(fps.points, _fixed_point_multipliers(m, fps.points)) if not z.is_infinite]
    interior = [(z, lam) for z, lam in finite if abs(z.to_complex()) < 1.0 - tol.classify]
    if interior:
        z, lam = interior[0]
        other = next(w for w in fps.points if w is not z)
        flagged = abs(abs(lam) - 1.0) <= tol.classify and not report.is_automorphism
        return DiskMapClass(
            MapTag.ELLIPTIC_AUT if report.is_automorphism else MapTag.ELLIPTIC_NON_AUT,
            dw_point=z,
            multiplier=lam,
            other_fixed_point=other,
            boundary_case=flagged,
        )

    # no interior fixed point: the attracting one sits on the circle
    near = [(z, lam) for z, lam in finite if abs(abs(z.to_complex()) - 1.0) <= 1e-6]
    if not near:
        raise NotSelfMap("self-map without a fixed point in the closed disk")
    z, lam = min(near, key=lambda t: abs(t[1]))
    p = z.to_complex()
    flagged = (
        abs(abs(p) - 1.0) > tol.classify
        or abs(lam.imag) > tol.classify
        or abs(lam.real - 1.0) <= tol.classify
    )
    other = next(w for w in fps.points if w is not z)
    return DiskMapClass(
        MapTag.HYPERBOLIC_AUT if report.is_automorphism else MapTag.HYPERBOLIC_NON_AUT,
        dw_point=SpherePoint.of(p / abs(p)),
        multiplier=complex(lam.real, 0.0),
        other_fixed_point=other,
        boundary_case=flagged,
    )


def parabolic_defect(m: Moebius, tol: Tolerances = DEFAULT) -> float:
    """``Re(p * phi''(p))`` at the Denjoy-Wolff point of a parabolic map."""
    cls = classify(m, tol)
    if cls.tag.family != "parabolic":
        raise WrongClass(f"expected a parabolic map, got {cls.tag.value}")
    p = cls.p
    return float((p * jet_at(m, p).d2).real)


def cayley(tau) -> Moebius:
    """``T(z) = (tau + z) / (tau - z)``: the disk onto the right half-plane, tau to infinity."""
    tau = complex(tau)
    return Moebius(1.0, tau, -1.0, tau)


def cayley_inverse(tau) -> Moebius:
    tau = complex(tau)
    return Moebius(tau, -tau, 1.0, 1.0)


@dataclass(frozen=True)
class HalfPlaneAffine:
    """``w -> A w + B`` on the right half-plane, transported by the Cayley map at tau."""

    A: float
    B: complex
    tau: complex

    def to_json(self) -> dict:
        return {"A": self.A, "B": complex_to_json(self.B), "tau": complex_to_json(self.tau)}


def cayley_conjugate(m: Moebius, tol: Tolerances = DEFAULT) -> HalfPlaneAffine:
    cls = classify(m, tol)
    if not cls.tag.boundary_dw:
        raise WrongClass(f"half-plane normal form needs a boundary Denjoy-Wolff point, got {cls.tag.value}")
    tau = cls.p
    h = compose_all([cayley(tau), m, cayley_inverse(tau)])
    A = h.a / h.d
    B = h.b / h.d
    if cls.tag.family == "parabolic":
        A_real = 1.0
    else:
        A_real = float(A.real)
    return HalfPlaneAffine(A=A_real, B=complex(B), tau=tau)


def from_halfplane(h: HalfPlaneAffine, tol: Tolerances = DEFAULT) -> Moebius:
    A = float(h.A)
    B = complex(h.B)
    tau = complex(h.tau)
    if A < 1.0 - tol.classify:
        raise InvalidAffine(f"A = {A} must be at least 1")
    if B.real < -tol.classify:
        raise InvalidAffine(f"Re B = {B.real} must be nonnegative")
    if abs(abs(tau) - 1.0) > tol.classify:
        raise InvalidAffine(f"tau = {tau} must lie on the unit circle")
    return normalize(compose_all([cayley_inverse(tau), Moebius(A, B, 0.0, 1.0), cayley(tau)]))


def rotation_order(lam, max_n: int = 1024, tol: Tolerances = DEFAULT) -> int | None:
    """Least n <= max_n with lam**n == 1, or None."""
    lam = complex(lam)
    if abs(abs(lam) - 1.0) >= tol.classify:
        raise InvalidUnitRoot(f"|lambda| = {abs(lam)} is not 1")
    theta = cmath.phase(lam)
    for n in range(1, max_n + 1):
        if abs(cmath.exp(1j * n * theta) - 1.0) < tol.rotation:
            return n
    return None


def is_rational_rotation(lam, max_n: int = 1024, tol: Tolerances = DEFAULT) -> bool:
    return rotation_order(lam, max_n, tol) is not None
