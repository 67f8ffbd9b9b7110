"""The intertwining equation ``f o phi = psi o f`` for LFT self-maps phi, psi.

Type compatibility, the fixed-point/derivative criterion for LFT solutions,
the families of all LFT solutions, and residual checks for arbitrary
evaluable maps.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .classify import (
    DiskMapClass,
    MapTag,
    cayley,
    cayley_inverse,
    classify,
    self_map_report,
)
from .config import DEFAULT, Tolerances
from .errors import EvaluationFailure, LFTError, WrongClass
from .moebius import (
    Moebius,
    SpherePoint,
    apply,
    compose,
    compose_all,
    fixed_points,
    inverse,
    jet_at,
    normalize,
    proj_distance,
)

T = MapTag
_ORDER = [
    T.IDENTITY,
    T.ELLIPTIC_AUT,
    T.ELLIPTIC_NON_AUT,
    T.HYPERBOLIC_AUT,
    T.HYPERBOLIC_NON_AUT,
    T.PARABOLIC_AUT,
    T.PARABOLIC_NON_AUT,
]

# rows: type of phi, columns: type of psi (same order as _ORDER)
_TABLE = {
    T.IDENTITY:           "Y......",
    T.ELLIPTIC_AUT:       "YY.....",
    T.ELLIPTIC_NON_AUT:   "..Y....",
    T.HYPERBOLIC_AUT:     "..YY...",
    T.HYPERBOLIC_NON_AUT: "..YYY..",
    T.PARABOLIC_AUT:      "Y....Y.",
    T.PARABOLIC_NON_AUT:  "......Y",
}

COMPATIBLE = {
    (row, col): _TABLE[row][j] == "Y" for row in _ORDER for j, col in enumerate(_ORDER)
}


class Verdict(str, Enum):
    NO = "No"
    POSSIBLE = "Possible"


@dataclass(frozen=True)
class Compatibility:
    verdict: Verdict
    reason: str

    def __bool__(self):
        return self.verdict is Verdict.POSSIBLE


def _obstruction(phi: MapTag, psi: MapTag) -> str | None:
    """First dynamical rule that forbids a non-constant solution conformal at the DW point."""
    if phi is T.IDENTITY:
        return None if psi is T.IDENTITY else "phi = id forces psi = id"
    if psi is T.IDENTITY:
        if phi in (T.ELLIPTIC_AUT, T.PARABOLIC_AUT):
            return None
        return "f o phi = f needs phi to be a rational elliptic or a parabolic automorphism"
    if phi is T.ELLIPTIC_NON_AUT and psi is not T.ELLIPTIC_NON_AUT:
        return "elliptic non-automorphic phi forces the same type for psi"
    if psi is T.ELLIPTIC_NON_AUT and phi.family not in ("hyperbolic",) and phi is not T.ELLIPTIC_NON_AUT:
        return "elliptic non-automorphic psi needs phi hyperbolic or elliptic non-automorphic"
    if (phi is T.ELLIPTIC_AUT) != (psi is T.ELLIPTIC_AUT):
        return "elliptic automorphisms only intertwine with elliptic automorphisms"
    if psi.family == "hyperbolic" and phi.family != "hyperbolic":
        return "hyperbolic psi forces hyperbolic phi"
    if phi.family == "hyperbolic" and psi not in (T.HYPERBOLIC_AUT, T.HYPERBOLIC_NON_AUT, T.ELLIPTIC_NON_AUT):
        return "hyperbolic phi allows only hyperbolic or elliptic non-automorphic psi"
    if phi is T.HYPERBOLIC_AUT and psi is T.HYPERBOLIC_NON_AUT:
        return "a hyperbolic automorphism phi with hyperbolic psi forces psi to be an automorphism"
    if (phi is T.PARABOLIC_NON_AUT) != (psi is T.PARABOLIC_NON_AUT):
        return "parabolic non-automorphic maps only intertwine with each other"
    if (phi is T.PARABOLIC_AUT) != (psi is T.PARABOLIC_AUT):
        return "parabolic automorphisms only intertwine with each other"
    return None


def type_compatible(cphi: DiskMapClass | MapTag, cpsi: DiskMapClass | MapTag) -> Compatibility:
    phi = cphi if isinstance(cphi, MapTag) else cphi.tag
    psi = cpsi if isinstance(cpsi, MapTag) else cpsi.tag
    if COMPATIBLE[(phi, psi)]:
        if psi is T.IDENTITY and phi is T.ELLIPTIC_AUT:
            return Compatibility(Verdict.POSSIBLE, "possible only when the rotation of phi is rational")
        if phi is T.HYPERBOLIC_AUT and psi is T.ELLIPTIC_NON_AUT:
            return Compatibility(Verdict.POSSIBLE, "possible only if the closure of psi(D) meets the circle")
        return Compatibility(Verdict.POSSIBLE, "some pairs of these types admit solutions")
    return Compatibility(Verdict.NO, _obstruction(phi, psi) or "excluded")


# --- fixed-point criterion ---------------------------------------------------------------


def match_point_sets(xs, ys, tol: float) -> tuple[bool, float]:
    """Optimal assignment between two small point sets under the chordal metric."""
    xs = [SpherePoint.of(x) for x in xs]
    ys = [SpherePoint.of(y) for y in ys]
    if len(xs) != len(ys):
        return False, math.inf
    best = math.inf
    for perm in itertools.permutations(range(len(ys))):
        cost = max((xs[i].chordal(ys[j]) for i, j in enumerate(perm)), default=0.0)
        best = min(best, cost)
    return best < tol, best


@dataclass(frozen=True)
class ConditionCheck:
    holds: bool
    reason: str
    failed: tuple[str, ...]
    case: str
    # proj_distance(f o phi, psi o f), an independent check of the verdict
    composition_distance: float

    def __bool__(self):
        return self.holds

    @property
    def consistent(self) -> bool:
        return self.holds == (self.composition_distance < 1e-8)

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "case": self.case,
            "failed": list(self.failed),
            "reason": self.reason,
            "composition_distance": self.composition_distance,
        }


def _pt(z) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-12:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


def check_conditions(f: Moebius, phi: Moebius, psi: Moebius, tol: Tolerances = DEFAULT) -> ConditionCheck:
    """Decide ``f o phi = psi o f`` from fixed points and derivatives at the DW points."""
    cphi, cpsi = classify(phi, tol), classify(psi, tol)
    if cphi.tag is T.IDENTITY or cpsi.tag is T.IDENTITY:
        raise WrongClass("phi and psi must differ from the identity")
    p, q = cphi.p, cpsi.p
    images = [apply(f, z) for z in fixed_points(phi, tol)]
    sets_ok, _ = match_point_sets(images, fixed_points(psi, tol).points, tol.fixed_point_match)
    failed, reasons = [], []
    if not sets_ok:
        failed.append("fixed_sets")
        reasons.append("f(Fix phi) != Fix psi")

    case = cphi.tag.family
    if case in ("elliptic", "hyperbolic"):
        if case == "hyperbolic" and apply(f, p).chordal(SpherePoint.of(q)) >= tol.fixed_point_match:
            failed.append("dw_image")
            reasons.append(f"f({_pt(p)}) != {_pt(q)}")
        lam_phi = cphi.multiplier
        lam_psi = jet_at(psi, q).d1
        if abs(lam_phi - lam_psi) > tol.multiplier:
            failed.append("multiplier")
            reasons.append(
                f"phi'({_pt(p)}) != psi'({_pt(q)}) ({_pt(lam_phi)} vs {_pt(lam_psi)})"
            )
    else:
        # parabolic: f'(p) psi''(q) = phi''(p)
        d2_phi = jet_at(phi, p).d2
        d2_psi = jet_at(psi, q).d2
        df = jet_at(f, p).d1
        if abs(df * d2_psi - d2_phi) > tol.multiplier * max(1.0, abs(d2_phi)):
            failed.append("second_derivative")
            reasons.append(
                f"f'({_pt(p)}) psi''({_pt(q)}) != phi''({_pt(p)}) "
                f"({_pt(df * d2_psi)} vs {_pt(d2_phi)})"
            )
    dist = proj_distance(compose(f, phi), compose(psi, f))
    return ConditionCheck(
        holds=not failed,
        reason="; ".join(reasons) if reasons else "all conditions hold",
        failed=tuple(failed),
        case=case,
        composition_distance=dist,
    )


# --- solution families -------------------------------------------------------------------


class FamilyKind(str, Enum):
    EMPTY = "Empty"
    TWO_POINT = "TwoPointFamily"
    PARABOLIC_AFFINE = "ParabolicAffineFamily"
    # LFT solutions exist on the sphere but none maps the disk into itself
    DEGENERATE = "Degenerate"


def two_point_chart(p: complex, p_other: SpherePoint) -> Moebius:
    """Sends p to 0 and the other fixed point to infinity."""
    if p_other.is_infinite:
        return Moebius(1.0, -p, 0.0, 1.0)
    r = p_other.to_complex()
    if abs(r) > 1.0:
        # (z - p) / (1 - z / r): same family up to the scale of t, but well
        # conditioned when the other fixed point is far away
        return Moebius(1.0, -p, -1.0 / r, 1.0)
    return Moebius(1.0, -p, 1.0, -r)


def _selfmap_score(m: Moebius) -> float:
    """Scale-free self-map slack: >= 0 exactly for self-maps of the disk."""
    a, b, c, d = normalize(m).coefficients
    size = abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 + abs(d) ** 2
    gap = abs(d) ** 2 - abs(c) ** 2
    if gap <= 0:
        return -1.0 + gap / size
    lemma = abs(c) ** 2 + abs(d) ** 2 - abs(a) ** 2 - abs(b) ** 2 - 2 * abs(a * b.conjugate() - c * d.conjugate())
    return lemma / size


@dataclass
class SolutionFamily:
    kind: FamilyKind
    phi: Moebius
    psi: Moebius
    reason: str
    sigma_p: Moebius | None = None
    sigma_q: Moebius | None = None
    # the slope c of F(w) = c w + d in half-plane coordinates (parabolic case)
    fixed_scalar: complex | None = None
    free_parameter_description: str = ""
    # for the two-point family: phase of t forced when both DW points lie on the circle
    pinned_phase: float | None = None
    # feasible parameters found while scanning (log|t|, arg t)
    feasible: list[tuple[float, float]] = field(default_factory=list)
    tol: Tolerances = DEFAULT

    def __bool__(self):
        return self.kind in (FamilyKind.TWO_POINT, FamilyKind.PARABOLIC_AFFINE)

    @property
    def is_empty(self) -> bool:
        return not self

    def member(self, param: complex) -> Moebius:
        """The solution for parameter t (two-point) or d (parabolic)."""
        param = complex(param)
        if self.kind is FamilyKind.EMPTY:
            raise LFTError("the family is empty")
        if self.sigma_p is None:
            raise LFTError("no parametrisation available")
        if self.fixed_scalar is not None:
            F = Moebius(self.fixed_scalar, param, 0.0, 1.0)
        else:
            if param == 0:
                raise ValueError("t must be nonzero")
            F = Moebius(param, 0.0, 0.0, 1.0)
        return normalize(compose_all([inverse(self.sigma_q), F, self.sigma_p]))

    def parameter_of(self, f: Moebius, tol: float = 1e-9) -> complex | None:
        """The parameter whose member is f, or None when f is not in the family."""
        if self.sigma_p is None or self.kind is FamilyKind.EMPTY:
            return None
        h = compose_all([self.sigma_q, f, inverse(self.sigma_p)])
        if abs(h.c) > tol * h.scale or abs(h.d) <= tol * h.scale:
            return None
        if self.fixed_scalar is not None:
            param = h.b / h.d
        else:
            param = h.a / h.d
            if param == 0:
                return None
        if proj_distance(self.member(param), f) > tol:
            return None
        return param

    def is_self_map_member(self, param: complex) -> bool:
        return self_map_report(self.member(param), self.tol).is_self_map

    def sample(self, rng: np.random.Generator, k: int, max_tries: int = 10000) -> list[Moebius]:
        """Rejection-sample k members that are self-maps of the disk."""
        if not self:
            return []
        out = []
        tries = 0
        while len(out) < k and tries < max_tries:
            tries += 1
            param = self._propose(rng)
            if self.is_self_map_member(param):
                out.append(self.member(param))
        return out

    def _propose(self, rng: np.random.Generator) -> complex:
        if self.fixed_scalar is not None:
            # closed right half-plane, heavy-ish tails
            x = rng.exponential(1.0) * (0 if rng.random() < 0.1 else 1)
            y = rng.standard_cauchy()
            return complex(x, float(np.clip(y, -1e3, 1e3)))
        lr, th = self.feasible[rng.integers(len(self.feasible))]
        lr += rng.uniform(-0.25, 0.25)
        if self.pinned_phase is None:
            th += rng.uniform(-0.05, 0.05)
        return cmath.rect(math.exp(lr), th)

    def sample_parameters(self, rng: np.random.Generator, k: int) -> list[complex]:
        """Arbitrary nonzero parameters, self-map or not (for algebraic checks)."""
        if self.fixed_scalar is not None:
            return [complex(*rng.normal(size=2) * 3) for _ in range(k)]
        return [cmath.rect(math.exp(rng.uniform(-3, 3)), rng.uniform(-math.pi, math.pi)) for _ in range(k)]

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "reason": self.reason}
        if self.sigma_p is not None:
            out["sigma_p"] = self.sigma_p.to_json()
            out["sigma_q"] = self.sigma_q.to_json()
        if self.fixed_scalar is not None:
            out["fixed_scalar"] = [self.fixed_scalar.real, self.fixed_scalar.imag]
        if self.pinned_phase is not None:
            out["pinned_phase"] = self.pinned_phase
        out["free_parameter"] = self.free_parameter_description
        return out


def _scan_two_point(fam: SolutionFamily) -> None:
    """Locate parameters t whose member maps the disk into itself."""
    # |t| beyond e^8 costs digits in the members; below e^-8 every family
    # looks like a constant map and the tolerance would admit it
    radii = np.arange(-8.0, 8.0001, 0.25)
    if fam.pinned_phase is not None:
        phases = np.array([fam.pinned_phase])
    else:
        phases = np.linspace(-math.pi, math.pi, 48, endpoint=False)

    def score(lr, th):
        if not radii[0] <= lr <= radii[-1]:
            return -2.0
        return _selfmap_score(fam.member(cmath.rect(math.exp(lr), th)))

    grid = [(score(lr, th), lr, th) for lr in radii for th in phases]
    eps = fam.tol.classify
    feasible = [(lr, th) for s, lr, th in grid if s >= -eps]
    if not feasible:
        # the feasible set may be thin: polish the best few grid points
        grid.sort(reverse=True)
        for _, lr, th in grid[:6]:
            if fam.pinned_phase is not None:
                res = minimize(lambda x: -score(x[0], fam.pinned_phase), [lr], method="Nelder-Mead",
                               options={"xatol": 1e-10, "fatol": 1e-14})
                cand = (float(res.x[0]), fam.pinned_phase)
            else:
                res = minimize(lambda x: -score(x[0], x[1]), [lr, th], method="Nelder-Mead",
                               options={"xatol": 1e-10, "fatol": 1e-14})
                cand = (float(res.x[0]), float(res.x[1]))
            if -res.fun >= -eps:
                feasible.append(cand)
                break
    fam.feasible = feasible


def solve_family(phi: Moebius, psi: Moebius, tol: Tolerances = DEFAULT) -> SolutionFamily:
    """All LFT solutions f of f o phi = psi o f, with a self-map filter."""
    cphi, cpsi = classify(phi, tol), classify(psi, tol)
    if cphi.tag is T.IDENTITY or cpsi.tag is T.IDENTITY:
        raise WrongClass("phi and psi must differ from the identity")
    compat = type_compatible(cphi, cpsi)
    if not compat:
        return SolutionFamily(FamilyKind.EMPTY, phi, psi, compat.reason, tol=tol)
    p, q = cphi.p, cpsi.p

    if cphi.tag.family == "parabolic":
        # w -> w + a and w -> w + b in half-plane coordinates; F(w) = c w + d with c a = b
        a = p * jet_at(phi, p).d2
        b = q * jet_at(psi, q).d2
        c = b / a
        fam = SolutionFamily(
            FamilyKind.PARABOLIC_AFFINE,
            phi,
            psi,
            "c a = b fixes the slope; d is free",
            sigma_p=cayley(p),
            sigma_q=cayley(q),
            fixed_scalar=c,
            free_parameter_description="d with Re d >= 0 (F(w) = c w + d in Cayley coordinates)",
            tol=tol,
        )
        if abs(c.imag) > tol.multiplier * abs(c) or c.real <= 0:
            fam.kind = FamilyKind.DEGENERATE
            fam.reason = "slope c = b/a is not a positive real: no member maps the disk into itself"
        else:
            fam.fixed_scalar = complex(c.real, 0.0)
        return fam

    lam_phi = cphi.multiplier
    lam_psi = jet_at(psi, q).d1
    if abs(lam_phi - lam_psi) > tol.multiplier:
        return SolutionFamily(
            FamilyKind.EMPTY, phi, psi,
            f"multipliers differ: {_pt(lam_phi)} vs {_pt(lam_psi)}", tol=tol,
        )
    sigma_p = two_point_chart(p, cphi.other_fixed_point)
    sigma_q = two_point_chart(q, cpsi.other_fixed_point)
    fam = SolutionFamily(
        FamilyKind.TWO_POINT,
        phi,
        psi,
        "f(p) = q and f(p_r) = q_r; t is free",
        sigma_p=sigma_p,
        sigma_q=sigma_q,
        free_parameter_description="t != 0 (f = sigma_q^-1 o (w -> t w) o sigma_p)",
        tol=tol,
    )
    if abs(abs(p) - 1) < 1e-9 and abs(abs(q) - 1) < 1e-9:
        # f'(p) p conj(q) must be positive
        k = p * q.conjugate() * jet_at(sigma_p, p).d1 / jet_at(sigma_q, q).d1
        fam.pinned_phase = -cmath.phase(k)
    _scan_two_point(fam)
    if not fam.feasible:
        fam.kind = FamilyKind.DEGENERATE
        fam.reason = "the multipliers match but no member maps the disk into itself"
    return fam


# --- residuals for evaluable maps ----------------------------------------------------------


def default_samples() -> np.ndarray:
    theta = 2 * np.pi * np.arange(16) / 16
    return np.concatenate([r * np.exp(1j * theta) for r in (0.3, 0.6, 0.9)])


def residual(
    f: Callable,
    phi: Moebius | Callable,
    psi: Moebius | Callable,
    samples=None,
) -> float:
    """max |f(phi(z)) - psi(f(z))| over the sample points."""
    zs = default_samples() if samples is None else np.asarray(samples, dtype=complex)
    worst = 0.0
    for z in zs:
        try:
            lhs = complex(f(complex(phi(z))))
            rhs = complex(psi(complex(f(z))))
        except (ArithmeticError, ValueError) as exc:
            raise EvaluationFailure(f"evaluation failed at z = {z!r}: {exc}", sample=z) from exc
        err = abs(lhs - rhs)
        if not math.isfinite(err):
            raise EvaluationFailure(f"non-finite value at z = {z!r}", sample=z)
        worst = max(worst, err)
    return worst


def parabolic_conformal_derivative(phi: Moebius, psi: Moebius, tol: Tolerances = DEFAULT) -> complex:
    """``phi''(p) / psi''(q)``: the derivative at p of every solution for parabolic phi, psi."""
    cphi, cpsi = classify(phi, tol), classify(psi, tol)
    if cphi.tag.family != "parabolic" or cpsi.tag.family != "parabolic":
        raise WrongClass("both maps must be parabolic")
    p, q = cphi.p, cpsi.p
    value = jet_at(phi, p).d2 / jet_at(psi, q).d2
    fam = solve_family(phi, psi, tol)
    if fam.kind is FamilyKind.PARABOLIC_AFFINE:
        direction = p * q.conjugate() * value
        if direction.real <= 0 or abs(direction.imag) > 1e-8 * abs(direction):
            raise LFTError(f"p conj(q) f'(p) = {direction!r} is not a positive real")
    return value
