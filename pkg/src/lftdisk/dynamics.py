"""Hyperbolic metric on the disk, forward orbits and the hyperbolic-step dichotomy."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union

import numpy as np

from .classify import MapTag, cayley, cayley_conjugate, classify, self_map_report
from .config import DEFAULT, Tolerances
from .errors import NotSelfMap, OutsideDisk, WrongClass
from .moebius import Moebius, compose_all, involution, normalize
from .roots import _expm1c

# orbit points this close to the circle lose too many digits for the metric
BOUNDARY_CUTOFF = 1e-14

Evaluable = Union[Moebius, Callable[[complex], complex]]


def pseudo_distance(z, w) -> float:
    return abs(z - w) / abs(1 - np.conj(w) * z)


def hyperbolic_distance(z, w) -> float:
    z = complex(z)
    w = complex(w)
    if abs(z) >= 1 or abs(w) >= 1:
        raise OutsideDisk(f"points must lie in the open unit disk, got {z!r}, {w!r}")
    return math.atanh(min(pseudo_distance(z, w), 1.0))


@dataclass(frozen=True)
class Orbit:
    start: complex
    points: np.ndarray
    # steps[k] is the distance from the previous point (start for k = 0) to points[k]
    steps: np.ndarray
    truncated: bool = False

    def rows(self):
        for k, (z, s) in enumerate(zip(self.points, self.steps), start=1):
            yield k, z, s


def orbit(m: Evaluable, z0, n: int, tol: Tolerances = DEFAULT) -> Orbit:
    z0 = complex(z0)
    if abs(z0) >= 1:
        raise OutsideDisk(f"start point {z0!r} is outside the disk")
    if isinstance(m, Moebius) and not self_map_report(m, tol).is_self_map:
        raise NotSelfMap(f"{m!r} is not a self-map of the disk")
    points, steps = [], []
    prev = z0
    truncated = False
    for _ in range(n):
        z = complex(m(prev))
        if not abs(z) < 1:
            raise NotSelfMap(f"orbit left the disk at {z!r}")
        points.append(z)
        steps.append(hyperbolic_distance(prev, z))
        prev = z
        if 1 - abs(z) < BOUNDARY_CUTOFF:
            truncated = True
            break
    return Orbit(z0, np.array(points, dtype=complex), np.array(steps), truncated)


class StepClass(str, Enum):
    ZERO = "ZeroStep"
    POSITIVE = "PositiveStep"


@dataclass(frozen=True)
class StepSamples:
    indices: list[int]
    steps: list[float]
    truncated: bool = False


def dyadic_steps(m: Moebius, z0=0.0, n: int = 2**40, tol: Tolerances = DEFAULT) -> StepSamples:
    """Distances rho(z_k, z_{k+1}) along the orbit of z0 for k = 1, 2, 4, ... <= n.

    With a Denjoy-Wolff point on the circle the orbit is followed in Cayley
    coordinates, where the map is w -> A w + B and w_k is known in closed
    form; dividing through by A^k keeps every quantity bounded, so k = 2^40
    costs nothing.  Elliptic maps use the analogous closed form after moving
    the interior fixed point to 0, so automorphisms keep an exactly constant
    step instead of drifting with the rounding error of k-fold powering.
    """
    z0 = complex(z0)
    indices, steps = [], []
    k = 1
    cls = classify(m, tol)
    if cls.tag is MapTag.IDENTITY:
        while k <= n:
            indices.append(k)
            steps.append(0.0)
            k *= 2
        return StepSamples(indices, steps, False)
    if not cls.tag.boundary_dw:
        # conjugate the interior fixed point to 0: w -> A w / (C w + 1), and
        # w_k = A^k w0 / (1 + C w0 (1 - A^k) / (1 - A))
        s = involution(cls.p)
        nf = normalize(compose_all([s, m, s]))
        A, C = nf.a / nf.d, nf.c / nf.d
        if cls.tag is MapTag.ELLIPTIC_AUT:
            # snap to the exact rotation so |A^k| cannot drift with k
            A, C = A / abs(A), 0j
        L = cmath.log(A)
        w0 = complex(s(z0))

        def w_at(j):
            geo = _expm1c(j * L) / _expm1c(L)
            return cmath.exp(j * L) * w0 / (1 + C * w0 * geo)

        while k <= n:
            indices.append(k)
            steps.append(hyperbolic_distance(w_at(k), w_at(k + 1)))
            k *= 2
        return StepSamples(indices, steps, False)

    h = cayley_conjugate(m, tol)
    A, B = h.A, h.B
    w0 = complex(cayley(h.tau)(z0))
    L = math.log(A)
    v = (A - 1) * w0 + B  # w_1 - w_0; w_{k+1} - w_k = A^k v
    while k <= n:
        # w_k / A^k = w0 + B (1 - A^-k) / (A - 1)
        g = -math.expm1(-k * L) / math.expm1(L) if L > 0 else float(k)
        u = w0 + B * g
        # pseudo-hyperbolic distance |w - w'| / |w + conj(w')| in the right half-plane
        delta = abs(v) / abs(2 * u.real + v)
        indices.append(k)
        steps.append(math.atanh(min(delta, 1.0)))
        k *= 2
    return StepSamples(indices, steps, False)


def step_class(
    m: Moebius, z0=0.0, n: int = 2**40, threshold: float = 1e-6, tol: Tolerances = DEFAULT
) -> StepClass:
    """ZeroStep iff the orbit step at (about) index n has dropped below threshold."""
    tag = classify(m, tol).tag
    if tag in (MapTag.IDENTITY, MapTag.ELLIPTIC_AUT):
        raise WrongClass(f"hyperbolic step is not decided for {tag.value}")
    samples = dyadic_steps(m, z0, n, tol)
    last = samples.steps[-1] if samples.steps else 0.0
    return StepClass.ZERO if last < threshold else StepClass.POSITIVE


def orbit_csv(orb: Orbit) -> str:
    lines = ["n,re,im,step"]
    for k, z, s in orb.rows():
        lines.append(f"{k},{z.real:.17g},{z.imag:.17g},{s:.17g}")
    return "\n".join(lines) + "\n"


def orbit_svg(orb: Orbit, size: int = 400) -> str:
    r = size / 2 - 10
    c = size / 2

    def xy(z):
        return c + r * z.real, c - r * z.imag

    pts = [xy(orb.start)] + [xy(z) for z in orb.points]
    path = " ".join(f"{x:.3f},{y:.3f}" for x, y in pts)
    dots = "".join(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="2" fill="#c33"/>' for x, y in pts)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">'
        f'<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="#333"/>'
        f'<polyline points="{path}" fill="none" stroke="#36c"/>{dots}</svg>\n'
    )
