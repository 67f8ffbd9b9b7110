import math

import numpy as np
import pytest
from hypothesis import given, settings

from lftdisk.classify import MapTag
from lftdisk.dynamics import (
    StepClass,
    dyadic_steps,
    hyperbolic_distance,
    orbit,
    orbit_csv,
    orbit_svg,
    step_class,
)
from lftdisk.errors import NotSelfMap, OutsideDisk, WrongClass
from lftdisk.moebius import Moebius
from strategies import automorphisms, boundary_maps, disk_points, self_maps, tagged

I = 1j


def test_distance_example():
    assert hyperbolic_distance(0, 0.5) == pytest.approx(0.5 * math.log(3))
    assert hyperbolic_distance(0.3j, 0.3j) == 0.0
    with pytest.raises(OutsideDisk):
        hyperbolic_distance(0, 1)


def test_orbit_of_half_shift():
    orb = orbit(Moebius(1, 1, 0, 2), 0, 3)
    assert np.allclose(orb.points, [0.5, 0.75, 0.875])
    assert orb.steps[0] == pytest.approx(0.5 * math.log(3))
    csv = orbit_csv(orb)
    assert csv.splitlines()[0] == "n,re,im,step" and len(csv.splitlines()) == 4
    assert orbit_svg(orb).startswith("<svg")


def test_orbit_errors():
    with pytest.raises(OutsideDisk):
        orbit(Moebius(1, 1, 0, 2), 1.5, 3)
    with pytest.raises(NotSelfMap):
        orbit(Moebius(2, 0, 0, 1), 0.1, 3)


def test_orbit_accepts_callables():
    orb = orbit(lambda z: z * z, 0.5, 4)
    assert orb.points[-1] == pytest.approx(0.5**16)


@pytest.mark.parametrize(
    "m, expected",
    [
        (Moebius(1, 1, -1, 3), StepClass.ZERO),
        (Moebius(2 - I, I, -I, 2 + I), StepClass.POSITIVE),
        (Moebius(1, 1, 0, 2), StepClass.POSITIVE),
        (Moebius(3, 1, 1, 3), StepClass.POSITIVE),
        (Moebius(1, 0, -1, 2), StepClass.ZERO),
    ],
)
def test_step_class_examples(m, expected):
    assert step_class(m) is expected


def test_step_class_rejects_identity_and_rotations():
    with pytest.raises(WrongClass):
        step_class(Moebius(1, 0, 0, 1))
    with pytest.raises(WrongClass):
        step_class(Moebius(-1, 0, 0, 1))


def test_dyadic_steps_agree_with_plain_orbit():
    m = Moebius(1, 1, -1, 3)
    orb = orbit(m, 0, 65)
    s = dyadic_steps(m, 0, 64)
    for k, step in zip(s.indices, s.steps):
        assert step == pytest.approx(orb.steps[k], rel=1e-9)


@settings(max_examples=50)
@given(automorphisms(), disk_points(), disk_points())
def test_distance_invariant_under_automorphisms(a, z, w):
    assert hyperbolic_distance(a(z), a(w)) == pytest.approx(hyperbolic_distance(z, w), rel=1e-7, abs=1e-9)


@settings(max_examples=50)
@given(self_maps(), disk_points(), disk_points())
def test_self_maps_contract(m, z, w):
    assert hyperbolic_distance(m(z), m(w)) <= hyperbolic_distance(z, w) * (1 + 1e-9) + 1e-9


@settings(max_examples=30)
@given(self_maps(), disk_points(0.5))
def test_dyadic_steps_do_not_increase(m, z):
    s = dyadic_steps(m, z, 2**20)
    assert all(b <= a * (1 + 1e-9) + 1e-12 for a, b in zip(s.steps, s.steps[1:]))


@settings(max_examples=30)
@given(boundary_maps(parabolic=False), disk_points(0.5))
def test_hyperbolic_maps_have_positive_step(m, z):
    assert step_class(m, z) is StepClass.POSITIVE


@settings(max_examples=30)
@given(tagged(MapTag.PARABOLIC_NON_AUT), disk_points(0.5))
def test_parabolic_non_automorphisms_have_zero_step(m, z):
    assert step_class(m, z) is StepClass.ZERO
