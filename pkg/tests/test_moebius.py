import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lftdisk.errors import DegenerateMap, ParseError, PoleAtPoint
from lftdisk.moebius import (
    Moebius,
    SpherePoint,
    apply,
    chordal,
    compose,
    compose_all,
    fixed_points,
    inverse,
    involution,
    is_identity,
    iterate_n,
    jet_at,
    normalize,
    point_from_json,
    proj_distance,
)
from strategies import disk_points, quadruples, self_maps


def test_chordal_normalisation():
    assert chordal(0, math.inf) == pytest.approx(1.0)
    assert chordal(1, -1) == pytest.approx(1.0)
    assert chordal(1j, 1j) == 0.0
    assert chordal(2, math.inf) == pytest.approx(1 / math.sqrt(5))


def test_sphere_point_rejects_origin_pair():
    with pytest.raises(ValueError):
        SpherePoint(0, 0)


def test_degenerate_quadruple():
    with pytest.raises(DegenerateMap):
        Moebius(1, 2, 2, 4)
    with pytest.raises(DegenerateMap):
        Moebius(0, 0, 0, 0)


def test_normalize_has_unit_determinant_and_same_map():
    m = Moebius(3, 1, 1, 3)
    n = normalize(m)
    assert abs(n.det - 1) < 1e-14
    assert proj_distance(m, n) < 1e-15
    # sign convention: first coefficient in the right half-plane
    assert n.a.real > 0


def test_compose_order():
    f = Moebius(1, 1, 0, 1)  # z + 1
    g = Moebius(2, 0, 0, 1)  # 2z
    assert compose(f, g)(3) == pytest.approx(7)
    assert compose_all([f, g, f])(0) == pytest.approx(3)


def test_involution_swaps_point_and_origin():
    p = 0.3 + 0.4j
    s = involution(p)
    assert abs(s(p)) < 1e-15
    assert abs(s(0) - p) < 1e-15
    assert is_identity(compose(s, s))


def test_fixed_points_examples():
    fps = fixed_points(Moebius(3, 1, 1, 3))
    assert sorted(p.to_complex().real for p in fps) == pytest.approx([-1, 1])
    par = fixed_points(Moebius(1, 1, -1, 3))
    assert par.double and par.points[0].to_complex() == pytest.approx(1)
    lin = fixed_points(Moebius(1, 0, 0, 2))
    assert {p.is_infinite for p in lin} == {True, False}
    assert fixed_points(Moebius(2, 0, 0, 2)).everywhere


def test_jet_and_pole():
    m = Moebius(1, 0, -1, 2)  # z / (2 - z)
    j = jet_at(m, 0)
    assert j.value == 0 and j.d1 == pytest.approx(0.5) and j.d2 == pytest.approx(0.5)
    with pytest.raises(PoleAtPoint):
        jet_at(m, 2)


def test_json_round_trip_and_errors():
    m = Moebius(1 + 2j, -1, 0.5j, 3)
    assert Moebius.from_json(m.to_json()) == m
    with pytest.raises(ParseError):
        Moebius.from_json({"a": [1, 0], "b": [0, 0], "c": [0, 0]})
    with pytest.raises(ParseError):
        Moebius.from_json({"a": "1+2i", "b": [0, 0], "c": [0, 0], "d": [1, 0]})
    assert point_from_json("inf").is_infinite


@given(quadruples(), st.floats(0.1, 10), st.floats(-3, 3))
def test_proj_distance_scale_invariant(m, r, t):
    k = r * cmath.exp(1j * t)
    scaled = Moebius(*(k * x for x in m.coefficients))
    assert proj_distance(m, scaled) < 1e-12


@given(quadruples(), quadruples(), quadruples())
def test_composition_associative(f, g, h):
    # rounding grows with the size of the determinant-one representatives
    size = normalize(f).scale * normalize(g).scale * normalize(h).scale
    assert proj_distance(compose(compose(f, g), h), compose(f, compose(g, h))) < 1e-13 * size**2


@given(quadruples())
def test_inverse(m):
    assert is_identity(compose(m, inverse(m)), 1e-9)


@given(self_maps(), st.integers(0, 12))
def test_iterate_matches_repeated_composition(m, n):
    slow = Moebius.identity()
    for _ in range(n):
        slow = compose(m, slow)
    # det-1 scaling divides by sqrt(det), and det loses eps * scale^2 to
    # cancellation, so entries of size scale carry an error of order eps * scale^3
    assert proj_distance(iterate_n(m, n), slow) < 1e-12 * max(1.0, normalize(slow).scale) ** 3


@given(quadruples())
def test_fixed_points_are_fixed(m):
    fps = fixed_points(m)
    if fps.everywhere:
        return
    for p in fps:
        assert apply(m, p).chordal(p) < 1e-6


@settings(max_examples=50)
@given(self_maps(), disk_points(0.8))
def test_jet_matches_finite_differences(m, z):
    h = 1e-5
    j = jet_at(m, z)
    d1 = (m(z + h) - m(z - h)) / (2 * h)
    d2 = (m(z + h) - 2 * m(z) + m(z - h)) / h**2
    assert abs(j.d1 - d1) <= 1e-6 * max(1, abs(j.d1))
    assert abs(j.d2 - d2) <= 1e-3 * max(1, abs(j.d2))


def test_vectorised_evaluation():
    m = Moebius(1, 1, 0, 2)
    z = np.array([0, 0.5, 1j])
    assert np.allclose(m(z), (z + 1) / 2)
