import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lftdisk.classify import HalfPlaneAffine, MapTag, classify, from_halfplane, self_map_report
from lftdisk.errors import InvalidUnitRoot, NotEmbeddable, WrongClass
from lftdisk.moebius import Moebius, compose, is_identity, iterate_n, proj_distance
from lftdisk.roots import (
    EmbedStatus,
    _candidate_roots,
    dyadic_element,
    elliptic_normal_form,
    embeddable,
    identity_roots,
    parse_dyadic,
    root_admissible,
    root_nonelliptic,
    roots_elliptic,
    stolz_embeddable_closed_form,
)
from strategies import boundary_maps, disk_points, elliptic_aut, elliptic_non_aut

I = 1j
MINUS_Z = Moebius(-1, 0, 0, 1)
NO_ROOT = Moebius(-1, 0, 3, 4)


def test_nonelliptic_root_examples():
    g = root_nonelliptic(Moebius(1, 1, 0, 2), 2)
    s2 = math.sqrt(2)
    assert proj_distance(g, from_halfplane(HalfPlaneAffine(s2, s2 - 1, 1.0))) < 1e-12
    assert proj_distance(root_nonelliptic(Moebius(5, 3, 3, 5), 2), Moebius(3, 1, 1, 3)) < 1e-12
    phi = Moebius(1 - 2j * math.pi, 2j * math.pi, -2j * math.pi, 1 + 2j * math.pi)
    half = from_halfplane(HalfPlaneAffine(1.0, 2j * math.pi, 1.0))
    assert proj_distance(root_nonelliptic(phi, 2), half) < 1e-10
    with pytest.raises(WrongClass):
        root_nonelliptic(Moebius(1, 0, 0, 2), 2)


def test_elliptic_root_examples():
    roots = roots_elliptic(MINUS_Z, 2)
    assert len(roots) == 2
    for target in (Moebius(I, 0, 0, 1), Moebius(-I, 0, 0, 1)):
        assert any(proj_distance(r, target) < 1e-12 for r in roots)
    assert roots_elliptic(NO_ROOT, 2) == []
    roots = roots_elliptic(Moebius(1, 0, 0, 4), 2)
    assert sorted(round(r(0.5).real, 12) for r in roots) == [-0.25, 0.25]


def test_identity_roots():
    assert proj_distance(identity_roots(0, -1, 2), MINUS_Z) < 1e-12
    g = identity_roots(0, I, 4)
    assert proj_distance(g, Moebius(I, 0, 0, 1)) < 1e-12 and is_identity(iterate_n(g, 4))
    assert proj_distance(identity_roots(0.5, -1, 2), MINUS_Z) > 0.1
    with pytest.raises(InvalidUnitRoot):
        identity_roots(0, 1, 3)
    with pytest.raises(InvalidUnitRoot):
        identity_roots(0, I, 3)


@pytest.mark.parametrize("n", [2, 3, 5, 6])
def test_identity_roots_grid(n):
    for r in (0, 0.3, 0.7):
        for k in range(8):
            p = r * cmath.exp(2j * math.pi * k / 8)
            for j in range(1, n):
                g = identity_roots(p, cmath.exp(2j * math.pi * j / n), n)
                assert is_identity(iterate_n(g, n), 1e-9)
                assert classify(g).tag is MapTag.ELLIPTIC_AUT
                assert abs(classify(g).p - p) < 1e-9


def test_embedding_examples():
    v = embeddable(NO_ROOT)
    assert v.status is EmbedStatus.NOT_EMBEDDABLE and v.depth == 1
    v = embeddable(Moebius(1, 0, 0, 4))
    assert v.status is EmbedStatus.EMBEDDABLE and all(m >= -1e-12 for m in v.witness.margins)
    assert embeddable(Moebius(1, 1, 0, 2)).status is EmbedStatus.EMBEDDABLE
    assert embeddable(MINUS_Z).status is EmbedStatus.EMBEDDABLE
    with pytest.raises(NotEmbeddable):
        dyadic_element(NO_ROOT, Fraction(1, 2))


def test_dyadic_element_basics():
    phi = Moebius(1, 1, 0, 2)
    assert is_identity(dyadic_element(phi, 0))
    assert proj_distance(dyadic_element(phi, 1), phi) < 1e-12
    half = dyadic_element(phi, "1/2^1")
    assert proj_distance(compose(half, half), phi) < 1e-10
    assert parse_dyadic("3/8") == Fraction(3, 8)
    with pytest.raises(ValueError):
        parse_dyadic("1/3")
    with pytest.raises(ValueError):
        parse_dyadic("-1/2")


@settings(max_examples=60)
@given(boundary_maps(), st.sampled_from([2, 3, 5]))
def test_root_oracle(phi, n):
    g = root_nonelliptic(phi, n)
    assert proj_distance(iterate_n(g, n), phi) < 1e-10
    assert classify(g).tag is classify(phi).tag


@settings(max_examples=60)
@given(elliptic_non_aut(), st.integers(2, 6))
def test_elliptic_root_set_is_the_brute_force_set(phi, n):
    nf = elliptic_normal_form(phi)
    admissible = [a for a in _candidate_roots(nf.A, n) if root_admissible(nf, a)]
    roots = roots_elliptic(phi, n)
    assert len(roots) == len(admissible)
    for g in roots:
        assert proj_distance(iterate_n(g, n), phi) < 1e-10
        assert self_map_report(g).is_self_map


@settings(max_examples=40)
@given(elliptic_aut(), st.integers(2, 6))
def test_automorphisms_have_n_roots(phi, n):
    roots = roots_elliptic(phi, n)
    assert len(roots) == n
    assert all(proj_distance(iterate_n(g, n), phi) < 1e-10 for g in roots)


@settings(max_examples=80)
@given(elliptic_non_aut())
def test_search_matches_closed_form(phi):
    v = embeddable(phi)
    if v.status is EmbedStatus.INCONCLUSIVE:
        return
    assert bool(v) == stolz_embeddable_closed_form(phi)


@settings(max_examples=60)
@given(elliptic_non_aut())
def test_witness_ratios_decrease_and_square(phi):
    v = embeddable(phi)
    if v.witness is None:
        return
    ratios = v.witness.ratios
    assert all(b <= a + 1e-12 for a, b in zip(ratios, ratios[1:]))
    entries = v.witness.entries
    assert all(abs(b * b - a) < 1e-12 for a, b in zip(entries, entries[1:]))
    assert abs(entries[0] - elliptic_normal_form(phi).A) < 1e-12


@settings(max_examples=60)
@given(elliptic_non_aut())
def test_not_embeddable_means_some_dyadic_root_is_missing(phi):
    v = embeddable(phi)
    if v.status is not EmbedStatus.NOT_EMBEDDABLE:
        return
    assert any(not roots_elliptic(phi, 2**k) for k in range(1, min(v.depth, 12) + 1))


@settings(max_examples=30, deadline=None)
@given(st.one_of(elliptic_non_aut(), boundary_maps()))
def test_semigroup_additivity(phi):
    v = embeddable(phi)
    if v.status is not EmbedStatus.EMBEDDABLE:
        return
    g = {k: dyadic_element(phi, Fraction(k, 16), verdict=v) for k in range(33)}
    for s in range(0, 17, 3):
        for t in range(0, 17, 5):
            assert proj_distance(compose(g[s], g[t]), g[s + t]) < 1e-9
