"""Tests for core/polytopes.py."""
from fractions import Fraction
from math import comb

import pytest

from pdelaunay.core.errors import ParameterOutOfRange, UsageError
from pdelaunay.core.exact_arith import dot
from pdelaunay.core.polytopes import (
    Family,
    Normalization,
    VertexSet,
    affine_dimension,
    check_parameters,
    construct_D,
    construct_G,
    construct_P,
    section_functional,
    section_vector,
    symmetry_and_dim,
)


def test_reference_counts():
    """P(7,1,2) has 56 vertices, P(13,1,4) has 182."""
    assert len(construct_P(7, 1, 2)) == 56
    assert len(construct_P(13, 1, 4)) == 182


def test_counts_in_regime():
    """2·C(d+1, s+1) vertices whenever d ≥ k(2s+1)+1."""
    for k in (2, 3):
        for s in (1, 2):
            start = k * (2 * s + 1) + 1
            for d in (start, start + 1):
                assert len(construct_P(d, s, k)) == 2 * comb(d + 1, s + 1)


def test_diagonal_set():
    """D has C(d+1, s+1) points and contains v_s and v_{s+1}."""
    points = construct_D(7, 1, 2)
    assert len(points) == comb(8, 2)
    assert section_vector(7, 2, 1) in points
    assert section_vector(7, 2, 2) in points


def test_section_vectors():
    """v_l = [1^l, 0^(d−l)] − (l−1)·j/n."""
    third = Fraction(1, 3)
    assert section_vector(7, 2, 1) == (1, 0, 0, 0, 0, 0, 0)
    assert section_vector(7, 2, 2) == (1 - third, 1 - third) + (-third,) * 5
    assert section_vector(7, 2, 0) == (third,) * 7
    with pytest.raises(UsageError):
        section_vector(7, 2, 8)


def test_integral_is_twice_half(c7_half, c7_integral):
    """±D is ±D/2 scaled by two."""
    doubled = sorted(tuple(2 * v for v in vertex) for vertex in c7_half)
    assert list(c7_integral.vertices) == doubled
    assert c7_integral.meta.family is Family.P_INTEGRAL


def test_half_vertices_are_centrally_symmetric(c7_half):
    """P is symmetric about the origin and full-dimensional."""
    report = symmetry_and_dim(c7_half)
    assert report.centrally_symmetric
    assert report.center == (0,) * 7
    assert report.affine_dim == 7


@pytest.mark.parametrize(
    "d,s,k",
    [(7, 0, 2), (7, 1, 1), (4, 1, 2), (5, 5, 2)],
)
def test_check_parameters_rejects(d, s, k):
    """s ≥ 1, k ≥ 2, d − 2k ≥ 1, s + 1 ≤ d."""
    with pytest.raises(ParameterOutOfRange):
        check_parameters(d, s, k)


def test_check_parameters_returns_n():
    """n = d − 2k."""
    assert check_parameters(13, 1, 4) == 5


def test_g6(g6):
    """The 6-dimensional G-tope: 27 vertices on the section u·v = 1/2."""
    assert len(g6) == 27
    assert g6.affine_dim == 6
    assert g6.meta.family is Family.G_SECTION
    assert g6.meta.ambient_dim == 7
    u = section_functional(6)
    assert all(dot(u, v) == Fraction(1, 2) for v in g6)


def test_g6_is_not_centrally_symmetric(g6):
    """G-topes are asymmetric."""
    report = symmetry_and_dim(g6)
    assert not report.centrally_symmetric
    assert report.center is None


def test_g7_count():
    """C(d+2, 2) − 1 vertices in dimension 7."""
    g7 = construct_G(7)
    assert len(g7) == 35
    assert g7.affine_dim == 7


def test_g_requires_dimension_six():
    """d < 6 has no G-tope."""
    with pytest.raises(ParameterOutOfRange):
        construct_G(5)


def test_from_points_sorts_and_deduplicates():
    """Vertex sets are sorted and duplicate-free with custom metadata."""
    vs = VertexSet.from_points([(1, 0), (0, 0), (1, 0), ("1/2", 1)])
    assert vs.vertices == ((0, 0), (Fraction(1, 2), 1), (1, 0))
    assert vs.meta.family is Family.CUSTOM
    assert vs.affine_dim == 2


def test_from_points_validation():
    """Empty and ragged inputs are rejected."""
    with pytest.raises(UsageError):
        VertexSet.from_points([])
    with pytest.raises(UsageError):
        VertexSet.from_points([(0, 0), (0, 0, 0)])


def test_affine_dimension():
    """Collinear points span a line."""
    assert affine_dimension([(0, 0, 0), (1, 1, 1), (2, 2, 2)]) == 1
    assert affine_dimension([(5, 5)]) == 0


def test_csv_and_dict(c7_half):
    """CSV rows use canonical rationals; the dict carries the metadata."""
    lines = c7_half.to_csv().splitlines()
    assert len(lines) == 56
    assert lines[0] == "-1/2,0,0,0,0,0,0"
    payload = c7_half.to_dict()
    assert payload["count"] == 56
    assert payload["affine_dim"] == 7
    assert payload["meta"] == {
        "family": "P-half",
        "d": 7,
        "s": 1,
        "k": 2,
        "normalization": Normalization.HALF.value,
        "ambient_dim": 7,
    }


def test_integral_vertices_in_odd_class(c7_integral):
    """±D lies in Λ⁰ and never contains the origin."""
    from pdelaunay.core.lattice import odd_class

    odd = odd_class(7, 2)
    assert all(odd.contains(v) for v in c7_integral)
    assert (0,) * 7 not in set(c7_integral.vertices)


def test_vertex_set_invariant_under_permutation(c7_half):
    """Swapping two coordinates maps the vertex set onto itself."""
    members = set(c7_half.vertices)
    assert all((v[3], v[1], v[2], v[0]) + v[4:] in members for v in c7_half)


@pytest.mark.slow
def test_counts_across_grid():
    """2·(C(d,s) + C(d,s+1)) vertices across the regime d ≤ 24, s ≤ 3, k ≤ 4."""
    for k in range(2, 5):
        for s in range(1, 4):
            for d in range(k * (2 * s + 1) + 1, 25):
                assert len(construct_P(d, s, k)) == 2 * (comb(d, s) + comb(d, s + 1))


def test_g_counts():
    """C(d+2, 2) − 1 vertices for 6 ≤ d ≤ 12."""
    for d in range(6, 13):
        assert len(construct_G(d)) == comb(d + 2, 2) - 1
