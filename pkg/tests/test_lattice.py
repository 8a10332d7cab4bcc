"""Tests for core/lattice.py."""
from fractions import Fraction

import pytest

from pdelaunay.core.errors import (
    BudgetExceededError,
    NotInLatticeError,
    NotTwoValuedError,
    ParameterOutOfRange,
    UsageError,
)
from pdelaunay.core.exact_arith import zero_vector
from pdelaunay.core.forms import RadialForm, as_inhom, phi_main
from pdelaunay.core.lattice import (
    AffineLattice,
    CanonicalRep,
    ParityFunctional,
    ScaledLattice,
    affine_lattice_from_points,
    canonical_rep,
    enumerate_in_ellipsoid,
    enumerate_M,
    enumerate_with_stats,
    estimate_nodes,
    hermite_normal_form,
    minimal_vectors,
    odd_class,
    parity,
    restrict_form,
)


def _z2():
    return affine_lattice_from_points([(0, 0), (1, 0), (0, 1)])


def _norm(dim):
    return as_inhom(RadialForm(1, 0, dim), zero_vector(dim), 0)


def test_scaled_lattice_bounds():
    """n must satisfy 1 ≤ n < d."""
    with pytest.raises(ParameterOutOfRange):
        ScaledLattice(7, 7)
    with pytest.raises(ParameterOutOfRange):
        ScaledLattice.for_parameters(4, 2)
    assert ScaledLattice.for_parameters(7, 2).n == 3


def test_decompose():
    """x = z + a·j/n with 0 ≤ a < n."""
    lat = ScaledLattice(7, 3)
    third = Fraction(1, 3)
    point = (1 + 2 * third,) + (2 * third,) * 6
    assert lat.decompose(point) == ((1, 0, 0, 0, 0, 0, 0), 2)
    assert lat.decompose((Fraction(1, 2),) + (Fraction(0),) * 6) is None
    assert not lat.contains((third, 0, 0, 0, 0, 0, 0))


def test_parity_functional():
    """l⁰·j = n and parity reads l⁰·λ mod 2."""
    pf = ParityFunctional(7, 2)
    assert pf.vector == (-1, -1, 1, 1, 1, 1, 1)
    assert pf.value((1,) * 7) == 3
    assert parity((1, 0, 0, 0, 0, 0, 0), pf) == 1
    assert parity((1, 1, 0, 0, 0, 0, 0), pf) == 0
    assert parity((Fraction(1, 3),) * 7, pf) == 1


def test_parity_outside_lattice():
    """Points outside Λ are rejected."""
    with pytest.raises(NotInLatticeError):
        parity((Fraction(1, 2),) + (0,) * 6, ParityFunctional(7, 2))


def test_canonical_rep_examples():
    """e₁ → (1,0), j/n → (0,1), [1⁴,0³] flips into the window."""
    lat = ScaledLattice(7, 3)
    assert canonical_rep((1, 0, 0, 0, 0, 0, 0), lat) == CanonicalRep(1, 0, 7, 3)
    assert canonical_rep((Fraction(1, 3),) * 7, lat) == CanonicalRep(0, 1, 7, 3)
    assert canonical_rep((1, 1, 1, 1, 0, 0, 0), lat) == CanonicalRep(-3, 3, 7, 3)


def test_canonical_rep_errors():
    """Non-lattice and three-valued points are rejected."""
    lat = ScaledLattice(7, 3)
    with pytest.raises(NotTwoValuedError):
        canonical_rep((2, 0, 0, 0, 0, 0, 0), lat)
    with pytest.raises(NotTwoValuedError):
        canonical_rep((1, -1, 0, 0, 0, 0, 0), lat)
    with pytest.raises(NotInLatticeError):
        canonical_rep((Fraction(1, 2), 0, 0, 0, 0, 0, 0), lat)


def test_canonical_rep_window():
    """l outside −d/2 ≤ l < d/2 is not canonical."""
    with pytest.raises(UsageError):
        CanonicalRep(4, 0, 7, 3)
    CanonicalRep(-3, 0, 7, 3)
    with pytest.raises(UsageError):
        CanonicalRep(3, 0, 6, 2)


def test_canonical_rep_round_trips_its_point():
    """canonical_rep(point(r)) = r for every representative of M."""
    for d, k in ((7, 2), (9, 2), (13, 4), (10, 3)):
        lat = ScaledLattice.for_parameters(d, k)
        for rep in enumerate_M(d, k):
            assert canonical_rep(rep.point(), lat) == rep


def test_negated():
    """−e₁ → (−1,0) and −j/n → (0,−1)."""
    assert CanonicalRep(1, 0, 7, 3).negated() == CanonicalRep(-1, 0, 7, 3)
    assert CanonicalRep(0, 1, 7, 3).negated() == CanonicalRep(0, -1, 7, 3)
    rep = CanonicalRep(-2, 1, 7, 3)
    assert rep.negated().negated() == rep


def test_enumerate_M_reference_values():
    """M(7,2) and M(5,2) at their known values."""
    assert [(r.l, r.a) for r in enumerate_M(7, 2)] == [(-3, 2), (-2, 1), (0, 1), (1, 0)]
    assert [(r.l, r.a) for r in enumerate_M(5, 2)] == [(-2, 1), (0, 1), (1, 0)]


def test_enumerate_M_members_are_odd_and_in_strip():
    """Every member has odd parity and 0 ≤ l·n + a·d < d (besides j/n)."""
    for d in range(5, 16):
        for k in range(2, (d - 1) // 2 + 1):
            members = enumerate_M(d, k)
            n = d - 2 * k
            pf = ParityFunctional(d, k)
            assert members == sorted(members)
            assert CanonicalRep(0, 1, d, n) in members
            for rep in members:
                assert rep.parity == 1
                assert parity(rep.point(), pf) == 1
                if (rep.l, rep.a) != (0, 1):
                    assert 0 <= rep.l * n + rep.a * d < d


def test_height():
    """Coordinate sum l + a·d/n."""
    assert CanonicalRep(-3, 2, 7, 3).height == Fraction(5, 3)
    assert sum(CanonicalRep(-3, 2, 7, 3).point()) == Fraction(5, 3)


def test_hermite_normal_form():
    """The checkerboard lattice reduces to [[1,1],[0,2]]."""
    assert hermite_normal_form([[2, 0], [0, 2], [1, 1]], 2) == [[1, 1], [0, 2]]
    assert hermite_normal_form([[0, 0, 0]], 3) == []


def test_hermite_normal_form_is_order_independent(rng):
    """Shuffling the generating rows gives the same basis."""
    rows = [[2, 4, 0], [0, 3, 3], [1, 1, 1], [4, 0, 2]]
    reference = hermite_normal_form(rows, 3)
    for _ in range(10):
        shuffled = rows[:]
        rng.shuffle(shuffled)
        assert hermite_normal_form(shuffled, 3) == reference


def test_affine_lattice_coordinates():
    """Coordinates invert point() and reject non-members."""
    lat = AffineLattice((1, 0), ((2, 0), (0, 1)))
    assert lat.coordinates((5, -3)) == (2, -3)
    assert lat.point((2, -3)) == (5, -3)
    assert lat.coordinates((2, 0)) is None
    assert not lat.contains((Fraction(1, 2), 0))


def test_affine_lattice_requires_echelon_generators():
    """Generators out of echelon order are rejected."""
    with pytest.raises(UsageError):
        AffineLattice((0, 0), ((0, 1), (1, 0)))
    with pytest.raises(UsageError):
        AffineLattice((0, 0), ((-1, 0),))


def test_affine_lattice_scaled():
    """Scaling multiplies origin and generators; c ≤ 0 is rejected."""
    lat = AffineLattice((1, 0), ((2, 0), (0, 1))).scaled(Fraction(1, 2))
    assert lat.origin == (Fraction(1, 2), 0)
    assert lat.contains((Fraction(3, 2), Fraction(1, 2)))
    with pytest.raises(UsageError):
        lat.scaled(0)


def test_odd_class_membership():
    """Λ⁰ holds points with odd l⁰-value only."""
    odd = odd_class(7, 2)
    assert odd.rank == 7
    assert odd.contains((1, 0, 0, 0, 0, 0, 0))
    assert odd.contains((0, 0, 1, 0, 0, 0, 0))
    assert odd.contains((Fraction(1, 3),) * 7)
    assert not odd.contains(zero_vector(7))
    assert not odd.contains((2, 0, 0, 0, 0, 0, 0))
    assert not odd.contains((1, 1, 0, 0, 0, 0, 0))


def test_restrict_form_matches_evaluation():
    """g(y) = f(o + B·y) at sample coordinates."""
    lat = AffineLattice((1, 0), ((2, 0), (0, 1)))
    f = as_inhom(RadialForm(3, 1, 2), (Fraction(1, 2), 0), 2)
    g = restrict_form(f, lat)
    for y in ((0, 0), (1, 3), (-2, 1)):
        assert g.evaluate(y) == f.evaluate(lat.point(y))


def test_enumerate_unit_disc():
    """|x|² ≤ 1 on Z² is the origin and its four neighbours, sorted."""
    points = enumerate_in_ellipsoid(_z2(), _norm(2), 1)
    assert points == [(-1, 0), (0, -1), (0, 0), (0, 1), (1, 0)]


def test_enumerate_empty_when_bound_below_minimum():
    """A negative bound on a positive form finds nothing."""
    assert enumerate_in_ellipsoid(_z2(), _norm(2), -1) == []


def test_enumerate_rank_zero():
    """A single-point lattice returns its origin when it satisfies the bound."""
    point = affine_lattice_from_points([(1, 2)])
    assert enumerate_with_stats(point, _norm(2), 5) == ([(1, 2)], 1)
    assert enumerate_with_stats(point, _norm(2), 4) == ([], 1)


def test_enumerate_matches_exhaustive_box(rng):
    """Ellipsoid enumeration agrees with a box search on random forms."""
    lat = affine_lattice_from_points([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    for _ in range(8):
        form = RadialForm(rng.randint(1, 4), rng.randint(0, 3), 3)
        center = tuple(Fraction(rng.randint(-3, 3), 2) for _ in range(3))
        f = as_inhom(form, center, 0)
        bound = rng.randint(1, 10)
        expected = sorted(
            (Fraction(x), Fraction(y), Fraction(z))
            for x in range(-6, 7)
            for y in range(-6, 7)
            for z in range(-6, 7)
            if f.evaluate((x, y, z)) <= bound
        )
        assert enumerate_in_ellipsoid(lat, f, bound) == expected


def test_enumerate_rejects_indefinite_form():
    """Enumeration needs a positive definite quadratic part."""
    with pytest.raises(UsageError):
        enumerate_in_ellipsoid(_z2(), as_inhom(RadialForm(0, 1, 2), zero_vector(2), 0), 1)


def test_estimate_nodes():
    """∏(2⌊√(T/Dᵢ)⌋ + 1) is 9 for the unit disc on Z²."""
    assert estimate_nodes(_z2(), _norm(2), 1) == 9
    assert estimate_nodes(_z2(), _norm(2), -1) == 0


def test_node_budget_is_enforced():
    """Exceeding the node budget raises."""
    with pytest.raises(BudgetExceededError):
        enumerate_with_stats(_z2(), _norm(2), 100, node_budget=5)


def test_minimal_vectors_of_odd_class():
    """phi_main(7,1,2) has minimum 12 on Λ⁰(7,2), attained 56 times."""
    f = as_inhom(phi_main(7, 1, 2), zero_vector(7), 0)
    minimum, points, _ = minimal_vectors(odd_class(7, 2), f, 12)
    assert minimum == 12
    assert len(points) == 56


def test_minimal_vectors_are_canonical_reps_of_M():
    """Minimal vectors of positive pair forms on Λ⁰ represent ± points of M."""
    for d in (7, 8, 9):
        lat = ScaledLattice.for_parameters(d, 2)
        members = set(enumerate_M(d, 2))
        members |= {r.negated() for r in members}
        odd = odd_class(d, 2)
        for form in (RadialForm(1, 0, d), phi_main(d, 1, 2)):
            f = as_inhom(form, zero_vector(d), 0)
            # e₁ lies in Λ⁰, so its norm bounds the minimum
            minimum, points, _ = minimal_vectors(odd, f, form.A + form.B)
            assert minimum is not None
            for p in points:
                assert canonical_rep(p, lat) in members


def test_canonical_rep_of_second_section_vector():
    """(2/3, 2/3, −1/3⁵) has representative (2, −1)."""
    third = Fraction(1, 3)
    point = (2 * third, 2 * third) + (-third,) * 5
    assert canonical_rep(point, ScaledLattice(7, 3)) == CanonicalRep(2, -1, 7, 3)


def test_parity_and_rep_invariant_under_permutation(rng):
    """Permuting coordinates keeps parity and the canonical representative."""
    lat = ScaledLattice(9, 5)
    pf = ParityFunctional(9, 2)
    for rep in enumerate_M(9, 2):
        point = list(rep.point())
        for _ in range(5):
            rng.shuffle(point)
            assert canonical_rep(point, lat) == rep
            assert parity(point, pf) == rep.parity


def test_M_is_small():
    """|M| ≤ d + 1."""
    for d in range(5, 25):
        for k in range(2, (d - 1) // 2 + 1):
            assert len(enumerate_M(d, k)) <= d + 1


def test_affine_lattice_from_points_examples():
    """Z² from the unit triangle, 2Z from {0, 2}."""
    z2 = _z2()
    assert z2.generators == ((1, 0), (0, 1))
    line = affine_lattice_from_points([(0,), (2,)])
    assert line.generators == ((2,),)
    assert line.rank == 1


def test_affine_lattice_is_order_independent(rng):
    """The basis does not depend on the order of the points after the first."""
    points = [(0, 0, 0), (2, 4, 0), (0, 3, 3), (1, 1, 1), (4, 0, 2)]
    reference = affine_lattice_from_points(points)
    for _ in range(5):
        rest = points[1:]
        rng.shuffle(rest)
        assert affine_lattice_from_points([points[0], *rest]).generators == reference.generators


def test_g6_vertices_generate_rank_six(g6):
    """The G-tope's vertices span a rank-6 affine lattice."""
    assert affine_lattice_from_points(g6.vertices).rank == 6


def test_enumerate_odd_class_reference():
    """8|x|² + 4(j·x)² ≤ 12 on Λ⁰(7,2) holds 56 points, closed under symmetries."""
    f = as_inhom(phi_main(7, 1, 2), zero_vector(7), 0)
    points = enumerate_in_ellipsoid(odd_class(7, 2), f, 12)
    assert len(points) == 56
    found = set(points)
    assert all(tuple(-v for v in p) in found for p in points)
    assert all((p[1], p[0]) + p[2:] in found for p in points)


def test_canonical_rep_serialization():
    """Representatives serialize with their lattice context."""
    assert CanonicalRep(1, 0, 7, 3).to_dict() == {"l": 1, "a": 0, "d": 7, "n": 3}
    assert CanonicalRep(-2, 1, 7, 3).to_dict() == {"l": -2, "a": 1, "d": 7, "n": 3}
