"""Tests for core/forms.py."""
from fractions import Fraction

import pytest

from pdelaunay.core.errors import NotProportionalError, ParameterOutOfRange, UsageError
from pdelaunay.core.exact_arith import is_positive_definite, zero_vector
from pdelaunay.core.forms import (
    PairForm,
    RadialForm,
    as_inhom,
    degenerate_perfect_form,
    eval_phi12,
    pair_to_radial,
    phi_main,
    proportional,
    radial_to_pair,
)


def test_eval_phi12_of_j():
    """j has φ₁ = d² and φ₂ = 0."""
    assert eval_phi12([1, 1, 1, 1]) == (16, 0)


def test_eval_phi12_of_unit_vector():
    """e₁ has φ₁ = 1 and φ₂ = 1 − 1/d."""
    assert eval_phi12([1, 0, 0, 0, 0]) == (1, Fraction(4, 5))


def test_eval_phi12_empty():
    """Empty vectors are rejected."""
    with pytest.raises(UsageError):
        eval_phi12([])


def test_phi_main_values():
    """Closed form coefficients at the two reference parameter sets."""
    assert phi_main(7, 1, 2) == RadialForm(8, 4, 7)
    assert phi_main(13, 1, 4) == RadialForm(16, 18, 13)


@pytest.mark.parametrize("d,s,k", [(6, 1, 2), (7, 0, 2), (7, 1, 1), (7, 1, 4), (12, 1, 4)])
def test_phi_main_out_of_range(d, s, k):
    """phi_main is defined only for s ≥ 1, k ≥ 2, d ≥ k(2s+1)+1."""
    with pytest.raises(ParameterOutOfRange):
        phi_main(d, s, k)


def test_phi_main_positive_definite_on_grid():
    """Every admissible phi_main with d ≤ 24 has a positive definite Gram matrix."""
    for k in range(2, 12):
        for s in range(1, 12):
            for d in range(k * (2 * s + 1) + 1, 25):
                form = phi_main(d, s, k)
                assert form.is_positive_definite
                assert is_positive_definite(form.gram())


def test_radial_positive_definite_criterion():
    """A > 0 and A + B·d > 0 is the exact criterion."""
    assert RadialForm(1, Fraction(-1, 8), 7).is_positive_definite
    assert not RadialForm(1, Fraction(-1, 7), 7).is_positive_definite
    assert not RadialForm(0, 1, 7).is_positive_definite


def test_pair_radial_conversion():
    """α·φ₁ + β·φ₂ and A·|x|² + B·(j·x)² agree on sample vectors."""
    pair = PairForm(Fraction(3, 7), Fraction(2, 3), 7)
    radial = pair_to_radial(pair)
    assert radial == RadialForm(Fraction(2, 3), Fraction(1, 3), 7)
    assert radial_to_pair(radial) == pair
    for x in ([1, 0, 0, 0, 0, 0, 0], [1, -1, 2, 0, 0, 3, 1], [Fraction(1, 3)] * 7):
        assert pair.evaluate(x) == radial.evaluate(x)


def test_gram_matches_evaluate():
    """xᵀ·gram·x reproduces RadialForm.evaluate."""
    form = RadialForm(8, 4, 7)
    x = (Fraction(1), Fraction(-2), Fraction(0), Fraction(1, 3), Fraction(0), Fraction(5), Fraction(1))
    gram = form.gram()
    assert sum(a * b for a, b in zip(x, gram.mat_vec(x))) == form.evaluate(x)


def test_as_inhom_centers_the_form():
    """as_inhom vanishes exactly on the sphere of the given radius."""
    form = RadialForm(1, 0, 2)
    f = as_inhom(form, [Fraction(1, 2), Fraction(1, 2)], Fraction(1, 2))
    for corner in ([0, 0], [0, 1], [1, 0], [1, 1]):
        assert f.evaluate(corner) == 0
    assert f.evaluate([Fraction(1, 2), Fraction(1, 2)]) == Fraction(-1, 2)


def test_vertex_norm_under_phi_main(c7_half):
    """Half vertices of P(7,1,2) all sit at norm 3 under phi_main(7,1,2)."""
    f = as_inhom(phi_main(7, 1, 2), zero_vector(7), 0)
    assert {f.evaluate(v) for v in c7_half} == {3}


def test_degenerate_perfect_form_vanishes_on_layers():
    """(a·x)(a·x − 1) is zero on both layers and positive beyond them."""
    p = degenerate_perfect_form([1, 0, 0])
    assert p.evaluate([0, 5, -2]) == 0
    assert p.evaluate([1, 3, 3]) == 0
    assert p.evaluate([2, 0, 0]) == 2


def test_degenerate_perfect_form_requires_functional():
    """a = 0 is rejected."""
    with pytest.raises(UsageError):
        degenerate_perfect_form([0, 0])


def test_proportional_returns_ratio():
    """Scaled quadratics are proportional with the scale as ratio."""
    f = as_inhom(RadialForm(8, 4, 7), zero_vector(7), 3)
    assert proportional(f, f.scaled(Fraction(-5, 2))) == Fraction(-5, 2)


def test_proportional_rejects_mismatch():
    """Different forms are not proportional."""
    f = as_inhom(RadialForm(8, 4, 7), zero_vector(7), 3)
    g = as_inhom(RadialForm(8, 5, 7), zero_vector(7), 3)
    with pytest.raises(NotProportionalError):
        proportional(f, g)


def test_proportional_rejects_zero_multiple():
    """c = 0 is not a valid ratio."""
    f = as_inhom(RadialForm(1, 0, 2), zero_vector(2), 1)
    with pytest.raises(NotProportionalError):
        proportional(f, f.scaled(0))


def test_proportional_zero_reference():
    """A zero reference quadratic is a usage error."""
    zero = as_inhom(RadialForm(1, 0, 2), zero_vector(2), 0).scaled(0)
    with pytest.raises(UsageError):
        proportional(zero, zero)


def test_pair_to_radial_examples():
    """(1/d, 1) is |x|², (1, 0) is (j·x)²."""
    assert pair_to_radial(PairForm(Fraction(1, 7), 1, 7)) == RadialForm(1, 0, 7)
    assert pair_to_radial(PairForm(1, 0, 7)) == RadialForm(0, 1, 7)


def test_phi_main_coefficient_identity_for_g_topes():
    """phi_main(d+1, 1, 2) = (8(d−5), d² − 9d + 22)."""
    for d in range(6, 31):
        assert phi_main(d + 1, 1, 2) == RadialForm(8 * (d - 5), d * d - 9 * d + 22, d + 1)


def test_phi12_invariant_under_signed_permutations(rng):
    """φ₁ and φ₂ depend only on |x|² and j·x, so x ↦ −x and permutations keep them."""
    for _ in range(20):
        x = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(6)]
        shuffled = x[:]
        rng.shuffle(shuffled)
        assert eval_phi12(shuffled) == eval_phi12(x)
        assert eval_phi12([-v for v in x]) == eval_phi12(x)
