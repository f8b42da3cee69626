from fractions import Fraction

from hypothesis import given, strategies as st

from binquartic.reduction import SMALL_MATRICES
from binquartic.forms import (
    A1_DOUBLED,
    CubicForm,
    InvariantPair,
    QuarticForm,
    RootType,
    act_twisted,
    act_untwisted,
    cubic_invariants,
    det2,
    has_rational_linear_factor,
    height4,
    is_eligible,
    is_irreducible_q,
    matmul2,
    monic_cubic_from_invariants,
    monic_lift,
    phi_embed,
    pair_resolvent,
    quartic_disc,
    quartic_invariants,
    resolvent_cubic,
    rho,
    root_type,
    substitute_quartic,
    translate_cubic,
    act_on_pair,
)

coef = st.integers(-30, 30)
quartics = st.builds(QuarticForm, coef, coef, coef, coef, coef)
small = st.integers(-3, 3)
matrices = st.tuples(st.tuples(small, small), st.tuples(small, small)).filter(lambda g: det2(g) != 0)
unimodular = st.sampled_from(SMALL_MATRICES)


def test_invariants_of_x4_plus_y4():
    assert quartic_invariants(QuarticForm(1, 0, 0, 0, 1)) == (12, 0)
    assert quartic_disc(QuarticForm(1, 0, 0, 0, 1)) == 256


def test_invariants_of_monic_lift_example():
    # x^3 y - x y^3 + y^4: I = c^2 - 3bd = 3, J = -27 e b^2 + ... = -27
    f = QuarticForm(0, 1, 0, -1, 1)
    assert quartic_invariants(f) == (3, -27)


def test_height_uses_four_times_scale():
    assert height4(-3, -27) == max(4 * 27, 729)


def test_eligibility_examples():
    assert is_eligible(InvariantPair(3, 0))
    assert is_eligible(InvariantPair(-2, 7))
    assert is_eligible(InvariantPair(7, 7))
    assert not is_eligible(InvariantPair(2, 0))
    assert not is_eligible(InvariantPair(3, 9))


def test_monic_cubic_round_trip():
    for pair in [(3, -27), (7, 7), (12, 0), (-2, 7)]:
        g = monic_cubic_from_invariants(InvariantPair(*pair))
        assert g[0] == 1
        assert cubic_invariants(g) == pair
        assert quartic_invariants(monic_lift(g)) == pair


def test_root_types():
    assert root_type(QuarticForm(1, 0, 0, 0, 1)) is RootType.NONE_REAL_POS
    assert root_type(QuarticForm(-1, 0, 0, 0, -1)) is RootType.NONE_REAL_NEG
    assert root_type(QuarticForm(1, 0, -5, 0, 4)) is RootType.FOUR_REAL  # (x^2-1)(x^2-4)
    assert root_type(QuarticForm(1, 0, 0, 0, -1)) is RootType.TWO_REAL


def test_reducibility():
    assert has_rational_linear_factor(QuarticForm(0, 1, 0, -1, 1))
    assert not is_irreducible_q(QuarticForm(1, 0, -5, 0, 4))
    assert not is_irreducible_q(QuarticForm(1, 0, 1, 0, 1))  # (x^2+x+1)(x^2-x+1)
    assert is_irreducible_q(QuarticForm(1, 0, 0, 0, 2))
    assert not is_irreducible_q(QuarticForm(1, 0, 0, 0, 4))  # (x^2+2x+2)(x^2-2x+2)


def test_translate_cubic():
    g = CubicForm(1, 3, 0, 0)
    assert translate_cubic(g, -1) == CubicForm(1, 0, -3, 2)


@given(quartics, unimodular)
def test_untwisted_action_preserves_invariants(f, g):
    assert quartic_invariants(act_untwisted(g, f)) == quartic_invariants(f)


@given(quartics, matrices)
def test_twisted_action_preserves_invariants(f, g):
    assert quartic_invariants(act_twisted(g, f)) == quartic_invariants(f)


@given(quartics, unimodular, unimodular)
def test_left_action(f, g, h):
    assert act_untwisted(matmul2(g, h), f) == act_untwisted(g, act_untwisted(h, f))


@given(quartics, matrices)
def test_hand_expanded_substitution(f, g):
    x, y = 3, -2
    (p, q), (r, s) = g
    assert QuarticForm(*substitute_quartic(f, g))(x, y) == f(p * x + r * y, q * x + s * y)


@given(quartics)
def test_resolvent_shares_invariants(f):
    assert cubic_invariants(resolvent_cubic(f)) == quartic_invariants(f)


@given(quartics)
def test_pair_resolvent_matches_resolvent_cubic(f):
    assert pair_resolvent(phi_embed(f)) == resolvent_cubic(f)


@given(matrices)
def test_rho_orthogonal(g):
    R = rho(g)
    A = A1_DOUBLED
    RA = [[sum(R[i][k] * A[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    RART = [[sum(RA[i][k] * R[j][k] for k in range(3)) for j in range(3)] for i in range(3)]
    assert RART == [list(r) for r in A]


@given(quartics, matrices)
def test_phi_equivariant(f, g):
    assert phi_embed(act_twisted(g, f)) == act_on_pair(g, phi_embed(f))


def test_twisted_action_rational_entries():
    f = QuarticForm(1, 0, 0, 0, 1)
    g = ((2, 0), (0, 1))
    assert act_twisted(g, f) == QuarticForm(4, 0, 0, 0, Fraction(1, 4))
