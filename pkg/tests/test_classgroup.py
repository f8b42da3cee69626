import pytest

from binquartic.classgroup import (
    NonMaximalError,
    cl2_counts,
    doubling_ladder,
    field_is_admissible,
    mcc_averages,
    mcc_ladder,
)
from binquartic.forms import CubicForm, cubic_invariants


def test_small_fields_have_trivial_two_torsion():
    assert cl2_counts((3, -27)) == (1, 1)  # disc -23
    assert cl2_counts((7, 7)) == (1, 1)


def test_non_maximal_ring_rejected():
    pair = cubic_invariants(CubicForm(1, 0, 0, 4))  # x^3 + 4 is not maximal at 2
    assert not field_is_admissible(pair)
    with pytest.raises(NonMaximalError):
        cl2_counts(pair)


def test_reducible_and_degenerate_rejected():
    with pytest.raises(ValueError):
        cl2_counts((12, 0))  # x^3 - 4x has the root 0
    with pytest.raises(ValueError):
        cl2_counts((9, 54))  # zero discriminant


@pytest.mark.parametrize("signature", ["totally-real", "complex"])
def test_sizes_are_powers_of_two(signature):
    # _sizes_from_classes raises on a non-power of two or a missing identity
    for narrow in (False, True):
        avg = mcc_averages(10 ** 4, signature, narrow)
        assert avg.fields > 0
        assert all(n & (n - 1) == 0 for n in avg.histogram)


def test_splitting_condition_restricts():
    full = mcc_averages(10 ** 4, "complex")
    some = mcc_averages(10 ** 4, "complex", local_conditions=[(3, "(111)")])
    assert 0 < some.fields < full.fields


def test_ladder_agrees_with_single_runs():
    ladder = doubling_ladder(10 ** 4, 2)
    rungs = mcc_ladder(ladder)
    for X in ladder:
        direct = mcc_averages(X, "complex")
        assert rungs[X][("complex", False)].histogram == direct.histogram


def test_unknown_signature():
    with pytest.raises(ValueError):
        mcc_averages(100, "mixed")
