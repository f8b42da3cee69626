import json
from fractions import Fraction
from pathlib import Path

import sympy
from hypothesis import given, settings, strategies as st

from binquartic.enumeration import (
    ClassCount,
    certify_fibers,
    classes_with_invariants,
    coefficient_condition,
    congruence_count,
    count_eligible_pairs,
    count_quartic_classes,
    eligibility_census,
    eligible_pairs,
    monic_cubic_classes,
    n_below,
    n_monogenized_cubic_count,
    nonincreasing_within_noise,
)
from binquartic.forms import QuarticForm, quartic_disc, quartic_invariants
from binquartic.reduction import brute_force_orbits, canonical

DATA = Path(__file__).parent / "data"


def test_eligible_pairs_below_30():
    assert list(eligible_pairs(30, "+")) == [(3, 0)]
    assert set(eligible_pairs(30, "-")) == {(-3, 0), (-2, -7), (-2, 7)}


def test_census():
    cells = eligibility_census()
    assert len(cells) == 9 and len(set(cells)) == 9


def test_arithmetic_count_matches_listing():
    for X in (30, 1000, 12345, Fraction(54321, 2)):
        for sign in "+-":
            assert count_eligible_pairs(X, sign) == sum(1 for _ in eligible_pairs(X, sign))


def test_fiber_examples():
    assert classes_with_invariants((3, -27)) == [QuarticForm(0, -1, 0, 1, 1)]
    assert len(classes_with_invariants((7, 7))) == 1
    assert len(classes_with_invariants((12, 0))) == 4


def test_fibers_match_frozen_oracle():
    data = json.loads((DATA / "oracle_classes.json").read_text())
    for key, forms in data["fibers"].items():
        pair = tuple(int(t) for t in key.split())
        assert classes_with_invariants(pair) == sorted(QuarticForm(*f) for f in forms)
    assert set(data["fibers"]) == {f"{p.I} {p.J}" for p in eligible_pairs(30)}


def test_every_small_box_orbit_is_enumerated():
    orbits = brute_force_orbits(2, irreducible_only=False)
    fibers = {}
    for rep in orbits:
        pair = quartic_invariants(rep)
        if pair not in fibers:
            fibers[pair] = set(classes_with_invariants(pair))
        assert canonical(rep) in fibers[pair]


coef = st.integers(-15, 15)


@settings(max_examples=60, deadline=None)
@given(st.builds(QuarticForm, coef, coef, coef, coef, coef).filter(lambda f: quartic_disc(f) != 0))
def test_random_form_lands_in_its_fiber(f):
    assert canonical(f) in classes_with_invariants(quartic_invariants(f))


def test_box_certification():
    assert certify_fibers(eligible_pairs(3000), fraction=0.05, seed=1) == []


def test_monic_classes_biject_with_pairs():
    X = 5000
    classes = list(monic_cubic_classes(X))
    assert len(classes) == sum(1 for _ in eligible_pairs(X))
    assert all(c.cubic[1] in (-1, 0, 1) for c in classes)


def test_congruence_count():
    kept, total = congruence_count(2000, coefficient_condition(3, 2, [0]))
    assert 0 < kept < total
    assert congruence_count(2000) == (total, total)


def test_count_small():
    res = count_quartic_classes(1000)
    assert isinstance(res, ClassCount)
    assert res.irreducible == 0  # fibers below 1000 hold only reducible classes
    # each fiber holds its monic lift; non-maximal fibers may hold more
    assert res.reducible >= sum(1 for _ in eligible_pairs(1000))


def test_n_below_exact():
    assert n_below(10 ** 4, Fraction(1, 4)) == 9  # 10 < 10^(4/4) fails
    assert n_below(10 ** 4 + 1, Fraction(1, 4)) == 10


def _naive_n_monogenized(X, delta):
    """Direct scan with sympy factorization (independent of the fast path)."""
    x = sympy.Symbol("x")
    pos = neg = 0
    for n in range(1, n_below(X, delta) + 1):
        lim = 4 * X * n * n
        qroot = int(lim ** 0.5) + 1
        for b in range(3 * n):
            for c in range(-lim, lim + 1):
                P = b * b - 3 * n * c
                if 4 * abs(P) ** 3 >= lim:
                    continue
                base = 2 * b ** 3 - 9 * n * b * c
                reach = (abs(base) + qroot) // (27 * n * n) + 1
                for d in range(-reach, reach + 1):
                    Q = base + 27 * n * n * d
                    num = 4 * P ** 3 - Q * Q
                    if Q * Q >= lim or num == 0:
                        continue
                    if not sympy.Poly(n * x ** 3 + b * x ** 2 + c * x + d, x, domain="QQ").is_irreducible:
                        continue
                    if num > 0:
                        pos += 1
                    else:
                        neg += 1
    return pos, neg


def test_n_monogenized_matches_naive_scan():
    X, delta = 1500, Fraction(1, 4)
    counts = n_monogenized_cubic_count(X, delta)
    assert min(counts) > 0
    assert counts == _naive_n_monogenized(X, delta)


def test_nonincreasing_within_noise():
    assert nonincreasing_within_noise([Fraction(1, 2), Fraction(1, 3)], [10, 100])
    assert not nonincreasing_within_noise([Fraction(1, 10), Fraction(9, 10)], [1000, 1000])
