"""2-torsion in class groups of monogenized cubic fields.

For a maximal monogenized cubic ring C with invariants (I, J), the classes
of integral quartics with invariants (I, J) form the group Cl2+(C)*; the
identity is the unique reducible class.  When Disc C > 0 the classes with
four real roots make up Cl2(C)*; when Disc C < 0 both groups agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .enumeration import count_quartic_classes, cubic_is_irreducible, eligible_pairs, fiber_classes
from .forms import InvariantPair, RootType, height4, monic_cubic_from_invariants
from .local import pair_is_strongly_maximal, splitting_type_cubic


class NonMaximalError(ValueError):
    pass


def _is_power_of_two(n):
    return n >= 1 and n & (n - 1) == 0


def field_is_admissible(pair):
    """Irreducible monic cubic whose ring is maximal."""
    g = monic_cubic_from_invariants(pair)
    return cubic_is_irreducible(g) and pair_is_strongly_maximal(pair)


def _sizes_from_classes(pair, classes):
    reducible = [c for c in classes if not c.irreducible]
    if len(reducible) != 1:
        raise ArithmeticError(f"{tuple(pair)}: {len(reducible)} reducible classes, expected 1")
    total = len(classes)
    if pair.disc_numerator > 0:
        narrow = total
        ordinary = sum(1 for c in classes if c.root_type is RootType.FOUR_REAL)
    else:
        narrow = ordinary = total
    if not (_is_power_of_two(ordinary) and _is_power_of_two(narrow)):
        raise ArithmeticError(f"{tuple(pair)}: sizes {ordinary}, {narrow} are not powers of two")
    if ordinary > narrow:
        raise ArithmeticError(f"{tuple(pair)}: Cl2 larger than Cl2+")
    return ordinary, narrow


def cl2_counts(pair, cache=None):
    """(#Cl2(C)*, #Cl2+(C)*) for the monogenized ring with these invariants."""
    pair = InvariantPair(*pair)
    if pair.disc_numerator == 0:
        raise ValueError("zero discriminant")
    g = monic_cubic_from_invariants(pair)
    if not cubic_is_irreducible(g):
        raise ValueError(f"{tuple(pair)}: reducible cubic")
    if not pair_is_strongly_maximal(pair):
        raise NonMaximalError(f"{tuple(pair)}: cubic ring is not maximal")
    return _sizes_from_classes(pair, fiber_classes(pair, cache))


@dataclass
class ClassGroupAverage:
    X: Fraction
    signature: str
    narrow: bool
    fields: int = 0
    size_sum: int = 0
    histogram: dict = field(default_factory=dict)

    @property
    def mean(self):
        return Fraction(self.size_sum, self.fields) if self.fields else None


TARGETS = {("totally-real", False): Fraction(3, 2),
           ("complex", False): Fraction(2),
           ("totally-real", True): Fraction(5, 2)}


def _conditions_hold(pair, conditions):
    g = monic_cubic_from_invariants(pair)
    return all(splitting_type_cubic(g, p).value == sym for p, sym in conditions)


def mcc_averages(X, signature="totally-real", narrow=False, local_conditions=(), cache=None):
    """Average #Cl2 (or #Cl2+) over maximal monogenized cubic fields of the
    given signature with H < X.

    local_conditions: pairs (p, splitting symbol such as "(111)") imposed on
    the monic cubic."""
    if signature not in ("totally-real", "complex"):
        raise ValueError(f"unknown signature {signature!r}")
    sign = 1 if signature == "totally-real" else -1
    out = ClassGroupAverage(Fraction(X), signature, narrow)
    for pair in eligible_pairs(X, sign):
        if local_conditions and not _conditions_hold(pair, local_conditions):
            continue
        if not field_is_admissible(pair):
            continue
        ordinary, wide = _sizes_from_classes(pair, fiber_classes(pair, cache))
        n = wide if narrow else ordinary
        out.fields += 1
        out.size_sum += n
        out.histogram[n] = out.histogram.get(n, 0) + 1
    if cache is not None:
        cache.flush()
    return out


def doubling_ladder(top, rungs):
    """top / 2^(rungs-1), ..., top / 2, top."""
    return [Fraction(top, 2 ** k) for k in range(rungs - 1, -1, -1)]


def strongly_maximal_class_count(X, root_type=None, cache=None):
    """Irreducible classes with H < X whose resolvent ring is maximal, by root type."""
    types = None if root_type in (None, "all") else [RootType(root_type).value]
    return count_quartic_classes(X, root_types=types, predicate="strongly-maximal", cache=cache)


def mcc_ladder(ladder, local_conditions=(), cache=None):
    """All three averages on every rung of the ladder from one pass over the
    top rung.  Returns {rung: {(signature, narrow): ClassGroupAverage}}."""
    ladder = sorted(Fraction(X) for X in ladder)
    out = {X: {key: ClassGroupAverage(X, *key) for key in TARGETS} for X in ladder}
    for pair in eligible_pairs(ladder[-1]):
        if local_conditions and not _conditions_hold(pair, local_conditions):
            continue
        if not field_is_admissible(pair):
            continue
        ordinary, wide = _sizes_from_classes(pair, fiber_classes(pair, cache))
        signature = "totally-real" if pair.disc_numerator > 0 else "complex"
        h4 = height4(*pair)
        for X in ladder:
            if h4 >= 4 * X:
                continue
            for narrow, n in ((False, ordinary), (True, wide)):
                key = (signature, narrow)
                if key not in out[X]:
                    continue
                a = out[X][key]
                a.fields += 1
                a.size_sum += n
                a.histogram[n] = a.histogram.get(n, 0) + 1
    if cache is not None:
        cache.flush()
    return out
