"""Integral binary quartic forms: invariants, GL2(Z)-classes by height,
local densities, 2-Selmer groups and class-group 2-torsion statistics."""
from .forms import InvariantPair, QuarticForm, CubicForm, RootType, quartic_invariants
from .reduction import reduce_quartic, canonical
from .enumeration import eligible_pairs, classes_with_invariants, count_quartic_classes

__version__ = "0.1.0"
