"""Eligible invariant pairs, monic and n-leading cubic classes, and the
complete list of GL2(Z)-classes of quartics in each (I, J) fiber."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels
from .forms import (
    CubicForm,
    InvariantPair,
    QuarticForm,
    RootType,
    cubic_disc,
    cubic_invariants,
    height4,
    is_eligible,
    is_irreducible_q,
    monic_cubic_from_invariants,
    quartic_invariants,
    root_type,
)
from .reduction import canonical_near, in_domain, reduce_quartic, stabilizer_order_z

# Sup of |a|, |b|, |c| over forms of height 1 whose covariant point lies in
# the fundamental domain is about 0.471, 1.326, 1.609 (dense numeric scan,
# see scripts/box_constants.py); ten percent is added on top.
BOX_CONSTANTS = (0.52, 1.46, 1.77)

# the int64 kernel is safe for H = H4/4 up to about 1e13; stay well below
INT64_HEIGHT_LIMIT = 10 ** 11


def _as_fraction(X):
    return X if isinstance(X, Fraction) else Fraction(X)


def _max_abs_below(bound4):
    """Largest integer m >= 0 with m*m < bound4 (bound4 a positive Fraction)."""
    # m^2 < p/q  <=>  m^2 q < p
    p, q = bound4.numerator, bound4.denominator
    m = math.isqrt(max(p // q, 0))
    while m * m * q >= p and m > 0:
        m -= 1
    while (m + 1) * (m + 1) * q < p:
        m += 1
    return m if m * m * q < p else -1


def _max_abs_cube_below(X):
    # largest m >= 0 with m^3 < X
    m = int(round(float(X) ** (1 / 3))) + 2
    while m >= 0 and m ** 3 >= X:
        m -= 1
    return m


# ---------------------------------------------------------------- eligible pairs

_ELIGIBLE_J = {}
for _i in range(9):
    _ELIGIBLE_J[_i] = tuple(j for j in range(27) if is_eligible((_i, j)))


def _j_range(X):
    X = _as_fraction(X)
    return _max_abs_below(4 * X)


def _sign_key(sign):
    keys = {None: None, "+": "+", "-": "-", 1: "+", -1: "-"}
    if sign not in keys:
        raise ValueError(f"disc_sign must be '+', '-' or None, not {sign!r}")
    return keys[sign]


def eligible_pairs(X, disc_sign=None):
    """Eligible (I, J) with H < X, ordered by I then J.

    disc_sign: '+', '-' or None (both signs; zero discriminant excluded)."""
    disc_sign = _sign_key(disc_sign)
    X = _as_fraction(X)
    jmax = _j_range(X)
    imax = _max_abs_cube_below(X)
    for I in range(-imax, imax + 1):
        cube4 = 4 * I ** 3
        residues = _ELIGIBLE_J[I % 9]
        if not residues:
            continue
        out = []
        for r in residues:
            start = -jmax + ((r + jmax) % 27)
            out.extend(range(start, jmax + 1, 27))
        for J in sorted(out):
            num = cube4 - J * J
            if num == 0:
                continue
            if disc_sign == "+" and num < 0 or disc_sign == "-" and num > 0:
                continue
            yield InvariantPair(I, J)


def count_eligible_pairs(X, disc_sign):
    """Number of eligible pairs with H < X and the given discriminant sign,
    counted arithmetically (no listing)."""
    disc_sign = _sign_key(disc_sign)
    if disc_sign is None:
        return count_eligible_pairs(X, "+") + count_eligible_pairs(X, "-")
    X = _as_fraction(X)
    jmax = _j_range(X)
    imax = _max_abs_cube_below(X)
    total = 0
    for I in range(-imax, imax + 1):
        residues = _ELIGIBLE_J[I % 9]
        if not residues:
            continue
        cube4 = 4 * I ** 3
        # |J| below which the discriminant is positive: J^2 < 4I^3
        if cube4 > 0:
            pos = _max_abs_below(Fraction(cube4))
            pos = min(pos, jmax)
        else:
            pos = -1
        for r in residues:
            n_all = _count_progression(-jmax, jmax, r)
            n_pos = _count_progression(-pos, pos, r) if pos >= 0 else 0
            if disc_sign == "+":
                total += n_pos
            else:
                n_zero = 0
                if cube4 >= 0:
                    root = math.isqrt(cube4)
                    if root * root == cube4 and root <= jmax:
                        n_zero = sum(1 for J in {root, -root} if J % 27 == r)
                total += n_all - n_pos - n_zero
    return total


def _count_progression(lo, hi, r, m=27):
    """#{J in [lo, hi] : J = r mod m}"""
    if hi < lo:
        return 0
    return (hi - r) // m - (lo - 1 - r) // m


def eligibility_census():
    """Eligible cells of (Z/9) x (Z/27)."""
    return [(i, j) for i in range(9) for j in range(27) if is_eligible((i, j))]


# ---------------------------------------------------------------- monic cubics

class MonicClass(NamedTuple):
    pair: InvariantPair
    cubic: CubicForm
    irreducible: bool


def cubic_is_irreducible(g):
    """No rational root on P^1 (for a binary cubic that is the same as irreducible)."""
    a, b, c, d = g
    if a == 0 or d == 0:
        return False
    for q in _divisors(a):
        for p in _divisors(d):
            if g(p, q) == 0 or g(-p, q) == 0:
                return False
    return True


def _divisors(n):
    n = abs(n)
    out = []
    k = 1
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            if k * k != n:
                out.append(n // k)
        k += 1
    return out


def monic_cubic_classes(X, disc_sign=None):
    for p in eligible_pairs(X, disc_sign):
        g = monic_cubic_from_invariants(p)
        yield MonicClass(p, g, cubic_is_irreducible(g))


# ---------------------------------------------------------------- fibers

class QuarticClass(NamedTuple):
    form: QuarticForm
    irreducible: bool
    root_type: RootType
    stabilizer: int


def box_bounds(pair, scale=1.0, constants=BOX_CONSTANTS):
    h = (height4(*pair) / 4) ** (1 / 6)
    return tuple(int(math.floor(k * scale * h)) + 1 for k in constants)


def fiber_forms(pair, scale=1.0, constants=BOX_CONSTANTS):
    """Every integral form with invariants pair inside the search box."""
    I, J = pair
    amax, bmax, cmax = box_bounds(pair, scale, constants)
    if height4(I, J) <= 4 * INT64_HEIGHT_LIMIT and scale <= 2:
        cap = 256
        while True:
            out = np.zeros((cap, 5), dtype=np.int64)
            n = _kernels.fiber_solutions(I, J, amax, bmax, cmax, out)
            if n <= cap:
                return [QuarticForm(*map(int, row)) for row in out[:n]]
            cap = n
    return list(_fiber_forms_exact(I, J, amax, bmax, cmax))


def _fiber_forms_exact(I, J, amax, bmax, cmax):
    # same search as the compiled kernel, with unbounded integers
    for a in range(-amax, amax + 1):
        for b in range(-bmax, bmax + 1):
            for c in range(-cmax, cmax + 1):
                if a == 0:
                    if b == 0:
                        continue
                    t = c * c - I
                    if t % (3 * b):
                        continue
                    d = t // (3 * b)
                    u = 9 * b * c * d - 2 * c ** 3 - J
                    if u % (27 * b * b):
                        continue
                    cands = [(d, u // (27 * b * b))]
                else:
                    qa = 324 * a * a
                    qb = -(324 * a * b * c - 81 * b ** 3)
                    qc = -((72 * a * c - 27 * b * b) * (I - c * c) - 24 * a * c ** 3 - 12 * a * J)
                    disc = qb * qb - 4 * qa * qc
                    if disc < 0:
                        continue
                    r = math.isqrt(disc)
                    if r * r != disc:
                        continue
                    cands = []
                    for num in {-qb + r, -qb - r}:
                        if num % (2 * qa):
                            continue
                        d = num // (2 * qa)
                        t = I - c * c + 3 * b * d
                        if t % (12 * a):
                            continue
                        cands.append((d, t // (12 * a)))
                for d, e in cands:
                    f = QuarticForm(a, b, c, d, e)
                    if quartic_invariants(f) == (I, J):
                        yield f


def classes_with_invariants(pair, scale=1.0, constants=BOX_CONSTANTS):
    """Canonical representatives of all GL2(Z)-classes with these invariants."""
    pair = InvariantPair(*pair)
    if not is_eligible(pair):
        raise ValueError(f"{tuple(pair)} is not an eligible pair")
    if pair.disc_numerator == 0:
        raise ValueError("zero discriminant")
    forms = fiber_forms(pair, scale, constants)
    reps = set()
    lead = [f for f in forms if f.a]
    if lead:
        pts = np.zeros((len(lead), 2))
        _kernels.covariant_batch(np.array(lead, dtype=np.float64), pts)
        for f, (x, y) in zip(lead, pts):
            z = complex(x, y)
            # every class has a member with covariant point in the domain
            # inside the box, so members outside the domain can be skipped
            if in_domain(z):
                reps.add(canonical_near(f, z)[0])
    for f in forms:
        if not f.a:
            reps.add(reduce_quartic(f)[0])
    return sorted(reps)


def describe_class(f):
    return QuarticClass(f, is_irreducible_q(f), root_type(f), stabilizer_order_z(f))


def certify_fibers(pairs, fraction=0.01, seed=0, scale=1.5):
    """Re-run a random sample of fibers with boxes enlarged by scale and
    return the pairs whose class lists changed (empty means certified)."""
    rng = random.Random(seed)
    pairs = list(pairs)
    k = max(1, int(round(fraction * len(pairs)))) if pairs else 0
    sample = rng.sample(pairs, min(k, len(pairs)))
    return [p for p in sample
            if classes_with_invariants(p) != classes_with_invariants(p, scale=scale)]


# ---------------------------------------------------------------- counting

TYPE_KEYS = ("0", "1", "2+", "2-")


@dataclass
class ClassCount:
    X: Fraction
    counts: dict = field(default_factory=lambda: {k: 0 for k in TYPE_KEYS})
    weighted: dict = field(default_factory=lambda: {k: Fraction(0) for k in TYPE_KEYS})
    reducible: int = 0
    big_stabilizer: int = 0
    quadratic_products: int = 0
    fibers: dict = field(default_factory=dict)

    def by_index(self, i, weighted=False):
        src = self.weighted if weighted else self.counts
        if i == 2:
            return src["2+"] + src["2-"]
        return src[str(i)]

    @property
    def irreducible(self):
        return sum(self.counts.values())


def fiber_classes(pair, cache=None):
    """Described classes of a fiber, via the cache when one is given."""
    forms = None
    if cache is not None:
        forms = cache.get(pair)
    if forms is None:
        forms = classes_with_invariants(pair)
        if cache is not None:
            cache.put(pair, forms)
    return [describe_class(f) for f in forms]


def count_quartic_classes(X, root_types=None, predicate=None, cache=None, keep_fibers=False):
    """Irreducible GL2(Z)-classes with H < X, by root type.

    predicate: None or a callable on the InvariantPair deciding whether a
    fiber takes part (e.g. strong maximality of its resolvent)."""
    from .local import pair_is_strongly_maximal

    if predicate == "strongly-maximal":
        predicate = pair_is_strongly_maximal
    X = _as_fraction(X)
    res = ClassCount(X)
    wanted = set(root_types) if root_types else set(TYPE_KEYS)
    for pair in eligible_pairs(X):
        if predicate is not None and not predicate(pair):
            continue
        classes = fiber_classes(pair, cache)
        if keep_fibers:
            res.fibers[pair] = classes
        for cl in classes:
            if not cl.irreducible:
                res.reducible += 1
                if not _has_linear_factor(cl.form):
                    res.quadratic_products += 1
                continue
            key = cl.root_type.value
            if key not in wanted:
                continue
            res.counts[key] += 1
            res.weighted[key] += Fraction(2, cl.stabilizer)
            if cl.stabilizer > 2:
                res.big_stabilizer += 1
    if cache is not None:
        cache.flush()
    return res


def _has_linear_factor(f):
    from .forms import has_rational_linear_factor
    return has_rational_linear_factor(f)


# ---------------------------------------------------------------- n-monogenized

def _cube_root_floor_below(v):
    """Largest integer m >= 0 with m^3 < v, v a positive Fraction."""
    m = int(float(v) ** (1 / 3)) + 2
    while m > 0 and m ** 3 >= v:
        m -= 1
    return m


def n_below(X, delta):
    """Largest n with n < X^delta, decided exactly for rational delta."""
    delta = Fraction(delta)
    X = _as_fraction(X)
    p, q = delta.numerator, delta.denominator
    # n < X^(p/q)  <=>  n^q < X^p
    n = int(float(X) ** float(delta)) + 2
    while n > 0 and Fraction(n) ** q >= X ** p:
        n -= 1
    return n


def n_monogenized_cubic_count(X, delta):
    """(N3 with positive discriminant, N3 with negative discriminant).

    Forms n x^3 + b x^2y + c xy^2 + d y^3 with 1 <= n < X^delta, b in [0, 3n),
    irreducible, and max(4|P|^3, Q^2) < 4 X n^2, where P and Q are the
    integral invariants.  The division by n^2 puts the height on the scale
    used for monic cubics (n = 1 is exactly the monic count)."""
    delta = Fraction(delta)
    if not 0 < delta <= Fraction(1, 4):
        raise ValueError("delta must lie in (0, 1/4]")
    X = _as_fraction(X)
    pos = neg = 0
    for n in range(1, n_below(X, delta) + 1):
        lim4 = 4 * X * n * n  # bound for max(4|P|^3, Q^2)
        pmax = _cube_root_floor_below(lim4 / 4)  # |P| <= pmax
        qmax = _max_abs_below(lim4)  # |Q| <= qmax
        p_, n_ = _count_n(n, pmax, qmax)
        pos += p_
        neg += n_
    return pos, neg


def _count_n(n, pmax, qmax):
    pos = neg = 0
    divs_n = _divisors(n)
    for b in range(3 * n):
        # P = b^2 - 3nc in [-pmax, pmax]
        clo = -((pmax - b * b) // (3 * n))  # ceil((b^2 - pmax)/(3n))
        chi = (b * b + pmax) // (3 * n)
        for c in range(clo, chi + 1):
            P = b * b - 3 * n * c
            base = -2 * b ** 3 + 9 * n * b * c
            step = 27 * n * n
            # Q = base - step*d in [-qmax, qmax]
            dlo = _ceil_div(base - qmax, step)
            dhi = (base + qmax) // step
            for d in range(dlo, dhi + 1):
                Q = base - step * d
                if d == 0:
                    continue
                num = 4 * P ** 3 - Q * Q
                if num == 0:
                    continue
                if not _cubic_irreducible_fast(n, b, c, d, divs_n):
                    continue
                if num > 0:
                    pos += 1
                else:
                    neg += 1
    return pos, neg


def _ceil_div(a, b):
    return -((-a) // b)


def _cubic_irreducible_fast(a, b, c, d, divs_a):
    g = CubicForm(a, b, c, d)
    for p in _divisors(d):
        for q in divs_a:
            if math.gcd(p, q) != 1:
                continue
            if g(p, q) == 0 or g(-p, q) == 0:
                return False
    return True


# ---------------------------------------------------------------- congruences

def congruence_count(X, condition=None, disc_sign=None):
    """(filtered, total) counts of reduced monic cubics with H < X.

    condition is a callable on the reduced monic cubic; None keeps all."""
    kept = total = 0
    for mc in monic_cubic_classes(X, disc_sign):
        total += 1
        if condition is None or condition(mc.cubic):
            kept += 1
    return kept, total


def coefficient_condition(index, modulus, residues):
    """Condition: coefficient number index of the cubic lies in residues mod modulus."""
    residues = frozenset(r % modulus for r in residues)
    return lambda g: g[index] % modulus in residues


# ---------------------------------------------------------------- diagnostics

class DecayRow(NamedTuple):
    X: Fraction
    monic_total: int
    monic_reducible: int
    quartic_classes: int
    quadratic_products: int
    big_stabilizer: int

    @property
    def monic_reducible_fraction(self):
        return Fraction(self.monic_reducible, self.monic_total) if self.monic_total else Fraction(0)

    @property
    def quadratic_product_fraction(self):
        tot = self.quartic_classes + self.quadratic_products
        return Fraction(self.quadratic_products, tot) if tot else Fraction(0)

    @property
    def big_stabilizer_fraction(self):
        return Fraction(self.big_stabilizer, self.quartic_classes) if self.quartic_classes else Fraction(0)


def decay_diagnostics(ladder, cache=None):
    """Reducible and large-stabilizer fractions along a ladder of heights.

    The quartic reducible fraction counts classes that split into two
    irreducible quadratics; every fiber also holds a class with a linear
    factor (the monic lift), whose share does not decay."""
    rows = []
    for X in ladder:
        mt = mr = 0
        for mc in monic_cubic_classes(X):
            mt += 1
            mr += not mc.irreducible
        cc = count_quartic_classes(X, cache=cache)
        rows.append(DecayRow(_as_fraction(X), mt, mr, cc.irreducible, cc.quadratic_products, cc.big_stabilizer))
    return rows


def nonincreasing_within_noise(fracs, totals, sigmas=2.0):
    """True when each fraction exceeds its predecessor by at most sigmas
    binomial standard errors."""
    for (f0, f1, n1) in zip(fracs, fracs[1:], totals[1:]):
        p = float(f0)
        se = math.sqrt(max(p * (1 - p), 1e-12) / max(n1, 1))
        if float(f1) > p + sigmas * se:
            return False
    return True
