"""2-Selmer groups of y^2 = x^3 + Ax + B through integral binary quartics.

The Selmer elements of E are the rational equivalence classes of locally
soluble integral quartics with invariants (16 I(E), 64 J(E)).  Classes are
taken from the enumerated fiber, filtered by local solubility and then fused
under rational equivalence with prime-index neighbour moves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy

from .enumeration import classes_with_invariants
from .forms import (
    InvariantPair,
    QuarticForm,
    RootType,
    below_height,
    has_rational_linear_factor,
    height4,
    quartic_disc,
    quartic_invariants,
    root_type,
    substitute_quartic,
)
from .reduction import canonical


class NotMinimalError(ValueError):
    pass


class UndecidedError(ArithmeticError):
    """Local solubility search hit its depth bound."""


@lru_cache(maxsize=1 << 16)
def _prime_factors(n):
    return tuple(sorted(sympy.factorint(abs(n))))


# ---------------------------------------------------------------- curves

@dataclass(frozen=True)
class EllipticCurve:
    A: int
    B: int

    def __post_init__(self):
        if 4 * self.A ** 3 + 27 * self.B ** 2 == 0:
            raise ValueError("singular curve")
        g = math.gcd(self.A, self.B)
        for p in _prime_factors(g) if g > 1 else ():
            if self.A % p ** 4 == 0 and self.B % p ** 6 == 0:
                raise NotMinimalError(f"p={p}: p^4 | A and p^6 | B")

    @property
    def rigid(self):
        return self.A != 0 and self.B != 0

    def __str__(self):
        return f"E({self.A},{self.B})"


def curve_invariants(E):
    """(I, J) = (-3A, -27B) and the height H' = max(|I|^3, J^2/4) as a Fraction."""
    pair = InvariantPair(-3 * E.A, -27 * E.B)
    return pair, Fraction(height4(*pair), 4)


def has_rational_two_torsion(E):
    # a rational root of x^3 + Ax + B is an integer dividing B
    if E.B == 0:
        return True
    for d in sympy.divisors(abs(E.B)):
        for x in (d, -d):
            if x ** 3 + E.A * x + E.B == 0:
                return True
    return False


def _add_points(E, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and y1 == -y2:
        return None
    if P == Q:
        lam = (3 * x1 * x1 + E.A) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    return x3, lam * (x1 - x3) - y1


def infinite_order_certificate(E, x_range=20, max_multiple=12):
    """A rational point of infinite order, found by a naive search, with the
    multiple that leaves the integers (torsion points are integral).

    Returns (P, k, kP) or None."""
    for x in range(-x_range, x_range + 1):
        rhs = x ** 3 + E.A * x + E.B
        if rhs < 0:
            continue
        y = math.isqrt(rhs)
        if y * y != rhs or y == 0:
            continue
        P = (Fraction(x), Fraction(y))
        Q = P
        for k in range(2, max_multiple + 1):
            Q = _add_points(E, Q, P)
            if Q is None:
                break
            if Q[0].denominator != 1 or Q[1].denominator != 1:
                return P, k, Q
    return None


# ---------------------------------------------------------------- local solubility

def real_soluble(f):
    return root_type(f) is not RootType.NONE_REAL_NEG


def _val(n, p):
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _poly_eval(co, t):
    acc = 0
    for c in co:
        acc = acc * t + c
    return acc


def _poly_deriv(co):
    n = len(co) - 1
    return [c * (n - i) for i, c in enumerate(co[:-1])]


def _shift_scale(co, t0, p):
    """Coefficients (highest first) of g(t0 + p*t)."""
    n = len(co) - 1
    # Taylor expansion at t0 by repeated synthetic division
    work = list(co)
    taylor = []
    for _ in range(n + 1):
        rem = 0
        nxt = []
        for c in work:
            rem = rem * t0 + c
            nxt.append(rem)
        taylor.append(nxt[-1])
        work = nxt[:-1]
    # taylor[k] is the coefficient of (t - t0)^k
    return [taylor[k] * p ** k for k in range(n, -1, -1)]


def _content_val(co, p):
    return min(_val(c, p) for c in co if c)


def _zp_search(co, e, p, depth, limit):
    """Is there t in Z_p with p^e * g(t) a nonzero square or zero in Q_p,
    where g has coefficients co (unit content)?"""
    if depth > limit:
        raise UndecidedError(f"p={p}: depth bound {limit} reached")
    deriv = _poly_deriv(co)
    if e == 0:
        if p == 2:
            if any(_poly_eval(co, t) % 8 == 1 for t in range(8)):
                return True
        else:
            for t in range(p):
                v = _poly_eval(co, t) % p
                if v and pow(v, (p - 1) // 2, p) == 1:
                    return True
    for t in range(p):
        val = _poly_eval(co, t)
        if val % p:
            continue
        # a root in Z_p above t gives z = 0
        if val == 0 or _val(val, p) > 2 * _val(_poly_eval(deriv, t), p):
            return True
        nco = _shift_scale(co, t, p)
        v = _content_val(nco, p)
        nco = [c // p ** v for c in nco]
        if _zp_search(nco, (e + v) % 2, p, depth + 1, limit):
            return True
    return False


def qp_soluble(f, p):
    """Does z^2 = f(x, y) have a nontrivial solution over Q_p?"""
    f = QuarticForm(*f)
    disc = quartic_disc(f)
    if disc == 0:
        raise ValueError("zero discriminant")
    if f.a == 0 or f.e == 0:
        return True
    if p != 2 and disc % p:
        return True
    limit = 2 * _val(disc, p) + 6
    # chart y = 1, x in Z_p; chart x = 1, y in p Z_p
    for co in (list(f), [f.e * p ** 4, f.d * p ** 3, f.c * p ** 2, f.b * p, f.a]):
        v = _content_val(co, p)
        if _zp_search([c // p ** v for c in co], v % 2, p, 0, limit):
            return True
    return False


def local_primes(f):
    """Places where solubility can fail: 2, 3 and every prime dividing the discriminant."""
    return tuple(sorted(set(_prime_factors(quartic_disc(f))) | {2, 3}))


def solubility_certificate(f):
    """{place: bool} over the real place and local_primes(f)."""
    cert = {"R": real_soluble(f)}
    for p in local_primes(f):
        cert[p] = qp_soluble(f, p)
    return cert


def locally_soluble(f):
    if not real_soluble(f):
        return False
    return all(qp_soluble(f, p) for p in local_primes(f))


# ---------------------------------------------------------------- minimization

def _row_hnf(n):
    """Integer matrices [[a, b], [0, d]] with ad = n, 0 <= b < d: one per index-n sublattice."""
    return [((a, b), (0, n // a)) for a in sympy.divisors(n) for b in range(n // a)]


def _scaled_integral(f, k):
    out = []
    for c in f:
        if c % k:
            return None
        out.append(c // k)
    return QuarticForm(*out)


def _reduce_once(f, p):
    """An integral form equivalent to f with invariants divided by (p^4, p^6), or None."""
    cands = [(((1, 0), (0, 1)), p * p)]
    cands += [(m, p ** 4) for m in _row_hnf(p)]
    cands += [(m, p ** 6) for m in _row_hnf(p * p)]
    for m, k in cands:
        g = _scaled_integral(substitute_quartic(f, m), k)
        if g is not None:
            return canonical(g)
    return None


def _reduction_guaranteed(I, J, p):
    if p >= 5:
        return I % p ** 4 == 0 and J % p ** 6 == 0
    if p == 3:
        return I % 3 ** 5 == 0 and J % 3 ** 9 == 0
    return I % 2 ** 6 == 0 and J % 2 ** 9 == 0 and (8 * I + J) % 2 ** 10 == 0


def minimize(f):
    """Divide the invariants of a locally soluble form by p^4, p^6 while the
    classical minimization hypotheses allow it."""
    f = canonical(QuarticForm(*f))
    while True:
        I, J = quartic_invariants(f)
        g = math.gcd(I, J)
        for p in (_prime_factors(g) if g > 1 else ()):
            if not _reduction_guaranteed(I, J, p) or not qp_soluble(f, p):
                continue
            h = _reduce_once(f, p)
            if h is None:
                raise ArithmeticError(f"guaranteed reduction at p={p} not realized for {tuple(f)}")
            f = h
            break
        else:
            return f


# ---------------------------------------------------------------- fusion

def neighbor_moves(f, m):
    """Integral forms (1/m^2) f(x, jx + my) for 0 <= j < m, and (1/m^2) f(mx, y).

    These run over all m + 1 sublattices of index m when m is prime."""
    mats = [((1, j), (0, m)) for j in range(m)] + [((m, 0), (0, 1))]
    for M in mats:
        g = _scaled_integral(substitute_quartic(f, M), m * m)
        if g is not None:
            yield g


def fusion_primes(forms):
    disc = quartic_disc(forms[0])
    return tuple(sorted(set(_prime_factors(disc)) | {2, 3}))


def q_fuse(classes, primes=None):
    """Partition canonical forms with equal invariants into rational
    equivalence classes.  Returns a list of sorted blocks, sorted."""
    classes = [QuarticForm(*c) for c in classes]
    if not classes:
        return []
    if len({quartic_invariants(c) for c in classes}) != 1:
        raise ValueError("classes must share their invariants")
    if primes is None:
        primes = fusion_primes(classes)
    parent = {c: c for c in classes}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    for c in classes:
        for m in primes:
            for g in neighbor_moves(c, m):
                r = canonical(g)
                if r in parent:
                    a, b = find(c), find(r)
                    if a != b:
                        parent[max(a, b)] = min(a, b)
    blocks = {}
    for c in classes:
        blocks.setdefault(find(c), []).append(c)
    return sorted(sorted(b) for b in blocks.values())


# ---------------------------------------------------------------- Selmer

@dataclass
class SelmerClass:
    representative: QuarticForm
    members: list
    certificate: dict


@dataclass
class SelmerReport:
    curve: EllipticCurve
    pair: InvariantPair
    classes: list
    insoluble: int = 0

    @property
    def size(self):
        return len(self.classes)

    @property
    def identity_present(self):
        return any(has_rational_linear_factor(m) for c in self.classes for m in c.members)


def selmer_report(E):
    if not E.rigid:
        raise ValueError(f"{E} is not rigid (A = 0 or B = 0)")
    I, J = curve_invariants(E)[0]
    pair = InvariantPair(16 * I, 64 * J)
    fiber = classes_with_invariants(pair)
    soluble, certs, insoluble = [], {}, 0
    for f in fiber:
        cert = solubility_certificate(f)
        if all(cert.values()):
            soluble.append(f)
            certs[f] = cert
        else:
            insoluble += 1
    blocks = q_fuse(soluble)
    classes = [SelmerClass(b[0], b, certs[b[0]]) for b in blocks]
    report = SelmerReport(E, pair, classes, insoluble)
    n = report.size
    if n < 1 or n & (n - 1):
        raise ArithmeticError(f"{E}: Selmer size {n} is not a power of two")
    if not report.identity_present:
        raise ArithmeticError(f"{E}: identity class missing")
    return report


def selmer_size(E):
    return selmer_report(E).size


# ---------------------------------------------------------------- families

@dataclass(frozen=True)
class CurveFamily:
    """Curves whose (A mod m, B mod m) lies in an allowed set, for each constraint.
    No constraints means every curve."""
    constraints: tuple = ()

    def __post_init__(self):
        for m, allowed in self.constraints:
            if not allowed:
                raise ValueError(f"empty residue set mod {m}")

    def __contains__(self, E):
        return all((E.A % m, E.B % m) in allowed for m, allowed in self.constraints)

    @classmethod
    def parse(cls, text):
        """'all' or ';'-separated 'm:A,B|A,B|...' constraints."""
        text = text.strip()
        if text in ("", "all"):
            return cls()
        cons = []
        for part in text.split(";"):
            m, rest = part.split(":")
            m = int(m)
            allowed = frozenset(tuple(int(t) % m for t in r.split(",")) for r in rest.split("|"))
            cons.append((m, allowed))
        return cls(tuple(cons))


ALL_CURVES = CurveFamily()


def curves_below(X, family=ALL_CURVES):
    """Minimal nonsingular curves in the family with H' < X, ordered by (A, B)."""
    X = Fraction(X)
    amax = 0
    while 27 * (amax + 1) ** 3 < X:
        amax += 1
    bmax = math.isqrt(int(4 * X / 729) + 1) + 1
    for A in range(-amax, amax + 1):
        for B in range(-bmax, bmax + 1):
            if not below_height(-3 * A, -27 * B, X):
                continue
            if 4 * A ** 3 + 27 * B ** 2 == 0:
                continue
            try:
                E = EllipticCurve(A, B)
            except NotMinimalError:
                continue
            if E in family:
                yield E


@dataclass
class SelmerAverage:
    X: Fraction
    total: int = 0
    size_sum: int = 0
    histogram: dict = field(default_factory=dict)
    non_rigid: int = 0
    two_torsion: int = 0

    @property
    def mean(self):
        return Fraction(self.size_sum, self.total) if self.total else None

    @property
    def curves_seen(self):
        return self.total + self.non_rigid + self.two_torsion


def selmer_average(family, X):
    """Mean Selmer size over rigid curves without rational 2-torsion, H' < X."""
    out = SelmerAverage(Fraction(X))
    for E in curves_below(X, family):
        if not E.rigid:
            out.non_rigid += 1
            continue
        if has_rational_two_torsion(E):
            out.two_torsion += 1
            continue
        n = selmer_size(E)
        out.total += 1
        out.size_sum += n
        out.histogram[n] = out.histogram.get(n, 0) + 1
    return out


def selmer_ladder(family, ladder):
    return [selmer_average(family, X) for X in ladder]


def local_mass(p, family=ALL_CURVES):
    """Ratio of the Selmer-side to curve-side local masses at p.

    Every local curve has #E(Q_p)/2E(Q_p) = #E[2](Q_p), doubled at p = 2,
    and each Selmer class is weighted by 1/#E[2](Q_p); so the ratio is 1 away
    from 2 and 2 at 2, for any family."""
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    return Fraction(2) if p == 2 else Fraction(1)


def predicted_mean(primes=None, family=ALL_CURVES):
    """1 (identity) plus the product of local mass ratios over the given primes."""
    primes = primes if primes is not None else list(sympy.primerange(2, 101))
    prod = Fraction(1)
    for p in primes:
        prod *= local_mass(p, family)
    return 1 + prod
