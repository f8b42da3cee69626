"""Splitting types over F_p, maximality at p, and exact p-adic densities.

Densities are exact counts over coefficient tuples modulo p (splitting
types depend only on the reduction mod p) or modulo p^2 (maximality is a
congruence condition mod p^2: whether p^2 divides g(r) at a multiple root r
does not depend on the lift of r, since p divides g'(r)).
"""
from __future__ import annotations

from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .forms import CubicForm, InvariantPair, QuarticForm, monic_cubic_from_invariants, resolvent_cubic


class CubicSplit(Enum):
    S111 = "(111)"
    S12 = "(12)"
    S3 = "(3)"
    S1_21 = "(1^21)"
    S1_3 = "(1^3)"


class QuarticSplit(Enum):
    S1111 = "(1111)"
    S112 = "(112)"
    S13 = "(13)"
    S22 = "(22)"
    S4 = "(4)"
    S1_211 = "(1^211)"
    S1_22 = "(1^22)"
    S1_21_2 = "(1^21^2)"
    S2_2 = "(2^2)"
    S1_31 = "(1^31)"
    S1_4 = "(1^4)"


OVERRAMIFIED = (QuarticSplit.S1_21_2, QuarticSplit.S2_2, QuarticSplit.S1_4)

_R = {
    QuarticSplit.S1111: CubicSplit.S111,
    QuarticSplit.S22: CubicSplit.S111,
    QuarticSplit.S112: CubicSplit.S12,
    QuarticSplit.S4: CubicSplit.S12,
    QuarticSplit.S13: CubicSplit.S3,
    QuarticSplit.S1_211: CubicSplit.S1_21,
    QuarticSplit.S1_22: CubicSplit.S1_21,
    QuarticSplit.S1_31: CubicSplit.S1_3,
}


def split_map_R(theta):
    """Cubic splitting type forced by a quartic one; None when overramified."""
    return _R.get(QuarticSplit(theta))


def R_inverse(sigma):
    return [t for t, s in _R.items() if s == CubicSplit(sigma)]


# ---------------------------------------------------------------- F_p polynomials
# ascending coefficient lists with entries in [0, p)

def _trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f, g, p):
    f = _trim(f)
    g = _trim(g)
    inv = pow(g[-1], -1, p)
    while len(f) >= len(g):
        q = f[-1] * inv % p
        k = len(f) - len(g)
        for i, t in enumerate(g):
            f[i + k] = (f[i + k] - q * t) % p
        f = _trim(f)
    return f


def _pmul(f, g, p):
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, s in enumerate(f):
        for j, t in enumerate(g):
            out[i + j] = (out[i + j] + s * t) % p
    return out


def _pdiv_linear(f, r, p):
    # f / (x - r), exact
    n = len(f) - 1
    q = [0] * n
    acc = 0
    for k in range(n, 0, -1):
        acc = (acc * r + f[k]) % p
        q[k - 1] = acc
    return q


def _eval(f, x, p):
    acc = 0
    for t in reversed(f):
        acc = (acc * x + t) % p
    return acc


def _xpow_mod(e, h, p):
    """x^e mod h over F_p."""
    result = [1]
    base = [0, 1]
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), h, p)
        base = _pmod(_pmul(base, base, p), h, p)
        e >>= 1
    return result


def _is_square_poly(h, p):
    # h monic of degree 4 with no roots: is it q^2 for a quadratic q?
    # compare with gcd(h, h') being of degree 2
    dh = _trim([(i * t) % p for i, t in enumerate(h)][1:])
    if not dh:
        return True
    a, b = h, dh
    while b:
        a, b = b, _pmod(a, b, p)
    return len(_trim(a)) - 1 >= 2


def factor_pattern(coeffs, p):
    """Sorted list of (degree, multiplicity) for a binary form over F_p.

    coeffs are listed from x^n down to y^n; the form must not vanish mod p."""
    n = len(coeffs) - 1
    desc = [c % p for c in coeffs]
    f = _trim(list(reversed(desc)))  # ascending in x with y = 1
    if not f:
        raise ValueError("form vanishes mod p")
    pattern = []
    inf_mult = n - (len(f) - 1)
    if inf_mult:
        pattern.append((1, inf_mult))
    for r in range(p):
        m = 0
        while len(f) > 1 and _eval(f, r, p) == 0:
            f = _pdiv_linear(f, r, p)
            m += 1
        if m:
            pattern.append((1, m))
    deg = len(f) - 1
    if deg == 2 or deg == 3:
        pattern.append((deg, 1))
    elif deg == 4:
        inv = pow(f[-1], -1, p)
        h = [t * inv % p for t in f]
        if _is_square_poly(h, p):
            pattern.append((2, 2))
        elif _xpow_mod(p * p, h, p) == [0, 1]:
            pattern += [(2, 1), (2, 1)]
        else:
            pattern.append((4, 1))
    return sorted(pattern, key=lambda t: (-t[1], t[0]))


def _symbol(pattern):
    return "(" + "".join(f"{d}" if m == 1 else f"{d}^{m}" for d, m in pattern) + ")"


def splitting_type_cubic(g, p):
    return CubicSplit(_symbol(factor_pattern(list(g), p)))


def splitting_type_quartic(f, p):
    return QuarticSplit(_symbol(factor_pattern(list(f), p)))


# ---------------------------------------------------------------- maximality

def is_maximal_cubic(g, p):
    """Maximality at p of the cubic ring of an integral binary cubic form."""
    a, b, c, d = g
    p2 = p * p
    if a % p == 0 and b % p == 0 and c % p == 0 and d % p == 0:
        return False
    # multiple root at [1:0]
    if a % p == 0 and b % p == 0 and a % p2 == 0:
        return False
    for r in range(p):
        val = ((a * r + b) * r + c) * r + d
        if val % p:
            continue
        der = (3 * a * r + 2 * b) * r + c
        if der % p == 0 and val % p2 == 0:
            return False
    return True


def is_strongly_maximal_quartic(f, p):
    return is_maximal_cubic(resolvent_cubic(f), p)


@lru_cache(maxsize=1 << 16)
def _square_prime_divisors(n):
    import sympy
    return tuple(sorted(p for p, e in sympy.factorint(abs(n)).items() if e >= 2))


def square_prime_divisors(n):
    """Primes p with p^2 | n."""
    if n == 0:
        raise ValueError("zero")
    return _square_prime_divisors(abs(n))


def is_maximal_everywhere(g):
    from .forms import cubic_disc
    return all(is_maximal_cubic(g, p) for p in square_prime_divisors(cubic_disc(g)))


def pair_is_strongly_maximal(pair):
    """Is the monic cubic with these invariants maximal at every prime?"""
    pair = InvariantPair(*pair)
    g = monic_cubic_from_invariants(pair)
    return all(is_maximal_cubic(g, p) for p in square_prime_divisors(pair.disc))


# ---------------------------------------------------------------- densities

BUDGET = {"monic-cubic": 13, "quartic": 5, "general-cubic": 7}


def _maximal_mask_monic(R, S, T, p):
    """Vectorized maximality of X^3 + R X^2 + S X + T (arrays of residues mod p^2)."""
    p2 = p * p
    ok = np.ones(R.shape, dtype=bool)
    for r in range(p):
        val = ((r + R) * r + S) * r + T
        der = (3 * r + 2 * R) * r + S
        bad = (val % p == 0) & (der % p == 0) & (val % p2 == 0)
        ok &= ~bad
    return ok


def _maximal_mask_general(A, B, C, D, p):
    p2 = p * p
    ok = ~((A % p == 0) & (B % p == 0) & (C % p == 0) & (D % p == 0))
    ok &= ~((A % p == 0) & (B % p == 0) & (A % p2 == 0))
    for r in range(p):
        val = ((A * r + B) * r + C) * r + D
        der = (3 * A * r + 2 * B) * r + C
        ok &= ~((val % p == 0) & (der % p == 0) & (val % p2 == 0))
    return ok


def _type_table(n_coeffs, p, classify):
    """classify every tuple mod p; returns (labels, index array over p^n)."""
    labels = []
    index = {}
    table = np.empty(p ** n_coeffs, dtype=np.int16)
    for k, tup in enumerate(product(range(p), repeat=n_coeffs)):
        try:
            lab = classify(tup)
        except ValueError:  # vanishes mod p
            lab = None
        if lab not in index:
            index[lab] = len(labels)
            labels.append(lab)
        table[k] = index[lab]
    return labels, table


def _residue_grid(n, p2):
    # all n-tuples mod p2, as n flat arrays
    grids = np.meshgrid(*[np.arange(p2, dtype=np.int64)] * n, indexing="ij")
    return [g.ravel() for g in grids]


def _mod_p_index(arrays, p):
    idx = np.zeros(arrays[0].shape, dtype=np.int64)
    for arr in arrays:
        idx = idx * p + (arr % p)
    return idx


def density_counts(family, p):
    """Exact counts {(symbol, maximal): count} and the total, for one family.

    monic-cubic and general-cubic symbols are cubic splitting types and
    'maximal' is maximality at p; for quartics the symbol is the quartic
    splitting type and 'maximal' means strong maximality.  Tuples vanishing
    mod p carry the symbol None."""
    if family not in BUDGET:
        raise ValueError(f"unknown family {family}")
    if p > BUDGET[family]:
        raise ValueError(f"p = {p} exceeds the exhaustion budget for {family}")
    p2 = p * p
    counts = {}
    if family == "monic-cubic":
        labels, table = _type_table(3, p, lambda t: splitting_type_cubic((1,) + t, p))
        R, S, T = _residue_grid(3, p2)
        maxi = _maximal_mask_monic(R, S, T, p)
        lab = table[_mod_p_index([R, S, T], p)]
        _accumulate(counts, labels, lab, maxi)
        total = p2 ** 3
    elif family == "general-cubic":
        labels, table = _type_table(4, p, lambda t: splitting_type_cubic(t, p))
        total = 0
        for a in range(p2):
            B, C, D = _residue_grid(3, p2)
            A = np.full(B.shape, a, dtype=np.int64)
            maxi = _maximal_mask_general(A, B, C, D, p)
            lab = table[_mod_p_index([A, B, C, D], p)]
            _accumulate(counts, labels, lab, maxi)
            total += B.size
    else:
        labels, table = _type_table(5, p, lambda t: splitting_type_quartic(t, p))
        total = 0
        for a, b in product(range(p2), repeat=2):
            C, D, E = _residue_grid(3, p2)
            # resolvent X^3 + c X^2 + (bd - 4ae) X + (ad^2 + b^2 e - 4ace)
            maxi = _maximal_mask_monic(C, b * D - 4 * a * E, a * D * D + b * b * E - 4 * a * C * E, p)
            A = np.full(C.shape, a, dtype=np.int64)
            Bv = np.full(C.shape, b, dtype=np.int64)
            lab = table[_mod_p_index([A, Bv, C, D, E], p)]
            _accumulate(counts, labels, lab, maxi)
            total += C.size
    return counts, total


def _accumulate(counts, labels, lab, maxi):
    for k, name in enumerate(labels):
        sel = lab == k
        n_max = int(np.count_nonzero(sel & maxi))
        n_all = int(np.count_nonzero(sel))
        counts[(name, True)] = counts.get((name, True), 0) + n_max
        counts[(name, False)] = counts.get((name, False), 0) + n_all - n_max


@lru_cache(maxsize=None)
def _density_counts_cached(family, p):
    return density_counts(family, p)


def density(family, p, symbol=None, maximal=None):
    """Exact density of tuples with the given splitting symbol (None: any)
    and maximality flag (None: either)."""
    counts, total = _density_counts_cached(family, p)
    n = 0
    for (name, m), c in counts.items():
        if symbol is not None and (name is None or name.value != _norm_symbol(symbol)):
            continue
        if maximal is not None and m != maximal:
            continue
        n += c
    return Fraction(n, total)


def _norm_symbol(symbol):
    return symbol.value if isinstance(symbol, Enum) else symbol


# ---------------------------------------------------------------- closed forms

def monic_type_densities(p):
    p = Fraction(p)
    return {
        "(111)": (p - 1) * (p - 2) / (6 * p * p),
        "(12)": (p - 1) / (2 * p),
        "(3)": (p * p - 1) / (3 * p * p),
        "(1^21)": (p - 1) / (p * p),
        "(1^3)": 1 / (p * p),
    }


def monic_maximal_type_densities(p):
    p = Fraction(p)
    out = monic_type_densities(p)
    out["(1^21)"] = (p - 1) ** 2 / p ** 3
    out["(1^3)"] = (p - 1) / p ** 3
    return out


def strongly_maximal_quartic_type_densities(p):
    p = Fraction(p)
    return {
        "(1111)": (p + 1) * (p - 1) ** 2 * (p - 2) / (24 * p ** 4),
        "(112)": (p + 1) * (p - 1) ** 2 / (4 * p ** 3),
        "(13)": (p * p - 1) ** 2 / (3 * p ** 4),
        "(22)": (p - 1) ** 2 * (p * p - p - 2) / (8 * p ** 4),
        "(4)": (p + 1) * (p - 1) ** 2 / (4 * p ** 3),
        "(1^211)": (p - 1) ** 3 * (p + 1) / (2 * p ** 5),
        "(1^22)": (p - 1) ** 3 * (p + 1) / (2 * p ** 5),
        "(1^31)": (p - 1) ** 2 * (p + 1) / p ** 5,
        "(1^21^2)": Fraction(0),
        "(2^2)": Fraction(0),
        "(1^4)": Fraction(0),
    }


def maximal_monic_density(p):
    p = Fraction(p)
    return (p * p - 1) / (p * p)


def strongly_maximal_quartic_density(p):
    p = Fraction(p)
    return (p * p - 1) ** 2 / p ** 4


def maximal_general_cubic_density(p):
    p = Fraction(p)
    return (p ** 3 - 1) * (p * p - 1) / p ** 5


def monic_split_ratios(p):
    p = Fraction(p)
    return {
        "(111)": (p - 2) / (6 * (p + 1)),
        "(12)": p / (2 * (p + 1)),
        "(3)": Fraction(1, 3),
        "(1^21)": (p - 1) / (p * (p + 1)),
        "(1^3)": 1 / (p * (p + 1)),
    }


def general_cubic_split_ratios(p):
    p = Fraction(p)
    s = p * p + p + 1
    return {
        "(111)": p * p / (6 * s),
        "(12)": p * p / (2 * s),
        "(3)": p * p / (3 * s),
        "(1^21)": p / s,
        "(1^3)": 1 / s,
    }


def pair_split_ratios(p):
    p = Fraction(p)
    s = p * p + p + 1
    return {
        "(1111)": p * p / (24 * s),
        "(22)": p * p / (8 * s),
        "(112)": p * p / (4 * s),
        "(4)": p * p / (4 * s),
        "(13)": p * p / (3 * s),
        "(1^211)": p / (2 * s),
        "(1^22)": p / (2 * s),
        "(1^31)": 1 / s,
    }


def density_formula_table(p):
    """Closed forms at p, with the splitting-ratio identities between the
    monic, quartic, general-cubic and pair families checked.

    Returns a dict of named sub-tables; raises AssertionError if any
    identity fails."""
    quart = strongly_maximal_quartic_type_densities(p)
    sm = strongly_maximal_quartic_density(p)
    t2 = monic_split_ratios(p)
    t4 = general_cubic_split_ratios(p)
    t4r = pair_split_ratios(p)
    monic_max = monic_maximal_type_densities(p)
    rows2, rows4 = {}, {}
    for sigma in CubicSplit:
        thetas = [t.value for t in R_inverse(sigma)]
        right2 = sum((quart[t] / sm for t in thetas), Fraction(0))
        left2 = monic_max[sigma.value] / maximal_monic_density(p)
        assert left2 == t2[sigma.value] == right2, (p, sigma, left2, right2)
        rows2[sigma.value] = (left2, right2)
        right4 = sum((t4r[t] for t in thetas), Fraction(0))
        assert t4[sigma.value] == right4, (p, sigma)
        rows4[sigma.value] = (t4[sigma.value], right4)
    assert sum(quart.values()) == sm
    assert sum(monic_max.values()) == maximal_monic_density(p)
    assert sum(monic_type_densities(p).values()) == 1
    assert sum(t4.values()) == 1
    return {
        "monic": monic_type_densities(p),
        "monic-maximal": monic_max,
        "quartic-strongly-maximal": quart,
        "monic-maximal-total": maximal_monic_density(p),
        "quartic-strongly-maximal-total": sm,
        "general-cubic-maximal-total": maximal_general_cubic_density(p),
        "monic_vs_quartic": rows2,
        "cubic_vs_pair": rows4,
    }
