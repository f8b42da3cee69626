"""Canonical representatives for GL2(Z)-classes of quartics and for
translation classes of cubics, plus a brute-force orbit oracle.

Quartics are reduced through their covariant point in the upper half plane:
the minimizer of sum_j log(|z - w_j|^2 / Im z), where w_j runs over the
roots of f(x, 1) with non-real roots moved to the lower half plane.  The
function is geodesically convex and proper when the roots are distinct, and
z(g.f) is the Moebius image of z(f), so reducing z reduces f.
"""
from __future__ import annotations

import math
from collections import deque
from itertools import product

import numpy as np

from . import _kernels

from .forms import (
    CubicForm,
    QuarticForm,
    act_untwisted,
    cubic_invariants,
    det2,
    inverse_unimodular,
    matmul2,
    quartic_disc,
    quartic_invariants,
    translate_cubic,
)

IDENTITY = ((1, 0), (0, 1))
SWAP = ((0, 1), (1, 0))
SHEAR = ((1, 0), (1, 1))
FLIP = ((-1, 0), (0, 1))
GENERATORS = (SWAP, SHEAR, FLIP)

# slack around the standard fundamental domain; candidates within it are all
# compared, so a covariant point that sits on an edge cannot split an orbit
EDGE_SLACK = 1e-6

# every det +-1 matrix with entries in [-2, 2]; the elements of GL2(Z) taking
# a point of the domain back into its slack neighbourhood are among these
SMALL_MATRICES = tuple(
    ((p, q), (r, s))
    for p, q, r, s in product(range(-2, 3), repeat=4)
    if p * s - q * r in (1, -1)
)


# ---------------------------------------------------------------- cubics

def reduce_monic_cubic(g):
    """Translate so that the X^2 Y coefficient lies in {-1, 0, 1}."""
    one, r, s, t = g
    if one != 1:
        raise ValueError("monic cubic expected")
    u = -((r + 1) // 3)
    return translate_cubic(g, u)


def reduce_cubic_n(g):
    """Translate so that b lies in [0, 3a)."""
    n, b = g[0], g[1]
    if n <= 0:
        raise ValueError("leading coefficient must be positive")
    return translate_cubic(g, -(b // (3 * n)))


def monic_recode(g):
    """Move a reduced monic cubic between the r in {-1,0,1} and b in {0,1,2} conventions."""
    r = g[1]
    return translate_cubic(g, 1) if r == -1 else g


# ---------------------------------------------------------------- covariant

def covariant_point(f):
    """Covariant point of a quartic with a != 0 and nonzero discriminant."""
    if f[0] == 0:
        raise ValueError("covariant_point needs a != 0; move the root off infinity first")
    x, y = _kernels.covariant_from_coeffs(np.array([float(t) for t in f]))
    return complex(x, y)


def moebius(g, z):
    """Covariant point of g.f given the covariant point z of f."""
    (p, q), (r, s) = g
    w = (s * z - r) / (-q * z + p)
    return w if det2(g) > 0 else w.conjugate()


def in_domain(z, slack=EDGE_SLACK):
    return abs(z.real) <= 0.5 + slack and abs(z) >= 1 - slack


def _reduce_point(z):
    """SL2(Z) matrix g (in the form action convention) moving z into the domain."""
    g = IDENTITY
    for _ in range(10000):
        k = math.floor(z.real + 0.5) if abs(z.real) > 0.5 + 1e-9 else 0
        if k:
            t = ((1, 0), (k, 1))  # translation z -> z - k
            g = matmul2(t, g)
            z = moebius(t, z)
        if abs(z) < 1 - 1e-9:
            t = ((0, -1), (1, 0))  # z -> -1/z
            g = matmul2(t, g)
            z = moebius(t, z)
        else:
            return g, z
    raise ArithmeticError("point reduction did not terminate")


def covariant_any(f):
    """Covariant point for any form with nonzero discriminant."""
    g0 = _off_infinity(f)
    if g0 == IDENTITY:
        return covariant_point(f)
    return moebius(inverse_unimodular(g0), covariant_point(act_untwisted(g0, f)))


def _off_infinity(f):
    # a unimodular map making the leading coefficient nonzero
    if f.a:
        return IDENTITY
    for k in range(0, 5):
        g = ((1, k), (0, 1))
        if act_untwisted(g, f).a:
            return g
    raise ValueError("form vanishes identically")


def reduce_quartic(f, require_irreducible=False):
    """Canonical orbit representative and a witness g with g.f = result.

    Works for every form with nonzero discriminant; callers that promise
    irreducibility can ask for it to be checked."""
    f = QuarticForm(*f)
    if quartic_disc(f) == 0:
        raise ValueError("reduction needs a nonzero discriminant")
    if require_irreducible:
        from .forms import is_irreducible_q
        if not is_irreducible_q(f):
            raise ValueError("reducible form")
    total = IDENTITY
    cur = f
    for _ in range(64):
        step, z = _reduce_point(covariant_any(cur))
        if step == IDENTITY:
            break
        cur = act_untwisted(step, cur)
        total = matmul2(step, total)
    else:
        raise ArithmeticError("quartic reduction did not settle")
    best, s = canonical_near(cur, z)
    return best, matmul2(s, total)


# a point this far inside the domain can only be moved back into the slack
# neighbourhood by +-1 and the reflection x -> -x
_INTERIOR = 1e-3


def canonical_near(f, z):
    """Least orbit element among those whose covariant point lies in the
    slack domain, given f with covariant point z already in the domain.
    Returns (form, s) with s.f = form."""
    if abs(z.real) < 0.5 - _INTERIOR and abs(z) > 1 + _INTERIOR:
        g = act_untwisted(FLIP, f)
        return (f, IDENTITY) if f <= g else (g, FLIP)
    best, best_s = None, None
    for s in SMALL_MATRICES:
        if not in_domain(moebius(s, z)):
            continue
        cand = act_untwisted(s, f)
        if best is None or cand < best:
            best, best_s = cand, s
    return best, best_s


def canonical(f):
    return reduce_quartic(f)[0]


def equivalent_quartics(f1, f2):
    """A witness g with g.f1 = f2, or None."""
    if quartic_invariants(f1) != quartic_invariants(f2):
        return None
    r1, g1 = reduce_quartic(f1)
    r2, g2 = reduce_quartic(f2)
    if r1 != r2:
        return None
    return matmul2(inverse_unimodular(g2), g1)


def equivalent_by_search(f1, f2, max_word=8):
    """Cross-check mode: breadth-first search over generator words."""
    f1, f2 = QuarticForm(*f1), QuarticForm(*f2)
    gens = GENERATORS + tuple(inverse_unimodular(g) for g in GENERATORS)
    seen = {f1: IDENTITY}
    frontier = [f1]
    for _ in range(max_word + 1):
        if f2 in seen:
            return seen[f2]
        nxt = []
        for h in frontier:
            for g in gens:
                k = act_untwisted(g, h)
                if k not in seen:
                    seen[k] = matmul2(g, seen[h])
                    nxt.append(k)
        frontier = nxt
    return seen.get(f2)


def stabilizer_order_z(f):
    """Order of the GL2(Z) stabilizer.

    Computed at the reduced representative: a stabilizing matrix fixes the
    covariant point, which lies in the domain, so its entries are at most 1
    in absolute value; SMALL_MATRICES covers that with room to spare."""
    r, _ = reduce_quartic(f)
    return sum(1 for s in SMALL_MATRICES if act_untwisted(s, r) == r)


# ---------------------------------------------------------------- oracle

def box_forms(bound):
    rng = range(-bound, bound + 1)
    for t in product(rng, repeat=5):
        yield QuarticForm(*t)


def brute_force_orbits(box_bound, expansion=16, irreducible_only=True):
    """Partition the forms in the box |coeffs| <= box_bound (nonzero
    discriminant; irreducible unless told otherwise) into GL2(Z)-orbits.

    Orbits are grown by closure under the generators, keeping intermediate
    forms while max |coeff| <= expansion * box_bound.  Each orbit is labelled
    by its least member in the box.  Deterministic.
    """
    from .forms import is_irreducible_q

    cap = expansion * box_bound
    gens = GENERATORS + tuple(inverse_unimodular(g) for g in GENERATORS)
    members = []
    for f in box_forms(box_bound):
        if quartic_disc(f) == 0:
            continue
        if irreducible_only and not is_irreducible_q(f):
            continue
        members.append(f)
    in_box = set(members)
    parent = {f: f for f in members}

    def find(f):
        while parent[f] != f:
            parent[f] = parent[parent[f]]
            f = parent[f]
        return f

    visited = set()
    for f in members:
        if f in visited:
            continue
        seen = {f}
        queue = deque([f])
        while queue:
            h = queue.popleft()
            for g in gens:
                k = act_untwisted(g, h)
                if k in seen or max(abs(t) for t in k) > cap:
                    continue
                seen.add(k)
                queue.append(k)
        hits = [k for k in seen if k in in_box]
        visited.update(hits)
        root = find(f)
        for k in hits:
            rk = find(k)
            if rk != root:
                lo, hi = min(root, rk), max(root, rk)
                parent[hi] = lo
                root = lo
    parts = {}
    for f in members:
        parts.setdefault(find(f), []).append(f)
    return {min(v): sorted(v) for v in parts.values()}
