"""Binary quartic and cubic forms: invariants, group actions, resolvents.

All arithmetic is exact.  Coefficients are Python ints (or Fractions for
the rational twisted action), so there is no overflow ceiling.
"""
from __future__ import annotations

from enum import Enum
from fractions import Fraction
from math import comb
from typing import NamedTuple


class QuarticForm(NamedTuple):
    """a x^4 + b x^3 y + c x^2 y^2 + d x y^3 + e y^4"""
    a: int
    b: int
    c: int
    d: int
    e: int

    def __str__(self):
        return _poly_str(self, "x", "y")

    def is_integral(self):
        return all(Fraction(t).denominator == 1 for t in self)

    def __call__(self, x, y):
        a, b, c, d, e = self
        return (((a * x + b * y) * x + c * y * y) * x + d * y ** 3) * x + e * y ** 4


class CubicForm(NamedTuple):
    """a x^3 + b x^2 y + c x y^2 + d y^3"""
    a: int
    b: int
    c: int
    d: int

    def __str__(self):
        return _poly_str(self, "X", "Y")

    def __call__(self, x, y):
        a, b, c, d = self
        return ((a * x + b * y) * x + c * y * y) * x + d * y ** 3


class InvariantPair(NamedTuple):
    I: int
    J: int

    @property
    def disc_numerator(self):
        return 4 * self.I ** 3 - self.J ** 2

    @property
    def disc(self):
        num = self.disc_numerator
        if num % 27:
            raise ArithmeticError(f"4I^3-J^2 not divisible by 27 for {tuple(self)}")
        return num // 27

    @property
    def h4(self):
        return height4(self.I, self.J)


class RootType(Enum):
    FOUR_REAL = "0"
    TWO_REAL = "1"
    NONE_REAL_POS = "2+"
    NONE_REAL_NEG = "2-"

    @property
    def real_roots(self):
        return {"0": 4, "1": 2}.get(self.value, 0)

    @property
    def index(self):
        return int(self.value[0])


def _poly_str(coeffs, u, v):
    deg = len(coeffs) - 1
    terms = []
    for k, co in enumerate(coeffs):
        if co == 0:
            continue
        mono = "".join(
            s if p == 1 else f"{s}^{p}" for s, p in ((u, deg - k), (v, k)) if p
        )
        if mono and abs(co) == 1:
            terms.append(("-" if co < 0 else "+") + mono)
        else:
            terms.append(f"{'-' if co < 0 else '+'}{abs(co)}{mono}")
    if not terms:
        return "0"
    s = "".join(terms)
    return s[1:] if s[0] == "+" else s


# ---------------------------------------------------------------- invariants

def height4(I, J):
    """4 * max(|I|^3, J^2/4), an exact integer."""
    return max(4 * abs(I) ** 3, J * J)


def below_height(I, J, X):
    """H(I,J) < X, exactly.  X may be an int or a Fraction."""
    X = Fraction(X)
    return height4(I, J) * X.denominator < 4 * X.numerator


def quartic_invariants(f):
    a, b, c, d, e = f
    I = 12 * a * e - 3 * b * d + c * c
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c ** 3
    return InvariantPair(I, J)


def quartic_disc(f):
    return quartic_invariants(f).disc


def height(p):
    """H4 = max(4|I|^3, J^2); the height H is H4/4."""
    return height4(*p)


def cubic_invariants(g):
    """(P, Q) = (b^2 - 3ac, -2b^3 + 9abc - 27a^2 d)."""
    a, b, c, d = g
    return b * b - 3 * a * c, -2 * b ** 3 + 9 * a * b * c - 27 * a * a * d


def cubic_disc(g):
    a, b, c, d = g
    return b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * c * d


def is_eligible(p):
    I, J = p
    i9, j27 = I % 9, J % 27
    if I % 3 == 0:
        return j27 == 0
    if i9 == 1:
        return j27 in (2, 25)
    if i9 == 4:
        return j27 in (16, 11)
    if i9 == 7:
        return j27 in (7, 20)
    return False


# ---------------------------------------------------------------- actions

def det2(g):
    (p, q), (r, s) = g
    return p * s - q * r


def matmul2(g, h):
    (a, b), (c, d) = g
    (e, f), (k, l) = h
    return ((a * e + b * k, a * f + b * l), (c * e + d * k, c * f + d * l))


def inverse_unimodular(g):
    (p, q), (r, s) = g
    dt = det2(g)
    if dt not in (1, -1):
        raise ValueError("matrix is not unimodular")
    return ((s * dt, -q * dt), (-r * dt, p * dt))


def _substitute(coeffs, g):
    """Coefficients of F((x,y) g) for a binary form F of any degree."""
    (p, q), (r, s) = g
    n = len(coeffs) - 1
    # powers of the linear forms px+ry and qx+sy, as coefficient lists in (x, y)
    lin1 = [_linpow(p, r, k) for k in range(n + 1)]
    lin2 = [_linpow(q, s, k) for k in range(n + 1)]
    out = [0] * (n + 1)
    for k, co in enumerate(coeffs):
        if not co:
            continue
        u, v = lin1[n - k], lin2[k]
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                out[i + j] += co * ui * vj
    return out


def _linpow(p, r, k):
    # (p x + r y)^k, listed from x^k down to y^k
    return [comb(k, i) * p ** (k - i) * r ** i for i in range(k + 1)]


def act_untwisted(g, f):
    """(g.f)(x,y) = f((x,y) g)"""
    if det2(g) not in (1, -1):
        raise ValueError("untwisted action needs det +-1")
    return QuarticForm(*substitute_quartic(f, g))


def substitute_quartic(f, g):
    """Coefficients of f((x,y) g), expanded by hand for speed."""
    a, b, c, d, e = f
    (p, q), (r, s) = g
    return (
        a * p ** 4 + e * q ** 4 + p * (d * q ** 3 + p * (b * p * q + c * q * q)),
        4 * a * p ** 3 * r + p * (p * (b * p * s + q * (3 * b * r + 2 * c * s)) + q * q * (2 * c * r + 3 * d * s))
        + q ** 3 * (d * r + 4 * e * s),
        6 * a * p * p * r * r + p * (p * (3 * b * r * s + c * s * s) + q * (3 * d * s * s + r * (3 * b * r + 4 * c * s)))
        + q * q * (6 * e * s * s + r * (c * r + 3 * d * s)),
        4 * a * p * r ** 3 + p * (d * s ** 3 + r * (3 * b * r * s + 2 * c * s * s))
        + q * (4 * e * s ** 3 + r * (3 * d * s * s + r * (b * r + 2 * c * s))),
        a * r ** 4 + e * s ** 4 + r * (d * s ** 3 + r * (b * r * s + c * s * s)),
    )


def act_twisted(g, f):
    """det(g)^-2 f((x,y) g) for any invertible rational g; keeps I and J."""
    dt = Fraction(det2(g))
    if dt == 0:
        raise ValueError("singular matrix")
    co = _substitute([Fraction(t) for t in f], tuple(tuple(Fraction(t) for t in row) for row in g))
    return QuarticForm(*(_demote(t / (dt * dt)) for t in co))


def act_cubic(g, h):
    """h((x,y) g) for a binary cubic h."""
    return CubicForm(*_substitute(h, g))


def _demote(t):
    return t.numerator if isinstance(t, Fraction) and t.denominator == 1 else t


def translate_cubic(h, u):
    """h(x + u y, y)"""
    return act_cubic(((1, 0), (u, 1)), h)


# ---------------------------------------------------------------- resolvent

def resolvent_cubic(f):
    a, b, c, d, e = f
    g = CubicForm(1, c, b * d - 4 * a * e, a * d * d + b * b * e - 4 * a * c * e)
    assert cubic_invariants(g) == tuple(quartic_invariants(f))
    return g


def monic_cubic_from_invariants(p):
    """The unique monic cubic X^3 + rX^2Y + sXY^2 + tY^3 with r in {-1,0,1}
    whose invariants are (I, J).  Raises if the pair is not realizable."""
    I, J = p
    r = ((J + 1) % 3) - 1
    s3 = r * r - I
    if s3 % 3:
        raise ArithmeticError(f"no monic cubic with invariants {tuple(p)}")
    s = s3 // 3
    t27 = -2 * r ** 3 + 9 * r * s - J
    if t27 % 27:
        raise ArithmeticError(f"no monic cubic with invariants {tuple(p)}")
    return CubicForm(1, r, s, t27 // 27)


def monic_lift(g):
    """x^3y + r x^2y^2 + s xy^3 + t y^4, whose resolvent is the monic cubic g."""
    one, r, s, t = g
    assert one == 1
    return QuarticForm(0, 1, r, s, t)


# ---------------------------------------------------------------- ternary pairs
# Matrices are stored doubled (2A, 2B) so that every entry is an integer.

A1_DOUBLED = ((0, 0, 1), (0, -2, 0), (1, 0, 0))


class TernaryQuadraticPair(NamedTuple):
    A2: tuple
    B2: tuple

    def halves(self):
        h = Fraction(1, 2)
        return (tuple(tuple(h * t for t in row) for row in self.A2),
                tuple(tuple(h * t for t in row) for row in self.B2))


def phi_embed(f):
    a, b, c, d, e = f
    B2 = ((2 * a, b, 0), (b, 2 * c, d), (0, d, 2 * e))
    return TernaryQuadraticPair(A1_DOUBLED, B2)


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def pair_resolvent(pair):
    """4 det(A X - B Y) as a CubicForm, computed exactly."""
    A, B = pair.halves()
    # det is a cubic in (X, Y); recover its coefficients from 4 evaluations
    pts = [(1, 0), (0, 1), (1, 1), (1, -1)]
    vals = [4 * _det3([[A[i][j] * X - B[i][j] * Y for j in range(3)] for i in range(3)])
            for X, Y in pts]
    a, d = vals[0], vals[1]
    # vals[2] = a+b+c+d, vals[3] = a-b+c-d
    b_plus_c = vals[2] - a - d
    c_minus_b = vals[3] - a + d
    c = (b_plus_c + c_minus_b) / 2
    b = b_plus_c - c
    return CubicForm(*(_demote(Fraction(t)) for t in (a, b, c, d)))


def rho(g):
    """The image of g in SO(A1) (a 3x3 matrix of Fractions)."""
    (a, b), (c, d) = g
    dt = Fraction(a * d - b * c)
    if dt == 0:
        raise ValueError("singular matrix")
    m = ((d * d, c * d, c * c), (2 * b * d, a * d + b * c, 2 * a * c), (b * b, a * b, a * a))
    return tuple(tuple(_demote(t / dt) for t in row) for row in m)


def _mat3mul(x, y):
    return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(3)) for j in range(3)) for i in range(3))


def _transpose3(x):
    return tuple(tuple(x[j][i] for j in range(3)) for i in range(3))


def act_on_pair(g, pair):
    """Image of a pair under g, as seen through phi.

    phi(g.f) and rho(g).phi(f) agree once the ternary variables are listed
    in reversed order and B is normalized modulo multiples of A1 (top-right
    entry of B set to zero); this applies exactly that convention.
    """
    R = rho(g)
    Rrev = tuple(tuple(R[2 - i][2 - j] for j in range(3)) for i in range(3))
    A2 = _mat3mul(_mat3mul(Rrev, pair.A2), _transpose3(Rrev))
    B2 = _mat3mul(_mat3mul(Rrev, pair.B2), _transpose3(Rrev))
    # B2 <- B2 - t*A2 with t chosen to clear the corner entry (A2 corner is 1)
    t = Fraction(B2[0][2]) / Fraction(A2[0][2])
    B2 = tuple(tuple(_demote(Fraction(B2[i][j]) - t * A2[i][j]) for j in range(3)) for i in range(3))
    A2 = tuple(tuple(_demote(Fraction(x)) for x in row) for row in A2)
    return TernaryQuadraticPair(A2, B2)


# ---------------------------------------------------------------- real roots

def _poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_rem(num, den):
    # num, den: ascending coefficient lists over Q
    num = [Fraction(t) for t in num]
    den = _poly_trim(den)
    while len(_poly_trim(num)) >= len(den):
        num = _poly_trim(num)
        k = len(num) - len(den)
        q = num[-1] / den[-1]
        for i, t in enumerate(den):
            num[i + k] -= q * t
    return _poly_trim(num)


def _sign_changes(values):
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_real_roots(poly):
    """Distinct real roots of a squarefree polynomial (ascending coefficients)."""
    p0 = _poly_trim(poly)
    if len(p0) <= 1:
        return 0
    p1 = _poly_trim([i * t for i, t in enumerate(p0)][1:])
    chain = [p0, p1]
    while len(chain[-1]) > 1:
        r = _poly_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-t for t in r])
    # signs at -inf and +inf are read off the leading terms
    at_pos = [c[-1] for c in chain]
    at_neg = [c[-1] * (-1) ** (len(c) - 1) for c in chain]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def real_root_count(f):
    """Real roots of f on P^1(R), counting [1:0] when a = 0."""
    a, b, c, d, e = f
    n = count_real_roots([e, d, c, b, a])
    return n + (1 if a == 0 else 0)


def root_type(f):
    dsc = quartic_disc(f)
    if dsc == 0:
        raise ValueError("root type needs a nonzero discriminant")
    if dsc < 0:
        return RootType.TWO_REAL
    n = real_root_count(f)
    if n == 4:
        return RootType.FOUR_REAL
    if n != 0:
        raise ArithmeticError(f"{n} real roots with positive discriminant")
    sign = f.a if f.a else f.e
    return RootType.NONE_REAL_POS if sign > 0 else RootType.NONE_REAL_NEG


# ---------------------------------------------------------------- reducibility

def _divisors(n):
    n = abs(n)
    small = [k for k in range(1, int(n ** 0.5) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def has_rational_linear_factor(f):
    a, b, c, d, e = f
    if a == 0 or e == 0:
        return True
    for q in _divisors(a):
        for p in _divisors(e):
            for s in (p, -p):
                if f(s, q) == 0:
                    return True
    return False


def _cubic_has_rational_root(g):
    a, b, c, d = g
    if a == 0 or d == 0:
        return True
    for q in _divisors(a):
        for p in _divisors(d):
            for s in (p, -p):
                if g(s, q) == 0:
                    return True
    return False


def is_irreducible_q(f):
    if not any(f):
        raise ValueError("zero form")
    if has_rational_linear_factor(f):
        return False
    # a product of two quadratics makes one root pairing Galois stable,
    # so the resolvent cubic would have a rational root
    if not _cubic_has_rational_root(resolvent_cubic(f)):
        return True
    return not _has_quadratic_factor(f)


def _has_quadratic_factor(f):
    # rare path: the resolvent has a rational root; let sympy factor it
    import sympy
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(f), x)
    return any(fac.degree() < 4 for fac, _ in poly.factor_list()[1])
