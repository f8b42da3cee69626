"""Numeric scan behind enumeration.BOX_CONSTANTS.

Every real quartic of height 1 is SL2(R)-equivalent to a form whose covariant
point is i; those forms make up a compact set (one rotation orbit per shape).
A form with covariant point x0 + i y0 is obtained from one with covariant
point i by x -> (x - x0 y) / sqrt(y0), so its leading coefficients are
explicit in (x0, y0).  Maximizing over the shapes, the rotations and the
fundamental domain (large y0 only shrinks a and b, and c tends to its value
at i) gives the sup of |a|, |b|, |c| per unit h = H^(1/6).

    python3 scripts/box_constants.py [--grid 401]
"""
import argparse
import math

import numpy as np

from binquartic.forms import QuarticForm, substitute_quartic
from binquartic.reduction import covariant_point


def invariants(f):
    a, b, c, d, e = f
    return 12 * a * e - 3 * b * d + c * c, 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c ** 3


def centred(f):
    """Equivalent real form of height 1 with covariant point i."""
    f = substitute_quartic(f, ((0.6, 0.8), (-0.8, 0.6)))  # leading coefficient nonzero
    z = covariant_point(QuarticForm(*f))
    r = math.sqrt(z.imag)
    h = substitute_quartic(f, ((r, 0), (z.real / r, 1 / r)))
    I, J = invariants(h)
    lam = max(abs(I) ** 3, J * J / 4) ** (-1 / 6)
    return [lam * t for t in h]


def shapes(grid):
    out = []
    for u in np.linspace(-0.999999, 0.999999, grid):
        # a root at infinity: x^3 y + s x y^3 + t y^4 has I = -3s, J = -27t
        for I, J in [(1, 2 * u), (-1, 2 * u), (u, 2), (u, -2)]:
            out.append((0, 1, 0, -I / 3, -J / 27))
    for c in np.linspace(-1.99999, 1.99999, 2 * grid - 1):
        out.append((1, 0, c, 0, 1))  # no real roots
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=401)
    args = ap.parse_args()
    angles = np.linspace(0, math.pi, 361)
    rotated = []
    for f in shapes(args.grid):
        h = centred(f)
        for t in angles:
            rotated.append(substitute_quartic(h, ((math.cos(t), math.sin(t)), (-math.sin(t), math.cos(t)))))
    rotated = np.array(rotated)
    print("sup |coefficients| at covariant point i:", np.abs(rotated).max(axis=0).round(3))
    c0, c1, c2 = rotated[:, 0], rotated[:, 1], rotated[:, 2]
    best = np.zeros(3)
    for y0 in [math.sqrt(3) / 2, 0.9, 1.0, 1.2, 1.5, 2.0, 4.0]:
        for x0 in np.linspace(-0.5, 0.5, 21):
            a = c0 / y0 ** 2
            b = c1 / y0 - 4 * x0 * c0 / y0 ** 2
            c = c2 - 3 * x0 * c1 / y0 + 6 * x0 ** 2 * c0 / y0 ** 2
            best = np.maximum(best, [abs(a).max(), abs(b).max(), abs(c).max()])
    print("sup |a|, |b|, |c| over the domain:", best.round(3))
    print("with a ten percent margin:", (1.1 * best).round(2))


if __name__ == "__main__":
    main()
