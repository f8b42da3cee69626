"""Compiled inner loops.  Everything here works in int64; callers check the
magnitude guard before dispatching and fall back to exact Python otherwise."""
import math

import numpy as np
from numba import njit


@njit(cache=True)
def _isqrt_exact(n):
    # returns the integer root of n if n is a perfect square, else -1
    if n < 0:
        return -1
    s = np.int64(math.sqrt(float(n)))
    while s * s > n:
        s -= 1
    while (s + 1) * (s + 1) <= n:
        s += 1
    return s if s * s == n else -1


@njit(cache=True)
def _check(a, b, c, d, e, I, J):
    return (12 * a * e - 3 * b * d + c * c == I and
            72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c * c * c == J)


@njit(cache=True)
def fiber_solutions(I, J, amax, bmax, cmax, out):
    """All integral (a,b,c,d,e) with the given invariants and |a|<=amax,
    |b|<=bmax, |c|<=cmax.  d and e are solved for, not searched.

    Writes rows into out and returns their number; if out is too small the
    return value is the number needed and the caller retries."""
    n = 0
    cap = out.shape[0]
    for a in range(-amax, amax + 1):
        for b in range(-bmax, bmax + 1):
            for c in range(-cmax, cmax + 1):
                if a == 0:
                    # I = c^2 - 3bd and J = 9bcd - 27eb^2 - 2c^3
                    if b == 0:
                        continue
                    t = c * c - I
                    if t % (3 * b) != 0:
                        continue
                    d = t // (3 * b)
                    u = 9 * b * c * d - 2 * c * c * c - J
                    if u % (27 * b * b) != 0:
                        continue
                    e = u // (27 * b * b)
                    if _check(a, b, c, d, e, I, J):
                        if n < cap:
                            out[n, 0] = a
                            out[n, 1] = b
                            out[n, 2] = c
                            out[n, 3] = d
                            out[n, 4] = e
                        n += 1
                    continue
                # eliminate e = (I - c^2 + 3bd) / (12a) from the J equation:
                # 324a^2 d^2 - (324abc - 81b^3) d - K = 0
                qa = 324 * a * a
                qb = -(324 * a * b * c - 81 * b * b * b)
                qc = -((72 * a * c - 27 * b * b) * (I - c * c) - 24 * a * c * c * c - 12 * a * J)
                disc = qb * qb - 4 * qa * qc
                r = _isqrt_exact(disc)
                if r < 0:
                    continue
                for sgn in range(2):
                    num = -qb + r if sgn == 0 else -qb - r
                    if sgn == 1 and r == 0:
                        break
                    if num % (2 * qa) != 0:
                        continue
                    d = num // (2 * qa)
                    t = I - c * c + 3 * b * d
                    if t % (12 * a) != 0:
                        continue
                    e = t // (12 * a)
                    if _check(a, b, c, d, e, I, J):
                        if n < cap:
                            out[n, 0] = a
                            out[n, 1] = b
                            out[n, 2] = c
                            out[n, 3] = d
                            out[n, 4] = e
                        n += 1
    return n


@njit(cache=True)
def _objective(x, y, tr, ti):
    s = 0.0
    for k in range(tr.shape[0]):
        s += math.log((x - tr[k]) ** 2 + (y - ti[k]) ** 2)
    return s - tr.shape[0] * math.log(y)


@njit(cache=True)
def covariant_from_coeffs(co):
    """Covariant point of a x^4 + ... + e (a != 0) as (x, y); see reduction.py."""
    comp = np.zeros((4, 4), dtype=np.complex128)
    for k in range(4):
        comp[0, k] = -co[k + 1] / co[0]
    for k in range(1, 4):
        comp[k, k - 1] = 1.0
    roots = np.linalg.eigvals(comp)
    tr = np.empty(4)
    ti = np.empty(4)
    for k in range(4):
        tr[k] = roots[k].real
        ti[k] = -abs(roots[k].imag)
    x = tr.mean()
    y = 0.0
    for k in range(4):
        y = max(y, math.hypot(tr[k] - x, ti[k]))
    y = max(y, 1e-3)
    cur = _objective(x, y, tr, ti)
    for _ in range(200):
        gx = gy = hxx = hxy = hyy = 0.0
        for k in range(4):
            dx = x - tr[k]
            dy = y - ti[k]
            D = dx * dx + dy * dy
            gx += 2 * dx / D
            gy += 2 * dy / D
            hxx += 2 / D - 4 * dx * dx / (D * D)
            hxy += -4 * dx * dy / (D * D)
            hyy += 2 / D - 4 * dy * dy / (D * D)
        gy -= 4 / y
        hyy += 4 / (y * y)
        det = hxx * hyy - hxy * hxy
        if hxx > 0 and det > 0:
            sx = -(hyy * gx - hxy * gy) / det
            sy = -(hxx * gy - hxy * gx) / det
        else:
            sx = -gx * y * y
            sy = -gy * y * y
        step = 1.0
        nx = x
        ny = y
        val = cur
        ok = False
        while step >= 1e-12:
            ny = y + step * sy
            if ny > 0:
                nx = x + step * sx
                val = _objective(nx, ny, tr, ti)
                if val <= cur + 1e-15 * abs(cur):
                    ok = True
                    break
            step *= 0.5
        if not ok:
            break
        moved = abs(step * sx) + abs(step * sy)
        x = nx
        y = ny
        cur = val
        if moved < 1e-14 * (1 + abs(x) + y):
            break
    return x, y


@njit(cache=True)
def covariant_batch(forms, out):
    for i in range(forms.shape[0]):
        x, y = covariant_from_coeffs(forms[i])
        out[i, 0] = x
        out[i, 1] = y
