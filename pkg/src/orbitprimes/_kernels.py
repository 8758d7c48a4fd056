"""Compiled orbit kernels for the prime sweep.

All kernels require p < 2^26 so that products of residues stay below 2^52 and
the float-reciprocal reduction is exact. The point at infinity is encoded as
the residue p.

numba is optional at runtime; modp falls back to the pure-Python walker when
it is unavailable.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        if args and callable(args[0]):
            return args[0]
        return wrap

KERNEL_PRIME_LIMIT = 1 << 26


@njit(cache=True)
def orbit_size_shifted_square(p, shifts, x0):
    """Orbit size for a system where every map is x^2 + c; shifts holds the
    residues c. The shared square dominates the sweep cost, so this path is
    worth its specialization."""
    r = shifts.shape[0]
    pinv = 1.0 / p
    visited = np.zeros(p + 1, dtype=np.uint8)
    stack = np.empty(p + 1, dtype=np.int64)
    top = 0
    stack[top] = x0
    top += 1
    visited[x0] = 1
    count = 0
    while top > 0:
        top -= 1
        x = stack[top]
        count += 1
        if x == p:
            # polynomial maps fix infinity; mark it visited once
            continue
        t = x * x
        q = np.int64(t * pinv)
        x2 = t - q * p
        if x2 >= p:
            x2 -= p
        elif x2 < 0:
            x2 += p
        for i in range(r):
            y = x2 + shifts[i]
            if y >= p:
                y -= p
            if visited[y] == 0:
                visited[y] = 1
                stack[top] = y
                top += 1
    return count


@njit(cache=True)
def orbit_size_polynomial(p, coeffs, x0):
    """Orbit size for polynomial maps; coeffs is (r, d+1) residues of the
    affine numerators in descending power order (leading-aligned)."""
    r, dd = coeffs.shape
    pinv = 1.0 / p
    visited = np.zeros(p + 1, dtype=np.uint8)
    stack = np.empty(p + 1, dtype=np.int64)
    top = 0
    stack[top] = x0
    top += 1
    visited[x0] = 1
    count = 0
    while top > 0:
        top -= 1
        x = stack[top]
        count += 1
        if x == p:
            continue
        for i in range(r):
            acc = coeffs[i, 0]
            for j in range(1, dd):
                t = acc * x + coeffs[i, j]
                q = np.int64(t * pinv)
                acc = t - q * p
                if acc >= p:
                    acc -= p
                elif acc < 0:
                    acc += p
            if visited[acc] == 0:
                visited[acc] = 1
                stack[top] = acc
                top += 1
    return count


@njit(cache=True)
def orbit_size_rational(p, num_coeffs, den_coeffs, inf_num, inf_den, x0):
    """Orbit size for general rational maps.

    num_coeffs, den_coeffs are (r, d_max+1) residues of the dehomogenized
    forms in descending power order, leading-aligned (zero-padded on the
    left for maps of lower degree). inf_num, inf_den carry F(1,0), G(1,0)
    per map for the point at infinity. Division uses a full inverse table
    built by the standard O(p) recurrence.
    """
    r, dd = num_coeffs.shape
    pinv = 1.0 / p
    inv = np.empty(p, dtype=np.int64)
    if p > 1:
        inv[1] = 1
    for i in range(2, p):
        t = (p // i) * inv[p % i]
        q = np.int64(t * pinv)
        m = t - q * p
        if m >= p:
            m -= p
        elif m < 0:
            m += p
        inv[i] = p - m
    visited = np.zeros(p + 1, dtype=np.uint8)
    stack = np.empty(p + 1, dtype=np.int64)
    top = 0
    stack[top] = x0
    top += 1
    visited[x0] = 1
    count = 0
    while top > 0:
        top -= 1
        x = stack[top]
        count += 1
        for i in range(r):
            if x == p:
                num = inf_num[i]
                den = inf_den[i]
            else:
                num = num_coeffs[i, 0]
                den = den_coeffs[i, 0]
                for j in range(1, dd):
                    t = num * x + num_coeffs[i, j]
                    q = np.int64(t * pinv)
                    num = t - q * p
                    if num >= p:
                        num -= p
                    elif num < 0:
                        num += p
                    t = den * x + den_coeffs[i, j]
                    q = np.int64(t * pinv)
                    den = t - q * p
                    if den >= p:
                        den -= p
                    elif den < 0:
                        den += p
            if den == 0:
                y = p
            else:
                t = num * inv[den]
                q = np.int64(t * pinv)
                y = t - q * p
                if y >= p:
                    y -= p
                elif y < 0:
                    y += p
            if visited[y] == 0:
                visited[y] = 1
                stack[top] = y
                top += 1
    return count
