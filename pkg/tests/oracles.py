"""Independent oracles used to validate the exact library.

Everything here is deliberately implemented by different means than the
package under test: numpy root-finding with tolerance clustering for the
algebraic predicates, and naive dictionary-based closure for orbit sizes.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
import numpy as np

_INF = "inf"  # sentinel critical value for the point at infinity
_DPS = 60     # working precision for the fiber-counting oracle


def poly_roots(coeffs_desc) -> list[complex]:
    """Complex roots of a polynomial given by descending coefficients."""
    cs = [float(c) for c in coeffs_desc]
    while cs and cs[0] == 0.0:
        cs.pop(0)
    if len(cs) <= 1:
        return []
    return list(np.roots(cs))


def cluster_count(values, tol: float) -> int:
    """Number of tolerance-clusters among complex values (greedy)."""
    reps: list[complex] = []
    for v in values:
        if all(abs(v - r) > tol for r in reps):
            reps.append(v)
    return len(reps)


def numeric_resultant(a_desc, b_desc) -> complex:
    """lc_a^deg_b * lc_b^deg_a * prod (alpha_i - beta_j) from numpy roots."""
    ra = poly_roots(a_desc)
    rb = poly_roots(b_desc)
    la = next(float(c) for c in a_desc if c != 0)
    lb = next(float(c) for c in b_desc if c != 0)
    out = complex(la) ** len(rb) * complex(lb) ** len(ra)
    for x in ra:
        for y in rb:
            out *= (x - y)
    return out


def numeric_is_squarefree(coeffs_desc, tol: float = 1e-6) -> bool:
    roots = poly_roots(coeffs_desc)
    return cluster_count(roots, tol) == len(roots)


# ---------------------------------------------------------------------------
# critical-value fiber counting
# ---------------------------------------------------------------------------

def _mp(x):
    f = Fraction(x) if not isinstance(x, (int, Fraction)) else Fraction(x)
    return mpmath.mpf(f.numerator) / mpmath.mpf(f.denominator)


def _mp_roots(coeffs_desc) -> list:
    """High-precision complex roots (descending coefficients) via the
    eigenvalues of the companion matrix; robust to multiple roots, where
    iterative root polishing stalls."""
    cs = [mpmath.mpc(c) if not isinstance(c, (int, Fraction)) else
          mpmath.mpc(_mp(c)) for c in coeffs_desc]
    scale = max(abs(c) for c in cs) if cs else 0
    while cs and abs(cs[0]) <= 1e-40 * scale:
        cs.pop(0)
    n = len(cs) - 1
    if n < 1:
        return []
    lead = cs[0]
    mon = [c / lead for c in cs[1:]]
    if n == 1:
        return [-mon[0]]
    comp = mpmath.zeros(n)
    for i in range(n):
        comp[0, i] = -mon[i]
    for i in range(1, n):
        comp[i, i - 1] = 1
    return list(mpmath.eig(comp, left=False, right=False))


def _mp_horner(coeffs_desc, x):
    acc = mpmath.mpc(0)
    for c in coeffs_desc:
        acc = acc * x + _mp(c)
    return acc


def _exact_wronskian(num_desc, den_desc) -> list[int]:
    """Integer descending coefficients of F'G - FG' for dehomogenized forms."""
    def deriv(desc):
        deg = len(desc) - 1
        return [c * (deg - i) for i, c in enumerate(desc[:-1])] or [0]

    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    def sub(a, b):
        n = max(len(a), len(b))
        a = [0] * (n - len(a)) + list(a)
        b = [0] * (n - len(b)) + list(b)
        return [x - y for x, y in zip(a, b)]

    num = [int(c) for c in num_desc]
    den = [int(c) for c in den_desc]
    w = sub(mul(deriv(num), den), mul(num, deriv(den)))
    while len(w) > 1 and w[0] == 0:
        w.pop(0)
    return w


def _projective_fiber_size(form_desc_mp, tol) -> int:
    """Distinct projective roots of a binary form given by its descending
    (high-precision) coefficients: clustered affine roots, plus the root at
    infinity when the leading coefficient vanishes."""
    cs = list(form_desc_mp)
    scale = max(abs(c) for c in cs)
    at_inf = 1 if abs(cs[0]) <= tol * scale else 0
    while cs and abs(cs[0]) <= tol * scale:
        cs.pop(0)
    if len(cs) <= 1:
        return at_inf
    roots = _mp_roots(cs)
    reps = []
    for r in roots:
        if all(abs(r - s) > tol for s in reps):
            reps.append(r)
    return len(reps) + at_inf


def numeric_fiber_sizes(num_desc, den_desc, tol: float = 1e-8):
    """[(critical value, distinct fiber size)]; num_desc and den_desc are
    the d+1 descending form coefficients of a degree-d map.

    Critical points are high-precision roots of the exact Wronskian, plus
    the point at infinity when the Wronskian degree drops below 2d - 2.
    Fibers are counted projectively over each clustered critical value at
    the stated tolerance; 60-digit arithmetic keeps genuinely equal values
    far inside the cluster radius.
    """
    d = len(num_desc) - 1
    assert len(den_desc) == d + 1
    with mpmath.workdps(_DPS):
        w = _exact_wronskian(num_desc, den_desc)
        crit = _mp_roots(w)

        values = []
        for a in crit:
            ga = _mp_horner(den_desc, a)
            fa = _mp_horner(num_desc, a)
            if abs(ga) < tol * max(1, abs(fa)):
                values.append(_INF)
            else:
                values.append(fa / ga)
        if len(crit) < 2 * d - 2:    # infinity is a critical point
            if int(den_desc[0]) == 0:
                values.append(_INF)
            else:
                values.append(_mp(num_desc[0]) / _mp(den_desc[0]))

        reps = []
        for v in values:
            if v == _INF:
                if _INF not in reps:
                    reps.append(_INF)
            elif all(r == _INF or abs(v - r) > tol for r in reps):
                reps.append(v)

        out = []
        for v in reps:
            if v == _INF:
                fiber = _projective_fiber_size([_mp(c) for c in den_desc], tol)
            else:
                diff = [_mp(a) - v * _mp(b)
                        for a, b in zip(num_desc, den_desc)]
                fiber = _projective_fiber_size(diff, tol)
            out.append((v, fiber))
    return out


def numeric_critically_simple(num_desc, den_desc, tol: float = 1e-8) -> bool:
    d = len(num_desc) - 1
    fibers = numeric_fiber_sizes(num_desc, den_desc, tol)
    return all(size == d - 1 for _, size in fibers)


# ---------------------------------------------------------------------------
# brute-force orbit closure over P^1(F_p)
# ---------------------------------------------------------------------------

def brute_apply(num_desc, den_desc, x: int, p: int) -> int:
    """Apply a map to a residue point (p = infinity) with plain modular
    arithmetic on the homogeneous forms."""
    if x == p:
        a, b = 1, 0
    else:
        a, b = x, 1
    n = 0
    dd = 0
    bp = 1
    for c in num_desc:
        n = (n * a + c * bp) % p
        bp = bp * b % p
    bp = 1
    for c in den_desc:
        dd = (dd * a + c * bp) % p
        bp = bp * b % p
    if dd == 0:
        return p
    return n * pow(dd, p - 2, p) % p


def brute_orbit_size(maps, x0: int, p: int) -> int:
    """maps: list of (num_desc, den_desc) integer form coefficients."""
    seen = {x0}
    frontier = [x0]
    while frontier:
        nxt = []
        for x in frontier:
            for num, den in maps:
                y = brute_apply(num, den, x, p)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def brute_wandering_collision(maps, point, depth: int):
    """Exact flat enumeration of all words up to depth over exact rationals;
    returns a colliding pair of words or None. point is (a, b) Fractions;
    maps are (num_desc, den_desc) integer lists."""

    def apply(m, pt):
        num, den = m
        a, b = pt
        n = Fraction(0)
        d = Fraction(0)
        bp = Fraction(1)
        for c in num:
            n = n * a + c * bp
            bp *= b
        bp = Fraction(1)
        for c in den:
            d = d * a + c * bp
            bp *= b
        if n == 0 and d == 0:
            raise AssertionError("not a morphism")
        if d != 0:
            return (n / d, Fraction(1))
        return (Fraction(1), Fraction(0))

    seen = {}
    for k in range(1, depth + 1):
        for w in itertools.product(range(1, len(maps) + 1), repeat=k):
            pt = point
            for i in reversed(w):
                pt = apply(maps[i - 1], pt)
            if pt in seen and seen[pt] != w:
                return seen[pt], w
            if pt == point:
                return w, w + w
            seen.setdefault(pt, w)
    return None
