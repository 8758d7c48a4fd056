"""Decision procedures for the hypothesis predicates on rational maps:
critical-value structure (simplicity, separation), power-like polynomial
detection, compositional left factors, finite freeness checks, a sampler for
the good family of map pairs, and the closed-form genus constants.

The critical-value machinery works in exact arithmetic. For a degree-d map
f = F/G the affine critical points are the roots of the Wronskian
W = F'G - FG' (with multiplicity e-1 at a point of ramification index e).
After moving the point at infinity away from the critical locus on both the
source and the target side, the monic polynomial

    D(w) = prod over roots a of W of (F(a) - w G(a)),   up to scaling,

has degree 2d-2; its roots are the critical values and the multiplicity of a
root v is the total ramification excess over v. Critical simplicity is then
exactly squarefreeness of D. D is computed by exact interpolation from
integer Sylvester resultants, so no root is ever approximated.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .errors import (
    BudgetExceededError,
    ContractError,
    CoordinateSearchError,
)
from .exact_algebra import (
    BinaryFormZ,
    QPoly,
    det_bareiss,
    distinct_root_count,
    is_squarefree,
    lagrange_interpolate,
    poly_gcd,
    squarefree_decomposition,
    sylvester_matrix,
)
from .dynamics import RationalMapQ, SemigroupSystem, Word, compose_maps

Mobius = tuple[int, int, int, int]   # (a, b, c, d) acting as y -> (ay+b)/(cy+d)

_COORDINATE_TRIES = 32
_COORDINATE_ENTRY_BOUND = 7


# ---------------------------------------------------------------------------
# small exact helpers
# ---------------------------------------------------------------------------

def int_nth_root(n: int, k: int) -> Optional[int]:
    """Exact k-th root of a nonnegative integer, or None."""
    if n < 0:
        raise ContractError("negative radicand")
    if n in (0, 1) or k == 1:
        return n
    x = round(n ** (1.0 / k))
    for cand in (x - 1, x, x + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


def rational_nth_root(q: Fraction, k: int) -> Optional[Fraction]:
    """Exact rational k-th root with the natural sign convention; None when
    no rational root exists (including negative q with even k)."""
    if q == 0:
        return Fraction(0)
    sign = 1
    if q < 0:
        if k % 2 == 0:
            return None
        sign, q = -1, -q
    num = int_nth_root(q.numerator, k)
    den = int_nth_root(q.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(sign * num, den)


def _divisors(n: int) -> list[int]:
    out = [d for d in range(2, n + 1) if n % d == 0]
    return out


def _resultant_int(a_desc: Sequence[int], b_desc: Sequence[int]) -> int:
    """Resultant at actual degrees for integer coefficient lists, descending."""
    a = list(a_desc)
    b = list(b_desc)
    while a and a[0] == 0:
        a.pop(0)
    while b and b[0] == 0:
        b.pop(0)
    if not a or not b:
        raise ContractError("resultant of zero polynomial")
    if len(a) == 1:
        return a[0] ** (len(b) - 1)
    if len(b) == 1:
        return b[0] ** (len(a) - 1)
    return det_bareiss(sylvester_matrix(a, b))


# ---------------------------------------------------------------------------
# coordinate changes
# ---------------------------------------------------------------------------

def target_transform(f: RationalMapQ, m: Mobius) -> RationalMapQ:
    """Post-compose with the Mobius map (a y + b) / (c y + d)."""
    a, b, c, d = m
    if a * d - b * c == 0:
        raise ContractError("singular coordinate change")
    num = f.num.scale(a).add(f.den.scale(b))
    den = f.num.scale(c).add(f.den.scale(d))
    return RationalMapQ.from_forms(num, den)


def source_transform(f: RationalMapQ, m: Mobius) -> RationalMapQ:
    """Pre-compose with the Mobius map (a x + b) / (c x + d)."""
    a, b, c, d = m
    if a * d - b * c == 0:
        raise ContractError("singular coordinate change")
    u = BinaryFormZ((a, b))
    v = BinaryFormZ((c, d))
    return RationalMapQ.from_forms(f.num.compose_pair(u, v),
                                   f.den.compose_pair(u, v))


def _random_mobius(rng: random.Random) -> Mobius:
    while True:
        m = tuple(rng.randint(-_COORDINATE_ENTRY_BOUND, _COORDINATE_ENTRY_BOUND)
                  for _ in range(4))
        if m[0] * m[3] - m[1] * m[2] != 0:
            return m  # type: ignore[return-value]


def wronskian(f: RationalMapQ) -> QPoly:
    """F'G - FG' for the dehomogenized forms; its roots are the affine
    critical points, with multiplicity e - 1."""
    nf = f.affine_numerator()
    df = f.affine_denominator()
    return nf.derivative() * df - nf * df.derivative()


def distinct_projective_roots(form: BinaryFormZ) -> int:
    """Number of distinct projective roots of a binary form over Q-bar."""
    poly = form.dehomogenized()
    at_infinity = 1 if form.coeffs[0] == 0 else 0
    if poly.is_zero():
        raise ContractError("zero form")
    return distinct_root_count(poly) + at_infinity


# ---------------------------------------------------------------------------
# critical values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalData:
    """Critical-value accounting for one map.

    finite_critical_value_poly is monic of degree 2d-2, computed in the
    target coordinate named by target_coordinate (identity unless infinity
    had to be moved off the critical locus); its roots are the images of the
    critical values under that coordinate, and root multiplicities are the
    ramification excess over each value. multiplicity_profile lists
    (multiplicity, number_of_values) pairs from the squarefree decomposition.
    infinity_is_critical_value refers to the original coordinate.
    """

    finite_critical_value_poly: QPoly
    multiplicity_profile: tuple[tuple[int, int], ...]
    infinity_is_critical_value: bool
    target_coordinate: Mobius

    def total_ramification_excess(self) -> int:
        return sum(mult * count for mult, count in self.multiplicity_profile)


def _prepare_source(f: RationalMapQ, rng: random.Random) -> RationalMapQ:
    """Pre-compose until the source point at infinity is not critical, i.e.
    the Wronskian has full degree 2d - 2."""
    full = 2 * f.degree - 2
    if wronskian(f).degree == full:
        return f
    for _ in range(_COORDINATE_TRIES):
        g = source_transform(f, _random_mobius(rng))
        if wronskian(g).degree == full:
            return g
    raise CoordinateSearchError(
        "no source coordinate avoided the critical locus; this should have "
        "probability zero")


def _infinity_noncritical_target(f: RationalMapQ) -> bool:
    return distinct_projective_roots(f.den) == f.degree


def _critical_value_poly_in(f_prepared: RationalMapQ) -> QPoly:
    """Monic D(w) of degree 2d-2, assuming infinity is neither a critical
    point (source) nor a critical value (target) for the prepared map."""
    d = f_prepared.degree
    w = wronskian(f_prepared)
    w_int = [int(c) for c in reversed(w.clear_denominators())]  # descending
    lead_w = w_int[0]
    nf = list(f_prepared.num.coeffs)       # descending already
    df = list(f_prepared.den.coeffs)
    nodes = []
    for ws in range(2 * d - 1):
        b = [n - ws * g for n, g in zip(nf, df)]
        deg_b = len(b) - 1
        lead_zeros = 0
        for c in b:
            if c == 0:
                lead_zeros += 1
            else:
                break
        deg_b -= lead_zeros
        res = _resultant_int(w_int, b)
        nodes.append((ws, Fraction(res, lead_w ** deg_b)))
    poly = lagrange_interpolate(nodes)
    if poly.degree != 2 * d - 2:
        raise CoordinateSearchError("critical value polynomial degenerated")
    return poly.monic()


def _prepared_pair(f: RationalMapQ, mu: Mobius, rng: random.Random) -> RationalMapQ:
    g = target_transform(f, mu) if mu != (1, 0, 0, 1) else f
    return _prepare_source(g, rng)


def critical_values(f: RationalMapQ, seed: int = 0) -> CriticalData:
    """Exact critical-value data; degree >= 2 required."""
    if f.degree < 2:
        raise ContractError("critical values need degree >= 2")
    rng = random.Random(seed ^ 0x9E3779B9)
    inf_critical = distinct_projective_roots(f.den) < f.degree
    mu: Mobius = (1, 0, 0, 1)
    if inf_critical:
        for _ in range(_COORDINATE_TRIES):
            cand = _random_mobius(rng)
            if _infinity_noncritical_target(target_transform(f, cand)):
                mu = cand
                break
        else:
            raise CoordinateSearchError(
                "no target coordinate moved infinity off the critical values")
    prepared = _prepared_pair(f, mu, rng)
    dpoly = _critical_value_poly_in(prepared)
    profile = tuple(sorted((mult, factor.degree)
                           for mult, factor in squarefree_decomposition(dpoly)))
    return CriticalData(dpoly, profile, inf_critical, mu)


def is_critically_simple(f: RationalMapQ, seed: int = 0) -> bool:
    """True iff every critical value has exactly one simple ramification
    point above it (fiber size deg f - 1): squarefreeness of the
    critical-value polynomial in a good coordinate."""
    data = critical_values(f, seed=seed)
    return is_squarefree(data.finite_critical_value_poly)


def are_critically_separated(f: RationalMapQ, g: RationalMapQ,
                             seed: int = 0) -> bool:
    """True iff the critical value sets are disjoint (shared coordinate)."""
    if f.degree < 2 or g.degree < 2:
        raise ContractError("critical separation needs degrees >= 2")
    if (f.num.coeffs, f.den.coeffs) == (g.num.coeffs, g.den.coeffs):
        return False
    rng = random.Random(seed ^ 0x51ED2701)
    mu: Optional[Mobius] = None
    for cand in [(1, 0, 0, 1)] + [_random_mobius(rng)
                                  for _ in range(_COORDINATE_TRIES)]:
        tf = target_transform(f, cand)
        tg = target_transform(g, cand)
        if _infinity_noncritical_target(tf) and _infinity_noncritical_target(tg):
            mu = cand
            break
    if mu is None:
        raise CoordinateSearchError("no common target coordinate found")
    df = _critical_value_poly_in(_prepared_pair(f, mu, rng))
    dg = _critical_value_poly_in(_prepared_pair(g, mu, rng))
    return poly_gcd(df, dg).degree == 0


# ---------------------------------------------------------------------------
# polynomial decomposition
# ---------------------------------------------------------------------------

def chebyshev_t(n: int) -> QPoly:
    """T_n with T_n(cos t) = cos nt; integer coefficients, leading 2^(n-1)."""
    if n < 0:
        raise ContractError("negative Chebyshev index")
    t0, t1 = QPoly([1]), QPoly([0, 1])
    if n == 0:
        return t0
    for _ in range(n - 1):
        t0, t1 = t1, QPoly([0, 2]) * t1 - t0
    return t1


def right_factor_candidate(f: QPoly, n: int) -> QPoly:
    """The unique monic, constant-zero candidate h of degree n with
    f = R o h for some R, solved from the top n-1 coefficients of f.

    Only a candidate: existence of R must be verified by expansion.
    """
    d = f.degree
    if d % n != 0 or n < 1:
        raise ContractError("factor degree must divide deg f")
    m = d // n
    fm = f.monic()
    h = [Fraction(0)] * (n + 1)
    h[n] = Fraction(1)
    for k in range(1, n):
        partial = QPoly(h) ** m
        h[n - k] = (fm[d - k] - partial[d - k]) / m
    return QPoly(h)


def base_expansion(f: QPoly, h: QPoly) -> list[QPoly]:
    """Digits q_i with f = sum q_i h^i and deg q_i < deg h."""
    if h.degree < 1:
        raise ContractError("expansion base must be nonconstant")
    digits = []
    rest = f
    while not rest.is_zero():
        rest, digit = divmod(rest, h)
        digits.append(digit)
    return digits or [QPoly()]


def decompose_with_right_factor(f: QPoly, n: int
                                ) -> Optional[tuple[QPoly, QPoly]]:
    """(R, h) with f = R o h, h the canonical degree-n right factor, or None."""
    h = right_factor_candidate(f, n)
    digits = base_expansion(f, h)
    if any(q.degree > 0 for q in digits):
        return None
    outer = QPoly([q[0] for q in digits])
    return outer, h


# ---------------------------------------------------------------------------
# power-like detection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerLikeWitness:
    outer: QPoly           # R
    kind: str              # "power" or "chebyshev"
    inner_degree: int      # n with C = x^n or T_n
    linear: QPoly          # L, degree 1

    def inner(self) -> QPoly:
        if self.kind == "power":
            return QPoly([0] * self.inner_degree + [1])
        return chebyshev_t(self.inner_degree)

    def recompose(self) -> QPoly:
        return self.outer.compose(self.inner().compose(self.linear))


@dataclass(frozen=True)
class PowerLikeVerdict:
    is_power_like: bool
    witness: Optional[PowerLikeWitness]


def _power_kind_witness(outer: QPoly, h: QPoly, n: int
                        ) -> Optional[PowerLikeWitness]:
    """h monic with h(0) = 0; test h = (x - rho)^n + e."""
    hp = h.derivative()
    rho = -hp[n - 2] / (n * (n - 1)) if n >= 2 else Fraction(0)
    if hp != n * QPoly([-rho, 1]) ** (n - 1):
        return None
    e = h(rho)
    return PowerLikeWitness(outer.compose(QPoly([e, 1])), "power", n,
                            QPoly([-rho, 1]))


def _chebyshev_kind(outer: QPoly, h: QPoly, n: int
                    ) -> tuple[bool, Optional[PowerLikeWitness]]:
    """Test h = a*T_n(c x + c') + b over Q-bar; rational witness when the
    scaling c is rational. n >= 3 (T_2 is linearly a power map)."""
    t_shift = -h[n - 1] / n
    ht = h.compose(QPoly([t_shift, 1]))     # no x^(n-1) term now
    if ht[n - 2] == 0:
        return False, None
    gamma = Fraction(-n, 4) / ht[n - 2]     # = c^2, from the x^(n-2) match
    u = Fraction(1, 2 ** (n - 1))           # = a * c^n, from the leading match
    tn = chebyshev_t(n)
    for k in range(1, n - 1):
        if (n - k) % 2 == 1:
            if ht[k] != 0:
                return False, None
        else:
            j = (n - k) // 2
            if ht[k] != u * tn[k] / gamma ** j:
                return False, None
    c = rational_nth_root(gamma, 2)
    if c is None or c == 0:
        return True, None                   # power-like over Q-bar only
    a = u / c ** n
    b = ht[0] - (a * tn[0] if n % 2 == 0 else 0)
    witness = PowerLikeWitness(outer.compose(QPoly([b, a])), "chebyshev", n,
                               QPoly([-c * t_shift, c]))
    return True, witness


def is_power_like(f: QPoly) -> PowerLikeVerdict:
    """Decide whether f = R o C o L with L linear, deg C >= 2 and C a power
    map or a Chebyshev polynomial; witnesses recompose to f exactly."""
    if f.degree < 2:
        raise ContractError("power-likeness needs degree >= 2")
    for n in _divisors(f.degree):
        dec = decompose_with_right_factor(f, n)
        if dec is None:
            continue
        outer, h = dec
        witness = _power_kind_witness(outer, h, n)
        if witness is not None:
            return PowerLikeVerdict(True, witness)
        if n >= 3:
            found, witness = _chebyshev_kind(outer, h, n)
            if found:
                return PowerLikeVerdict(True, witness)
    return PowerLikeVerdict(False, None)


# ---------------------------------------------------------------------------
# left compositional factors
# ---------------------------------------------------------------------------

def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return a, 1, 0
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def _linear_right_equivalent(p: QPoly, q: QPoly
                             ) -> tuple[bool, Optional[tuple[Fraction, Fraction]]]:
    """Does p(a x + b) = q hold for some a != 0, b over Q-bar?

    Returns (exists, (a, b)) with rational a, b when available, else
    (True, None) for a Q-bar-only solution.
    """
    deg = p.degree
    if deg != q.degree or deg < 1:
        return False, None
    sp = -p[deg - 1] / (deg * p[deg])
    sq = -q[deg - 1] / (deg * q[deg])
    pd = p.compose(QPoly([sp, 1]))
    qd = q.compose(QPoly([sq, 1]))
    if pd[0] != qd[0]:
        return False, None
    ks = [k for k in range(1, deg + 1) if pd[k] != 0 or qd[k] != 0]
    if any(pd[k] == 0 or qd[k] == 0 for k in ks):
        return False, None
    ratios = {k: qd[k] / pd[k] for k in ks}
    kappa, acc = ks[0], ratios[ks[0]]
    for k in ks[1:]:
        g, x, y = _ext_gcd(kappa, k)
        acc = acc ** x * ratios[k] ** y
        kappa = g
    for k in ks:
        if ratios[k] != acc ** (k // kappa):
            return False, None
    a = rational_nth_root(acc, kappa)
    if a is None:
        return True, None
    return True, (a, sp - a * sq)


def left_compositional_factor(f1: QPoly, f2: QPoly) -> Optional[QPoly]:
    """g with deg g >= 2 and f1 = f2 o g, when a rational one exists."""
    exists, g = _left_factor_analysis(f1, f2)
    return g if exists else None


def has_left_compositional_factor(f1: QPoly, f2: QPoly) -> bool:
    """Existence of g in Q-bar[x] with deg g >= 2 and f1 = f2 o g."""
    exists, _ = _left_factor_analysis(f1, f2)
    return exists


def _left_factor_analysis(f1: QPoly, f2: QPoly
                          ) -> tuple[bool, Optional[QPoly]]:
    if f1.degree < 2 or f2.degree < 2:
        raise ContractError("compositional factor test needs degrees >= 2")
    d1, d2 = f1.degree, f2.degree
    if d1 % d2 != 0 or d1 // d2 < 2:
        return False, None
    e = d1 // d2
    dec = decompose_with_right_factor(f1, e)
    if dec is None:
        return False, None
    outer, h = dec                    # f1 = outer o h, deg outer = d2
    exists, ab = _linear_right_equivalent(f2, outer)
    if not exists:
        return False, None
    if ab is None:
        return True, None             # factor exists over Q-bar only
    a, b = ab
    g = a * h + b
    if f2.compose(g) != f1:           # exact full verification
        return False, None
    return True, g


# ---------------------------------------------------------------------------
# freeness and the good family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreenessReport:
    depth: int
    distinct_up_to_depth: bool
    equal_words: Optional[tuple[Word, Word]] = None


def free_semigroup_finite_check(system: SemigroupSystem, depth: int,
                                coeff_bit_budget: int = 1 << 16
                                ) -> FreenessReport:
    """Compose all words of length <= depth as normalized form pairs and
    report the first pair of distinct words defining equal maps, if any."""
    if depth < 1:
        raise ContractError("depth must be >= 1")
    seen: dict[tuple, Word] = {}
    prev: dict[Word, RationalMapQ] = {}
    for i, f in enumerate(system.maps, start=1):
        prev[(i,)] = f
        seen[(f.num.coeffs, f.den.coeffs)] = (i,)
    level = prev
    for k in range(2, depth + 1):
        nxt: dict[Word, RationalMapQ] = {}
        for w in product(range(1, system.r + 1), repeat=k):
            g = compose_maps(system.maps[w[0] - 1], level[w[1:]])
            if g.max_abs_coeff().bit_length() > coeff_bit_budget:
                raise BudgetExceededError("composed coefficients too large")
            key = (g.num.coeffs, g.den.coeffs)
            if key in seen:
                return FreenessReport(depth, False, (seen[key], w))
            seen[key] = w
            nxt[w] = g
        level = nxt
    return FreenessReport(depth, True)


@dataclass(frozen=True)
class SampleReport:
    found: Optional[SemigroupSystem]
    attempts_used: int
    simple_failures: int
    separation_failures: int
    verdicts: Optional[dict] = None


def _random_map(rng: random.Random, degree: int, height: int,
                polynomial: bool = False) -> RationalMapQ:
    while True:
        num = [rng.randint(-height, height) for _ in range(degree + 1)]
        if polynomial:
            den = [0] * degree + [1]
        else:
            den = [rng.randint(-height, height) for _ in range(degree + 1)]
        if num[0] == 0 and den[0] == 0:
            continue
        if all(c == 0 for c in num) or all(c == 0 for c in den):
            continue
        try:
            return RationalMapQ.from_forms(BinaryFormZ(tuple(num)),
                                           BinaryFormZ(tuple(den)))
        except ContractError:
            continue


def sample_good_family(degrees: Sequence[int], attempts: int,
                       coefficient_height: int, seed: int = 0) -> SampleReport:
    """Draw random systems of the given degrees until the first two maps are
    critically simple and critically separated; remaining maps are
    unconstrained. Honest not-found report when attempts run out."""
    if len(degrees) < 2:
        raise ContractError("the good family needs at least two maps")
    if degrees[0] < 4 or degrees[1] < 4:
        raise ContractError("the first two degrees must be >= 4")
    if any(d < 2 for d in degrees):
        raise ContractError("all degrees must be >= 2")
    rng = random.Random(seed)
    simple_failures = 0
    separation_failures = 0
    for attempt in range(1, attempts + 1):
        f1 = _random_map(rng, degrees[0], coefficient_height)
        f2 = _random_map(rng, degrees[1], coefficient_height)
        if not (is_critically_simple(f1, seed=attempt)
                and is_critically_simple(f2, seed=attempt)):
            simple_failures += 1
            continue
        if not are_critically_separated(f1, f2, seed=attempt):
            separation_failures += 1
            continue
        maps = [f1, f2]
        for d in degrees[2:]:
            g = _random_map(rng, d, coefficient_height)
            while any((g.num.coeffs, g.den.coeffs) ==
                      (h.num.coeffs, h.den.coeffs) for h in maps):
                g = _random_map(rng, d, coefficient_height)
            maps.append(g)
        verdicts = {"critically_simple": [True, True],
                    "critically_separated": True}
        return SampleReport(SemigroupSystem(tuple(maps)), attempt,
                            simple_failures, separation_failures, verdicts)
    return SampleReport(None, attempts, simple_failures, separation_failures)


# ---------------------------------------------------------------------------
# genus constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GenusConstants:
    g_diag: int     # genus of the off-diagonal part of the self-collision curve
    g_cross: int    # genus of the cross-collision curve
    both_ge_2: bool


def genus_constants(d1: int, d2: int) -> GenusConstants:
    """Closed-form genera of the collision curves for a pair of critically
    simple, critically separated maps: (d-2)^2 for the self curves (the
    smaller of the two is reported) and (d1-1)(d2-1) for the cross curve."""
    if d1 < 2 or d2 < 2:
        raise ContractError("degrees must be >= 2")
    g_diag = min((d1 - 2) ** 2, (d2 - 2) ** 2)
    g_cross = (d1 - 1) * (d2 - 1)
    return GenusConstants(g_diag, g_cross, g_diag >= 2 and g_cross >= 2)
