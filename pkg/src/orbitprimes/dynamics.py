"""Characteristic-zero dynamics of a finite system of rational self-maps of P^1.

A system is an ordered list of degree >= 2 maps; finite composition words act
on rational points with exact arithmetic. This module provides orbit search,
depth-limited strong-wandering and moderate-preperiodicity certificates, the
cross-difference integers attached to pairs of words, and their product over
all word pairs of the pigeonhole length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .errors import BudgetExceededError, ContractError, EscapeNotFoundError
from .exact_algebra import (
    BinaryFormZ,
    ProjectivePointQ,
    QPoly,
    normalize_point,
    resultant,
    weil_height,
)

Word = tuple[int, ...]

DEFAULT_NODE_BUDGET = 200_000


# ---------------------------------------------------------------------------
# maps and systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalMapQ:
    """Self-map of P^1 given by a pair of integer binary forms of equal degree.

    Invariants: resultant(num, den) != 0 (the pair is a morphism of degree d)
    and the joint content of all 2d+2 coefficients is 1, with the first nonzero
    coefficient of (num, den) positive.
    """

    num: BinaryFormZ
    den: BinaryFormZ
    resultant_cache: int = field(compare=False)

    @property
    def degree(self) -> int:
        return self.num.degree

    @staticmethod
    def from_forms(num: BinaryFormZ, den: BinaryFormZ) -> "RationalMapQ":
        if num.degree != den.degree:
            raise ContractError("numerator and denominator degrees differ")
        joint = list(num.coeffs) + list(den.coeffs)
        g = math.gcd(*joint)
        if g == 0:
            raise ContractError("zero map")
        first = next(c for c in joint if c != 0)
        if first < 0:
            g = -g
        num = BinaryFormZ(tuple(c // g for c in num.coeffs))
        den = BinaryFormZ(tuple(c // g for c in den.coeffs))
        res = resultant(num, den)
        if res == 0:
            raise ContractError("forms share a root: not a morphism")
        return RationalMapQ(num, den, res)

    @staticmethod
    def from_rational_coeffs(num_desc: Sequence[int | Fraction],
                             den_desc: Sequence[int | Fraction]) -> "RationalMapQ":
        """Build from affine numerator/denominator coefficients, descending.

        Denominators are cleared jointly; both are homogenized to the degree
        d = max(deg num, deg den).
        """
        nums = [Fraction(c) for c in num_desc]
        dens = [Fraction(c) for c in den_desc]
        while nums and nums[0] == 0:
            nums.pop(0)
        while dens and dens[0] == 0:
            dens.pop(0)
        if not nums or not dens:
            raise ContractError("zero numerator or denominator")
        lcm = 1
        for c in nums + dens:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        nz = [int(c * lcm) for c in nums]
        dz = [int(c * lcm) for c in dens]
        d = max(len(nz), len(dz)) - 1
        return RationalMapQ.from_forms(
            BinaryFormZ.from_poly_numerator(nz, d),
            BinaryFormZ.from_poly_numerator(dz, d),
        )

    @staticmethod
    def from_polynomial(coeffs_desc: Sequence[int | Fraction]) -> "RationalMapQ":
        """Polynomial map f(x); denominator is Z^d."""
        return RationalMapQ.from_rational_coeffs(coeffs_desc, [1])

    def is_polynomial(self) -> bool:
        """True iff the map fixes infinity totally, i.e. den = c * Z^d."""
        return all(c == 0 for c in self.den.coeffs[:-1])

    def affine_numerator(self) -> QPoly:
        return self.num.dehomogenized()

    def affine_denominator(self) -> QPoly:
        return self.den.dehomogenized()

    def max_abs_coeff(self) -> int:
        return max(abs(c) for c in self.num.coeffs + self.den.coeffs)

    def __repr__(self):
        return f"RationalMapQ(num={self.num.coeffs}, den={self.den.coeffs})"


def compose_maps(outer: RationalMapQ, inner: RationalMapQ) -> RationalMapQ:
    """The map x -> outer(inner(x)), as a normalized form pair."""
    num = outer.num.compose_pair(inner.num, inner.den)
    den = outer.den.compose_pair(inner.num, inner.den)
    return RationalMapQ.from_forms(num, den)


@dataclass(frozen=True)
class SemigroupSystem:
    """Ordered list of distinct rational maps of degree >= 2 generating a
    semigroup under composition."""

    maps: tuple[RationalMapQ, ...]

    def __post_init__(self):
        if len(self.maps) < 1:
            raise ContractError("a system needs at least one map")
        for f in self.maps:
            if f.degree < 2:
                raise ContractError("all maps must have degree >= 2")
        keys = {(f.num.coeffs, f.den.coeffs) for f in self.maps}
        if len(keys) != len(self.maps):
            raise ContractError("system contains duplicate maps")

    @property
    def r(self) -> int:
        return len(self.maps)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.degree for f in self.maps)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def evaluate(f: RationalMapQ, p: ProjectivePointQ) -> ProjectivePointQ:
    """Normalized image [F(a,b) : G(a,b)]; never (0,0) since the resultant
    of the defining forms is nonzero."""
    return normalize_point(f.num.evaluate(p.a, p.b), f.den.evaluate(p.a, p.b))


def word_evaluate(system: SemigroupSystem, word: Word,
                  p: ProjectivePointQ) -> ProjectivePointQ:
    """Apply f_{i_1} o f_{i_2} o ... o f_{i_k} to p (rightmost index first).

    The empty word is the identity.
    """
    _check_word(system, word)
    for i in reversed(word):
        p = evaluate(system.maps[i - 1], p)
    return p


def _check_word(system: SemigroupSystem, word: Word) -> None:
    for i in word:
        if not 1 <= i <= system.r:
            raise ContractError(f"word index {i} outside 1..{system.r}")


def _word_value_levels(system: SemigroupSystem, p: ProjectivePointQ,
                       depth: int, budget: int) -> list[dict[Word, ProjectivePointQ]]:
    """Values of every word of length 0..depth, sharing suffix evaluations.

    levels[k] maps each word of length k to its value at p.
    """
    levels: list[dict[Word, ProjectivePointQ]] = [{(): p}]
    nodes = 0
    for k in range(1, depth + 1):
        level: dict[Word, ProjectivePointQ] = {}
        prev = levels[k - 1]
        for w in product(range(1, system.r + 1), repeat=k):
            nodes += 1
            if nodes > budget:
                raise BudgetExceededError(
                    f"orbit tree exceeded node budget {budget}")
            level[w] = evaluate(system.maps[w[0] - 1], prev[w[1:]])
        levels.append(level)
    return levels


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CollisionWitness:
    """Two distinct nonempty words with equal value at the base point."""

    word_i: Word
    word_j: Word
    value: ProjectivePointQ


@dataclass(frozen=True)
class NoCollisionUpToDepth:
    depth: int


@dataclass(frozen=True)
class PreperiodicWitness:
    """Words f, g with g(f(P)) = f(P); g fixes the orbit point f(P)."""

    f_word: Word
    g_word: Word
    value: ProjectivePointQ


def wandering_certificate(system: SemigroupSystem, p: ProjectivePointQ,
                          depth: int,
                          node_budget: int = DEFAULT_NODE_BUDGET):
    """Search all words of length 1..depth for a value collision at p.

    Returns the first CollisionWitness in length-then-lexicographic
    enumeration order, or NoCollisionUpToDepth(depth). A clean certificate
    is a depth-limited verification that p is strongly wandering.
    """
    if depth < 1:
        raise ContractError("depth must be >= 1")
    seen: dict[ProjectivePointQ, Word] = {}
    prev: dict[Word, ProjectivePointQ] = {(): p}
    nodes = 0
    for k in range(1, depth + 1):
        level: dict[Word, ProjectivePointQ] = {}
        for w in product(range(1, system.r + 1), repeat=k):
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceededError(
                    f"orbit tree exceeded node budget {node_budget}")
            value = evaluate(system.maps[w[0] - 1], prev[w[1:]])
            level[w] = value
            if value in seen:
                return CollisionWitness(seen[value], w, value)
            if value == p:
                # w fixes p, so w and w*w (length 2k) take the same value;
                # nonempty words only, so the empty word is not a valid partner
                return CollisionWitness(w, w + w, value)
            seen[value] = w
        prev = level
    return NoCollisionUpToDepth(depth)


def moderately_preperiodic_search(system: SemigroupSystem, p: ProjectivePointQ,
                                  depth: int,
                                  node_budget: int = DEFAULT_NODE_BUDGET
                                  ) -> Optional[PreperiodicWitness]:
    """Find words f, g with 1 <= |f|, |g| <= depth and g(f(P)) = f(P).

    Returns the first witness in length-then-lex order over (f, g), or None
    if no orbit point up to the depth is fixed by a word up to the depth.
    """
    if depth < 1:
        raise ContractError("depth must be >= 1")
    levels = _word_value_levels(system, p, depth, node_budget)
    f_words = [(w, v) for k in range(1, depth + 1)
               for w, v in sorted(levels[k].items())]
    nodes = 0
    for f_word, q in f_words:
        # g runs over words up to the depth, applied at q
        g_prev: dict[Word, ProjectivePointQ] = {(): q}
        for k in range(1, depth + 1):
            g_level: dict[Word, ProjectivePointQ] = {}
            for g in product(range(1, system.r + 1), repeat=k):
                nodes += 1
                if nodes > node_budget:
                    raise BudgetExceededError(
                        f"search exceeded node budget {node_budget}")
                value = evaluate(system.maps[g[0] - 1], g_prev[g[1:]])
                g_level[g] = value
                if value == q:
                    return PreperiodicWitness(f_word, g, q)
            g_prev = g_level
    return None


# ---------------------------------------------------------------------------
# difference ideals and their product
# ---------------------------------------------------------------------------

def difference_ideal(system: SemigroupSystem, p: ProjectivePointQ,
                     word_i: Word, word_j: Word) -> int:
    """|a_i*b_j - b_i*a_j| for the normalized coordinates of the two word
    images; zero iff the images coincide globally."""
    if word_i == word_j:
        raise ContractError("difference ideal requires distinct words")
    pi = word_evaluate(system, word_i, p)
    pj = word_evaluate(system, word_j, p)
    return abs(pi.a * pj.b - pi.b * pj.a)


def pigeonhole_word_length(r: int, m: int) -> int:
    """k(m) = ceil(log(m+1) / log r): smallest k with r^k >= m + 1."""
    if r < 2:
        raise ContractError("pigeonhole length needs r >= 2")
    if m < 1:
        raise ContractError("m must be >= 1")
    k = 1
    while r ** k < m + 1:
        k += 1
    return k


@dataclass(frozen=True)
class DPrimeResult:
    """Product of the cross-differences over all ordered pairs of distinct
    words of length k = k(m)."""

    m: int
    k: int
    value: int                      # ordered-pair product (unordered squared)
    unordered_value: int
    factorization: dict[int, int]   # of the ordered-pair product
    cofactor: int                   # unfactored leftover (1 if fully factored)
    collision: Optional[tuple[Word, Word]] = None

    def is_degenerate(self) -> bool:
        return self.collision is not None


def dprime(system: SemigroupSystem, p: ProjectivePointQ, m: int,
           node_budget: int = DEFAULT_NODE_BUDGET,
           trial_bound: int = 100_000) -> DPrimeResult:
    """D'(m): product of difference integers over ordered pairs of distinct
    words of length k(m).

    The cross-difference is symmetric, so the unordered product is computed
    and squared. If two words of length k collide globally the product is 0
    and the colliding pair is reported.
    """
    k = pigeonhole_word_length(system.r, m)
    if system.r ** k > 4096:
        raise BudgetExceededError(f"r^k = {system.r ** k} word pairs is too many")
    levels = _word_value_levels(system, p, k, node_budget)
    words = sorted(levels[k].items())
    values = [v for _, v in words]
    seen: dict[ProjectivePointQ, Word] = {}
    for w, v in words:
        if v in seen:
            return DPrimeResult(m, k, 0, 0, {}, 0, collision=(seen[v], w))
        seen[v] = w
    unordered = 1
    n = len(values)
    for i in range(n):
        ai, bi = values[i].a, values[i].b
        for j in range(i + 1, n):
            unordered *= abs(ai * values[j].b - bi * values[j].a)
    ordered = unordered * unordered
    factors, cofactor = _trial_factor(unordered, trial_bound)
    ordered_factors = {q: 2 * e for q, e in factors.items()}
    return DPrimeResult(m, k, ordered, unordered, ordered_factors,
                        cofactor * cofactor)


def _trial_factor(n: int, bound: int) -> tuple[dict[int, int], int]:
    """Trial division up to bound; returns ({prime: exp}, leftover cofactor)."""
    factors: dict[int, int] = {}
    if n == 0:
        return factors, 0
    q = 2
    while q <= bound and q * q <= n:
        while n % q == 0:
            factors[q] = factors.get(q, 0) + 1
            n //= q
        q += 1 if q == 2 else 2
    if 1 < n <= bound * bound:
        factors[n] = factors.get(n, 0) + 1
        n = 1
    return factors, n


# ---------------------------------------------------------------------------
# orbit height escape
# ---------------------------------------------------------------------------

def height_escape_point(system: SemigroupSystem, p: ProjectivePointQ,
                        threshold: float,
                        budget: int = DEFAULT_NODE_BUDGET) -> ProjectivePointQ:
    """Breadth-first search of the orbit for the first point of Weil height
    exceeding the threshold; p itself qualifies at depth 0.

    Raises EscapeNotFoundError when the budget is exhausted, which signals
    that the orbit may be finite (all heights bounded).
    """
    if threshold < 0:
        raise ContractError("threshold must be >= 0")
    seen = {p}
    queue = [p]
    visited = 0
    while queue:
        nxt: list[ProjectivePointQ] = []
        for q in queue:
            visited += 1
            if visited > budget:
                raise EscapeNotFoundError(
                    f"no point of height > {threshold} within budget {budget}")
            if weil_height(q) > threshold:
                return q
            for f in system.maps:
                img = evaluate(f, q)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        queue = nxt
    raise EscapeNotFoundError(
        f"orbit is finite ({len(seen)} points), no height exceeds {threshold}")


def default_height_threshold(system: SemigroupSystem) -> float:
    """Configurable stand-in for the ineffective height-gap constants:
    max over maps of log((d+1) * maxcoeff) + 1."""
    return max(math.log((f.degree + 1) * f.max_abs_coeff())
               for f in system.maps) + 1.0
