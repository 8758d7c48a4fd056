"""Analytic statistics over a finite sweep: the epsilon-weighted prime sum,
its Abel-summation regrouping, truncated logarithmic-density curves, and the
growth table for the word-difference products.

Every quantity here is a truncation at the sweep bound; nothing extrapolates
to the full Euler-type sums. Bad-reduction primes carry the infinity sentinel
and contribute zero to every sum (the 1/infinity^eps = 0 convention).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import ContractError
from .dynamics import ProjectivePointQ, SemigroupSystem, dprime
from .modp import INF_SENTINEL, OrbitRecord


class KahanSum:
    """Compensated accumulator; keeps long sweeps at ~1 ulp error."""

    __slots__ = ("total", "_c")

    def __init__(self):
        self.total = 0.0
        self._c = 0.0

    def add(self, x: float) -> None:
        y = x - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t


def _good(records: Sequence[OrbitRecord]):
    for rec in records:
        if rec.good_reduction and rec.m_p != INF_SENTINEL:
            yield rec


# ---------------------------------------------------------------------------
# epsilon sum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpsilonSumResult:
    epsilon: float
    prime_bound: int
    value: float
    implied_c: float     # epsilon * value, the truncated implied constant


def epsilon_sum(records: Sequence[OrbitRecord], epsilon: float) -> EpsilonSumResult:
    """Sum of log p / (p * m_p^epsilon) over good-reduction records."""
    if epsilon <= 0:
        raise ContractError("epsilon must be > 0")
    acc = KahanSum()
    bound = 0
    for rec in records:
        bound = max(bound, rec.p)
        if rec.good_reduction:
            acc.add(math.log(rec.p) / (rec.p * rec.m_p ** epsilon))
    return EpsilonSumResult(epsilon, bound, acc.total, epsilon * acc.total)


def abel_crosscheck(records: Sequence[OrbitRecord], epsilon: float
                    ) -> tuple[float, float]:
    """Evaluate the epsilon sum directly and regrouped by Abel summation.

    With g(t) = log t / t and G(t) = t^(-eps), the finite identity is

        sum_p g(p) G(m_p)
          = sum_{m <= M} (G(m) - G(m+1)) * A(m)  +  G(M+1) * A(M),

    where A(m) = sum over good p with m_p <= m of g(p) and M is the largest
    orbit size present. Both evaluations are returned; on exact data they
    agree to accumulated rounding.
    """
    if epsilon <= 0:
        raise ContractError("epsilon must be > 0")
    direct = epsilon_sum(records, epsilon).value

    by_m: dict[int, KahanSum] = {}
    for rec in _good(records):
        by_m.setdefault(rec.m_p, KahanSum()).add(math.log(rec.p) / rec.p)
    if not by_m:
        return 0.0, 0.0
    ms = sorted(by_m)
    big_m = ms[-1]

    def G(t: float) -> float:
        return t ** (-epsilon)

    regrouped = KahanSum()
    cum = KahanSum()
    for idx, m in enumerate(ms):
        cum.add(by_m[m].total)
        nxt = ms[idx + 1] if idx + 1 < len(ms) else big_m + 1
        # A is constant between consecutive distinct orbit sizes, so the
        # inner telescoping collapses to a single difference of G
        regrouped.add((G(m) - G(nxt)) * cum.total)
    regrouped.add(G(big_m + 1) * cum.total)
    return direct, regrouped.total


# ---------------------------------------------------------------------------
# density curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityCurve:
    """Truncated logarithmic density sums (s-1) * sum_{p in P} log p / p^s
    for a membership predicate P on good primes."""

    label: str
    prime_bound: int
    s_grid: tuple[float, ...]
    values: tuple[float, ...]
    member_count: int
    comparison: Optional[float] = None   # e.g. implied_C * gamma


def _density_curve(records: Sequence[OrbitRecord], member: Callable[[int, int], bool],
                   s_grid: Sequence[float], label: str,
                   comparison: Optional[float]) -> DensityCurve:
    members = [(rec.p, rec.m_p) for rec in _good(records) if member(rec.p, rec.m_p)]
    bound = max((rec.p for rec in records), default=0)
    values = []
    for s in s_grid:
        if s <= 1:
            raise ContractError("density grid needs s > 1")
        acc = KahanSum()
        for p, _ in members:
            acc.add(math.log(p) / p ** s)
        values.append((s - 1) * acc.total)
    return DensityCurve(label, bound, tuple(s_grid), tuple(values),
                        len(members), comparison)


def density_estimate(records: Sequence[OrbitRecord], gamma: float,
                     s_grid: Sequence[float],
                     implied_c: Optional[float] = None) -> DensityCurve:
    """Density curve for membership m_p <= p^gamma (good primes only)."""
    if not 0 < gamma < 1:
        raise ContractError("gamma must lie in (0, 1)")
    comparison = implied_c * gamma if implied_c is not None else None
    return _density_curve(records, lambda p, m: m <= p ** gamma, s_grid,
                          f"gamma={gamma}", comparison)


@dataclass(frozen=True)
class SubexponentialSpec:
    """L(t) = exp(c * (log t)^beta); beta < 1 makes L(t)/t^mu -> 0 for all
    mu > 0, so the family is subexponential by construction."""

    c: float
    beta: float

    def __post_init__(self):
        if self.c <= 0:
            raise ContractError("c must be > 0")
        if not 0 < self.beta < 1:
            raise ContractError("beta must lie in (0, 1)")

    def __call__(self, t: float) -> float:
        return math.exp(self.c * math.log(t) ** self.beta)


def subexp_density(records: Sequence[OrbitRecord], spec: SubexponentialSpec,
                   s_grid: Sequence[float]) -> DensityCurve:
    """Density curve for membership m_p <= L(p)."""
    return _density_curve(records, lambda p, m: m <= spec(p), s_grid,
                          f"L(c={spec.c},beta={spec.beta})", None)


def dm_lognorm(records: Sequence[OrbitRecord], m: int) -> float:
    """log of the product of good primes with m_p <= m: sum of log p."""
    if m < 0:
        raise ContractError("m must be >= 0")
    acc = KahanSum()
    for rec in _good(records):
        if rec.m_p <= m:
            acc.add(math.log(rec.p))
    return acc.total


# ---------------------------------------------------------------------------
# growth of the pairwise-difference product
# ---------------------------------------------------------------------------

def log_big(n: int) -> float:
    """Natural log of a positive big integer without float overflow."""
    if n <= 0:
        raise ContractError("log of non-positive integer")
    shift = max(n.bit_length() - 53, 0)
    return math.log(n >> shift) + shift * math.log(2)


@dataclass(frozen=True)
class GrowthRow:
    m: int
    k: int
    log_dprime: Optional[float]
    loglog_dprime: Optional[float]
    slope_bound: float            # C5 * log(m+1), degree-only constant
    degenerate: bool = False      # global collision, D'(m) = 0


@dataclass(frozen=True)
class GrowthReport:
    c5: float
    rows: tuple[GrowthRow, ...]


def degree_slope_constant(degrees: Sequence[int]) -> float:
    """C5 = 1 + log(d_1 + ... + d_r) / log r, depending only on the degrees."""
    r = len(degrees)
    if r < 2:
        raise ContractError("slope constant needs r >= 2")
    return 1.0 + math.log(sum(degrees)) / math.log(r)


def growth_report(system: SemigroupSystem, point: ProjectivePointQ,
                  m_list: Sequence[int]) -> GrowthReport:
    """Table of (m, k(m), log D'(m), log log D'(m), C5*log(m+1)).

    Reports the slope comparison only; the additive constant in the
    theoretical bound is ineffective, so no pass/fail claim is made.
    """
    c5 = degree_slope_constant(system.degrees)
    rows = []
    for m in m_list:
        res = dprime(system, point, m)
        bound = c5 * math.log(m + 1)
        if res.is_degenerate():
            rows.append(GrowthRow(m, res.k, None, None, bound, degenerate=True))
            continue
        ld = log_big(res.value) if res.value > 1 else 0.0
        lld = math.log(ld) if ld > 0 else None
        rows.append(GrowthRow(m, res.k, ld, lld, bound))
    return GrowthReport(c5, tuple(rows))
