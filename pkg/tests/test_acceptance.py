"""Top-level acceptance checks, one test per criterion.

Each test prints a single ``criterion N (...): PASS`` or ``FAIL`` line in
addition to the usual pytest verdict.
"""

import functools
import math
import random
import time
from fractions import Fraction

import pytest

import orbitprimes as op
from orbitprimes.cli import build_verify_report
from orbitprimes.dynamics import NoCollisionUpToDepth, pigeonhole_word_length
from orbitprimes.hypotheses import (
    are_critically_separated,
    chebyshev_t,
    genus_constants,
    is_critically_simple,
    is_power_like,
    sample_good_family,
)
from orbitprimes.exact_algebra import QPoly
from orbitprimes.modp import evaluate_mod_p, reduce_point

from conftest import random_map, random_system
from oracles import brute_orbit_size, numeric_critically_simple


def criterion(number: int, label: str):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"\ncriterion {number} ({label}): FAIL", flush=True)
                raise
            print(f"\ncriterion {number} ({label}): PASS", flush=True)
        return wrapper
    return deco


def quad_pair():
    system = op.SemigroupSystem((op.RationalMapQ.from_polynomial([1, 0, 1]),
                                 op.RationalMapQ.from_polynomial([1, 0, -1])))
    return system, op.normalize_point(0, 1)


@criterion(1, "orbit sizes match brute-force closure, p <= 100")
def test_criterion_1_orbit_sizes_vs_brute_force():
    start = time.monotonic()
    rng = random.Random(1001)
    primes = op.primes_up_to(100)
    for _ in range(50):
        system = random_system(rng, rng.randint(1, 3), max_degree=4, height=9)
        pt = op.normalize_point(rng.randint(-9, 9), rng.randint(1, 9))
        maps = [(list(f.num.coeffs), list(f.den.coeffs)) for f in system.maps]
        for p in primes:
            rec = op.orbit_size_mod_p(system, pt, p)
            if rec.good_reduction:
                assert rec.m_p == brute_orbit_size(maps, reduce_point(pt, p), p)
    assert time.monotonic() - start < 60.0


@criterion(2, "hand-checked orbit sizes and difference ideals")
def test_criterion_2_hand_values():
    system, pt = quad_pair()
    assert op.orbit_size_mod_p(system, pt, 3).m_p == 3
    assert op.orbit_size_mod_p(system, pt, 5).m_p == 5
    assert op.difference_ideal(system, pt, (1,), (2,)) == 2
    assert op.difference_ideal(system, pt, (1, 1), (1, 2)) == 0


@criterion(3, "small orbit primes divide the word-difference product")
def test_criterion_3_pigeonhole_divisibility():
    start = time.monotonic()
    rng = random.Random(1003)
    max_m = 20
    systems = []
    while len(systems) < 10:
        system = random_system(rng, 2, max_degree=2, height=5,
                               polynomial=True)
        pt = op.normalize_point(rng.randint(-3, 3), 1)
        depth = pigeonhole_word_length(system.r, max_m)
        cert = op.wandering_certificate(system, pt, depth)
        if isinstance(cert, NoCollisionUpToDepth):
            systems.append((system, pt))
    for system, pt in systems:
        values = {}
        for m in range(1, max_m + 1):
            res = op.dprime(system, pt, m)
            assert not res.is_degenerate()
            values[m] = res.value
        for rec in op.sweep(system, pt, 10 ** 4):
            if rec.good_reduction and rec.m_p <= max_m:
                for m in range(rec.m_p, max_m + 1):
                    assert values[m] % rec.p == 0
    assert time.monotonic() - start < 300.0


@criterion(4, "Abel-summation identity on a sweep to 10^6")
def test_criterion_4_abel_identity_big_sweep(tmp_path):
    start = time.monotonic()
    system, pt = quad_pair()
    records = op.sweep(system, pt, 10 ** 6,
                       cache_path=str(tmp_path / "sweep1e6.jsonl"), workers=8)
    assert len(records) == 78498
    for eps in (0.1, 0.5, 1.0):
        direct, regrouped = op.abel_crosscheck(records, eps)
        assert abs(direct - regrouped) <= 1e-9 * max(1.0, abs(direct))
    assert time.monotonic() - start < 600.0


@criterion(5, "reduction commutes with evaluation on 1000 triples")
def test_criterion_5_reduction_commutation():
    rng = random.Random(1005)
    primes = op.primes_up_to(200)[1:]       # odd primes
    checked = 0
    while checked < 1000:
        f = random_map(rng, rng.randint(2, 4), 9)
        p = rng.choice(primes)
        if f.resultant_cache % p == 0:
            continue
        pt = op.normalize_point(rng.randint(-9, 9), rng.randint(1, 9))
        image = op.evaluate(f, pt)
        nrow = [c % p for c in f.num.coeffs]
        drow = [c % p for c in f.den.coeffs]
        assert (evaluate_mod_p(nrow, drow, reduce_point(pt, p), p)
                == reduce_point(image, p))
        checked += 1


@criterion(6, "critical-point predicates and the numeric fiber oracle")
def test_criterion_6_critical_predicates():
    for n in (3, 4, 5, 6):
        xn = op.RationalMapQ.from_polynomial([1] + [0] * n)
        assert not is_critically_simple(xn)
    t4 = chebyshev_t(4)
    assert not is_critically_simple(
        op.RationalMapQ.from_polynomial([int(c) for c in reversed(t4.coeffs)]))
    rng = random.Random(1006)
    for _ in range(20):
        f = random_map(rng, rng.randint(3, 5), 9, polynomial=True)
        assert not is_critically_simple(f)
    rep = sample_good_family((4, 4), attempts=500, coefficient_height=10,
                             seed=5)
    assert rep.found is not None and rep.attempts_used <= 500
    f = rep.found.maps[0]
    assert f.degree == 4 and is_critically_simple(f)
    assert numeric_critically_simple(tuple(f.num.coeffs), tuple(f.den.coeffs))


@criterion(7, "power-like detection with exactly recomposing witnesses")
def test_criterion_7_power_like_detection():
    rng = random.Random(1007)
    for _ in range(100):
        n = rng.randint(2, 8)
        core = (QPoly([0] * n + [1]) if rng.random() < 0.5
                else chebyshev_t(n))
        deg_r = rng.randint(1, 3)
        outer = QPoly([rng.randint(-9, 9) for _ in range(deg_r)]
                      + [rng.choice([1, 2, 3, -1, -2])])
        lin = QPoly([rng.randint(-9, 9), rng.choice([1, 2, 3, -1, -3])])
        f = outer.compose(core.compose(lin))
        verdict = is_power_like(f)
        assert verdict.is_power_like and verdict.witness is not None
        assert verdict.witness.recompose() == f
    assert not is_power_like(QPoly([0, 1, 0, 0, 1])).is_power_like
    assert not is_power_like(QPoly([0, 1, 0, 0, 0, 1])).is_power_like


@criterion(8, "genus constants at degrees (4, 4)")
def test_criterion_8_genus_constants():
    g = genus_constants(4, 4)
    assert (g.g_diag, g.g_cross) == (4, 9)


@criterion(9, "orbit-size monotonicity for subsystems at escaped points")
def test_criterion_9_monotone_inclusion():
    base, pt = quad_pair()
    extra = op.RationalMapQ.from_polynomial([1, 0, 2])
    system = op.SemigroupSystem(base.maps + (extra,))
    sub = op.SemigroupSystem(system.maps[:2])
    q = op.height_escape_point(sub, pt, op.default_height_threshold(sub))
    assert op.weil_height(q) > op.default_height_threshold(sub)
    sub_records = op.sweep(sub, q, 10 ** 4)
    full_records = op.sweep(system, pt, 10 ** 4)
    for rec_sub, rec_full in zip(sub_records, full_records):
        assert rec_sub.p == rec_full.p
        if rec_sub.good_reduction and rec_full.good_reduction:
            assert rec_sub.m_p <= rec_full.m_p


@criterion(10, "density curves non-decreasing in gamma on a 10^5 sweep")
def test_criterion_10_density_sanity(tmp_path):
    rep = sample_good_family((4, 4), attempts=500, coefficient_height=10,
                             seed=5)
    assert rep.found is not None
    system = rep.found
    pt = op.normalize_point(0, 1)
    verify = build_verify_report(system, pt, depth=3, seed=0)
    assert verify["route"] == "ratmaps"

    bound = 10 ** 5
    records = op.sweep(system, pt, bound,
                       cache_path=str(tmp_path / "sweep1e5.jsonl"))
    implied_c = op.epsilon_sum(records, 1.0).implied_c
    s = 1.0 + 1.0 / math.log(bound)
    gammas = (0.1, 0.3, 0.5, 0.7, 0.9)
    values = []
    for gamma in gammas:
        curve = op.density_estimate(records, gamma, (s,),
                                    implied_c=implied_c)
        values.append(curve.values[0])
        print(f"  gamma={gamma}: density={curve.values[0]:.6f} "
              f"implied_C*gamma={implied_c * gamma:.6f}")
    for a, b in zip(values, values[1:]):
        assert a <= b + 1e-15
