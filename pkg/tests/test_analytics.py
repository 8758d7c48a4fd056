import math
import random

import pytest

import orbitprimes as op
from orbitprimes.analytics import (
    KahanSum,
    SubexponentialSpec,
    abel_crosscheck,
    degree_slope_constant,
    density_estimate,
    dm_lognorm,
    epsilon_sum,
    growth_report,
    log_big,
    subexp_density,
)
from orbitprimes.errors import ContractError
from orbitprimes.modp import INF_SENTINEL, OrbitRecord


def toy_records():
    """The frozen toy cache: m_2 = 1, m_3 = 2, m_5 = 3."""
    return [OrbitRecord(2, True, 1), OrbitRecord(3, True, 2),
            OrbitRecord(5, True, 3)]


def random_records(rng, bound=500):
    out = []
    for p in op.primes_up_to(bound):
        if rng.random() < 0.05:
            out.append(OrbitRecord(p, False, INF_SENTINEL))
        else:
            out.append(OrbitRecord(p, True, rng.randint(1, p + 1)))
    return out


# ---------------------------------------------------------------------------
# epsilon sums
# ---------------------------------------------------------------------------

def test_epsilon_sum_frozen_toy_value():
    # log2/2 + log3/(3*2) + log5/(5*3) = 0.63697... at epsilon = 1
    expected = (math.log(2) / 2 + math.log(3) / 6 + math.log(5) / 15)
    res = epsilon_sum(toy_records(), 1.0)
    assert res.value == pytest.approx(expected, abs=1e-12)
    assert res.value == pytest.approx(0.63697, abs=5e-6)
    assert res.implied_c == pytest.approx(res.value)
    assert res.prime_bound == 5


def test_epsilon_sum_ignores_bad_primes():
    recs = toy_records() + [OrbitRecord(7, False, INF_SENTINEL)]
    assert (epsilon_sum(recs, 1.0).value
            == pytest.approx(epsilon_sum(toy_records(), 1.0).value))


def test_epsilon_sum_decreasing_in_epsilon():
    rng = random.Random(91)
    recs = random_records(rng)
    values = [epsilon_sum(recs, e).value for e in (0.1, 0.5, 1.0, 2.0)]
    assert values == sorted(values, reverse=True)


def test_epsilon_sum_contract():
    with pytest.raises(ContractError):
        epsilon_sum(toy_records(), 0.0)


def test_abel_identity_random():
    rng = random.Random(92)
    for _ in range(5):
        recs = random_records(rng)
        for eps in (0.1, 0.5, 1.0):
            direct, regrouped = abel_crosscheck(recs, eps)
            assert abs(direct - regrouped) <= 1e-12 * max(1.0, abs(direct))


def test_abel_identity_empty():
    assert abel_crosscheck([], 1.0) == (0.0, 0.0)


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------

def test_density_monotone_in_gamma():
    rng = random.Random(93)
    recs = random_records(rng)
    s_grid = (1.01, 1.1)
    curves = [density_estimate(recs, g, s_grid) for g in (0.2, 0.5, 0.8)]
    for i in range(len(curves) - 1):
        assert curves[i].member_count <= curves[i + 1].member_count
        for a, b in zip(curves[i].values, curves[i + 1].values):
            assert a <= b + 1e-15


def test_density_contracts():
    recs = toy_records()
    with pytest.raises(ContractError):
        density_estimate(recs, 1.5, (1.1,))
    with pytest.raises(ContractError):
        density_estimate(recs, 0.5, (0.9,))


def test_density_comparison_column():
    curve = density_estimate(toy_records(), 0.5, (1.1,), implied_c=2.0)
    assert curve.comparison == pytest.approx(1.0)


def test_subexp_spec():
    spec = SubexponentialSpec(1.0, 0.5)
    assert spec(math.e) == pytest.approx(math.e)
    # subexponential: L(t)/t^mu is eventually decreasing toward 0
    ratios = [spec(t) / t ** 0.1 for t in (1e30, 1e60, 1e120)]
    assert ratios[0] > ratios[1] > ratios[2]
    with pytest.raises(ContractError):
        SubexponentialSpec(1.0, 1.0)
    with pytest.raises(ContractError):
        SubexponentialSpec(-1.0, 0.5)


def test_subexp_density_runs():
    rng = random.Random(94)
    recs = random_records(rng)
    spec = SubexponentialSpec(2.0, 0.5)
    curve = subexp_density(recs, spec, (1.05,))
    wide = subexp_density(recs, SubexponentialSpec(5.0, 0.9), (1.05,))
    assert curve.member_count <= wide.member_count


def test_dm_lognorm():
    recs = toy_records()
    assert dm_lognorm(recs, 0) == 0.0
    assert dm_lognorm(recs, 1) == pytest.approx(math.log(2))
    assert dm_lognorm(recs, 3) == pytest.approx(math.log(30))
    assert dm_lognorm(recs, 2) <= dm_lognorm(recs, 3)


# ---------------------------------------------------------------------------
# growth of D'(m)
# ---------------------------------------------------------------------------

def test_degree_slope_constant():
    assert degree_slope_constant((2, 2)) == pytest.approx(3.0)
    assert degree_slope_constant((2, 2, 2)) == pytest.approx(
        1 + math.log(6) / math.log(3))
    with pytest.raises(ContractError):
        degree_slope_constant((2,))


def test_growth_report(quad_system):
    system, p = quad_system
    rep = growth_report(system, p, [1, 2, 3])
    assert rep.c5 == pytest.approx(3.0)
    assert rep.rows[0].m == 1 and rep.rows[0].k == 1
    assert rep.rows[0].log_dprime == pytest.approx(math.log(4))
    # m = 3 needs k = 2 and hits the global collision
    assert rep.rows[2].degenerate and rep.rows[2].log_dprime is None


def test_log_big():
    assert log_big(8) == pytest.approx(math.log(8))
    n = 7 ** 500
    assert log_big(n) == pytest.approx(500 * math.log(7), rel=1e-12)
    with pytest.raises(ContractError):
        log_big(0)


def test_kahan_sum():
    acc = KahanSum()
    for _ in range(10 ** 5):
        acc.add(0.1)
    assert acc.total == pytest.approx(10 ** 4, abs=1e-9)
