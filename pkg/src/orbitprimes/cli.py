"""Command-line surface: verify / sweep / analyze / report.

Exit codes are a stable contract:

* 0   success (verify: some theorem route applies)
* 2   input error (bad flags, malformed or missing system file)
* 3   verify found no applicable theorem route
* 4   analyze internal-consistency failure (Abel residual above tolerance)
* 5   analyze cache does not cover the requested prime bound
* 130 interrupted

Every command writes machine-readable output even on logical failure
(codes 3-5), and identical configuration plus seed yields byte-identical
JSON reports.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    BudgetExceededError,
    CacheIntegrityError,
    ContractError,
    SystemFileError,
)
from .exact_algebra import ProjectivePointQ, QPoly
from .dynamics import (
    CollisionWitness,
    NoCollisionUpToDepth,
    SemigroupSystem,
    moderately_preperiodic_search,
    wandering_certificate,
)
from .modp import OrbitRecord, load_cache, primes_up_to, sweep, system_key
from .analytics import (
    SubexponentialSpec,
    abel_crosscheck,
    density_estimate,
    dm_lognorm,
    epsilon_sum,
    growth_report,
    subexp_density,
)
from .hypotheses import (
    are_critically_separated,
    has_left_compositional_factor,
    is_critically_simple,
    is_power_like,
)
from .systemfile import load_system, system_to_obj

ABEL_TOLERANCE = 1e-9

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_ROUTE = 3
EXIT_INCONSISTENT = 4
EXIT_CACHE_GAP = 5
EXIT_INTERRUPT = 130


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _write_json(path: str, obj: dict) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _affine_polynomial(f) -> QPoly:
    return f.affine_numerator() * Fraction(1, int(f.den.coeffs[-1]))


def _word_list(w) -> list[int]:
    return list(w)


def build_verify_report(system: SemigroupSystem, point: ProjectivePointQ,
                        depth: int, seed: int) -> dict:
    map_verdicts = []
    simple = []
    power = []
    for i, f in enumerate(system.maps):
        cs = is_critically_simple(f, seed=seed + i)
        simple.append(cs)
        entry = {
            "index": i + 1,
            "degree": f.degree,
            "polynomial": f.is_polynomial(),
            "critically_simple": cs,
        }
        if f.is_polynomial():
            verdict = is_power_like(_affine_polynomial(f))
            entry["power_like"] = verdict.is_power_like
            power.append(verdict.is_power_like)
        else:
            power.append(None)
        map_verdicts.append(entry)

    pair_verdicts = []
    route = "none"
    for i in range(system.r):
        for j in range(i + 1, system.r):
            fi, fj = system.maps[i], system.maps[j]
            sep = are_critically_separated(fi, fj, seed=seed + 101 * i + j)
            pair = {"pair": [i + 1, j + 1], "critically_separated": sep}
            if (fi.degree >= 4 and fj.degree >= 4
                    and simple[i] and simple[j] and sep):
                pair["ratmaps_hypotheses"] = True
                route = "ratmaps"
            if fi.is_polynomial() and fj.is_polynomial():
                pi, pj = _affine_polynomial(fi), _affine_polynomial(fj)
                lf_ij = has_left_compositional_factor(pi, pj)
                lf_ji = has_left_compositional_factor(pj, pi)
                pair["left_factor_1_of_2"] = lf_ij
                pair["left_factor_2_of_1"] = lf_ji
                if (power[i] is False and power[j] is False
                        and not lf_ij and not lf_ji):
                    pair["poly_hypotheses"] = True
                    if route == "none":
                        route = "poly"
            pair_verdicts.append(pair)

    certificates: dict = {"depth": depth}
    try:
        cert = wandering_certificate(system, point, depth)
        if isinstance(cert, NoCollisionUpToDepth):
            certificates["wandering"] = {"clean_to_depth": cert.depth}
        elif isinstance(cert, CollisionWitness):
            certificates["wandering"] = {
                "collision": [_word_list(cert.word_i), _word_list(cert.word_j)],
                "value": [cert.value.a, cert.value.b],
            }
    except BudgetExceededError as exc:
        certificates["wandering"] = {"budget_exceeded": str(exc)}
    try:
        pre = moderately_preperiodic_search(system, point, depth)
        if pre is None:
            certificates["moderately_preperiodic"] = None
        else:
            certificates["moderately_preperiodic"] = {
                "f_word": _word_list(pre.f_word),
                "g_word": _word_list(pre.g_word),
                "value": [pre.value.a, pre.value.b],
            }
    except BudgetExceededError as exc:
        certificates["moderately_preperiodic"] = {"budget_exceeded": str(exc)}

    return {
        "system": system_to_obj(system, point),
        "map_verdicts": map_verdicts,
        "pair_verdicts": pair_verdicts,
        "route": route,
        "certificates": certificates,
    }


def cmd_verify(args) -> int:
    system, point = load_system(args.system)
    report = build_verify_report(system, point, args.depth, args.seed)
    out_path = os.path.join(args.out, "verify.json")
    _write_json(out_path, report)
    print(f"route: {report['route']} (report: {out_path})")
    return EXIT_OK if report["route"] != "none" else EXIT_NO_ROUTE


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def cmd_sweep(args) -> int:
    system, point = load_system(args.system)
    bound = args.primes_up_to

    def progress(done: int, total: int) -> None:
        print(f"\r  {done}/{total} primes", end="", file=sys.stderr, flush=True)

    # chunked bounds so an interrupted run leaves a resumable cache
    step = max(bound // 20, 1000)
    bounds = list(range(step, bound, step)) + [bound]
    records: list[OrbitRecord] = []
    for b in bounds:
        records = sweep(system, point, b, cache_path=args.cache,
                        workers=args.workers, progress=progress)
    print(file=sys.stderr)
    good = sum(1 for r in records if r.good_reduction)
    print(f"{len(records)} primes <= {bound} ({good} good reduction) "
          f"cached at {args.cache}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def _load_covering_cache(args, system, point
                         ) -> tuple[Optional[list[OrbitRecord]], Optional[dict]]:
    key = system_key(system, point)
    cached = load_cache(args.cache, key)
    primes = primes_up_to(args.primes_up_to)
    missing = [p for p in primes if p not in cached]
    if missing:
        failure = {
            "error": "cache_gap",
            "prime_bound": args.primes_up_to,
            "missing_count": len(missing),
            "first_missing": missing[:10],
            "hint": "run the sweep command for this bound first",
        }
        return None, failure
    return [cached[p] for p in primes], None


def build_analyze_report(records: list[OrbitRecord], system: SemigroupSystem,
                         point: ProjectivePointQ, args) -> tuple[dict, bool]:
    bound = args.primes_up_to
    eps_rows = []
    consistent = True
    for eps in args.epsilon:
        res = epsilon_sum(records, eps)
        direct, regrouped = abel_crosscheck(records, eps)
        residual = abs(direct - regrouped) / max(abs(direct), 1.0)
        if residual > ABEL_TOLERANCE:
            consistent = False
        eps_rows.append({
            "epsilon": eps,
            "value": res.value,
            "implied_c": res.implied_c,
            "abel_regrouped": regrouped,
            "abel_residual": residual,
        })
    implied_c = next((r["implied_c"] for r in eps_rows if r["epsilon"] == 1.0),
                     eps_rows[-1]["implied_c"] if eps_rows else None)

    s_grid = (1.0 + 1.0 / math.log(bound), 1.05, 1.2)
    density_rows = []
    for gamma in args.gamma:
        curve = density_estimate(records, gamma, s_grid, implied_c=implied_c)
        density_rows.append({
            "gamma": gamma,
            "s_grid": list(curve.s_grid),
            "values": list(curve.values),
            "member_count": curve.member_count,
            "comparison_c_gamma": curve.comparison,
        })
    spec = SubexponentialSpec(args.subexp_c, args.subexp_beta)
    sub = subexp_density(records, spec, s_grid)
    subexp_row = {
        "c": spec.c, "beta": spec.beta,
        "s_grid": list(sub.s_grid), "values": list(sub.values),
        "member_count": sub.member_count,
    }

    dm_rows = [{"m": m, "log_dm": dm_lognorm(records, m)} for m in args.m]

    growth_ms = [m for m in args.m
                 if system.r >= 2 and system.r ** _klen(system.r, m) <= 4096]
    growth = None
    if growth_ms:
        rep = growth_report(system, point, growth_ms)
        growth = {
            "c5": rep.c5,
            "rows": [{
                "m": row.m, "k": row.k, "log_dprime": row.log_dprime,
                "loglog_dprime": row.loglog_dprime,
                "slope_bound": row.slope_bound, "degenerate": row.degenerate,
            } for row in rep.rows],
        }

    report = {
        "prime_bound": bound,
        "system": system_to_obj(system, point),
        "epsilon_sums": eps_rows,
        "density": density_rows,
        "subexp_density": subexp_row,
        "dm_lognorm": dm_rows,
        "growth": growth,
        "abel_tolerance": ABEL_TOLERANCE,
        "consistent": consistent,
    }
    return report, consistent


def _klen(r: int, m: int) -> int:
    k = 1
    while r ** k < m + 1:
        k += 1
    return k


def _emit_analyze_csvs(report: dict, out: str) -> None:
    bound = report["prime_bound"]
    _write_csv(os.path.join(out, "epsilon_sums.csv"),
               ["prime_bound", "epsilon", "value", "implied_c",
                "abel_regrouped", "abel_residual"],
               [[bound, r["epsilon"], r["value"], r["implied_c"],
                 r["abel_regrouped"], r["abel_residual"]]
                for r in report["epsilon_sums"]])
    rows = []
    for r in report["density"]:
        for s, v in zip(r["s_grid"], r["values"]):
            rows.append([bound, r["gamma"], s, v, r["member_count"],
                         r["comparison_c_gamma"]])
    _write_csv(os.path.join(out, "density.csv"),
               ["prime_bound", "gamma", "s", "value", "member_count",
                "comparison_c_gamma"], rows)
    _write_csv(os.path.join(out, "dm_lognorm.csv"),
               ["prime_bound", "m", "log_dm"],
               [[bound, r["m"], r["log_dm"]] for r in report["dm_lognorm"]])
    if report["growth"]:
        _write_csv(os.path.join(out, "growth.csv"),
                   ["m", "k", "log_dprime", "loglog_dprime", "slope_bound",
                    "degenerate"],
                   [[r["m"], r["k"], r["log_dprime"], r["loglog_dprime"],
                     r["slope_bound"], r["degenerate"]]
                    for r in report["growth"]["rows"]])


def cmd_analyze(args) -> int:
    system, point = load_system(args.system)
    records, failure = _load_covering_cache(args, system, point)
    if failure is not None:
        _write_json(os.path.join(args.out, "analyze.json"), failure)
        print(f"cache gap: {failure['missing_count']} primes <= "
              f"{args.primes_up_to} missing; run sweep first", file=sys.stderr)
        return EXIT_CACHE_GAP
    report, consistent = build_analyze_report(records, system, point, args)
    _write_json(os.path.join(args.out, "analyze.json"), report)
    _emit_analyze_csvs(report, args.out)
    print(f"analysis for X={args.primes_up_to} written to {args.out}")
    if not consistent:
        print("Abel residual above tolerance", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_report(args) -> int:
    system, point = load_system(args.system)
    verify = build_verify_report(system, point, args.depth, args.seed)
    records, failure = _load_covering_cache(args, system, point)
    if failure is not None:
        _write_json(os.path.join(args.out, "report.json"),
                    {"verify": verify, "analyze": failure})
        return EXIT_CACHE_GAP
    analyze, consistent = build_analyze_report(records, system, point, args)
    _write_json(os.path.join(args.out, "report.json"),
                {"verify": verify, "analyze": analyze})
    print(f"combined report written to {args.out}/report.json")
    if not consistent:
        return EXIT_INCONSISTENT
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitprimes",
        description="Semigroup orbits of rational maps modulo primes: "
                    "sweeps, densities, and hypothesis checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, analysis=False):
        p.add_argument("--system", required=True,
                       help="path to the JSON system file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default="reports",
                       help="output directory for reports")
        if analysis:
            p.add_argument("--primes-up-to", type=int, required=True,
                           metavar="X")
            p.add_argument("--cache", required=True,
                           help="JSONL sweep cache path")

    p_verify = sub.add_parser("verify", help="check the theorem hypotheses")
    common(p_verify)
    p_verify.add_argument("--depth", type=int, default=3)
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="compute m_p for all p <= X")
    common(p_sweep, analysis=True)
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.set_defaults(func=cmd_sweep)

    def analysis_flags(p):
        p.add_argument("--epsilon", type=_float_list, default=[0.1, 0.5, 1.0],
                       help="comma-separated epsilon grid")
        p.add_argument("--gamma", type=_float_list,
                       default=[0.1, 0.3, 0.5, 0.7, 0.9],
                       help="comma-separated gamma grid")
        p.add_argument("--m", type=_int_list, default=[1, 2, 3, 5, 10, 20],
                       help="comma-separated m list")
        p.add_argument("--subexp-c", type=float, default=1.0)
        p.add_argument("--subexp-beta", type=float, default=0.5)

    p_analyze = sub.add_parser("analyze", help="aggregate a finished sweep")
    common(p_analyze, analysis=True)
    analysis_flags(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_report = sub.add_parser("report",
                              help="bundle verify + analyze into one JSON")
    common(p_report, analysis=True)
    analysis_flags(p_report)
    p_report.add_argument("--depth", type=int, default=3)
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the input-error code
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SystemFileError, CacheIntegrityError, ContractError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return EXIT_INTERRUPT


if __name__ == "__main__":
    sys.exit(main())
