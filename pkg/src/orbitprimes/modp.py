"""Reduction of a system modulo primes and the cache-backed prime sweep.

A point of P^1(F_p) is a single residue in [0, p], with p encoding the point
at infinity. Orbit sizes are computed by set closure under all reduced maps;
at a bad-reduction prime the orbit size is the infinity sentinel.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from dataclasses import dataclass
from multiprocessing import Pool
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import CacheIntegrityError, ContractError
from .dynamics import RationalMapQ, SemigroupSystem
from .exact_algebra import ProjectivePointQ

INF_SENTINEL = -1          # in-memory m_p value at bad primes
INF_JSON = "inf"           # serialized form, never a number

_PY_KERNEL_LIMIT = 3000    # below this, skip the compiled path


@dataclass(frozen=True)
class OrbitRecord:
    """One prime's sweep result."""

    p: int
    good_reduction: bool
    m_p: int                 # INF_SENTINEL iff good_reduction is False
    visited_cap_hit: bool = False
    wall_time_ms: float = 0.0

    def __post_init__(self):
        if self.good_reduction:
            if not 1 <= self.m_p <= self.p + 1:
                raise ContractError(f"m_p out of range at p={self.p}")
        elif self.m_p != INF_SENTINEL:
            raise ContractError("bad reduction requires the infinity sentinel")

    def to_json_line(self) -> str:
        m = INF_JSON if self.m_p == INF_SENTINEL else self.m_p
        return json.dumps({"p": self.p, "good": self.good_reduction, "m": m,
                           "t_ms": round(self.wall_time_ms, 4)})

    @staticmethod
    def from_json_obj(obj: dict) -> "OrbitRecord":
        m = obj["m"]
        m_p = INF_SENTINEL if m == INF_JSON else int(m)
        return OrbitRecord(int(obj["p"]), bool(obj["good"]), m_p,
                           wall_time_ms=float(obj.get("t_ms", 0.0)))


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------

def good_reduction(f: RationalMapQ, p: int) -> bool:
    """True iff the reduced form pair still defines a degree-d morphism over
    F_p, i.e. p does not divide the resultant of the defining forms."""
    return f.resultant_cache % p != 0


def system_good_reduction(system: SemigroupSystem, p: int) -> bool:
    return all(good_reduction(f, p) for f in system.maps)


def reduce_point(point: ProjectivePointQ, p: int) -> int:
    """Residue encoding of the reduced point; p encodes [1:0]."""
    b = point.b % p
    if b == 0:
        return p
    return point.a * pow(b, -1, p) % p


def _reduced_coeff_rows(system: SemigroupSystem, p: int
                        ) -> tuple[np.ndarray, np.ndarray]:
    """(r, d_max+1) residue matrices of numerator and denominator forms,
    leading-aligned (index 0 is the X^d coefficient)."""
    dmax = max(system.degrees)
    r = system.r
    num = np.zeros((r, dmax + 1), dtype=np.int64)
    den = np.zeros((r, dmax + 1), dtype=np.int64)
    for i, f in enumerate(system.maps):
        off = dmax - f.degree
        for j, c in enumerate(f.num.coeffs):
            num[i, off + j] = c % p
        for j, c in enumerate(f.den.coeffs):
            den[i, off + j] = c % p
    return num, den


def evaluate_mod_p(num_row: Sequence[int], den_row: Sequence[int],
                   x: int, p: int) -> int:
    """Apply one reduced map to a residue point (p = infinity)."""
    if x == p:
        n, d = num_row[0] % p, den_row[0] % p
    else:
        n = d = 0
        for c in num_row:
            n = (n * x + c) % p
        for c in den_row:
            d = (d * x + c) % p
    if d == 0:
        return p
    return n * pow(d, -1, p) % p


def _orbit_size_python(system: SemigroupSystem, x0: int, p: int) -> int:
    stack = [x0]
    visited = {x0}
    rows = [([c % p for c in f.num.coeffs], [c % p for c in f.den.coeffs])
            for f in system.maps]
    while stack:
        x = stack.pop()
        for nrow, drow in rows:
            y = evaluate_mod_p(nrow, drow, x, p)
            if y not in visited:
                visited.add(y)
                stack.append(y)
    return len(visited)


def _shifted_square_residues(system: SemigroupSystem, p: int
                             ) -> Optional[np.ndarray]:
    """If every map is x^2 + c, return the residues c, else None."""
    shifts = []
    for f in system.maps:
        if f.degree != 2 or not f.is_polynomial():
            return None
        c0, c1, c2 = f.num.coeffs
        if c0 != f.den.coeffs[2] or c1 != 0:
            return None
        # map is (c0 x^2 + c2) / c0 = x^2 + c2/c0 with c0 the joint unit
        if c0 != 1:
            return None
        shifts.append(c2 % p)
    return np.array(shifts, dtype=np.int64)


def orbit_size_mod_p(system: SemigroupSystem, point: ProjectivePointQ,
                     p: int) -> OrbitRecord:
    """m_p(S, P): size of the reduced semigroup orbit, or the infinity
    sentinel at a bad-reduction prime."""
    t0 = time.perf_counter()
    if not system_good_reduction(system, p):
        return OrbitRecord(p, False, INF_SENTINEL,
                           wall_time_ms=(time.perf_counter() - t0) * 1e3)
    x0 = reduce_point(point, p)
    m = _orbit_size_good(system, x0, p)
    return OrbitRecord(p, True, m,
                       wall_time_ms=(time.perf_counter() - t0) * 1e3)


def _orbit_size_good(system: SemigroupSystem, x0: int, p: int) -> int:
    if (p < _PY_KERNEL_LIMIT or not _kernels.HAVE_NUMBA
            or p >= _kernels.KERNEL_PRIME_LIMIT):
        return _orbit_size_python(system, x0, p)
    shifts = _shifted_square_residues(system, p)
    if shifts is not None:
        return int(_kernels.orbit_size_shifted_square(p, shifts, x0))
    num, den = _reduced_coeff_rows(system, p)
    if all(f.is_polynomial() for f in system.maps):
        return int(_kernels.orbit_size_polynomial(p, num, x0))
    inf_num = np.array([f.num.coeffs[0] % p for f in system.maps],
                       dtype=np.int64)
    inf_den = np.array([f.den.coeffs[0] % p for f in system.maps],
                       dtype=np.int64)
    return int(_kernels.orbit_size_rational(p, num, den, inf_num, inf_den, x0))


# ---------------------------------------------------------------------------
# primes
# ---------------------------------------------------------------------------

def primes_up_to(x: int) -> list[int]:
    """Ascending primes <= x by a flat sieve."""
    if x < 2:
        return []
    sieve = np.ones(x + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(x) + 1):
        if sieve[i]:
            sieve[i * i:: i] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------

def system_key(system: SemigroupSystem, point: ProjectivePointQ) -> str:
    """Content hash identifying (S, P) for the cache header."""
    payload = {
        "maps": [{"num": list(f.num.coeffs), "den": list(f.den.coeffs)}
                 for f in system.maps],
        "point": [point.a, point.b],
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def load_cache(path: str, key: str) -> dict[int, OrbitRecord]:
    """Parse a JSONL cache; raises CacheIntegrityError on corruption or on a
    header that names a different system."""
    records: dict[int, OrbitRecord] = {}
    if not os.path.exists(path):
        return records
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CacheIntegrityError(
                    f"{path}: malformed JSON at line {lineno}") from exc
            if lineno == 1:
                if obj.get("system_key") != key:
                    raise CacheIntegrityError(
                        f"{path}: cache belongs to a different system "
                        f"(line 1)")
                continue
            try:
                rec = OrbitRecord.from_json_obj(obj)
            except (KeyError, ValueError, ContractError) as exc:
                raise CacheIntegrityError(
                    f"{path}: bad record at line {lineno}") from exc
            records[rec.p] = rec
    return records


def _append_cache(path: str, key: str, new_records: Iterable[OrbitRecord],
                  header_needed: bool) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        if header_needed:
            fh.write(json.dumps({"system_key": key, "format": 1}) + "\n")
        for rec in new_records:
            fh.write(rec.to_json_line() + "\n")


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

_WORKER_STATE: dict = {}


def _worker_init(map_coeffs, point_coords):
    maps = tuple(RationalMapQ.from_forms(
        _form_from(nc), _form_from(dc)) for nc, dc in map_coeffs)
    _WORKER_STATE["system"] = SemigroupSystem(maps)
    _WORKER_STATE["point"] = ProjectivePointQ(*point_coords)


def _form_from(coeffs):
    from .exact_algebra import BinaryFormZ
    return BinaryFormZ(tuple(coeffs))


def _worker_block(primes: list[int]) -> list[tuple]:
    system = _WORKER_STATE["system"]
    point = _WORKER_STATE["point"]
    out = []
    for p in primes:
        rec = orbit_size_mod_p(system, point, p)
        out.append((rec.p, rec.good_reduction, rec.m_p, rec.wall_time_ms))
    return out


def _work_blocks(primes: list[int], workers: int) -> list[list[int]]:
    """Split primes into blocks of roughly equal total work (sum of p)."""
    if not primes:
        return []
    target = max(sum(primes) // max(workers * 8, 1), primes[-1])
    blocks: list[list[int]] = [[]]
    acc = 0
    for p in primes:
        blocks[-1].append(p)
        acc += p
        if acc >= target:
            blocks.append([])
            acc = 0
    return [b for b in blocks if b]


def sweep(system: SemigroupSystem, point: ProjectivePointQ, prime_bound: int,
          cache_path: Optional[str] = None, workers: int = 1,
          progress=None) -> list[OrbitRecord]:
    """One OrbitRecord per prime p <= prime_bound, ascending.

    Records already in the cache are served without recomputation; newly
    computed records are appended (ascending) so interrupted sweeps resume
    idempotently.
    """
    if prime_bound < 2:
        raise ContractError("prime bound must be >= 2")
    key = system_key(system, point)
    cached: dict[int, OrbitRecord] = {}
    header_needed = True
    if cache_path:
        cached = load_cache(cache_path, key)
        header_needed = not os.path.exists(cache_path)
    primes = primes_up_to(prime_bound)
    missing = [p for p in primes if p not in cached]

    fresh: list[OrbitRecord] = []
    if missing:
        if workers > 1:
            map_coeffs = [(f.num.coeffs, f.den.coeffs) for f in system.maps]
            blocks = _work_blocks(missing, workers)
            with Pool(workers, initializer=_worker_init,
                      initargs=(map_coeffs, (point.a, point.b))) as pool:
                done = 0
                for block in pool.imap(_worker_block, blocks):
                    for p, good, m, t_ms in block:
                        fresh.append(OrbitRecord(p, good, m, wall_time_ms=t_ms))
                    done += len(block)
                    if progress:
                        progress(done, len(missing))
        else:
            for i, p in enumerate(missing):
                fresh.append(orbit_size_mod_p(system, point, p))
                if progress and (i + 1) % 256 == 0:
                    progress(i + 1, len(missing))
        fresh.sort(key=lambda r: r.p)
        if cache_path:
            _append_cache(cache_path, key, fresh, header_needed)

    merged = dict(cached)
    merged.update({r.p: r for r in fresh})
    return [merged[p] for p in primes]
