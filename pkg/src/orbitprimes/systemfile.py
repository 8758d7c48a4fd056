"""The canonical JSON system-file format shared by all CLI commands.

Schema::

    {
      "maps": [
        {"num": ["1", "0", "1"], "den": ["1"]},
        {"num": ["1", "0", "-1"], "den": ["1"]}
      ],
      "point": ["0", "1"]
    }

Each map is given by affine numerator and denominator coefficients in
descending power order; entries are integers or exact rational strings
"p/q" (floats are rejected: the library is exact). The point is [a, b] in
projective coordinates, or a single affine value; ["1", "0"] is infinity.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence, TextIO, Union

from .errors import ContractError, SystemFileError
from .exact_algebra import ProjectivePointQ, normalize_point
from .dynamics import RationalMapQ, SemigroupSystem


def _parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise SystemFileError(f"{where}: coefficients must be exact "
                              f"(integer or 'p/q' string), got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SystemFileError(f"{where}: bad rational {value!r}") from exc
    raise SystemFileError(f"{where}: unsupported coefficient {value!r}")


def _parse_coeff_list(values, where: str) -> list[Fraction]:
    if not isinstance(values, list) or not values:
        raise SystemFileError(f"{where}: expected a nonempty list")
    return [_parse_rational(v, f"{where}[{i}]") for i, v in enumerate(values)]


def parse_system_obj(obj) -> tuple[SemigroupSystem, ProjectivePointQ]:
    if not isinstance(obj, dict):
        raise SystemFileError("top level must be a JSON object")
    if "maps" not in obj:
        raise SystemFileError("missing 'maps'")
    if "point" not in obj:
        raise SystemFileError("missing 'point'")
    raw_maps = obj["maps"]
    if not isinstance(raw_maps, list) or not raw_maps:
        raise SystemFileError("'maps' must be a nonempty list")
    maps = []
    for i, entry in enumerate(raw_maps):
        where = f"maps[{i}]"
        if not isinstance(entry, dict) or "num" not in entry:
            raise SystemFileError(f"{where}: expected an object with 'num'")
        num = _parse_coeff_list(entry["num"], f"{where}.num")
        den = _parse_coeff_list(entry.get("den", [1]), f"{where}.den")
        try:
            maps.append(RationalMapQ.from_rational_coeffs(num, den))
        except ContractError as exc:
            raise SystemFileError(f"{where}: {exc}") from exc
    raw_point = obj["point"]
    if isinstance(raw_point, list):
        if len(raw_point) != 2:
            raise SystemFileError("'point' list must have two entries")
        a = _parse_rational(raw_point[0], "point[0]")
        b = _parse_rational(raw_point[1], "point[1]")
    else:
        a, b = _parse_rational(raw_point, "point"), Fraction(1)
    try:
        point = normalize_point(a, b)
        system = SemigroupSystem(tuple(maps))
    except ContractError as exc:
        raise SystemFileError(str(exc)) from exc
    return system, point


def load_system(path: str) -> tuple[SemigroupSystem, ProjectivePointQ]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SystemFileError(
                    f"{path}: line {exc.lineno}, column {exc.colno}: "
                    f"{exc.msg}") from exc
    except OSError as exc:
        raise SystemFileError(f"{path}: {exc.strerror or exc}") from exc
    try:
        return parse_system_obj(obj)
    except SystemFileError as exc:
        raise SystemFileError(f"{path}: {exc}") from exc


def _rational_str(x: Union[int, Fraction]) -> Union[int, str]:
    f = Fraction(x)
    if f.denominator == 1:
        return int(f)
    return str(f)


def system_to_obj(system: SemigroupSystem, point: ProjectivePointQ) -> dict:
    def strip(desc: Sequence[int]) -> list[int]:
        out = list(desc)
        while len(out) > 1 and out[0] == 0:
            out.pop(0)
        return out

    return {
        "maps": [{"num": strip(f.num.coeffs), "den": strip(f.den.coeffs)}
                 for f in system.maps],
        "point": [point.a, point.b],
    }


def save_system(path_or_file: Union[str, TextIO], system: SemigroupSystem,
                point: ProjectivePointQ) -> None:
    obj = system_to_obj(system, point)
    if isinstance(path_or_file, str):
        with open(path_or_file, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        json.dump(obj, path_or_file, indent=2, sort_keys=True)
