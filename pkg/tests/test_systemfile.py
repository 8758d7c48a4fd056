import json

import pytest

import orbitprimes as op
from orbitprimes.errors import SystemFileError
from orbitprimes.systemfile import (
    load_system,
    parse_system_obj,
    save_system,
    system_to_obj,
)


def quad_obj():
    return {
        "maps": [
            {"num": [1, 0, 1], "den": [1]},
            {"num": [1, 0, -1], "den": [1]},
        ],
        "point": [0, 1],
    }


def test_parse_quad_system():
    system, point = parse_system_obj(quad_obj())
    assert system.r == 2
    assert system.maps[0].num.coeffs == (1, 0, 1)
    assert system.maps[0].den.coeffs == (0, 0, 1)
    assert point == op.normalize_point(0, 1)


def test_roundtrip(tmp_path):
    system, point = parse_system_obj(quad_obj())
    path = str(tmp_path / "sys.json")
    save_system(path, system, point)
    system2, point2 = load_system(path)
    assert point2 == point
    assert [(f.num.coeffs, f.den.coeffs) for f in system2.maps] \
        == [(f.num.coeffs, f.den.coeffs) for f in system.maps]
    # saved file is valid, sorted JSON
    obj = json.loads(open(path).read())
    assert list(obj) == sorted(obj)


def test_rational_string_coefficients():
    obj = {"maps": [{"num": ["1/2", 0, "1/3"], "den": [1]}], "point": 0}
    system, point = parse_system_obj(obj)
    assert system.maps[0].num.coeffs == (3, 0, 2)
    assert system.maps[0].den.coeffs == (0, 0, 6)
    assert point == op.normalize_point(0, 1)


def test_default_denominator_and_scalar_point():
    obj = {"maps": [{"num": [1, 0, 0]}], "point": "3/2"}
    system, point = parse_system_obj(obj)
    assert system.maps[0].is_polynomial()
    assert point == op.normalize_point(3, 2)


def test_infinity_point():
    obj = {"maps": [{"num": [1, 0, 0]}], "point": [1, 0]}
    _, point = parse_system_obj(obj)
    assert point == op.normalize_point(1, 0)


def test_floats_rejected():
    obj = quad_obj()
    obj["maps"][0]["num"] = [1.0, 0, 1]
    with pytest.raises(SystemFileError, match="exact"):
        parse_system_obj(obj)


def test_bools_rejected():
    obj = quad_obj()
    obj["point"] = [True, 1]
    with pytest.raises(SystemFileError):
        parse_system_obj(obj)


def test_bad_rational_string():
    obj = quad_obj()
    obj["maps"][0]["num"] = ["1/0", 0, 1]
    with pytest.raises(SystemFileError, match="bad rational"):
        parse_system_obj(obj)
    obj["maps"][0]["num"] = ["x+1", 0, 1]
    with pytest.raises(SystemFileError, match="bad rational"):
        parse_system_obj(obj)


def test_missing_fields():
    with pytest.raises(SystemFileError, match="maps"):
        parse_system_obj({"point": 0})
    with pytest.raises(SystemFileError, match="point"):
        parse_system_obj({"maps": [{"num": [1, 0, 0]}]})
    with pytest.raises(SystemFileError, match="num"):
        parse_system_obj({"maps": [{}], "point": 0})
    with pytest.raises(SystemFileError, match="two entries"):
        parse_system_obj({"maps": [{"num": [1, 0, 0]}], "point": [1, 2, 3]})


def test_degenerate_map_reported_as_file_error():
    obj = {"maps": [{"num": [1, 1], "den": [2, 2]}], "point": 0}
    with pytest.raises(SystemFileError, match=r"maps\[0\]"):
        parse_system_obj(obj)


def test_invalid_point_reported_as_file_error():
    obj = {"maps": [{"num": [1, 0, 0]}], "point": [0, 0]}
    with pytest.raises(SystemFileError):
        parse_system_obj(obj)


def test_json_error_has_line_and_column(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "maps": [,]\n}\n')
    with pytest.raises(SystemFileError, match="line 2, column"):
        load_system(str(path))


def test_missing_file(tmp_path):
    with pytest.raises(SystemFileError):
        load_system(str(tmp_path / "nope.json"))


def test_system_to_obj_strips_leading_zeros():
    system, point = parse_system_obj(quad_obj())
    obj = system_to_obj(system, point)
    assert obj["maps"][0]["den"] == [1]
    assert obj["point"] == [0, 1]
