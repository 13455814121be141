import json
from fractions import Fraction as Q

import pytest

from aknormal.aksys import build_F, random_good_perturbation
from aknormal.serialize import (
    ParseError,
    dumps,
    format_rational,
    load_system_file,
    parse_rational,
    vectorfield_from_json,
    vectorfield_to_json,
)


def test_rational_format():
    assert format_rational(Q(3)) == "3/1"
    assert format_rational(Q(-2, 6)) == "-1/3"
    assert parse_rational("-1/3") == Q(-1, 3)
    assert parse_rational("7") == 7
    assert parse_rational(4) == 4


@pytest.mark.parametrize("text", ["1/0", "2/4", "1.5", "a/b", "", "1//2"])
def test_rational_rejects(text):
    with pytest.raises(ParseError):
        parse_rational(text, "$.x")


@pytest.mark.parametrize("bad", [1.5, None, True, [1]])
def test_rational_rejects_types(bad):
    with pytest.raises(ParseError):
        parse_rational(bad)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_round_trip(k):
    X = build_F(k) + random_good_perturbation(k, k + 3, seed=k)
    data = json.loads(dumps(vectorfield_to_json(X)))
    assert vectorfield_from_json(data) == X


def test_parse_error_locations(tmp_path):
    good = vectorfield_to_json(build_F(2))
    cases = []
    d = json.loads(json.dumps(good))
    d["components"][1][0]["coeff"] = "1/0"
    cases.append((d, "$.components[1][0].coeff"))
    d = json.loads(json.dumps(good))
    d["components"][0][0]["exponents"] = [1, 2]
    cases.append((d, "$.components[0][0].exponents"))
    d = json.loads(json.dumps(good))
    d["k"] = 1
    cases.append((d, "$.k"))
    d = json.loads(json.dumps(good))
    d["components"] = d["components"][:2]
    cases.append((d, "$.components"))
    for data, loc in cases:
        with pytest.raises(ParseError) as exc:
            vectorfield_from_json(data)
        assert exc.value.location == loc
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        load_system_file(p)


def test_duplicate_monomial_rejected():
    data = {"k": 2, "components": [[{"exponents": [0, 0, 1], "coeff": "1"}] * 2, [], []]}
    with pytest.raises(ParseError, match="duplicate"):
        vectorfield_from_json(data)


def test_dumps_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
