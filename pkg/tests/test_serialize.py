from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import pytest

from minkowski.certify import certify_hyperboloid_preservation
from minkowski.core import Event, Line
from minkowski.errors import DimensionMismatch
from minkowski.hyperboloid import Hyperboloid, Orientation, Shell, betweenness_shell_falsifier
from minkowski.serialize import (
    decomposition_to_json,
    dumps,
    map_to_json,
    parse_event,
    parse_hyperboloid,
    parse_map,
    parse_report,
    parse_shell,
    report_to_json,
    to_json_value,
)
from minkowski.transforms import AffineMap, decompose, dilation, random_extended

from conftest import E

GOLDEN = Path(__file__).parent / "golden"


def test_rationals_are_p_over_q_strings():
    assert to_json_value(E(Fraction(1, 2), 3)) == ["1/2", "3/1"]
    assert parse_event(["1/2", "3/1"]) == E(Fraction(1, 2), 3)
    assert parse_event([1, "-2/4"]) == E(1, Fraction(-1, 2))
    assert to_json_value(E(0.5, 2.0)) == [0.5, 2.0]


def test_event_parse_errors():
    with pytest.raises(ValueError):
        parse_event([1])
    with pytest.raises(ValueError):
        parse_event("1,2")


def test_map_round_trip():
    for seed in range(10):
        f = random_extended(seed, 3)
        assert parse_map(json.loads(json.dumps(map_to_json(f)))) == f
        g = f.to_float()
        assert parse_map(json.loads(json.dumps(map_to_json(g)))) == g


def test_map_parse_errors():
    with pytest.raises(DimensionMismatch):
        parse_map({"dimension": 2, "matrix": [["1/1", "0/1"], ["0/1", "1/1"]]})
    with pytest.raises(ValueError):
        parse_map({"dimension": 1})
    with pytest.raises(ValueError):
        parse_map({"dimension": 1, "scalar": "rational", "matrix": [[1.5, 0], [0, 1]]})


def test_shell_and_hyperboloid_round_trip():
    S = Shell(E(1, Fraction(2, 3)), Fraction(1, 4), Orientation.BACKWARD)
    data = to_json_value(S)
    assert data["standard_exponent"] == -2 and data["orientation"] == "BACKWARD"
    assert parse_shell(data) == S
    H = Hyperboloid(E(0, 1, 2), 3)
    assert parse_hyperboloid(to_json_value(H)) == H


def test_shell_pair_and_line_serialize():
    pair = betweenness_shell_falsifier(E(0, -1), E(0, 2), E(0, 1))
    data = json.loads(dumps(pair))
    assert set(data) == {"C", "K", "exponent"}
    assert to_json_value(Line(E(0, 0), E(2, 2))) == {"base": ["0/1", "0/1"], "direction": ["1/1", "1/1"]}


def test_decomposition_json():
    d = decompose(AffineMap(dilation(1, 2), E(1, 0)))
    data = decomposition_to_json(d, residual=0.0)
    assert data["a"] == "2/1" and data["residual"] == 0.0
    assert set(data) == {"tau", "lambda", "delta", "rho", "a", "residual"}


def test_report_round_trip_and_golden():
    report = certify_hyperboloid_preservation(AffineMap.linear(dilation(1, 2)), trials=10, seed=3)
    data = report_to_json(report)
    back = parse_report(json.loads(json.dumps(data)))
    assert (back.verdict, back.witness, back.seed, back.trials) == (report.verdict, report.witness, 3, 10)
    data.pop("elapsed_ms")
    golden = json.loads((GOLDEN / "dilation_hyperboloid_report.json").read_text())
    assert data == golden


def test_unknown_objects_are_rejected():
    with pytest.raises(TypeError):
        to_json_value(object())
