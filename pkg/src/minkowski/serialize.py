"""JSON encoding of events, maps, shells and reports.

Rationals are written as "p/q" strings in lowest terms (always with the
denominator), floats as JSON numbers; both read back to equal values.
"""
from __future__ import annotations

import json
from enum import Enum
from fractions import Fraction
from typing import Any

from . import scalar as sc
from .core import CausalClass, Event, Line
from .errors import DimensionMismatch
from .hyperboloid import Hyperboloid, Orientation, Shell, ShellPair
from .transforms import AffineMap, Decomposition


def to_json_value(obj) -> Any:
    """Convert library values to plain JSON data."""
    from .certify import CertificationReport, Witness

    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (Fraction, float)):
        return sc.format_scalar(obj)
    if isinstance(obj, int):
        return sc.format_scalar(Fraction(obj))
    if isinstance(obj, Enum):
        return obj.value if isinstance(obj.value, str) else obj.name
    if isinstance(obj, Event):
        return [sc.format_scalar(c) for c in obj.coords]
    if isinstance(obj, Line):
        return {"base": to_json_value(obj.base), "direction": to_json_value(obj.direction)}
    if isinstance(obj, AffineMap):
        return map_to_json(obj)
    if isinstance(obj, Hyperboloid):
        return {"center": to_json_value(obj.center), "radius": sc.format_scalar(obj.radius)}
    if isinstance(obj, Shell):
        return {
            "center": to_json_value(obj.center),
            "radius": sc.format_scalar(obj.radius),
            "orientation": obj.orientation.name,
            "standard_exponent": obj.standard_exponent,
        }
    if isinstance(obj, ShellPair):
        return {"C": to_json_value(obj.C), "K": to_json_value(obj.K), "exponent": obj.exponent}
    if isinstance(obj, Decomposition):
        return decomposition_to_json(obj)
    if isinstance(obj, Witness):
        return {"v": to_json_value(obj.v), "p": to_json_value(obj.p),
                "direction": obj.direction.value, "exponent": obj.exponent}
    if isinstance(obj, CertificationReport):
        return report_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): to_json_value(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json_value(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def parse_event(data) -> Event:
    if not isinstance(data, list) or len(data) < 2:
        raise ValueError("an event is a list of at least two coordinates, time first")
    return Event(*(sc.parse_scalar(c) for c in data))


def map_to_json(f: AffineMap) -> dict:
    return {
        "dimension": f.n,
        "scalar": f.backend.value,
        "matrix": [[sc.format_scalar(x) for x in row] for row in f.matrix],
        "translation": [sc.format_scalar(x) for x in f.translation.coords],
    }


def parse_map(data) -> AffineMap:
    if not isinstance(data, dict):
        raise ValueError("a map is a JSON object")
    try:
        n = int(data["dimension"])
        backend = sc.Backend(data.get("scalar", "rational"))
        matrix = [[sc.parse_scalar(x) for x in row] for row in data["matrix"]]
        translation = data.get("translation", [0] * (n + 1))
    except KeyError as exc:
        raise ValueError(f"map is missing field {exc}") from exc
    if len(matrix) != n + 1 or len(translation) != n + 1:
        raise DimensionMismatch(f"matrix and translation must have size {n + 1}")
    if backend is sc.Backend.FLOAT64:
        matrix = [[float(x) for x in row] for row in matrix]
        translation = [float(sc.parse_scalar(x)) for x in translation]
    else:
        if any(isinstance(x, float) for row in matrix for x in row):
            raise ValueError("rational map with float entries")
        translation = [sc.parse_scalar(x) for x in translation]
    return AffineMap(tuple(tuple(r) for r in matrix), Event(*translation))


def parse_hyperboloid(data) -> Hyperboloid:
    return Hyperboloid(parse_event(data["center"]), sc.parse_scalar(data["radius"]))


def parse_shell(data) -> Shell:
    return Shell(parse_event(data["center"]), sc.parse_scalar(data["radius"]),
                 Orientation[data["orientation"]])


def decomposition_to_json(d: Decomposition, residual=None) -> dict:
    tau, lam, delta, rho = d.factors()
    out = {
        "tau": map_to_json(tau),
        "lambda": map_to_json(lam),
        "delta": map_to_json(delta),
        "rho": map_to_json(rho),
        "a": sc.format_scalar(d.a),
    }
    if residual is not None:
        out["residual"] = sc.format_scalar(residual) if isinstance(residual, Fraction) else residual
    return out


def report_to_json(r) -> dict:
    out = {
        "suite": r.suite,
        "verdict": r.verdict.value,
        "trials": r.trials,
        "seed": r.seed,
        "elapsed_ms": round(r.elapsed_ms, 3),
    }
    if r.n is not None:
        out["n"] = r.n
    if r.witness is not None:
        out["witness"] = to_json_value(r.witness)
    if r.detail:
        out["detail"] = r.detail
    out["note"] = r.note
    return out


def parse_report(data):
    from .certify import CertificationReport, Direction, Verdict, Witness

    w = data.get("witness")
    if isinstance(w, dict) and set(w) >= {"v", "p", "direction"}:
        w = Witness(parse_event(w["v"]), parse_event(w["p"]), Direction(w["direction"]), int(w.get("exponent", 0)))
    return CertificationReport(data["suite"], Verdict(data["verdict"]), data["trials"], data["seed"],
                               w, data.get("elapsed_ms", 0.0), data.get("n"), data.get("detail", ""),
                               data.get("note", ""))


def dumps(obj, **kw) -> str:
    return json.dumps(to_json_value(obj), **kw)
