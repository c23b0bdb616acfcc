"""Acceptance criteria, one test per criterion.

Each test records a one-line PASS/FAIL summary; the lines are printed at the
end of the pytest run (see ``conftest.pytest_terminal_summary``) and when
this file is executed directly.
"""
from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from minkowski import scalar as sc
from minkowski.certify import (
    EXPECTED_VERDICTS,
    Verdict,
    check_corollary,
    known_answer_matrix,
    run_property_suite,
)
from minkowski.core import (
    CausalClass,
    Event,
    LightCone,
    Line,
    PlaneSpan,
    bilinear_form,
    classify_line,
    classify_pair,
    classify_vector,
    cone_contains,
    is_between,
    is_lorentz_plane,
    k_lines_collinearity,
    quadratic_form,
    robb_hyperplane,
)
from minkowski.hyperboloid import (
    Hyperboloid,
    Orientation,
    Shell,
    intersect_hyperboloids,
    lightlike_by_hyperboloid_criterion,
    on_hyperboloid,
    on_shell,
    same_shell,
    shells_disjoint,
    singleton_locus_check,
)
from minkowski.sampling import (
    hyperboloid_point,
    light_direction,
    plane_spacelike_triple,
    random_event,
    random_pair,
    random_vector_of_class,
    rng_for,
    robb_probe,
)
from minkowski.transforms import (
    classify_transform,
    is_lorentz,
    is_orthochronous,
    random_extended,
    random_poincare,
    random_shear,
)

pytestmark = pytest.mark.acceptance

RESULTS: list = []
DIMENSIONS = (1, 2, 3)
SEED = 0


def _record(label: str, ok: bool, detail: str, start: float) -> None:
    RESULTS.append(f"{label:<5} {'PASS' if ok else 'FAIL'}  {detail}  [{time.perf_counter() - start:.1f}s]")


def _suite_criterion(label, suite, dims, trials):
    start = time.perf_counter()
    reports = [run_property_suite(suite, n, trials, SEED) for n in dims]
    failed = [r for r in reports if r.verdict is not Verdict.PASS]
    detail = f"{suite}: {trials} trials for each n in {list(dims)}"
    if failed:
        detail += f"; first failure n={failed[0].n}: {failed[0].witness}"
    _record(label, not failed, detail, start)
    assert not failed, failed[0].witness


def test_ac1_singleton_locus():
    # 3 radii x 3 causal classes x 500 centers
    _suite_criterion("AC1", "lemma2", DIMENSIONS, 9 * 500)


def test_ac2_lightlike_criterion():
    _suite_criterion("AC2", "prop1", DIMENSIONS, 2000)


def test_ac3_same_shell():
    _suite_criterion("AC3", "prop3", DIMENSIONS, 1000)


def test_ac4_shell_disjointness():
    _suite_criterion("AC4", "prop4", DIMENSIONS, 1000)


def test_ac5_betweenness_falsifier():
    # trials alternate non-between and between triples: 200 of each per n
    _suite_criterion("AC5", "prop5", (1, 2), 400)


def test_ac6_decomposition():
    # every sixth trial is a shear: 500 extended maps (100 on the float path) and 100 shears per n
    _suite_criterion("AC6", "decompose_roundtrip", DIMENSIONS, 600)


def test_ac7_known_answer_matrix():
    start = time.perf_counter()
    n, trials = 3, 1000
    table = known_answer_matrix(n, trials, SEED)
    mismatches = []
    for name, reports in table.items():
        got = tuple(r.verdict for r in reports)
        if got != EXPECTED_VERDICTS[name]:
            mismatches.append((name, [v.value for v in got]))
    verdicts = sum(len(r) for r in table.values())
    _record("AC7", not mismatches and verdicts == 21,
            f"known-answer matrix: {verdicts} verdicts, n={n}, {trials} trials each, mismatches={mismatches}", start)
    assert verdicts == 21 and not mismatches


def test_ac8_corollary():
    start = time.perf_counter()
    failures = []
    for k in range(100):
        n = DIMENSIONS[k % 3]
        f = random_poincare(f"corollary-map/{k}", n)
        report = check_corollary(f, (-4, 4), trials=200, seed=k)
        if report.verdict is not Verdict.PASS:
            failures.append((k, n, report.verdict.value, report.witness))
    _record("AC8", not failures,
            f"corollary: 100 Poincaré maps over n=1..3, e in [-4,4], 200 samples each, violations={len(failures)}",
            start)
    assert not failures, failures[:3]


# cross-backend agreement

MARGIN = 1e-6


def _far(value, scale) -> bool:
    """Exact zero, or at least MARGIN away from it relative to ``scale``."""
    return value == 0 or abs(float(value)) >= MARGIN * max(float(scale), 1e-300)


def _qscale(v: Event):
    return sum(c * c for c in v.coords)


def _nonzero_vector(rng, n):
    while True:
        v = random_event(rng, n, 64, 8)
        if not v.is_zero():
            return v


def _vector_of_any_class(rng, n):
    return random_vector_of_class(rng, n, rng.choice(list(CausalClass)), 64, 8)


def _inst_classify_vector(rng, n):
    v = _vector_of_any_class(rng, n) if rng.random() < 0.7 else _nonzero_vector(rng, n)
    if not _far(quadratic_form(v), _qscale(v)):
        return None
    return (lambda x: classify_vector(x)), (v,), (v.to_float(),)


def _inst_classify_pair(rng, n):
    u = random_event(rng, n, 64, 8)
    w = u + _vector_of_any_class(rng, n)
    if not _far(quadratic_form(u - w), _qscale(u - w) + _qscale(u) + _qscale(w)):
        return None
    return classify_pair, (u, w), (u.to_float(), w.to_float())


def _inst_classify_line(rng, n):
    base, d = random_event(rng, n, 64, 8), _vector_of_any_class(rng, n)
    if not _far(quadratic_form(d), _qscale(d)):
        return None
    return (lambda b, e: classify_line(Line(b, e))), (base, d), (base.to_float(), d.to_float())


def _inst_is_between(rng, n):
    u = random_event(rng, n, 64, 8)
    d = _nonzero_vector(rng, n)
    s = Fraction(rng.randint(-64, 128), 64)
    if s in (0, 1):
        return None
    v = u + d * s
    if rng.random() < 0.3:
        v = v + _nonzero_vector(rng, n) / 8
    w = u + d
    if len({u, v, w}) < 3:
        return None
    return is_between, (u, v, w), (u.to_float(), v.to_float(), w.to_float())


def _inst_lorentz_plane(rng, n):
    if n == 1:
        d1, d2 = _nonzero_vector(rng, n), _nonzero_vector(rng, n)
    else:
        d1, d2 = _vector_of_any_class(rng, n), _vector_of_any_class(rng, n)
    base = random_event(rng, n, 64, 8)
    a, b, c = quadratic_form(d1), bilinear_form(d1, d2), quadratic_form(d2)
    scale = max(abs(b * b), abs(a * c), _qscale(d1) * _qscale(d2))
    if not _far(b * b - a * c, scale):
        return None
    try:
        P = PlaneSpan(base, d1, d2)
    except ValueError:
        return None
    return is_lorentz_plane, (P,), (P.to_float(),)


def _inst_on_hyperboloid(rng, n):
    c = random_event(rng, n, 64, 8)
    r = Fraction(rng.randint(1, 16), rng.randint(1, 4))
    p = hyperboloid_point(rng, c, r)
    if rng.random() < 0.5:
        p = p + random_event(rng, n, 4, 8)
    res = quadratic_form(p - c) - r * r
    if not _far(res, _qscale(p - c) + r * r):
        return None
    H = Hyperboloid(c, r)
    return on_hyperboloid, (H, p), (H.to_float(), p.to_float())


def _inst_on_shell(rng, n):
    c = random_event(rng, n, 64, 8)
    r = Fraction(rng.randint(1, 16), rng.randint(1, 4))
    S = Shell(c, r, rng.choice(list(Orientation)))
    p = hyperboloid_point(rng, c, r)
    if rng.random() < 0.3:
        p = p + random_event(rng, n, 4, 8)
    res = quadratic_form(p - c) - r * r
    if not _far(res, _qscale(p - c) + r * r):
        return None
    return on_shell, (S, p), (S.to_float(), p.to_float())


def _inst_same_shell(rng, n):
    c = random_event(rng, n, 64, 8)
    r = Fraction(rng.randint(1, 16), rng.randint(1, 4))
    u, w = hyperboloid_point(rng, c, r), hyperboloid_point(rng, c, r)
    if u == w:
        return None
    H = Hyperboloid(c, r)
    return same_shell, (H, u, w), (H.to_float(), u.to_float(), w.to_float())


def _inst_intersection(rng, n):
    r1 = Fraction(2) ** rng.randint(-2, 2)
    r2 = r1 if rng.random() < 0.5 else Fraction(2) ** rng.randint(-2, 2)
    c = random_event(rng, n, 32, 4)
    if rng.random() < 0.3:
        # on the tangency locus Q(d) = (r1 + r2)² in the time-like direction
        d = hyperboloid_point(rng, Event.zero(n), r1 + r2)
    else:
        d = random_event(rng, n, 32, 4)
    q = quadratic_form(d)
    cc = r1 * r1 - r2 * r2 + q
    scale = _qscale(d) + r1 * r1 + r2 * r2
    if not (_far(q, scale) and _far(cc * cc - 4 * q * r1 * r1, scale * scale) and _far(cc, scale)):
        return None
    A, B = Hyperboloid(c, r1), Hyperboloid(c + d, r2)
    return intersect_hyperboloids, (A, B), (A.to_float(), B.to_float())


def _inst_shells_disjoint(rng, n):
    c1 = random_event(rng, n, 64, 8)
    c2 = c1 + random_vector_of_class(rng, n, CausalClass.SPACELIKE, 64, 8)
    d = c2 - c1
    if not _far(quadratic_form(d), _qscale(d)):
        return None
    C = Shell(c1, Fraction(2) ** rng.randint(-3, 3), rng.choice(list(Orientation)))
    K = Shell(c2, Fraction(2) ** rng.randint(-3, 3), rng.choice(list(Orientation)))
    return shells_disjoint, (C, K), (C.to_float(), K.to_float())


def _inst_singleton_locus(rng, n):
    r = rng.choice((Fraction(1, 2), Fraction(1), Fraction(2)))
    if rng.random() < 0.4:
        v = hyperboloid_point(rng, Event.zero(n), 2 * r)
    else:
        v = _vector_of_any_class(rng, n)
    if not _far(quadratic_form(v) - 4 * r * r, _qscale(v) + r * r) or not _far(quadratic_form(v), _qscale(v)):
        return None
    return singleton_locus_check, (v, r), (v.to_float(), float(r))


def _inst_lightlike_criterion(rng, n):
    cls = rng.choice(list(CausalClass))
    u, w = random_pair(rng, n, cls, Fraction(1, 2 ** 14))
    q = quadratic_form(u - w)
    scale = _qscale(u - w)
    if not _far(q, scale):
        return None
    # only time-like pairs compare Q against the feasibility bounds 4^(e+1)
    if q > 0 and not all(_far(q - Fraction(4) ** (e + 1), scale + Fraction(4) ** (e + 1)) for e in range(-8, 9)):
        return None
    return ((lambda a, b: lightlike_by_hyperboloid_criterion(a, b, (-8, 8))),
            (u, w), (u.to_float(), w.to_float()))


def _inst_robb(rng, n):
    base = random_event(rng, n, 32, 8)
    d = light_direction(rng, n) * rng.randint(1, 4)
    p = robb_probe(rng, base, d)
    rel = p - base
    if not _far(bilinear_form(rel, d), _qscale(rel) ** 0.5 * float(_qscale(d)) ** 0.5 + 1):
        return None
    R, Rf = robb_hyperplane(Line(base, d)), robb_hyperplane(Line(base.to_float(), d.to_float()))
    return (lambda H, x: H.contains(x)), (R, p), (Rf, p.to_float())


def _inst_cone(rng, n):
    apex = random_event(rng, n, 32, 8)
    if rng.random() < 0.5:
        p = apex + light_direction(rng, n, future=rng.random() < 0.5) * rng.randint(1, 5)
    else:
        p = apex + _vector_of_any_class(rng, n)
    rel = p - apex
    if p == apex or not _far(quadratic_form(rel), _qscale(rel)):
        return None
    forward = rng.random() < 0.5
    return ((lambda a, x: cone_contains(LightCone(a), x, forward)),
            (apex, p), (apex.to_float(), p.to_float()))


def _inst_k_lines(rng, n):
    P, u, v, w = plane_spacelike_triple(rng, n, rng.random() < 0.5)
    return ((lambda *a: k_lines_collinearity(*a).collinear),
            (P, u, v, w), (P.to_float(), u.to_float(), v.to_float(), w.to_float()))


def _inst_is_lorentz(rng, n):
    f = random_poincare(rng, n) if rng.random() < 0.5 else random_extended(rng, n)
    g = f if rng.random() < 0.7 else random_shear(rng, n)
    return is_lorentz, (g.matrix,), (g.to_float().matrix,)


def _inst_is_orthochronous(rng, n):
    f = random_poincare(rng, n)
    return is_orthochronous, (f.matrix,), (f.to_float().matrix,)


def _inst_classify_transform(rng, n):
    k = rng.randrange(3)
    f = (random_poincare, random_extended, random_shear)[k](rng, n)
    return classify_transform, (f,), (f.to_float(),)


PREDICATES = {
    "classify_vector": _inst_classify_vector,
    "classify_pair": _inst_classify_pair,
    "classify_line": _inst_classify_line,
    "is_between": _inst_is_between,
    "is_lorentz_plane": _inst_lorentz_plane,
    "k_lines_collinearity": _inst_k_lines,
    "robb_hyperplane": _inst_robb,
    "cone_contains": _inst_cone,
    "on_hyperboloid": _inst_on_hyperboloid,
    "on_shell": _inst_on_shell,
    "same_shell": _inst_same_shell,
    "intersect_hyperboloids": _inst_intersection,
    "singleton_locus_check": _inst_singleton_locus,
    "lightlike_by_hyperboloid_criterion": _inst_lightlike_criterion,
    "shells_disjoint": _inst_shells_disjoint,
    "is_lorentz": _inst_is_lorentz,
    "is_orthochronous": _inst_is_orthochronous,
    "classify_transform": _inst_classify_transform,
}

INSTANCES = 1000


def cross_backend_disagreements(name: str, count: int = INSTANCES) -> tuple:
    """``(instances checked, list of disagreements)`` for one predicate."""
    make = PREDICATES[name]
    bad, checked, attempt = [], 0, 0
    while checked < count:
        rng = rng_for("cross-backend", name, SEED, attempt)
        attempt += 1
        n = DIMENSIONS[attempt % 3]
        inst = make(rng, n)
        if inst is None:
            continue
        fn, exact_args, float_args = inst
        exact, approx = fn(*exact_args), fn(*float_args)
        checked += 1
        if exact != approx:
            bad.append({"attempt": attempt - 1, "n": n, "exact": exact, "float": approx})
    return checked, bad


def test_ac9_cross_backend_agreement():
    start = time.perf_counter()
    summary = {}
    with sc.using_tolerance(sc.DEFAULT_TOLERANCE):
        for name in PREDICATES:
            checked, bad = cross_backend_disagreements(name)
            summary[name] = (checked, bad)
    failing = {k: v[1][:2] for k, v in summary.items() if v[1]}
    _record("AC9", not failing,
            f"cross-backend: {len(PREDICATES)} predicates x {INSTANCES} instances, disagreements={failing or 0}",
            start)
    assert not failing


if __name__ == "__main__":
    import sys

    code = pytest.main([__file__, "-q"])
    print("\n".join(RESULTS))
    sys.exit(code)
