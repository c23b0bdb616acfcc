from __future__ import annotations

from fractions import Fraction

import pytest

from minkowski import linalg
from minkowski.certify import (
    EXPECTED_VERDICTS,
    SUITES,
    CandidateMap,
    Direction,
    Surface,
    Verdict,
    certify_forward_preservation,
    certify_hyperboloid_preservation,
    check_corollary,
    known_answer_maps,
    recheck_witness,
    run_property_suite,
)
from minkowski.core import Event
from minkowski.errors import DimensionMismatch, InverseInconsistent, UnknownSuite
from minkowski.transforms import AffineMap, dilation, random_orthochronous_poincare, random_poincare, time_reversal

from conftest import E

DILATION = AffineMap.linear(dilation(1, 2))
TIME_REVERSAL = AffineMap.linear(time_reversal(1))


def test_dilation_refuted_with_first_witness():
    report = certify_hyperboloid_preservation(DILATION, trials=50)
    assert report.verdict is Verdict.REFUTED
    assert report.witness.v == E(0, 0) and report.witness.p == E(1, 0)
    assert report.witness.direction is Direction.FORWARD
    assert DILATION(report.witness.p) == E(2, 0)
    assert recheck_witness(DILATION, report, Surface.HYPERBOLOID)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_poincare_passes_hyperboloid_preservation(seed):
    f = random_poincare(seed, 2)
    report = certify_hyperboloid_preservation(f, n=2, trials=40, seed=seed)
    assert report.verdict is Verdict.PASS and report.witness is None
    assert "not a proof" in report.note


def _cube_root_time(p):
    """Inverse of (t, x) -> (t³, x) on events whose time is a rational cube."""
    t = p.t
    r = Fraction(round(abs(t.numerator) ** (1 / 3)), round(t.denominator ** (1 / 3)))
    r = r if t >= 0 else -r
    if r ** 3 != t:
        raise ValueError("not a rational cube")
    return Event(r, *p.x)


def test_cubic_time_blackbox_refuted():
    f = CandidateMap.blackbox(lambda p: Event(p.t ** 3, *p.x), _cube_root_time, 1)
    report = certify_hyperboloid_preservation(f, trials=20)
    assert report.verdict is Verdict.REFUTED
    assert report.witness.direction is Direction.FORWARD
    assert recheck_witness(f, report, Surface.HYPERBOLOID)


def test_time_reversal_forward_refuted():
    report = certify_forward_preservation(TIME_REVERSAL, trials=20)
    assert report.verdict is Verdict.REFUTED
    assert report.witness.v == E(0, 0) and report.witness.p == E(1, 0)
    assert TIME_REVERSAL(report.witness.p) == E(-1, 0)
    assert recheck_witness(TIME_REVERSAL, report, Surface.FORWARD_SHELL)


def test_orthochronous_poincare_forward_pass():
    f = random_orthochronous_poincare(4, 3)
    assert certify_forward_preservation(f, trials=30).verdict is Verdict.PASS
    assert certify_forward_preservation(DILATION, trials=5).verdict is Verdict.REFUTED


def test_corollary_examples():
    assert check_corollary(random_poincare(3, 2), (-4, 4), trials=10).verdict is Verdict.PASS
    assert check_corollary(DILATION, (0, 0), trials=5).verdict is Verdict.REFUTED
    assert check_corollary(TIME_REVERSAL, (-2, 2), trials=10).verdict is Verdict.PASS


def test_reports_are_deterministic():
    f = random_poincare(8, 2)
    a = certify_hyperboloid_preservation(f, trials=15, seed=5)
    b = certify_hyperboloid_preservation(f, trials=15, seed=5)
    assert (a.verdict, a.witness, a.trials, a.seed, a.detail) == (b.verdict, b.witness, b.trials, b.seed, b.detail)
    g = AffineMap.linear(linalg.scale(linalg.identity(3), Fraction(1, 2)))
    c = certify_hyperboloid_preservation(g, trials=15, seed=5)
    d = certify_hyperboloid_preservation(g, trials=15, seed=5)
    assert c.witness == d.witness and c.detail == d.detail


def test_inverse_direction_catches_non_surjective_candidate():
    # forward image stays on the hyperboloid, but the declared inverse does not
    f = CandidateMap.blackbox(lambda p: p, lambda p: p, 1)
    assert certify_hyperboloid_preservation(f, trials=5).verdict is Verdict.PASS
    bad = CandidateMap.blackbox(lambda p: p, lambda p: p * 2, 1)
    with pytest.raises(InverseInconsistent):
        certify_hyperboloid_preservation(bad, trials=5)


def test_candidate_exceptions_are_inconclusive():
    def boom(p):
        raise ZeroDivisionError("division by zero inside the candidate")

    report = certify_hyperboloid_preservation(CandidateMap.blackbox(boom, boom, 1), trials=3)
    assert report.verdict is Verdict.INCONCLUSIVE
    assert "ZeroDivisionError" in report.detail
    nan = CandidateMap.blackbox(lambda p: Event(float("nan"), 0.0), lambda p: p, 1)
    assert certify_hyperboloid_preservation(nan, trials=3).verdict is Verdict.INCONCLUSIVE


def test_dimension_and_trials_validation():
    with pytest.raises(DimensionMismatch):
        certify_hyperboloid_preservation(DILATION, n=2)
    with pytest.raises(ValueError):
        certify_hyperboloid_preservation(DILATION, trials=0)


def test_known_answer_maps_cover_the_table():
    assert set(known_answer_maps(2)) == set(EXPECTED_VERDICTS)


@pytest.mark.parametrize("name, n, seed", [("prop3", 2, 7), ("prop4", 1, 7), ("lemma2", 3, 7)])
def test_suite_examples(name, n, seed):
    report = run_property_suite(name, n, 120, seed)
    assert report.verdict is Verdict.PASS and report.n == n


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_passes_small_runs(name):
    for n in (1, 2, 3):
        assert run_property_suite(name, n, 30, 1).verdict is Verdict.PASS


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_property_suite("prop9", 1, 1)
