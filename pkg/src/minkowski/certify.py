"""Sampling-based certification of candidate maps and the named property suites.

A PASS verdict is evidence over the sampled instances, never a proof; a
REFUTED verdict carries a witness that re-checks independently.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import linalg
from . import scalar as sc
from .core import (
    CausalClass,
    Event,
    Line,
    close,
    maybe_float,
    classify_line,
    classify_pair,
    bilinear_form,
    is_between,
    k_lines_collinearity,
    quadratic_form,
    robb_hyperplane,
    robb_set_membership,
)
from .errors import (
    InfeasibleExponent,
    InverseInconsistent,
    LightLikePair,
    NotInExtendedGroup,
    SearchExhausted,
    UnknownSuite,
)
from .hyperboloid import (
    Hyperboloid,
    IntersectionCardinality,
    Orientation,
    Shell,
    betweenness_shell_falsifier,
    exponents,
    first_feasible_exponent,
    hyperboloid_through_pair,
    intersect_hyperboloids,
    lightlike_by_hyperboloid_criterion,
    on_hyperboloid,
    on_shell,
    same_shell,
    shells_disjoint,
    singleton_locus_check,
)
from .sampling import (
    canonical_triple,
    hyperboloid_point,
    light_direction,
    plane_spacelike_triple,
    random_event,
    random_pair,
    random_vector_of_class,
    rng_for,
    robb_probe,
)
from .transforms import (
    AffineMap,
    coordinate_reflection,
    decompose,
    dilation,
    inverse,
    rational_boost,
    random_extended,
    random_shear,
    shear,
    time_reversal,
)

SAMPLING_NOTE = "sampling-based evidence over the listed trials, not a proof"


class Verdict(Enum):
    PASS = "PASS"
    REFUTED = "REFUTED"
    INCONCLUSIVE = "INCONCLUSIVE"


class Direction(Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


class Surface(Enum):
    HYPERBOLOID = "hyperboloid"
    FORWARD_SHELL = "forward"


class CandidateKind(Enum):
    AFFINE = "AFFINE"
    BLACKBOX = "BLACKBOX"


@dataclass(frozen=True)
class CandidateMap:
    """An affine map (inverse computed exactly) or a pair of point functions."""

    kind: CandidateKind
    affine: Optional[AffineMap] = None
    forward: Optional[Callable[[Event], Event]] = None
    backward: Optional[Callable[[Event], Event]] = None
    n: Optional[int] = None

    def __post_init__(self):
        if self.kind is CandidateKind.AFFINE:
            if self.affine is None:
                raise ValueError("AFFINE candidates need an AffineMap")
            inv = inverse(self.affine)
            object.__setattr__(self, "forward", self.affine)
            object.__setattr__(self, "backward", inv)
            object.__setattr__(self, "n", self.affine.n)
        elif self.forward is None or self.backward is None or self.n is None:
            raise ValueError("BLACKBOX candidates need forward, inverse and n")

    @classmethod
    def from_affine(cls, f: AffineMap) -> "CandidateMap":
        return cls(CandidateKind.AFFINE, affine=f)

    @classmethod
    def blackbox(cls, forward: Callable, inverse_fn: Callable, n: int) -> "CandidateMap":
        return cls(CandidateKind.BLACKBOX, forward=forward, backward=inverse_fn, n=n)


def as_candidate(f) -> CandidateMap:
    return f if isinstance(f, CandidateMap) else CandidateMap.from_affine(f)


@dataclass(frozen=True)
class Witness:
    """``p`` lies on ``S + v`` but the image of ``p`` misses ``S + image(v)``;
    for the inverse direction the images are taken under the inverse map."""

    v: Event
    p: Event
    direction: Direction
    exponent: int = 0


@dataclass(frozen=True)
class CertificationReport:
    suite: str
    verdict: Verdict
    trials: int
    seed: int
    witness: object = None
    elapsed_ms: float = 0.0
    n: Optional[int] = None
    detail: str = ""
    note: str = field(default=SAMPLING_NOTE)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS


class _Inconclusive(Exception):
    pass


def _finite(p) -> bool:
    return isinstance(p, Event) and all(not isinstance(c, float) or math.isfinite(c) for c in p.coords)


def _call(fn, p: Event) -> Event:
    try:
        out = fn(p)
    except (ArithmeticError, ValueError, TypeError) as exc:
        raise _Inconclusive(f"candidate raised {type(exc).__name__}: {exc}") from exc
    if not _finite(out):
        raise _Inconclusive(f"candidate returned a non-finite or non-event value for {p}")
    return out


def _member(surface: Surface, center: Event, radius, p: Event) -> bool:
    if surface is Surface.HYPERBOLOID:
        return on_hyperboloid(Hyperboloid(center, radius), p)
    return on_shell(Shell(center, radius, Orientation.FORWARD), p)


def _sample_on_surface(rng, surface: Surface, center: Event, radius) -> Event:
    orientation = Orientation.FORWARD if surface is Surface.FORWARD_SHELL else None
    return hyperboloid_point(rng, center, radius, orientation)


def _sample_center(rng, n: int) -> Event:
    return random_event(rng, n)


def _check_blackbox_inverse(f: CandidateMap, p: Event, fp: Event) -> None:
    if f.kind is not CandidateKind.BLACKBOX:
        return
    back = _call(f.backward, fp)
    if not close(*maybe_float(back, p)):
        raise InverseInconsistent(f"inverse(f({p})) = {back}")


def _trial(f: CandidateMap, surface: Surface, rng, trial: int, e: int) -> Optional[Witness]:
    """One forward and one inverse check against ``2**e S + v``."""
    n = f.n
    radius = sc.two_pow(e)
    if trial == 0:
        v = Event.zero(n)
        p = Event(radius, *([0] * n))
    else:
        v = _sample_center(rng, n)
        p = _sample_on_surface(rng, surface, v, radius)
    fv, fp = _call(f.forward, v), _call(f.forward, p)
    _check_blackbox_inverse(f, v, fv)
    _check_blackbox_inverse(f, p, fp)
    if not _member(surface, fv, radius, fp):
        return Witness(v, p, Direction.FORWARD, e)
    # inverse direction: points of 2^e S + f(v) must come from 2^e S + v
    if fv.backend is sc.Backend.EXACT_RATIONAL:
        q = _sample_on_surface(rng, surface, fv, radius)
    else:
        q = _sample_on_surface(rng, surface, Event(*[Fraction(c) for c in fv.coords]), radius).to_float()
    back_v, back_q = _call(f.backward, fv), _call(f.backward, q)
    if not _member(surface, back_v, radius, back_q):
        return Witness(fv, q, Direction.INVERSE, e)
    return None


def _certify(suite: str, f, surface: Surface, e_values: Sequence[int], trials: int, seed: int) -> CertificationReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    f = as_candidate(f)
    start = time.perf_counter()
    verdict, witness, detail = Verdict.PASS, None, ""
    try:
        for trial in range(trials):
            rng = rng_for(suite, seed, trial)
            for e in e_values:
                witness = _trial(f, surface, rng, trial, e)
                if witness is not None:
                    verdict = Verdict.REFUTED
                    detail = f"trial {trial}"
                    break
            if witness is not None:
                break
    except _Inconclusive as exc:
        verdict, detail = Verdict.INCONCLUSIVE, str(exc)
    elapsed = (time.perf_counter() - start) * 1000
    return CertificationReport(suite, verdict, trials, seed, witness, elapsed, f.n, detail)


def certify_hyperboloid_preservation(f, n: Optional[int] = None, trials: int = 1000, seed: int = 0) -> CertificationReport:
    """Check ``f[H + v] = H + f(v)`` with ``H = H(0, 1)`` on sampled ``v``."""
    _check_dim(f, n)
    return _certify("hyperboloid", f, Surface.HYPERBOLOID, (0,), trials, seed)


def certify_forward_preservation(f, n: Optional[int] = None, trials: int = 1000, seed: int = 0) -> CertificationReport:
    """Check ``f[H+ + v] = H+ + f(v)`` for the forward unit shell ``H+``."""
    _check_dim(f, n)
    return _certify("forward", f, Surface.FORWARD_SHELL, (0,), trials, seed)


def check_corollary(f, e_range=(-4, 4), n: Optional[int] = None, trials: int = 200, seed: int = 0) -> CertificationReport:
    """Check ``f[2**e H + v] = 2**e H + f(v)`` for every ``e`` in range; each
    trial draws one sample per exponent."""
    _check_dim(f, n)
    return _certify("corollary", f, Surface.HYPERBOLOID, tuple(exponents(e_range)), trials, seed)


def _check_dim(f, n):
    c = as_candidate(f)
    if n is not None and c.n != n:
        from .errors import DimensionMismatch
        raise DimensionMismatch(f"candidate acts on n={c.n}, requested n={n}")


def recheck_witness(f, report: CertificationReport, surface: Surface) -> bool:
    """True iff the report's witness independently demonstrates a violation."""
    w = report.witness
    if not isinstance(w, Witness):
        return False
    f = as_candidate(f)
    radius = sc.two_pow(w.exponent)
    if not _member(surface, w.v, radius, w.p):
        return False
    fn = f.forward if w.direction is Direction.FORWARD else f.backward
    return not _member(surface, fn(w.v), radius, fn(w.p))


# known-answer maps

def known_answer_maps(n: int) -> dict:
    """The seven reference transformations with their expected verdicts on
    (hyperboloid, forward shell, corollary)."""
    b = Event(*([Fraction(3, 2)] + [Fraction(-7, 3)] * n))
    return {
        "identity": AffineMap.identity(n),
        "time_reversal": AffineMap.linear(time_reversal(n)),
        "spatial_reflection": AffineMap.linear(coordinate_reflection(n, 1)),
        "rational_boost": AffineMap.linear(rational_boost(n, 1, 2, 1)),
        "dilation_2": AffineMap.linear(dilation(n, 2)),
        "shear": AffineMap.linear(shear(n, 0, 1, 1)),
        "translation": AffineMap.translation_by(b),
    }


EXPECTED_VERDICTS = {
    "identity": (Verdict.PASS, Verdict.PASS, Verdict.PASS),
    "time_reversal": (Verdict.PASS, Verdict.REFUTED, Verdict.PASS),
    "spatial_reflection": (Verdict.PASS, Verdict.PASS, Verdict.PASS),
    "rational_boost": (Verdict.PASS, Verdict.PASS, Verdict.PASS),
    "dilation_2": (Verdict.REFUTED, Verdict.REFUTED, Verdict.REFUTED),
    "shear": (Verdict.REFUTED, Verdict.REFUTED, Verdict.REFUTED),
    "translation": (Verdict.PASS, Verdict.PASS, Verdict.PASS),
}


def known_answer_matrix(n: int, trials: int, seed: int = 0, e_range=(-2, 2)) -> dict:
    """Run every reference map on all three surfaces; returns name -> reports."""
    out = {}
    for name, f in known_answer_maps(n).items():
        out[name] = (
            certify_hyperboloid_preservation(f, trials=trials, seed=seed),
            certify_forward_preservation(f, trials=trials, seed=seed),
            check_corollary(f, e_range, trials=trials, seed=seed),
        )
    return out


# property suites; each check returns None or a JSON-friendly counterexample

def _fmt(x):
    from .serialize import to_json_value
    return to_json_value(x)


_RADII = (Fraction(1, 2), Fraction(1), Fraction(2))
_CLASSES = (CausalClass.TIMELIKE, CausalClass.LIGHTLIKE, CausalClass.SPACELIKE)


def singleton_locus_instance(rng, n: int, trial: int) -> tuple:
    """``(v, r)`` for trial ``trial``: radius and causal class cycle so that
    every (radius, class) combination gets an equal share; time-like centers
    land on H(0, 2r), H(0, r), H(0, 3r) or anywhere with equal odds."""
    r = _RADII[trial % 3]
    cls = _CLASSES[(trial // 3) % 3]
    if cls is CausalClass.TIMELIKE:
        k = rng.randrange(4)
        if k < 3:
            return hyperboloid_point(rng, Event.zero(n), r * (2, 1, 3)[k]), r
    return random_vector_of_class(rng, n, cls, 16, 8), r


def singleton_locus_unequal(v: Event, r) -> bool:
    """Closed form for ``|H(v, r) ∩ H(0, 2r)| = 1``: Q(v) = r² or 9r², plus
    every nonzero light-like v when n = 1."""
    q = quadratic_form(v)
    if q == r * r or q == 9 * r * r:
        return True
    return v.n == 1 and q == 0 and not v.is_zero()


def _suite_singleton_locus(rng, n, trial):
    v, r = singleton_locus_instance(rng, n, trial)
    got = singleton_locus_check(v, r)
    want = quadratic_form(v) == 4 * r * r
    if got != want:
        return {"v": _fmt(v), "r": _fmt(r), "singleton": got, "on_2r_locus": want}
    got2 = intersect_hyperboloids(Hyperboloid(Event.zero(n), 2 * r), Hyperboloid(v, r)) is IntersectionCardinality.SINGLETON
    want2 = singleton_locus_unequal(v, r)
    if got2 != want2:
        return {"v": _fmt(v), "r": _fmt(r), "unequal_radii_singleton": got2, "expected": want2}
    return None


_MIN_TIMELIKE_Q = Fraction(1, 2 ** 14)


def _suite_lightlike_criterion(rng, n, trial):
    cls = _CLASSES[trial % 3]
    u, w = random_pair(rng, n, cls, _MIN_TIMELIKE_Q)
    got = lightlike_by_hyperboloid_criterion(u, w, (-8, 8))
    if got != (cls is CausalClass.LIGHTLIKE):
        return {"u": _fmt(u), "w": _fmt(w), "criterion": got, "class": cls.value}
    if not got:
        e = first_feasible_exponent(u, w, (-8, 8))
        H = hyperboloid_through_pair(u, w, e)
        if not (on_hyperboloid(H, u) and on_hyperboloid(H, w)):
            return {"u": _fmt(u), "w": _fmt(w), "e": e, "witness_failed": True}
    return None


def _suite_pair_witness(rng, n, trial):
    cls = _CLASSES[trial % 3]
    u, w = random_pair(rng, n, cls, _MIN_TIMELIKE_Q)
    e = rng.randint(-8, 8)
    try:
        H = hyperboloid_through_pair(u, w, e)
    except LightLikePair:
        return None if cls is CausalClass.LIGHTLIKE else {"u": _fmt(u), "w": _fmt(w), "unexpected": "LightLikePair"}
    except InfeasibleExponent:
        ok = cls is CausalClass.TIMELIKE and 4 * sc.two_pow(e) ** 2 > quadratic_form(u - w)
        return None if ok else {"u": _fmt(u), "w": _fmt(w), "e": e, "unexpected": "InfeasibleExponent"}
    if cls is CausalClass.LIGHTLIKE:
        return {"u": _fmt(u), "w": _fmt(w), "unexpected": "witness for a light-like pair"}
    if not (on_hyperboloid(H, u) and on_hyperboloid(H, w) and sc.eq(H.radius, type(H.radius)(sc.two_pow(e)))):
        return {"u": _fmt(u), "w": _fmt(w), "e": e, "witness_failed": True}
    return None


def _suite_same_shell(rng, n, trial):
    center = random_event(rng, n, 64, 8)
    r = sc.two_pow(rng.randint(-3, 3)) if rng.random() < 0.5 else Fraction(rng.randint(1, 40), rng.randint(1, 8))
    H = Hyperboloid(center, r)
    while True:
        u, w = hyperboloid_point(rng, center, r), hyperboloid_point(rng, center, r)
        if u != w:
            break
    got = same_shell(H, u, w)
    want = classify_pair(u, w) is CausalClass.SPACELIKE
    if got != want:
        return {"center": _fmt(center), "r": _fmt(r), "u": _fmt(u), "w": _fmt(w), "same_shell": got}
    return None


def _suite_shell_disjointness(rng, n, trial):
    c1 = random_event(rng, n, 64, 8)
    c2 = c1 + random_vector_of_class(rng, n, CausalClass.SPACELIKE, 64, 8)
    C = Shell(c1, sc.two_pow(rng.randint(-3, 3)), rng.choice(list(Orientation)))
    K = Shell(c2, sc.two_pow(rng.randint(-3, 3)), rng.choice(list(Orientation)))
    got = shells_disjoint(C, K)
    if got != (C.orientation is not K.orientation):
        return {"C": _fmt(C), "K": _fmt(K), "disjoint": got}
    return None


def _suite_betweenness_falsifier(rng, n, trial):
    between = trial % 2 == 1
    u, v, w = canonical_triple(rng, n, between)
    inst = {"u": _fmt(u), "v": _fmt(v), "w": _fmt(w), "between": between}
    try:
        pair = betweenness_shell_falsifier(u, v, w, (-8, 8))
    except SearchExhausted:
        return dict(inst, anomaly="search exhausted")
    if between:
        return None if pair is None else dict(inst, anomaly="pair found for a between triple")
    if pair is None:
        return dict(inst, anomaly="no pair for a non-between triple")
    C, K = pair.C, pair.K
    ok = (on_shell(C, u) and on_shell(C, w) and on_shell(K, v)
          and C.orientation is not K.orientation
          and C.standard_exponent is not None and K.standard_exponent is not None
          and shells_disjoint(C, K))
    return None if ok else dict(inst, anomaly="returned pair failed re-verification")


def _suite_decompose(rng, n, trial):
    if trial % 6 == 5:
        f = random_shear(rng, n)
        try:
            decompose(f)
        except NotInExtendedGroup:
            return None
        return {"map": _fmt(f), "anomaly": "shear decomposed"}
    f = random_extended(rng, n)
    if trial % 6 == 4:
        f = f.to_float()
    try:
        dec = decompose(f)
    except NotInExtendedGroup as exc:
        return {"map": _fmt(f), "anomaly": f"decompose failed: {exc}"}
    g = dec.recompose()
    exact = f.backend is sc.Backend.EXACT_RATIONAL and dec.lam_backend() is sc.Backend.EXACT_RATIONAL
    if exact and not (g.matrix == f.matrix and g.translation == f.translation):
        return {"map": _fmt(f), "anomaly": "exact recomposition differs"}
    if dec.residual(f) > 1e-9:
        return {"map": _fmt(f), "anomaly": f"residual {dec.residual(f)}"}
    return None


def _suite_robb(rng, n, trial):
    base = random_event(rng, n, 32, 8)
    d = light_direction(rng, n, future=rng.random() < 0.5) * rng.randint(1, 4)
    L = Line(base, d)
    R = robb_hyperplane(L)
    p = robb_probe(rng, base, d)
    got, want = R.contains(p), robb_set_membership(L, p)
    if got != want:
        return {"line_base": _fmt(base), "line_direction": _fmt(d), "p": _fmt(p), "hyperplane": got, "set": want}
    # lines inside the hyperplane are never time-like
    z = random_event(rng, n, 32, 8)
    z = z - Event.unit(n, 0) * (bilinear_form(z, d) / d.t)
    if not z.is_zero() and classify_line(Line(base, z)) is CausalClass.TIMELIKE:
        return {"line_base": _fmt(base), "line_direction": _fmt(d), "timelike_direction": _fmt(z)}
    return None


def _suite_klines(rng, n, trial):
    collinear = trial % 2 == 0
    P, u, v, w = plane_spacelike_triple(rng, n, collinear)
    k = k_lines_collinearity(P, u, v, w)
    want = linalg.rank(((v - u).coords, (w - u).coords)) == 1
    if k.collinear != want:
        return {"u": _fmt(u), "v": _fmt(v), "w": _fmt(w), "collinear": k.collinear, "expected": want}
    return None


# keys are the public identifiers accepted by ``mink prove --suite``
SUITES = {
    "lemma2": _suite_singleton_locus,
    "prop1": _suite_lightlike_criterion,
    "prop2": _suite_pair_witness,
    "prop3": _suite_same_shell,
    "prop4": _suite_shell_disjointness,
    "prop5": _suite_betweenness_falsifier,
    "decompose_roundtrip": _suite_decompose,
    "robb": _suite_robb,
    "klines": _suite_klines,
}


def run_property_suite(name: str, n: int, trials: int, seed: int = 0) -> CertificationReport:
    """Run a registered invariant over ``trials`` deterministic instances."""
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    check = SUITES[name]
    start = time.perf_counter()
    verdict, witness, detail = Verdict.PASS, None, ""
    for trial in range(trials):
        rng = rng_for(name, n, seed, trial)
        found = check(rng, n, trial)
        if found is not None:
            verdict, witness, detail = Verdict.REFUTED, dict(found, trial=trial), f"trial {trial}"
            break
    elapsed = (time.perf_counter() - start) * 1000
    return CertificationReport(name, verdict, trials, seed, witness, elapsed, n, detail)
