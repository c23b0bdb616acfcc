"""Hyperboloids ``H(v, r) = {p : Q(p - v) = r**2}``, their shells, and the
intersection, witness and separation constructions built on them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from . import linalg
from . import scalar as sc
from .core import (
    CausalClass,
    Event,
    bilinear_form,
    classify_pair,
    close,
    common_backend,
    is_between,
    maybe_float,
    quadratic_form,
)
from .errors import (
    CoincidentPoints,
    DegenerateConfiguration,
    InconsistentPoints,
    InfeasibleExponent,
    LightLikePair,
    NonPositiveFactor,
    NotAHyperboloid,
    NotOnHyperboloid,
    NotPairwiseSpacelike,
    OffCenter,
    RadiusMismatch,
    SearchExhausted,
)

DEFAULT_E_RANGE = (-8, 8)

ERange = Union[Sequence[int], range]


def exponents(e_range: ERange) -> range:
    """``(lo, hi)`` inclusive pairs and ``range`` objects both accepted."""
    if isinstance(e_range, range):
        return e_range
    lo, hi = e_range
    if lo > hi:
        raise ValueError("empty exponent range")
    return range(lo, hi + 1)


class Orientation(Enum):
    FORWARD = 1
    BACKWARD = -1

    def opposite(self) -> "Orientation":
        return Orientation.BACKWARD if self is Orientation.FORWARD else Orientation.FORWARD


def _radius(r):
    r = sc.coerce(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    return r


@dataclass(frozen=True)
class Hyperboloid:
    center: Event
    radius: object

    def __post_init__(self):
        r = _radius(self.radius)
        if isinstance(r, float) != (self.center.backend is sc.Backend.FLOAT64):
            if isinstance(r, float):
                object.__setattr__(self, "center", self.center.to_float())
            else:
                r = float(r)
        object.__setattr__(self, "radius", r)

    @property
    def n(self) -> int:
        return self.center.n

    def contains(self, p: Event) -> bool:
        return on_hyperboloid(self, p)

    def shell(self, orientation: Orientation) -> "Shell":
        return Shell(self.center, self.radius, orientation)

    def to_float(self) -> "Hyperboloid":
        return Hyperboloid(self.center.to_float(), float(self.radius))


@dataclass(frozen=True)
class Shell:
    """One sheet of ``H(center, radius)``; forward sheets lie above the center."""

    center: Event
    radius: object
    orientation: Orientation

    def __post_init__(self):
        h = Hyperboloid(self.center, self.radius)
        object.__setattr__(self, "center", h.center)
        object.__setattr__(self, "radius", h.radius)

    @property
    def n(self) -> int:
        return self.center.n

    @property
    def standard_exponent(self) -> Optional[int]:
        return sc.power_of_two_exponent(self.radius)

    @property
    def hyperboloid(self) -> Hyperboloid:
        return Hyperboloid(self.center, self.radius)

    def contains(self, p: Event) -> bool:
        return on_shell(self, p)

    def to_float(self) -> "Shell":
        return Shell(self.center.to_float(), float(self.radius), self.orientation)


class IntersectionCardinality(Enum):
    EMPTY = "EMPTY"
    SINGLETON = "SINGLETON"
    PAIR = "PAIR"
    INFINITE = "INFINITE"


def _residual_sign(center: Event, radius, p: Event) -> int:
    """Sign of ``Q(p - center) - radius**2``."""
    rel = p - center
    tt = rel.t * rel.t
    xx = sum(x * x for x in rel.x)
    r2 = radius * radius
    return sc.sign(tt - xx - r2, max(float(tt), float(xx), float(r2)))


def _match(center: Event, radius, p: Event):
    if p.backend is not center.backend:
        center, p = maybe_float(center, p)
        radius = float(radius)
    return center, radius, p


def on_hyperboloid(H: Hyperboloid, p: Event) -> bool:
    center, radius, p = _match(H.center, H.radius, p)
    return _residual_sign(center, radius, p) == 0


def on_shell(S: Shell, p: Event) -> bool:
    center, radius, p = _match(S.center, S.radius, p)
    if _residual_sign(center, radius, p) != 0:
        return False
    return (p.t > center.t) == (S.orientation is Orientation.FORWARD)


def dilate(H: Hyperboloid, m) -> Hyperboloid:
    """``m H(0, r) = H(0, m r)``."""
    m = sc.coerce(m)
    if m <= 0:
        raise NonPositiveFactor("dilation factor must be positive")
    if not H.center.is_zero():
        raise OffCenter("the dilation identity holds for hyperboloids centered at 0")
    return Hyperboloid(H.center, H.radius * m)


def intersect_hyperboloids(A: Hyperboloid, B: Hyperboloid) -> IntersectionCardinality:
    """Cardinality of ``A ∩ B`` for arbitrary radii.

    With ``A`` moved to the origin, members satisfy the linear condition
    ``2 eta(p, d) = R² - r² + Q(d)`` (``d`` the center offset), which cuts
    ``A`` in a sphere, a point, or nothing.
    """
    common_backend(A.center, B.center)
    n = A.n
    R2, r2 = A.radius * A.radius, B.radius * B.radius
    d = B.center - A.center
    if d.is_zero():
        return IntersectionCardinality.INFINITE if sc.eq(R2, r2) else IntersectionCardinality.EMPTY
    tt, xx = d.t * d.t, sum(x * x for x in d.x)
    q = tt - xx
    c = R2 - r2 + q
    many = IntersectionCardinality.PAIR if n == 1 else IntersectionCardinality.INFINITE
    qs = sc.sign(q, max(float(tt), float(xx)))
    if qs > 0:
        # rest frame of d: t = c / (2 sqrt q), |x|² = c²/(4q) - R²
        disc = c * c - 4 * q * R2
        s = sc.sign(disc, max(float(c * c), float(4 * q * R2)))
        if s < 0:
            return IntersectionCardinality.EMPTY
        return IntersectionCardinality.SINGLETON if s == 0 else many
    if qs < 0:
        return many
    # light-like offset: (t - x1)(t + x1) - rho² = R² with t - x1 = c / (2 d_t)
    if sc.sign(c, max(float(R2), float(r2), float(tt))) == 0:
        return IntersectionCardinality.EMPTY
    return IntersectionCardinality.SINGLETON if n == 1 else IntersectionCardinality.INFINITE


def intersect_same_radius(A: Hyperboloid, B: Hyperboloid) -> IntersectionCardinality:
    if A.n != B.n:
        from .errors import DimensionMismatch
        raise DimensionMismatch(f"dimension {A.n} vs {B.n}")
    if not sc.eq(A.radius, B.radius):
        raise RadiusMismatch("hyperboloids must share a radius")
    return intersect_hyperboloids(A, B)


def tangency_point(A: Hyperboloid, B: Hyperboloid) -> Event:
    """The common point of two hyperboloids with time-like separated centers
    whose intersection is a singleton."""
    if intersect_hyperboloids(A, B) is not IntersectionCardinality.SINGLETON:
        raise ValueError("intersection is not a singleton")
    d = B.center - A.center
    q = quadratic_form(d)
    if sc.sign(q) <= 0:
        raise ValueError("tangency point is only constructed for time-like offsets")
    c = A.radius * A.radius - B.radius * B.radius + q
    return A.center + d * (c / (2 * q))


def singleton_locus_check(v: Event, r) -> bool:
    """True iff ``H(v, r) ∩ H(0, r)`` is a single point."""
    r = _radius(r)
    z = Event.zero(v.n, v.backend)
    return intersect_same_radius(Hyperboloid(z, r), Hyperboloid(v, r)) is IntersectionCardinality.SINGLETON


def _orthogonal_axis(axis: int, d: Event, q) -> Event:
    """``e_axis`` minus its eta-projection onto ``d`` (so eta(result, d) = 0)."""
    e = Event.unit(d.n, axis, d.backend)
    return e - d * (bilinear_form(e, d) / q)


def hyperboloid_through_pair(u: Event, w: Event, e: int) -> Hyperboloid:
    """A hyperboloid ``H(v, 2**e)`` containing both ``u`` and ``w``.

    The center is ``(u + w)/2 + y`` with ``y`` eta-orthogonal to ``u - w``
    and ``Q(y) = 4**e - Q(u - w)/4``; ``y`` points along the time axis of the
    rest frame of ``u - w`` (space-like pairs) or along its first space axis
    (time-like pairs), with the nonnegative root.
    """
    cls = classify_pair(u, w)
    if cls is CausalClass.LIGHTLIKE:
        raise LightLikePair("no hyperboloid contains two points in light-like position")
    d = u - w
    q = quadratic_form(d)
    R = sc.two_pow(e)
    R2 = R * R
    if u.backend is sc.Backend.FLOAT64:
        R, R2 = float(R), float(R2)
    if cls is CausalClass.TIMELIKE and sc.compare(4 * R2, q) > 0:
        raise InfeasibleExponent(
            f"time-like pair needs 2^(e+1) <= sqrt(Q(u-w)); Q(u-w) = {q}, 4^(e+1) = {4 * R2}",
            bound=q,
        )
    y0 = _orthogonal_axis(0 if cls is CausalClass.SPACELIKE else 1, d, q)
    mid = (u + w) / 2
    target = R2 - q / 4
    if sc.sign(target, float(R2) + abs(float(q))) == 0:
        center = mid
    else:
        k = sc.sqrt(target / quadratic_form(y0))
        if isinstance(k, float):
            mid, y0 = mid.to_float(), y0.to_float()
            R = float(R)
        center = mid + y0 * k
    H = Hyperboloid(center, R)
    if not (on_hyperboloid(H, u) and on_hyperboloid(H, w)):
        raise ArithmeticError("witness hyperboloid failed its membership check")
    return H


def hyperboloid_feasible(u: Event, w: Event, e: int) -> bool:
    """Whether some ``H(v, 2**e)`` contains both points (no construction)."""
    cls = classify_pair(u, w)
    if cls is CausalClass.LIGHTLIKE:
        return False
    if cls is CausalClass.SPACELIKE:
        return True
    q = quadratic_form(u - w)
    bound = sc.two_pow(e + 1) ** 2
    if isinstance(q, float):
        bound = float(bound)
    return sc.compare(bound, q) <= 0


def lightlike_by_hyperboloid_criterion(u: Event, w: Event, e_range: ERange = DEFAULT_E_RANGE) -> bool:
    """True iff no ``H(v, 2**e)``, ``e`` in range, contains both points."""
    common_backend(u, w)
    if close(u, w):
        raise CoincidentPoints("the criterion needs two distinct points")
    return not any(hyperboloid_feasible(u, w, e) for e in exponents(e_range))


def first_feasible_exponent(u: Event, w: Event, e_range: ERange = DEFAULT_E_RANGE) -> Optional[int]:
    for e in exponents(e_range):
        if hyperboloid_feasible(u, w, e):
            return e
    return None


def same_shell(H: Hyperboloid, u: Event, w: Event) -> bool:
    """Whether two points of ``H`` lie on the same sheet."""
    if not (on_hyperboloid(H, u) and on_hyperboloid(H, w)):
        raise NotOnHyperboloid("both points must lie on the hyperboloid")
    if close(u, w):
        raise CoincidentPoints("points must be distinct")
    return (u.t > H.center.t) == (w.t > H.center.t)


# shell separation

def _quad_extrema(a2, b1, c0, lo, hi):
    """(value, scale) pairs at the points where ``a2 t² + b1 t + c0`` can
    attain its extrema over ``[lo, hi]``; ``None`` bounds are infinite."""
    inf = math.inf

    def at(t):
        val = a2 * t * t + b1 * t + c0
        return val, abs(float(a2 * t * t)) + abs(float(b1 * t)) + abs(float(c0))

    scale = max(abs(float(a2)), abs(float(b1)), 1.0)
    out = []
    for bound, direction in ((lo, -1), (hi, 1)):
        if bound is not None:
            out.append(at(bound))
            continue
        if sc.sign(a2, scale) != 0:
            out.append((inf if a2 > 0 else -inf, 1.0))
        elif sc.sign(b1, scale) != 0:
            out.append((inf if (b1 > 0) == (direction > 0) else -inf, 1.0))
        else:
            out.append((c0, abs(float(c0))))
    if sc.sign(a2, scale) != 0:
        t = -b1 / (2 * a2)
        if (lo is None or t > lo) and (hi is None or t < hi):
            out.append(at(t))
    return out


def _exists_nonneg(cands) -> bool:
    return any(v == math.inf or (v != -math.inf and sc.sign(v, s) >= 0) for v, s in cands)


def _exists_nonpos(cands) -> bool:
    return any(v == -math.inf or (v != math.inf and sc.sign(v, s) <= 0) for v, s in cands)


def shells_disjoint(C: Shell, K: Shell) -> bool:
    """Exact emptiness test for ``C ∩ K`` (tolerant and conservative on floats).

    After moving C's center to 0, a common point is ``(t, s*k_x + y)`` with
    ``y`` orthogonal to ``k_x``.  The linear condition
    ``2 eta(p, k) = Q(k) + R² - r²`` fixes ``s`` in terms of ``t``, leaving
    ``rho² = |y|² = h(t) / |k_x|²`` for a quadratic ``h``; orientations
    confine ``t`` to an interval.  Then C ∩ K is nonempty iff ``h`` reaches
    0 (n = 1) or a nonnegative value (n >= 2) on that interval.
    """
    cc, kc = maybe_float(C.center, K.center)
    common_backend(cc, kc)
    is_float = cc.backend is sc.Backend.FLOAT64
    R, r = (float(C.radius), float(K.radius)) if is_float else (C.radius, K.radius)
    R2, r2 = R * R, r * r
    k = kc - cc
    T = k.t
    X2 = sum(x * x for x in k.x)
    c = T * T - X2 + R2 - r2
    sC, sK = C.orientation.value, K.orientation.value
    mag = max(float(T * T), float(X2), float(R2), float(r2))
    if sc.sign(T * T + X2, mag) == 0:
        if sc.eq(R2, r2):
            return sC != sK
        return True
    zero = T * 0
    lo = hi = None
    if sC > 0:
        lo = zero
    else:
        hi = zero
    if sK > 0:
        lo = T if lo is None else max(lo, T)
    else:
        hi = T if hi is None else min(hi, T)
    if lo is not None and hi is not None and lo >= hi:
        return True
    if sc.sign(X2, mag) == 0:
        t0 = c / (2 * T)
        inside = (lo is None or sc.compare(t0, lo) >= 0) and (hi is None or sc.compare(t0, hi) <= 0)
        return not (inside and sc.compare(t0 * t0, R2) >= 0)
    a2 = X2 - T * T
    b1 = c * T
    c0 = -c * c / 4 - R2 * X2
    cands = _quad_extrema(a2, b1, c0, lo, hi)
    if C.n == 1:
        return not (_exists_nonneg(cands) and _exists_nonpos(cands))
    return not _exists_nonneg(cands)


@dataclass(frozen=True)
class ShellPair:
    """Disjoint standard shells of opposite orientation, ``u, w ∈ C`` and ``v ∈ K``."""

    C: Shell
    K: Shell
    exponent: int


def _unit(v: Event):
    """``v / sqrt(|Q(v)|)``, exact when the root is rational."""
    k = sc.sqrt(abs(quadratic_form(v)))
    if isinstance(k, float):
        v = v.to_float()
    return v / k


def _frame_times(d: Event, q, rel: Event) -> list:
    """Candidate unit future time axes eta-orthogonal to ``d``.

    The first is the rest-frame time axis of ``d``.  When ``rel`` (the third
    point relative to the chord midpoint) has a component off the chord,
    frames boosted towards that component follow, so that the third point
    gets a clearly nonzero time offset in the canonical frame.
    """
    y = _unit(_orthogonal_axis(0, d, q))
    frames = [y]
    z = rel - d * (bilinear_form(rel, d) / q)
    if z.is_zero():
        return frames
    y, z = maybe_float(y, z)
    zp = z - y * bilinear_form(z, y)
    if sc.sign(quadratic_form(zp), float(sum(c * c for c in zp.coords))) == 0 or zp.is_zero():
        return frames
    zhat = _unit(zp)
    y, zhat, z = maybe_float(y, zhat, z)
    lead = bilinear_form(z, y)
    s = -1 if lead >= 0 else 1
    for sh in (1, 8, 64, 512):
        ch = math.sqrt(1 + sh * sh)
        frames.append(y.to_float() * ch + zhat.to_float() * float(s * sh))
    return frames


def betweenness_shell_falsifier(u: Event, v: Event, w: Event,
                                e_range: ERange = DEFAULT_E_RANGE) -> Optional[ShellPair]:
    """Search for standard shells ``C ∋ u, w`` and ``K ∋ v`` that are disjoint
    and oppositely oriented; such a pair exists iff ``v`` is not between
    ``u`` and ``w``.

    In the canonical frame ``u' = (t, -x, 0...)``, ``w' = (t, x, 0...)`` the
    shell through ``u', w'`` is centered on the time axis at
    ``t ∓ sqrt(4**e + x²)`` and the shell through ``v'`` has its apex at
    ``v'``.  Centers are built frame-free: the canonical time axis is a unit
    future vector ``u0`` eta-orthogonal to ``w - u``.

    Returns None when no verified pair exists and ``v`` is between ``u`` and
    ``w``; raises SearchExhausted when ``v`` is not between yet the range
    produced no verified pair.
    """
    common_backend(u, v, w)
    for a, b in ((u, v), (u, w), (v, w)):
        if classify_pair(a, b) is not CausalClass.SPACELIKE:
            raise NotPairwiseSpacelike("u, v, w must be pairwise space-like")
    d = w - u
    q = quadratic_form(d)
    m = (u + w) / 2
    for u0 in _frame_times(d, q, v - m):
        for e in exponents(e_range):
            R = sc.two_pow(e)
            a = sc.sqrt(R * R - q / 4)
            mm, vv, uu0 = m, v, u0
            if isinstance(a, float) or u0.backend is sc.Backend.FLOAT64:
                mm, vv, uu0, a, R = m.to_float(), v.to_float(), u0.to_float(), float(a), float(R)
            for c_orient in (Orientation.FORWARD, Orientation.BACKWARD):
                sign = c_orient.value
                C = Shell(mm - uu0 * (sign * a), R, c_orient)
                K = Shell(vv + uu0 * (sign * R), R, c_orient.opposite())
                if not (on_shell(C, u) and on_shell(C, w) and on_shell(K, v)):
                    continue
                if shells_disjoint(C, K):
                    return ShellPair(C, K, e)
    if is_between(u, v, w):
        return None
    raise SearchExhausted("no disjoint opposite standard shells found in the exponent range")


def fit_shell(points: Sequence[Event]) -> Shell:
    """Recover the unique shell through the given points (at least n + 2)."""
    pts = list(points)
    if not pts:
        raise DegenerateConfiguration("no points")
    common_backend(*pts)
    n = pts[0].n
    if len(pts) < n + 2:
        raise DegenerateConfiguration(f"need at least {n + 2} points, got {len(pts)}")
    p0 = pts[0]
    q0 = quadratic_form(p0)
    rows, rhs = [], []
    for p in pts[1:]:
        delta = p - p0
        rows.append((2 * delta.t,) + tuple(-2 * x for x in delta.x))
        rhs.append(quadratic_form(p) - q0)
    rows = tuple(rows)
    if linalg.rank(rows) < n + 1:
        raise DegenerateConfiguration("points do not determine a center")
    sol = linalg.solve(rows, rhs)
    if sol is None:
        raise InconsistentPoints("no common center satisfies every point")
    center = Event._raw(tuple(sol))
    r2 = quadratic_form(p0 - center)
    if sc.sign(r2, float(sum(c * c for c in (p0 - center).coords))) <= 0:
        raise NotAHyperboloid("fitted squared radius is not positive")
    r = sc.sqrt(r2)
    orientation = Orientation.FORWARD if p0.t > center.t else Orientation.BACKWARD
    S = Shell(center, r, orientation)
    for p in pts:
        if not on_shell(S, p):
            raise InconsistentPoints(f"point {p} is not on the fitted shell")
    return S
