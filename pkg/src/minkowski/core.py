"""Events, the Minkowski form, and causal classification of vectors and flats.

Coordinates are ``(t, x1, ..., xn)`` with ``Q(v) = t**2 - x.x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import linalg
from . import scalar as sc
from .errors import (
    BackendMismatch,
    CoincidentPoints,
    DegenerateSpan,
    DimensionMismatch,
    IdenticalLines,
    NonIntersecting,
    NotLightLike,
    NotLorentzPlane,
    NotPairwiseSpacelike,
    PointNotInPlane,
    PointsNotInPlane,
    ZeroVector,
)

MAX_SPACE_DIMENSION = 8


class Event:
    """A point (or vector) of (n+1)-dimensional space-time.

    ``Event(t, x1, ..., xn)``; ints and "p/q" strings become exact rationals,
    floats stay float64.  All coordinates must share one backend.
    """

    __slots__ = ("coords",)

    def __init__(self, *coords):
        if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
            coords = tuple(coords[0])
        values = tuple(sc.coerce(c) for c in coords)
        if len(values) < 2:
            raise DimensionMismatch("an event needs a time and at least one space coordinate")
        if len(values) - 1 > MAX_SPACE_DIMENSION:
            raise DimensionMismatch(f"at most {MAX_SPACE_DIMENSION} space dimensions are supported")
        sc.backend_of(values)
        object.__setattr__(self, "coords", values)

    @classmethod
    def _raw(cls, values: tuple) -> "Event":
        # trusted fast path: values already coerced and uniform
        ev = object.__new__(cls)
        object.__setattr__(ev, "coords", values)
        return ev

    @classmethod
    def zero(cls, n: int, backend: sc.Backend = sc.Backend.EXACT_RATIONAL) -> "Event":
        z = 0.0 if backend is sc.Backend.FLOAT64 else Fraction(0)
        return cls._raw((z,) * (n + 1))

    @classmethod
    def unit(cls, n: int, axis: int, backend: sc.Backend = sc.Backend.EXACT_RATIONAL) -> "Event":
        one, z = (1.0, 0.0) if backend is sc.Backend.FLOAT64 else (Fraction(1), Fraction(0))
        return cls._raw(tuple(one if i == axis else z for i in range(n + 1)))

    def __setattr__(self, name, value):
        raise AttributeError("Event is immutable")

    @property
    def t(self):
        return self.coords[0]

    @property
    def x(self) -> tuple:
        return self.coords[1:]

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    @property
    def backend(self) -> sc.Backend:
        return sc.backend_of_value(self.coords[0])

    def to_float(self) -> "Event":
        return Event._raw(tuple(float(c) for c in self.coords))

    def is_zero(self) -> bool:
        if self.backend is sc.Backend.FLOAT64:
            return all(abs(c) <= sc.get_tolerance() for c in self.coords)
        return not any(self.coords)

    def _check(self, other: "Event"):
        if not isinstance(other, Event):
            return NotImplemented
        if len(other.coords) != len(self.coords):
            raise DimensionMismatch(f"dimension {self.n} vs {other.n}")
        if self.backend is not other.backend:
            raise BackendMismatch("events with different scalar backends")
        return None

    def __add__(self, other: "Event") -> "Event":
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Event._raw(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Event") -> "Event":
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Event._raw(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Event":
        return Event._raw(tuple(-a for a in self.coords))

    def __mul__(self, k) -> "Event":
        k = sc.coerce(k)
        if isinstance(k, float) != (self.backend is sc.Backend.FLOAT64):
            raise BackendMismatch("scalar and event backends differ")
        return Event._raw(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, k) -> "Event":
        k = sc.coerce(k)
        if isinstance(k, float) != (self.backend is sc.Backend.FLOAT64):
            raise BackendMismatch("scalar and event backends differ")
        return Event._raw(tuple(a / k for a in self.coords))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Event):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __repr__(self) -> str:
        return "Event(" + ", ".join(str(c) for c in self.coords) + ")"


def close(u: Event, v: Event) -> bool:
    """Coordinate-wise equality (exact, or within relative tolerance)."""
    if u.n != v.n:
        return False
    if u.backend is sc.Backend.EXACT_RATIONAL and v.backend is sc.Backend.EXACT_RATIONAL:
        return u.coords == v.coords
    s = max([1.0] + [abs(float(c)) for c in (*u.coords, *v.coords)])
    return all(abs(float(a) - float(b)) <= sc.get_tolerance() * s for a, b in zip(u, v))


def common_backend(*events: Event) -> sc.Backend:
    b = events[0].backend
    for e in events[1:]:
        if e.n != events[0].n:
            raise DimensionMismatch(f"dimension {events[0].n} vs {e.n}")
        if e.backend is not b:
            raise BackendMismatch("events with different scalar backends")
    return b


class CausalClass(Enum):
    SPACELIKE = "SPACELIKE"
    LIGHTLIKE = "LIGHTLIKE"
    TIMELIKE = "TIMELIKE"


def quadratic_form(v: Event):
    """Minkowski norm ``t**2 - x.x``."""
    c = v.coords
    return c[0] * c[0] - sum(x * x for x in c[1:])


def bilinear_form(u: Event, v: Event):
    common_backend(u, v)
    a, b = u.coords, v.coords
    return a[0] * b[0] - sum(x * y for x, y in zip(a[1:], b[1:]))


def _spatial_norm2(v: Event):
    return sum(x * x for x in v.coords[1:])


def q_sign(v: Event) -> int:
    """Sign of Q(v), with float ties judged relative to the two squared parts."""
    tt = v.t * v.t
    xx = _spatial_norm2(v)
    return sc.sign(tt - xx, max(float(tt), float(xx)))


def eta_sign(u: Event, v: Event) -> int:
    val = bilinear_form(u, v)
    s = abs(float(u.t * v.t)) + sum(abs(float(a * b)) for a, b in zip(u.x, v.x))
    return sc.sign(val, s)


def classify_vector(v: Event) -> CausalClass:
    if v.is_zero():
        raise ZeroVector("the zero vector has no causal class")
    s = q_sign(v)
    if s < 0:
        return CausalClass.SPACELIKE
    if s == 0:
        return CausalClass.LIGHTLIKE
    return CausalClass.TIMELIKE


def classify_pair(u: Event, w: Event) -> CausalClass:
    common_backend(u, w)
    d = u - w
    if d.is_zero():
        raise CoincidentPoints("a point pair needs two distinct points")
    return classify_vector(d)


def _leading_index(coords: Sequence) -> int:
    if any(isinstance(c, float) for c in coords):
        m = max(abs(c) for c in coords)
        tol = sc.get_tolerance() * max(m, 1e-300)
        return next(i for i, c in enumerate(coords) if abs(c) > tol)
    return next(i for i, c in enumerate(coords) if c != 0)


def canonical_direction(d: Event) -> Event:
    """Primitive integer vector with positive leading entry (rationals), or
    max-abs-normalized vector with positive leading entry (floats)."""
    if d.is_zero():
        raise ZeroVector("a direction must be nonzero")
    k = _leading_index(d.coords)
    if d.backend is sc.Backend.FLOAT64:
        m = max(abs(c) for c in d.coords)
        s = m if d.coords[k] > 0 else -m
        return Event._raw(tuple(c / s for c in d.coords))
    den = math.lcm(*(c.denominator for c in d.coords))
    ints = [int(c * den) for c in d.coords]
    g = math.gcd(*ints)
    if ints[k] < 0:
        g = -g
    return Event._raw(tuple(Fraction(i // g) for i in ints))


@dataclass(frozen=True, eq=False)
class Line:
    """Affine line ``base + s * direction``; stored in canonical form so that
    equal point sets compare equal."""

    base: Event
    direction: Event

    def __post_init__(self):
        common_backend(self.base, self.direction)
        d = canonical_direction(self.direction)
        k = _leading_index(d.coords)
        base = self.base - d * (self.base.coords[k] / d.coords[k])
        object.__setattr__(self, "direction", d)
        object.__setattr__(self, "base", base)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def backend(self) -> sc.Backend:
        return self.base.backend

    def point_at(self, s) -> Event:
        return self.base + self.direction * s

    def contains(self, p: Event) -> bool:
        common_backend(self.base, p)
        return linalg.rank((self.direction.coords, (p - self.base).coords)) <= 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Line):
            return NotImplemented
        if self.n != other.n or self.backend is not other.backend:
            return False
        return close(self.base, other.base) and close(self.direction, other.direction)

    def __hash__(self) -> int:
        if self.backend is sc.Backend.FLOAT64:
            return hash((self.n, "float64"))
        return hash((self.base, self.direction))


def classify_line(line: Line) -> CausalClass:
    return classify_vector(line.direction)


def _require_distinct(*points: Event) -> None:
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if close(points[i], points[j]):
                raise CoincidentPoints("points must be pairwise distinct")


def is_between(u: Event, v: Event, w: Event) -> bool:
    """True iff ``v = a*u + (1-a)*w`` for some ``0 <= a <= 1``."""
    common_backend(u, v, w)
    _require_distinct(u, v, w)
    d = (u - w).coords
    e = (v - w).coords
    if any(isinstance(c, float) for c in d):
        k = max(range(len(d)), key=lambda i: abs(d[i]))
    else:
        k = next(i for i, c in enumerate(d) if c != 0)
    a = e[k] / d[k]
    if not close(Event._raw(e), Event._raw(tuple(a * c for c in d))):
        return False
    return sc.compare(a, a * 0) >= 0 and sc.compare(a, a * 0 + 1) <= 0


@dataclass(frozen=True)
class PlaneSpan:
    """Affine plane ``base + span{d1, d2}``."""

    base: Event
    d1: Event
    d2: Event

    def __post_init__(self):
        common_backend(self.base, self.d1, self.d2)
        if linalg.rank((self.d1.coords, self.d2.coords)) < 2:
            raise DegenerateSpan("plane directions must be linearly independent")

    @property
    def n(self) -> int:
        return self.base.n

    def contains(self, p: Event) -> bool:
        common_backend(self.base, p)
        return linalg.rank((self.d1.coords, self.d2.coords, (p - self.base).coords)) == 2

    def to_float(self) -> "PlaneSpan":
        return PlaneSpan(self.base.to_float(), self.d1.to_float(), self.d2.to_float())


def _plane_form(P: PlaneSpan):
    a = quadratic_form(P.d1)
    b = bilinear_form(P.d1, P.d2)
    c = quadratic_form(P.d2)
    disc = b * b - a * c
    return a, b, c, disc, max(abs(float(b * b)), abs(float(a * c)))


def is_lorentz_plane(P: PlaneSpan) -> bool:
    """Q restricted to the plane's direction space is indefinite and nondegenerate."""
    *_, disc, s = _plane_form(P)
    return sc.sign(disc, s) > 0


def light_directions_in_plane(P: PlaneSpan, p: Event) -> tuple:
    """All light-like lines through ``p`` inside ``P``, sorted by canonical
    direction (0, 1 or 2 of them)."""
    if not P.contains(p):
        raise PointNotInPlane("point is not in the plane")
    a, b, c, disc, s = _plane_form(P)
    sgn = sc.sign(disc, s)
    if sgn < 0:
        return ()
    d1, d2 = P.d1, P.d2
    if sgn == 0:
        if sc.sign(a, abs(float(a)) + abs(float(c))) == 0:
            dirs = [d1]
        else:
            dirs = [d2 * a - d1 * b]
    else:
        root = sc.sqrt(disc)
        if isinstance(root, float) and not isinstance(disc, float):
            d1, d2, p = d1.to_float(), d2.to_float(), p.to_float()
            a, b, c = float(a), float(b), float(c)
        if sc.sign(a, s ** 0.5) == 0:
            dirs = [d1, d2 * (2 * b) - d1 * c]
        else:
            dirs = [d1 * (-b + root) + d2 * a, d1 * (-b - root) + d2 * a]
    lines = {tuple(ln.direction.coords): ln for ln in (Line(p, d) for d in dirs)}
    return tuple(lines[k] for k in sorted(lines))


def _parallel(d1: Event, d2: Event) -> bool:
    return linalg.rank((d1.coords, d2.coords)) <= 1


def plane_through_light_lines(L: Line, L2: Line) -> PlaneSpan:
    """The Lorentz plane spanned by two intersecting light-like lines."""
    common_backend(L.base, L2.base)
    if classify_line(L) is not CausalClass.LIGHTLIKE or classify_line(L2) is not CausalClass.LIGHTLIKE:
        raise NotLightLike("both lines must be light-like")
    if L == L2:
        raise IdenticalLines("the two lines coincide")
    if _parallel(L.direction, L2.direction):
        raise NonIntersecting("distinct parallel lines do not intersect")
    A = tuple(zip(L.direction.coords, (-L2.direction).coords))
    sol = linalg.solve(A, (L2.base - L.base).coords)
    if sol is None:
        raise NonIntersecting("the light-like lines are skew")
    apex = L.point_at(sol[0])
    return PlaneSpan(apex, L.direction, L2.direction)


@dataclass(frozen=True)
class KLines:
    k12: Line
    k13: Line
    k23: Line
    collinear: bool


def k_lines_collinearity(P: PlaneSpan, u: Event, v: Event, w: Event) -> KLines:
    """Build the cross lines K12, K13, K23 from the two light-line families
    through ``u, v, w`` and report whether they are mutually parallel, which
    happens exactly when the three points are collinear."""
    if not is_lorentz_plane(P):
        raise NotLorentzPlane("the plane is not a Lorentz plane")
    pts = (u, v, w)
    if not all(P.contains(p) for p in pts):
        raise PointsNotInPlane("all three points must lie in the plane")
    _require_distinct(*pts)
    for i in range(3):
        for j in range(i + 1, 3):
            if classify_pair(pts[i], pts[j]) is not CausalClass.SPACELIKE:
                raise NotPairwiseSpacelike("points must be pairwise space-like")
    first, second = light_directions_in_plane(P, u)
    ell, ell2 = first.direction, second.direction
    if ell.backend is not u.backend:
        pts = tuple(p.to_float() for p in pts)
    denom = bilinear_form(ell, ell2)

    def cross_line(i, j):
        # p_j - p_i = A*ell + B*ell2 in the null basis
        delta = pts[j] - pts[i]
        A = bilinear_form(delta, ell2) / denom
        B = bilinear_form(delta, ell) / denom
        meet = pts[i] + ell * A           # L_i  ∩ L_j'
        meet2 = pts[i] + ell2 * B         # L_i' ∩ L_j
        return Line(meet, meet - meet2)

    k12, k13, k23 = cross_line(0, 1), cross_line(0, 2), cross_line(1, 2)
    dirs = (k12.direction.coords, k13.direction.coords, k23.direction.coords)
    return KLines(k12, k13, k23, linalg.rank(dirs) == 1)


@dataclass(frozen=True)
class RobbHyperplane:
    """Optical hyperplane ``{p : eta(p - base, light_direction) = 0}``."""

    base: Event
    light_direction: Event

    def __post_init__(self):
        common_backend(self.base, self.light_direction)
        if self.light_direction.is_zero() or q_sign(self.light_direction) != 0:
            raise NotLightLike("a Robb hyperplane needs a nonzero light-like direction")

    def contains(self, p: Event) -> bool:
        return eta_sign(p - self.base, self.light_direction) == 0


def robb_hyperplane(L: Line) -> RobbHyperplane:
    if classify_line(L) is not CausalClass.LIGHTLIKE:
        raise NotLightLike("Robb hyperplanes are built on light-like lines")
    return RobbHyperplane(L.base, L.direction)


def robb_set_membership(L: Line, p: Event) -> bool:
    """Membership in ``L ∪ {v : v - w is not light-like for any w in L}``,
    decided by solving ``Q(p - base - s*dir) = 0`` for ``s``.  The equation
    is linear in ``s`` because ``dir`` is null."""
    if L.contains(p):
        return True
    rel = p - L.base
    # Q(rel - s*d) = Q(rel) - 2 s eta(rel, d)
    if eta_sign(rel, L.direction) != 0:
        return False                          # s = Q(rel) / (2 eta) gives a light-like partner
    # eta = 0: Q(rel - s*d) = Q(rel) for every s
    return q_sign(rel) != 0


@dataclass(frozen=True)
class LightCone:
    apex: Event

    def contains(self, p: Event, forward: bool = False) -> bool:
        return cone_contains(self, p, forward)


def cone_contains(C: LightCone, p: Event, forward: bool = False) -> bool:
    rel = p - C.apex
    if q_sign(rel) != 0:
        return False
    return not forward or sc.sign(rel.t, abs(float(p.t)) + abs(float(C.apex.t))) >= 0


def events(rows: Iterable[Sequence]) -> list:
    return [Event(*r) for r in rows]


def maybe_float(*evs: Event) -> tuple:
    """Return the events unchanged, or all as float64 if any is float64."""
    if any(e.backend is sc.Backend.FLOAT64 for e in evs):
        return tuple(e.to_float() for e in evs)
    return evs
