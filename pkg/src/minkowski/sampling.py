"""Deterministic exact samplers for fuzzing and the property suites.

All samplers take a ``random.Random`` and return exact rational data.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from . import linalg
from .core import CausalClass, Event, PlaneSpan, bilinear_form, classify_pair, is_between, quadratic_form
from .hyperboloid import Orientation
from .transforms import _random_skew, cayley_rotation, random_poincare, random_rational

CENTER_NUM_BOUND = 2 ** 10
CENTER_DEN_BOUND = 2 ** 5


def rng_for(*parts) -> random.Random:
    """Independent generator per ``(suite, seed, trial)`` style key."""
    return random.Random("/".join(str(p) for p in parts))


def random_event(rng: random.Random, n: int, num_bound: int = CENTER_NUM_BOUND,
                 den_bound: int = CENTER_DEN_BOUND) -> Event:
    return Event(*(random_rational(rng, num_bound, den_bound) for _ in range(n + 1)))


def rational_unit_vector(rng: random.Random, n: int, bound: int = 8) -> tuple:
    """Rational point of the unit sphere in R^n by inverse stereographic projection."""
    if n == 1:
        return (Fraction(rng.choice((-1, 1))),)
    a = [random_rational(rng, bound, bound) for _ in range(n - 1)]
    s = sum(x * x for x in a)
    u = [2 * x / (1 + s) for x in a] + [(1 - s) / (1 + s)]
    if rng.random() < 0.5:
        u[-1] = -u[-1]
    rng.shuffle(u)
    return tuple(u)


def random_rotation(rng: random.Random, n: int, bound: int = 4) -> tuple:
    """Rational spatial rotation embedded in (n+1)x(n+1), via the Cayley transform."""
    if n == 1:
        return linalg.identity(2)
    return cayley_rotation(_random_skew(rng, n, bound))


def cayley_rotate(rng: random.Random, vector: tuple, bound: int = 4) -> tuple:
    """Apply the Cayley rotation ``(I - S)^-1 (I + S)`` of a random rational
    skew-symmetric ``S`` to a spatial vector, by one linear solve."""
    k = len(vector)
    if k == 1:
        return tuple(vector)
    S = _random_skew(rng, k, bound)
    plus = linalg.matvec(linalg.add(linalg.identity(k), S), vector)
    return linalg.solve(linalg.sub(linalg.identity(k), S), plus)


def hyperbola_parameters(rng: random.Random, bound: int = 6) -> tuple:
    """Rational ``(cosh, sinh)`` with ``cosh² - sinh² = 1``."""
    p = rng.randint(1, bound)
    q = rng.randint(0, p - 1)
    den = Fraction(p * p - q * q)
    sh = 2 * p * q / den
    return (p * p + q * q) / den, sh if rng.random() < 0.5 else -sh


def hyperboloid_point(rng: random.Random, center: Event, radius,
                      orientation: Optional[Orientation] = None, bound: int = 6) -> Event:
    """Exact point of ``H(center, radius)``; the sheet is random unless given."""
    n = center.n
    ch, sh = hyperbola_parameters(rng, bound)
    if orientation is None:
        orientation = rng.choice((Orientation.FORWARD, Orientation.BACKWARD))
    spatial = cayley_rotate(rng, (sh,) + (Fraction(0),) * (n - 1))
    r = Fraction(radius)
    return center + Event(ch * orientation.value * r, *(x * r for x in spatial))


def light_direction(rng: random.Random, n: int, future: bool = True, bound: int = 8) -> Event:
    u = rational_unit_vector(rng, n, bound)
    return Event(1 if future else -1, *u)


def random_vector_of_class(rng: random.Random, n: int, cls: CausalClass,
                           num_bound: int = CENTER_NUM_BOUND, den_bound: int = CENTER_DEN_BOUND) -> Event:
    """Nonzero rational vector of the requested causal class."""
    while True:
        x = [random_rational(rng, num_bound, den_bound) for _ in range(n)]
        span = max(abs(c) for c in x)
        if cls is CausalClass.LIGHTLIKE:
            scale = random_rational(rng, num_bound, den_bound)
            if scale == 0:
                continue
            return light_direction(rng, n) * scale
        if cls is CausalClass.TIMELIKE:
            extra = Fraction(rng.randint(1, num_bound), rng.randint(1, den_bound))
            t = sum(abs(c) for c in x) + extra
            return Event(t * rng.choice((-1, 1)), *x)
        if span == 0:
            continue
        # |t| < max|x_i| <= |x|
        t = span * Fraction(rng.randint(-999, 999), 1000)
        return Event(t, *x)


def random_pair(rng: random.Random, n: int, cls: CausalClass, min_q: Fraction = Fraction(0)) -> tuple:
    """Two events whose difference has the requested class; time-like gaps
    satisfy ``Q >= min_q``."""
    u = random_event(rng, n)
    while True:
        d = random_vector_of_class(rng, n, cls)
        if cls is not CausalClass.TIMELIKE or quadratic_form(d) >= min_q:
            return u, u + d


def _eta_project_out(z: Event, k: Event) -> Event:
    """Remove the eta-component of ``z`` along non-null ``k``."""
    return z - k * (bilinear_form(z, k) / quadratic_form(k))


def pairwise_spacelike_triple(rng: random.Random, n: int, between: bool) -> tuple:
    """``(u, v, w)`` pairwise space-like, with ``v`` between ``u`` and ``w`` or not.

    Non-between triples mix three shapes: collinear outside the segment,
    generic offsets, and (for n >= 2) offsets orthogonal to both the chord
    and its rest-frame time axis, which put ``v`` level with the chord.
    """
    while True:
        u = random_event(rng, n, 64, 8)
        d = random_vector_of_class(rng, n, CausalClass.SPACELIKE, 64, 8)
        w = u + d
        if between:
            a = Fraction(rng.randint(1, 63), 64)
            v = u + d * a
        else:
            shape = rng.choice(("collinear", "offset", "level") if n >= 2 else ("collinear", "offset"))
            m = u + d / 2
            if shape == "collinear":
                s = Fraction(rng.randint(33, 300), 64) * rng.choice((-1, 1))
                v = m + d * s
            else:
                z = random_event(rng, n, 64, 8) / rng.randint(1, 16)
                if shape == "level":
                    y0 = _eta_project_out(Event.unit(n, 0), d)
                    z = _eta_project_out(_eta_project_out(z, d), y0)
                v = m + d * Fraction(rng.randint(-100, 100), 64) + z
        pts = (u, v, w)
        if any(pts[i] == pts[j] for i in range(3) for j in range(i + 1, 3)):
            continue
        if all(classify_pair(pts[i], pts[j]) is CausalClass.SPACELIKE
               for i in range(3) for j in range(i + 1, 3)):
            if is_between(u, v, w) == between:
                return u, v, w


def lorentz_plane(rng: random.Random, n: int) -> tuple:
    """A Lorentz plane spanned by two non-parallel rational light directions,
    returned as ``(plane, base, l1, l2)``."""
    base = random_event(rng, n, 64, 8)
    while True:
        l1 = light_direction(rng, n)
        l2 = light_direction(rng, n)
        if linalg.rank((l1.coords, l2.coords)) == 2:
            return PlaneSpan(base, l1, l2), base, l1, l2


def plane_spacelike_triple(rng: random.Random, n: int, collinear: bool) -> tuple:
    """Plane and three pairwise space-like points in it.

    With null coordinates ``p = base + a*l1 + b*l2`` a difference is
    space-like iff the ``a`` and ``b`` gaps have opposite signs.
    """
    plane, base, l1, l2 = lorentz_plane(rng, n)
    a = sorted(rng.sample(range(-40, 41), 3))
    if collinear:
        slope = -Fraction(rng.randint(1, 20), rng.randint(1, 8))
        b0 = random_rational(rng, 16, 4)
        b = [b0 + slope * x for x in a]
    else:
        while True:
            b = sorted(rng.sample(range(-40, 41), 3), reverse=True)
            if (b[1] - b[0]) * (a[2] - a[0]) != (b[2] - b[0]) * (a[1] - a[0]):
                break
    pts = tuple(base + l1 * Fraction(ai) + l2 * Fraction(bi) for ai, bi in zip(a, b))
    order = list(range(3))
    rng.shuffle(order)
    return (plane,) + tuple(pts[i] for i in order)


def robb_probe(rng: random.Random, base: Event, direction: Event) -> Event:
    """A point that is, with roughly equal odds, on the light-like line, on
    its Robb hyperplane off the line, or generic."""
    n = base.n
    kind = rng.randrange(3)
    s = random_rational(rng, 32, 8)
    if kind == 0:
        return base + direction * s
    z = random_event(rng, n, 32, 8)
    if kind == 1:
        # e0 has eta(e0, direction) = direction.t, so this kills the eta-component
        z = z - Event.unit(n, 0) * (bilinear_form(z, direction) / direction.t)
    return base + direction * s + z


def canonical_triple(rng: random.Random, n: int, between: bool) -> tuple:
    """Pairwise space-like ``(u, v, w)`` built in the frame where
    ``u = (t, -x, 0...)`` and ``w = (t, x, 0...)``, then moved by a random
    exact Poincaré map.

    Half-chord ``x`` is at most 4 and an off-chord ``v`` sits at a time
    offset of at least 1/4 from the chord (or exactly level with it, off the
    chord's line, when n >= 2), so a separating pair of standard shells
    exists with radius at most 2**6.
    """
    while True:
        x = Fraction(rng.randint(2, 16), 4)
        t = random_rational(rng, 16, 4)
        if between:
            x1, dt, rest = x * Fraction(rng.randint(-63, 63), 64), Fraction(0), [Fraction(0)] * (n - 1)
        else:
            shape = rng.choice(("collinear", "offset", "level") if n >= 2 else ("collinear", "offset"))
            rest = [Fraction(0)] * (n - 1)
            dt = Fraction(0)
            if shape == "collinear":
                x1 = x * Fraction(rng.randint(65, 256), 64) * rng.choice((-1, 1))
            else:
                x1 = x * Fraction(rng.randint(-128, 128), 64)
                rest = [random_rational(rng, 8, 4) for _ in range(n - 1)]
                if shape == "offset":
                    dt = Fraction(rng.randint(1, 8), 4) * rng.choice((-1, 1))
                elif all(c == 0 for c in rest):
                    continue
        u = Event(t, -x, *([Fraction(0)] * (n - 1)))
        w = Event(t, x, *([Fraction(0)] * (n - 1)))
        v = Event(t + dt, x1, *rest)
        pts = (u, v, w)
        if v in (u, w):
            continue
        if not all(classify_pair(pts[i], pts[j]) is CausalClass.SPACELIKE
                   for i in range(3) for j in range(i + 1, 3)):
            continue
        f = random_poincare(rng, n, 4)
        u, v, w = f(u), f(v), f(w)
        if is_between(u, v, w) == between:
            return u, v, w
