"""Affine space-time maps: Lorentz/Poincaré membership, dilation factoring,
the translation-boost-dilation-rotation factorization, and exact random
generators for fuzzing.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

from . import linalg
from . import scalar as sc
from .core import CausalClass, Event, classify_vector, common_backend
from .errors import (
    BackendMismatch,
    DimensionMismatch,
    NormMismatch,
    NotConformal,
    NotInExtendedGroup,
    NotLorentz,
    NotSquare,
    NotTimeLike,
    ResidualNotIdentity,
    SingularMatrix,
    ZeroVector,
)

Matrix = tuple


def eta(n: int, backend: sc.Backend = sc.Backend.EXACT_RATIONAL) -> Matrix:
    one = 1.0 if backend is sc.Backend.FLOAT64 else Fraction(1)
    return linalg.diag([one] + [-one] * n)


@dataclass(frozen=True)
class AffineMap:
    """``p -> matrix @ p + translation`` with a nonsingular matrix."""

    matrix: Matrix
    translation: Event

    def __post_init__(self):
        A = linalg.as_matrix(self.matrix)
        rows, cols = linalg.shape(A)
        if rows != cols:
            raise NotSquare(f"matrix is {rows}x{cols}")
        if not isinstance(self.translation, Event):
            object.__setattr__(self, "translation", Event(*self.translation))
        if rows != len(self.translation):
            raise DimensionMismatch("matrix and translation sizes differ")
        b = linalg.backend(A)
        if self.translation.backend is not b:
            raise BackendMismatch("matrix and translation use different backends")
        if linalg.rank(A) < rows:
            raise SingularMatrix("an affine map needs a nonsingular matrix")
        object.__setattr__(self, "matrix", A)

    @classmethod
    def linear(cls, matrix) -> "AffineMap":
        A = linalg.as_matrix(matrix)
        return cls(A, Event.zero(len(A) - 1, linalg.backend(A)))

    @classmethod
    def translation_by(cls, b: Event) -> "AffineMap":
        return cls(linalg.identity(b.n + 1, b.backend), b)

    @classmethod
    def identity(cls, n: int, backend: sc.Backend = sc.Backend.EXACT_RATIONAL) -> "AffineMap":
        return cls(linalg.identity(n + 1, backend), Event.zero(n, backend))

    @property
    def n(self) -> int:
        return len(self.matrix) - 1

    @property
    def backend(self) -> sc.Backend:
        return self.translation.backend

    def __call__(self, p: Event) -> Event:
        return apply(self, p)

    def to_float(self) -> "AffineMap":
        return AffineMap(linalg.to_float(self.matrix), self.translation.to_float())

    def is_close(self, other: "AffineMap") -> bool:
        from .core import close
        return linalg.equal(self.matrix, other.matrix) and close(self.translation, other.translation)


def apply(f: AffineMap, p: Event) -> Event:
    common_backend(f.translation, p)
    Ap = linalg.matvec(f.matrix, p.coords)
    return Event._raw(tuple(a + b for a, b in zip(Ap, f.translation.coords)))


def compose(f: AffineMap, g: AffineMap) -> AffineMap:
    """``f ∘ g`` (apply ``g`` first)."""
    if f.n != g.n:
        raise DimensionMismatch(f"dimension {f.n} vs {g.n}")
    common_backend(f.translation, g.translation)
    return AffineMap(linalg.matmul(f.matrix, g.matrix), apply(f, g.translation))


def inverse(f: AffineMap) -> AffineMap:
    Ainv = linalg.inverse(f.matrix)
    b = Event._raw(tuple(-c for c in linalg.matvec(Ainv, f.translation.coords)))
    return AffineMap(Ainv, b)


def _square_dim(A: Matrix) -> int:
    rows, cols = linalg.shape(A)
    if rows != cols:
        raise NotSquare(f"matrix is {rows}x{cols}")
    if rows < 2:
        raise DimensionMismatch("space-time matrices are at least 2x2")
    return rows - 1


def _gram(A: Matrix) -> Matrix:
    n = _square_dim(A)
    return linalg.matmul(linalg.matmul(linalg.transpose(A), eta(n, linalg.backend(A))), A)


def is_lorentz(A: Matrix) -> bool:
    """``A^T eta A == eta``."""
    A = linalg.as_matrix(A)
    return linalg.equal(_gram(A), eta(_square_dim(A), linalg.backend(A)))


def lorentz_inverse(A: Matrix) -> Matrix:
    """``eta A^T eta``, the inverse of a Lorentz matrix."""
    n = _square_dim(A)
    E = eta(n, linalg.backend(A))
    return linalg.matmul(linalg.matmul(E, linalg.transpose(A)), E)


def is_orthochronous(A: Matrix) -> bool:
    A = linalg.as_matrix(A)
    if not is_lorentz(A):
        raise NotLorentz("orthochronicity is defined for Lorentz matrices")
    return A[0][0] > 0


@dataclass(frozen=True)
class DilationFactor:
    a: object
    Lambda: Matrix


def factor_dilation(A: Matrix) -> DilationFactor:
    """Write ``A = a * Lambda`` with ``a > 0`` and ``Lambda`` Lorentz.

    ``a**2`` is forced by the (0, 0) entry of ``A^T eta A``.
    """
    A = linalg.as_matrix(A)
    n = _square_dim(A)
    G = _gram(A)
    a2 = G[0][0]
    if sc.sign(a2, linalg.max_abs(G)) <= 0:
        raise NotConformal("A^T eta A is not a positive multiple of eta")
    if not linalg.equal(G, linalg.scale(eta(n, linalg.backend(A)), a2)):
        raise NotConformal("A^T eta A is not a positive multiple of eta")
    a = sc.sqrt(a2)
    if isinstance(a, float):
        A = linalg.to_float(A)
    return DilationFactor(a, linalg.scale(A, 1 / a))


def boost_to_rest(u: Event) -> Matrix:
    """Pure boost ``L`` with ``L u = (s, 0, ..., 0)``, ``s = sign(t) sqrt(Q(u))``."""
    if u.is_zero() or classify_vector(u) is not CausalClass.TIMELIKE:
        raise NotTimeLike("only time-like vectors have a rest frame")
    n = u.n
    q = u.t * u.t - sum(x * x for x in u.x)
    root = sc.sqrt(q)
    if isinstance(root, float):
        u = u.to_float()
    one = 1.0 if u.backend is sc.Backend.FLOAT64 else Fraction(1)
    beta = [x / u.t for x in u.x]
    b2 = sum(b * b for b in beta)
    if not b2:
        return linalg.identity(n + 1, u.backend)
    gamma = abs(u.t) / root
    k = (gamma - one) / b2
    rows = [[gamma] + [-gamma * b for b in beta]]
    for i in range(n):
        rows.append([-gamma * beta[i]] + [(one if i == j else 0 * one) + k * beta[i] * beta[j] for j in range(n)])
    return tuple(tuple(r) for r in rows)


def _householder(v: Sequence) -> Matrix:
    vv = sum(x * x for x in v)
    k = len(v)
    return tuple(tuple((1 if i == j else 0) - 2 * v[i] * v[j] / vv for j in range(k)) for i in range(k))


def _embed_spatial(R: Matrix) -> Matrix:
    one = 1.0 if isinstance(R[0][0], float) else Fraction(1)
    zero = one * 0
    return ((one,) + (zero,) * len(R),) + tuple((zero,) + tuple(r) for r in R)


def rotation_aligning(x: Sequence, y: Sequence) -> Matrix:
    """``diag(1, R)`` with ``R`` orthogonal and ``R x = y``.

    ``R`` is a product of two Householder reflections and acts as the
    identity on the orthogonal complement of ``span{x, y}``.  For a single
    space dimension the result is ``diag(1, +-1)``.
    """
    x = tuple(sc.coerce(c) for c in x)
    y = tuple(sc.coerce(c) for c in y)
    if len(x) != len(y):
        raise DimensionMismatch("spatial vectors of different length")
    sc.backend_of(x + y)
    xx = sum(c * c for c in x)
    yy = sum(c * c for c in y)
    if sc.sign(xx) == 0 or sc.sign(yy) == 0:
        raise ZeroVector("cannot align a zero vector")
    if not sc.eq(xx, yy):
        raise NormMismatch("vectors must have equal Euclidean norm")
    k = len(x)
    one = 1.0 if isinstance(x[0], float) else Fraction(1)
    if k == 1:
        return _embed_spatial(((y[0] / x[0],),))
    if all(sc.eq(a, b) for a, b in zip(x, y)):
        return linalg.identity(k + 1, sc.backend_of(x))
    s = tuple(a + b for a, b in zip(x, y))
    if sc.sign(sum(c * c for c in s), xx):
        R = linalg.matmul(_householder(y), _householder(s))
    else:
        # y = -x: rotate by pi in the plane of x and the axis least aligned with it
        j = min(range(k), key=lambda i: abs(x[i]))
        u = tuple((one if i == j else 0 * one) - x[j] * x[i] / xx for i in range(k))
        R = linalg.matmul(_householder(u), _householder(x))
    return _embed_spatial(R)


class TransformClass(Enum):
    LORENTZ = "LORENTZ"
    ORTHOCHRONOUS_LORENTZ = "ORTHOCHRONOUS_LORENTZ"
    POINCARE = "POINCARE"
    ORTHOCHRONOUS_POINCARE = "ORTHOCHRONOUS_POINCARE"
    LORENTZ_DILATION = "LORENTZ_DILATION"
    POINCARE_DILATION = "POINCARE_DILATION"
    AFFINE_OTHER = "AFFINE_OTHER"


def classify_transform(f: AffineMap) -> TransformClass:
    linear = f.translation.is_zero()
    if is_lorentz(f.matrix):
        if f.matrix[0][0] > 0:
            return TransformClass.ORTHOCHRONOUS_LORENTZ if linear else TransformClass.ORTHOCHRONOUS_POINCARE
        return TransformClass.LORENTZ if linear else TransformClass.POINCARE
    try:
        factor_dilation(f.matrix)
    except NotConformal:
        return TransformClass.AFFINE_OTHER
    return TransformClass.LORENTZ_DILATION if linear else TransformClass.POINCARE_DILATION


def time_reversal(n: int, backend: sc.Backend = sc.Backend.EXACT_RATIONAL) -> Matrix:
    one = 1.0 if backend is sc.Backend.FLOAT64 else Fraction(1)
    return linalg.diag([-one] + [one] * n)


@dataclass(frozen=True)
class Decomposition:
    """``f = tau^-1 lambda^-1 delta^-1 rho^-1`` where ``tau: v -> v + tau``,
    ``lambda`` is Lorentz, ``delta: v -> v / a`` and ``rho`` is a spatial
    rotation (possibly improper) fixing ``(1, 0)``."""

    tau: Event
    lam: Matrix
    a: object
    rho: Matrix

    @property
    def n(self) -> int:
        return self.tau.n

    def factors(self) -> tuple:
        """The four stages as affine maps, in the order they are applied to f."""
        b = self.lam_backend()
        tau = self.tau if b is self.tau.backend else self.tau.to_float()
        n = self.n
        return (
            AffineMap.translation_by(tau),
            AffineMap.linear(self.lam),
            AffineMap.linear(linalg.scale(linalg.identity(n + 1, b), 1 / self.a)),
            AffineMap.linear(self.rho),
        )

    def lam_backend(self) -> sc.Backend:
        return linalg.backend(self.lam)

    def recompose(self) -> AffineMap:
        """``tau^-1 lambda^-1 delta^-1 rho^-1``.  Float stages are inverted and
        multiplied in exact arithmetic on their stored values, then rounded once."""
        b = self.lam_backend()
        A = linalg.matmul_exact(linalg.inverse_exact(self.lam), linalg.inverse_exact(self.rho))
        A = linalg.scale(A, float(self.a) if b is sc.Backend.FLOAT64 else self.a)
        tau = self.tau if b is self.tau.backend else self.tau.to_float()
        return AffineMap(A, -tau)

    def residual(self, f: AffineMap) -> float:
        g = self.recompose()
        if g.backend is not f.backend:
            f = f.to_float()
        A = linalg.sub(g.matrix, f.matrix)
        if f.backend is sc.Backend.EXACT_RATIONAL and not any(x for r in A for x in r) and g.translation == f.translation:
            return 0.0
        ta = tuple((x,) for x in g.translation.coords)
        tb = tuple((x,) for x in f.translation.coords)
        return max(linalg.relative_residual(g.matrix, f.matrix), linalg.relative_residual(ta, tb))


def decompose(f: AffineMap) -> Decomposition:
    """Factor ``f`` into translation, Lorentz, dilation and rotation stages."""
    n = f.n
    tau = -f.translation
    try:
        fac = factor_dilation(f.matrix)
    except NotConformal as exc:
        raise NotInExtendedGroup(str(exc)) from exc
    a, lam0 = fac.a, fac.Lambda
    b = linalg.backend(lam0)
    image = Event._raw(tuple(row[0] for row in lam0))   # Lambda0 (1, 0)
    lam = boost_to_rest(image)
    if linalg.backend(lam) is not b:
        lam0 = linalg.to_float(lam0)
        b = sc.Backend.FLOAT64
    if lam0[0][0] < 0:
        # time reversal stays in the Lorentz stage so the dilation factor is positive
        lam = linalg.matmul(time_reversal(n, b), lam)
    M = linalg.matmul_exact(lam, lam0)
    rho = linalg.inverse_exact(M)
    e0 = Event.unit(n, 0, b)
    # float round-off in M grows with the product of the factor magnitudes
    cond = 1.0 if b is sc.Backend.EXACT_RATIONAL else max(1.0, linalg.max_abs(lam) * linalg.max_abs(lam0))
    with sc.using_tolerance(sc.get_tolerance() * cond):
        if not linalg.equal(linalg.matmul(rho, M), linalg.identity(n + 1, b)):
            raise ResidualNotIdentity("rotation stage failed to invert the residual map")
        fixed = linalg.matvec(rho, e0.coords)
        if not all(sc.eq(x, y) for x, y in zip(fixed, e0.coords)) or not is_lorentz(rho):
            raise ResidualNotIdentity("residual map is not a spatial rotation")
    d = Decomposition(tau, lam, a, rho)
    g = d.recompose()
    with sc.using_tolerance(sc.get_tolerance() * cond):
        if not (g.is_close(f) if g.backend is f.backend else g.is_close(f.to_float())):
            raise ResidualNotIdentity("recomposition does not reproduce the map")
    return d


# exact generators

def rational_boost(n: int, axis: int, p: int, q: int) -> Matrix:
    """Boost in the t-x_axis plane with ``cosh = (p²+q²)/(p²-q²)`` and
    ``sinh = 2pq/(p²-q²)``; ``q`` may be negative to flip the direction."""
    if abs(p) <= abs(q):
        raise ValueError("need |p| > |q|")
    den = Fraction(p * p - q * q)
    ch, sh = (p * p + q * q) / den, (2 * p * q) / den
    rows = [list(r) for r in linalg.identity(n + 1)]
    rows[0][0] = ch
    rows[0][axis] = sh
    rows[axis][0] = sh
    rows[axis][axis] = ch
    return tuple(tuple(r) for r in rows)


def cayley_rotation(S: Sequence[Sequence]) -> Matrix:
    """Spatial rotation ``diag(1, (I - S)^-1 (I + S))`` for skew-symmetric ``S``."""
    S = linalg.as_matrix(S)
    k = len(S)
    if any(S[i][j] != -S[j][i] for i in range(k) for j in range(k)):
        raise ValueError("S must be skew-symmetric")
    I = linalg.identity(k, linalg.backend(S))
    R = linalg.matmul(linalg.inverse(linalg.sub(I, S)), linalg.add(I, S))
    return _embed_spatial(R)


def coordinate_reflection(n: int, axis: int) -> Matrix:
    return linalg.diag([1 if i != axis else -1 for i in range(n + 1)])


def dilation(n: int, a) -> Matrix:
    return linalg.scale(linalg.identity(n + 1), sc.coerce(a))


def shear(n: int, i: int, j: int, c) -> Matrix:
    if i == j:
        raise ValueError("a shear needs two distinct axes")
    rows = [list(r) for r in linalg.identity(n + 1)]
    rows[i][j] = sc.coerce(c)
    return tuple(tuple(r) for r in rows)


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_rational(rng: random.Random, num_bound: int, den_bound: int) -> Fraction:
    return Fraction(rng.randint(-num_bound, num_bound), rng.randint(1, den_bound))


def _random_skew(rng: random.Random, n: int, bound: int) -> Matrix:
    S = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = random_rational(rng, bound, bound)
            S[i][j], S[j][i] = v, -v
    return tuple(tuple(r) for r in S)


def _random_boost(rng, n, bound):
    p = rng.randint(2, max(2, bound))
    q = rng.choice([-1, 1]) * rng.randint(1, p - 1)
    return rational_boost(n, rng.randint(1, n), p, q)


def _random_translation(rng, n, bound) -> Event:
    return Event(*(random_rational(rng, bound, bound) for _ in range(n + 1)))


def _lorentz_factor(rng, n, bound) -> Matrix:
    kind = rng.choice(("boost", "boost", "rotation", "reflection", "time_reversal"))
    if kind == "boost":
        return _random_boost(rng, n, bound)
    if kind == "rotation":
        return cayley_rotation(_random_skew(rng, n, bound)) if n > 1 else coordinate_reflection(n, 1)
    if kind == "reflection":
        return coordinate_reflection(n, rng.randint(1, n))
    return time_reversal(n)


def _compose_factors(factors, n) -> AffineMap:
    f = AffineMap.identity(n)
    for g in factors:
        f = compose(g, f)
    return f


def random_poincare(seed, n: int, size_bound: int = 8) -> AffineMap:
    """Exact random Poincaré map: at most six factors among rational boosts,
    Cayley rotations, coordinate reflections, time reversal and rational
    translations.  Deterministic per seed."""
    if size_bound < 1:
        raise ValueError("size_bound must be >= 1")
    rng = _rng(seed)
    factors = []
    for _ in range(rng.randint(1, 6)):
        if rng.random() < 0.25:
            factors.append(AffineMap.translation_by(_random_translation(rng, n, size_bound)))
        else:
            factors.append(AffineMap.linear(_lorentz_factor(rng, n, size_bound)))
    return _compose_factors(factors, n)


def random_orthochronous_poincare(seed, n: int, size_bound: int = 8) -> AffineMap:
    """As :func:`random_poincare`, with a time reversal appended when needed."""
    rng = _rng(seed)
    f = random_poincare(rng, n, size_bound)
    if f.matrix[0][0] < 0:
        f = compose(AffineMap.linear(time_reversal(n)), f)
    return f


def random_dilation_exponent(rng: random.Random) -> int:
    return rng.choice((-3, -2, -1, 1, 2, 3))


def random_extended(seed, n: int, size_bound: int = 8) -> AffineMap:
    """Random element of the group generated by Poincaré maps and dyadic dilations."""
    rng = _rng(seed)
    factors = [random_poincare(rng, n, size_bound)]
    for _ in range(rng.randint(1, 2)):
        factors.append(AffineMap.linear(dilation(n, Fraction(2) ** random_dilation_exponent(rng))))
        factors.append(random_poincare(rng, n, size_bound))
    return _compose_factors(factors, n)


def random_shear(seed, n: int, size_bound: int = 8) -> AffineMap:
    """A nontrivial shear composed with random Poincaré maps on both sides."""
    rng = _rng(seed)
    i, j = rng.sample(range(n + 1), 2)
    c = Fraction(0)
    while c == 0:
        c = random_rational(rng, size_bound, size_bound)
    left = random_poincare(rng, n, size_bound)
    right = random_poincare(rng, n, size_bound)
    return compose(left, compose(AffineMap.linear(shear(n, i, j, c)), right))


def random_affine(seed, n: int, size_bound: int = 8) -> AffineMap:
    """Like :func:`random_poincare` but may also mix in dilations and shears."""
    rng = _rng(seed)
    factors = []
    for _ in range(rng.randint(1, 6)):
        r = rng.random()
        if r < 0.2:
            factors.append(AffineMap.translation_by(_random_translation(rng, n, size_bound)))
        elif r < 0.35:
            factors.append(AffineMap.linear(dilation(n, Fraction(2) ** random_dilation_exponent(rng))))
        elif r < 0.5:
            i, j = rng.sample(range(n + 1), 2)
            c = random_rational(rng, size_bound, size_bound) or Fraction(1)
            factors.append(AffineMap.linear(shear(n, i, j, c)))
        else:
            factors.append(AffineMap.linear(_lorentz_factor(rng, n, size_bound)))
    return _compose_factors(factors, n)


def as_map(obj: Union[AffineMap, Sequence]) -> AffineMap:
    return obj if isinstance(obj, AffineMap) else AffineMap.linear(obj)
