"""The (q^n, q^m)-Frobenius nonclassical curve F = D1 / D2.

D1 and D2 are the 3×3 determinants of the Frobenius powers (1, q^m, q^n) and
(1, q, q²). The quotient is homogeneous of degree q^n + q^m − q² − q with
coefficients in GF(q). A Curve lives over GF(q); a WorkingCurve is the same
curve carried into the working extension GF(q^K) where all local and
projection computations take place.
"""

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .errors import ConsistencyError, FieldError, InvalidParams, NotDivisible
from .field import TABLE_LIMIT, FieldCtx, FieldElement, field_for, prime_power
from .geom import Mat3, ProjPoint, fq_lines, plane_arrays
from .poly import TriPoly, exact_divide, frobenius_determinant, reduce_mod, restrict_to_line

DEFAULT_FIELD_CAP = 2 ** 16
MAX_PLANE_POINTS = 2 ** 26


@dataclass(frozen=True)
class CurveParams:
    """Parameters (q, n, m) with n ≥ 3, n > m ≥ 1 and gcd(n, m) = 1."""

    q: int
    n: int
    m: int

    def __post_init__(self):
        prime_power(self.q)
        if self.n < 3:
            raise InvalidParams(f"n must be at least 3, got n={self.n}")
        if not 1 <= self.m < self.n:
            raise InvalidParams(f"need n > m >= 1, got n={self.n}, m={self.m}")
        if gcd(self.n, self.m) != 1:
            raise InvalidParams(f"gcd(n, m) must be 1, got gcd({self.n}, {self.m}) = {gcd(self.n, self.m)}")

    @property
    def p(self) -> int:
        return prime_power(self.q)[0]

    @property
    def e(self) -> int:
        return prime_power(self.q)[1]

    @property
    def degree(self) -> int:
        q = self.q
        return q ** self.n + q ** self.m - q * q - q

    def as_dict(self) -> Dict[str, int]:
        return {"q": self.q, "n": self.n, "m": self.m}

    def __str__(self) -> str:
        return f"(q={self.q}, n={self.n}, m={self.m})"


def _is_power_of_q(value: int, q: int) -> bool:
    while value > 1 and value % q == 0:
        value //= q
    return value == 1


def build_determinant(ctx: FieldCtx, q: int, exponents: Tuple[int, int, int]) -> TriPoly:
    """det of [v^a, v^b, v^c] for v = x, y, z; every exponent must be a power of q."""
    for a in exponents:
        if not _is_power_of_q(a, q):
            raise InvalidParams(f"exponent {a} is not a power of {q}")
    return frobenius_determinant(ctx, exponents)


def fq_line_product(ctx: FieldCtx, q: int) -> TriPoly:
    """Product of the q²+q+1 linear forms of the GF(q)-lines."""
    return reduce(lambda acc, L: acc * L.as_poly(), fq_lines(ctx, q), TriPoly.constant(ctx, 1))


@dataclass(frozen=True, eq=False)
class Curve:
    params: CurveParams
    ctx: FieldCtx
    F: TriPoly
    D1: TriPoly
    D2: TriPoly

    @property
    def degree(self) -> int:
        return self.F.degree

    @property
    def terms(self) -> int:
        return len(self.F)


@lru_cache(maxsize=None)
def build_curve(params: CurveParams) -> Curve:
    """F = D1 / D2 by exact long division, with the recomposition check D2·F = D1."""
    q, n, m = params.q, params.n, params.m
    ctx = field_for(q, 1)
    D1 = build_determinant(ctx, q, (1, q ** m, q ** n))
    D2 = build_determinant(ctx, q, (1, q, q * q))
    try:
        F = exact_divide(D1, D2)
    except NotDivisible as exc:
        raise ConsistencyError(f"D2 does not divide D1 for {params}") from exc
    if not F.is_homogeneous() or F.degree != params.degree:
        raise ConsistencyError(f"quotient for {params} has degree {F.degree}, expected {params.degree}")
    if D2 * F != D1:
        raise ConsistencyError(f"recomposition D2·F = D1 failed for {params}")
    return Curve(params, ctx, F, D1, D2)


def working_extension(params: CurveParams, cap: int = DEFAULT_FIELD_CAP,
                      max_ext: Optional[int] = None) -> int:
    """Extension degree K of the working field GF(q^K).

    Largest K = lcm(1..j), j ≤ n, with q^K ≤ cap, lifted to a multiple of
    lcm(1..max_ext) so every subfield searched for singular points is present.
    """
    q, n = params.q, params.n
    if max_ext is None:
        max_ext = n - 1
    if max_ext < 1:
        raise InvalidParams(f"max_ext must be >= 1, got {max_ext}")
    K = 1
    for j in range(1, n + 1):
        candidate = lcm(*range(1, j + 1))
        if q ** candidate <= cap:
            K = candidate
    K = lcm(K, lcm(*range(1, max_ext + 1)))
    if q ** K > TABLE_LIMIT:
        raise InvalidParams(
            f"working field GF({q}^{K}) exceeds {TABLE_LIMIT} elements; lower max_ext"
        )
    return K


@dataclass(eq=False)
class WorkingCurve:
    """F and its partials over GF(q^ext), plus per-point caches shared by local and galois."""

    curve: Curve
    ext: int
    ctx: FieldCtx = field(init=False)
    F: TriPoly = field(init=False)
    Fx: TriPoly = field(init=False)
    Fy: TriPoly = field(init=False)
    Fz: TriPoly = field(init=False)
    records: Dict[ProjPoint, object] = field(init=False, default_factory=dict)
    cache: Dict[str, object] = field(init=False, default_factory=dict)
    lock: threading.RLock = field(init=False, default_factory=threading.RLock)

    def __post_init__(self):
        self.ctx = field_for(self.curve.params.q, self.ext)
        self.F = self.curve.F.embed(self.ctx)
        self.Fx, self.Fy, self.Fz = (self.F.partial(v) for v in range(3))

    @property
    def params(self) -> CurveParams:
        return self.curve.params

    @property
    def degree(self) -> int:
        return self.curve.degree

    def point(self, coords) -> ProjPoint:
        return ProjPoint.of(self.ctx, coords)

    def value(self, P: ProjPoint) -> int:
        return self.F.evaluate(P)

    def gradient(self, P: ProjPoint) -> Tuple[int, int, int]:
        return (self.Fx.evaluate(P), self.Fy.evaluate(P), self.Fz.evaluate(P))

    def on_curve(self, P: ProjPoint) -> bool:
        return self.value(P) == 0

    def is_singular(self, P: ProjPoint) -> bool:
        return self.on_curve(P) and not any(self.gradient(P))

    def restrict(self, base: ProjPoint, direction: ProjPoint):
        return restrict_to_line(self.F, base, direction)


@lru_cache(maxsize=None)
def working_curve(params: CurveParams, ext: Optional[int] = None) -> WorkingCurve:
    if ext is None:
        ext = working_extension(params)
    return WorkingCurve(build_curve(params), ext)


# -- Frobenius nonclassicality ----------------------------------------------------


def _frobenius_form(F: TriPoly, Q: int) -> TriPoly:
    """x^Q·F_x + y^Q·F_y + z^Q·F_z."""
    ctx = F.ctx
    total = TriPoly.zero(ctx)
    for var in range(3):
        exps = [0, 0, 0]
        exps[var] = Q
        total = total + TriPoly.monomial(ctx, tuple(exps)) * F.partial(var)
    return total


def check_frobenius_nonclassical(curve: Curve, N: int) -> bool:
    """Whether F divides x^(q^N)F_x + y^(q^N)F_y + z^(q^N)F_z."""
    if N < 1:
        raise InvalidParams(f"Frobenius power must be >= 1, got {N}")
    G = _frobenius_form(curve.F, curve.params.q ** N)
    return reduce_mod(G, curve.F).is_zero


@dataclass
class OracleResult:
    """Pointwise check of the nonclassicality identity at smooth points of F."""

    power: int
    ext: int
    checked: int = 0
    failures: int = 0
    witness: Optional[ProjPoint] = None

    @property
    def holds(self) -> bool:
        return self.checked > 0 and self.failures == 0


def _random_point(ctx: FieldCtx, rng: np.random.Generator) -> Optional[ProjPoint]:
    coords = [int(c) for c in rng.integers(0, ctx.size, 3)]
    if not any(coords):
        return None
    return ProjPoint.of(ctx, coords)


def frobenius_oracle(curve: Curve, N: int, ext: Optional[int] = None, count: int = 200,
                     seed: int = 0) -> OracleResult:
    """Evaluate the identity at `count` random smooth points of F over GF(q^ext).

    Points are found as roots of F restricted to random lines.
    """
    params = curve.params
    if ext is None:
        ext = working_extension(params)
    wc = working_curve(params, ext)
    ctx = wc.ctx
    QN = params.q ** N
    elements = ctx.subfield(ctx.k)
    rng = np.random.default_rng(seed)
    result = OracleResult(power=N, ext=ext)

    for _ in range(50 * count):
        if result.checked >= count:
            break
        A, B = _random_point(ctx, rng), _random_point(ctx, rng)
        if A is None or B is None or A == B:
            continue
        G = wc.restrict(A, B)
        if G.is_zero:
            continue
        for (s, t), _ in G.roots(elements):
            R = ProjPoint.of(ctx, [ctx.add(ctx.mul(s, a), ctx.mul(t, b))
                                  for a, b in zip(A.coords, B.coords)])
            grad = wc.gradient(R)
            if not any(grad):
                continue
            value = 0
            for g, r in zip(grad, R.coords):
                value = ctx.add(value, ctx.mul(g, ctx.pow(r, QN)))
            result.checked += 1
            if value:
                result.failures += 1
                if result.witness is None:
                    result.witness = R
            if result.checked >= count:
                break
    return result


# -- PGL(3) action -----------------------------------------------------------------


CurveLike = Union[Curve, WorkingCurve, TriPoly]


def _poly_of(obj: CurveLike, ctx: FieldCtx) -> TriPoly:
    F = obj if isinstance(obj, TriPoly) else obj.F
    return F.embed(ctx)


def pgl_transform(obj: CurveLike, A: Mat3) -> TriPoly:
    """F∘A, with F carried into the field of A."""
    if not A.det():
        raise FieldError("matrix is singular")
    return _poly_of(obj, A.ctx).transform(A.rows)


def stabilizes(obj: CurveLike, A: Mat3) -> Optional[FieldElement]:
    """λ with F∘A = λ·F, or None.

    λ is read off the leading grlex monomial and then checked term by term.
    """
    F = _poly_of(obj, A.ctx)
    G = pgl_transform(F, A)
    if len(G) != len(F):
        return None
    ctx = A.ctx
    lead = F.leading_monomial()
    if lead not in G.terms:
        return None
    lam = ctx.div(G.terms[lead], F.terms[lead])
    if G != F.scale(lam):
        return None
    return FieldElement(ctx, lam)


# -- point counting ------------------------------------------------------------------


def count_points(curve: Curve, j: int, threads: int = 1, chunk: int = 2 ** 18) -> int:
    """Number of points of ℙ²(GF(q^j)) on F, by exhaustive vectorized evaluation."""
    params = curve.params
    if j < 1:
        raise InvalidParams(f"extension degree must be >= 1, got {j}")
    size = params.q ** j
    if size * size + size + 1 > MAX_PLANE_POINTS or size > TABLE_LIMIT:
        raise InvalidParams(f"ℙ²(GF({params.q}^{j})) is too large to enumerate")
    ctx = field_for(params.q, j)
    F = curve.F.embed(ctx)
    xs, ys, zs = plane_arrays(ctx, params.q, j)

    def zeros_in(start: int) -> int:
        stop = start + chunk
        values = F.evaluate_many(xs[start:stop], ys[start:stop], zs[start:stop])
        return int(np.count_nonzero(values == 0))

    starts = list(range(0, len(xs), chunk))
    if threads <= 1 or len(starts) == 1:
        return sum(zeros_in(s) for s in starts)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(zeros_in, starts))


def points_on_curve(wc: WorkingCurve, j: int) -> List[ProjPoint]:
    """Points of ℙ²(GF(q^j)) on F, in enumeration order; j must divide the working degree."""
    if wc.ext % j:
        raise InvalidParams(f"GF(q^{j}) is not a subfield of GF(q^{wc.ext})")
    xs, ys, zs = plane_arrays(wc.ctx, wc.params.q, j)
    mask = wc.F.evaluate_many(xs, ys, zs) == 0
    return [ProjPoint(wc.ctx, (int(a), int(b), int(c)))
            for a, b, c in zip(xs[mask], ys[mask], zs[mask])]
