"""Points, lines and 3×3 matrices of the projective plane over GF(q^j)."""

from dataclasses import dataclass
from functools import lru_cache
from math import lcm
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .errors import ConsistencyError, FieldError
from .field import FieldCtx, FieldElement, element_degree, prime_power
from .poly import TriPoly, frobenius_determinant

Triple = Tuple[int, int, int]


def _normalize(ctx: FieldCtx, coords: Sequence[int]) -> Triple:
    coords = tuple(int(c) for c in coords)
    for c in coords:
        if c:
            if c == 1:
                return coords
            s = ctx.inv(c)
            return tuple(ctx.mul(v, s) for v in coords)
    raise ValueError("(0 : 0 : 0) is not a projective point")


def cross(ctx: FieldCtx, u: Sequence[int], v: Sequence[int]) -> Triple:
    sub, mul = ctx.sub, ctx.mul
    return (
        sub(mul(u[1], v[2]), mul(u[2], v[1])),
        sub(mul(u[2], v[0]), mul(u[0], v[2])),
        sub(mul(u[0], v[1]), mul(u[1], v[0])),
    )


def dot(ctx: FieldCtx, u: Sequence[int], v: Sequence[int]) -> int:
    acc = 0
    for a, b in zip(u, v):
        acc = ctx.add(acc, ctx.mul(a, b))
    return acc


def det3(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> int:
    return dot(ctx, rows[0], cross(ctx, rows[1], rows[2]))


def _format_triple(ctx: FieldCtx, coords: Triple) -> str:
    return "(" + " : ".join(ctx.format(c) for c in coords) + ")"


def _parse_triple(ctx: FieldCtx, text: str) -> Triple:
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    parts = body.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected three coordinates in {text!r}")
    return tuple(ctx.parse(part) for part in parts)


@dataclass(frozen=True)
class ProjPoint:
    """Point of ℙ² with its first nonzero coordinate equal to 1."""

    ctx: FieldCtx
    coords: Triple

    @classmethod
    def of(cls, ctx: FieldCtx, coords: Sequence) -> "ProjPoint":
        raw = [c.value if isinstance(c, FieldElement) else int(c) for c in coords]
        return cls(ctx, _normalize(ctx, raw))

    @classmethod
    def parse(cls, ctx: FieldCtx, text: str) -> "ProjPoint":
        return cls.of(ctx, _parse_triple(ctx, text))

    @property
    def elements(self) -> Tuple[FieldElement, ...]:
        return tuple(FieldElement(self.ctx, c) for c in self.coords)

    def frobenius(self, Q: int) -> "ProjPoint":
        return ProjPoint(self.ctx, tuple(self.ctx.pow(c, Q) for c in self.coords))

    def __str__(self) -> str:
        return _format_triple(self.ctx, self.coords)

    def __lt__(self, other: "ProjPoint") -> bool:
        return self.coords < other.coords


@dataclass(frozen=True)
class ProjLine:
    """Line a·x + b·y + c·z = 0, coefficients normalized like ProjPoint."""

    ctx: FieldCtx
    coords: Triple

    @classmethod
    def of(cls, ctx: FieldCtx, coeffs: Sequence) -> "ProjLine":
        raw = [c.value if isinstance(c, FieldElement) else int(c) for c in coeffs]
        return cls(ctx, _normalize(ctx, raw))

    @classmethod
    def parse(cls, ctx: FieldCtx, text: str) -> "ProjLine":
        return cls.of(ctx, _parse_triple(ctx, text))

    @property
    def coeffs(self) -> Triple:
        return self.coords

    def contains(self, point: ProjPoint) -> bool:
        return dot(self.ctx, self.coords, point.coords) == 0

    def frobenius(self, Q: int) -> "ProjLine":
        return ProjLine(self.ctx, tuple(self.ctx.pow(c, Q) for c in self.coords))

    def as_poly(self) -> TriPoly:
        return TriPoly.linear(self.ctx, self.coords)

    def basis(self) -> Tuple[ProjPoint, ProjPoint]:
        """Two distinct points of the line, defined over the line's own field."""
        found: List[ProjPoint] = []
        for axis in range(3):
            e = [0, 0, 0]
            e[axis] = 1
            v = cross(self.ctx, self.coords, e)
            if any(v):
                point = ProjPoint.of(self.ctx, v)
                if point not in found:
                    found.append(point)
            if len(found) == 2:
                return found[0], found[1]
        raise ConsistencyError(f"could not find two points on {self}")

    def __str__(self) -> str:
        return _format_triple(self.ctx, self.coords)

    def __lt__(self, other: "ProjLine") -> bool:
        return self.coords < other.coords


def line_through(P: ProjPoint, Q: ProjPoint) -> ProjLine:
    if P == Q:
        raise ValueError(f"line_through needs two distinct points, got {P} twice")
    return ProjLine.of(P.ctx, cross(P.ctx, P.coords, Q.coords))


def intersection(L1: ProjLine, L2: ProjLine) -> ProjPoint:
    if L1 == L2:
        raise ValueError("identical lines have no single intersection point")
    return ProjPoint.of(L1.ctx, cross(L1.ctx, L1.coords, L2.coords))


def point_on_line(L: ProjLine, base: ProjPoint, other: ProjPoint, s: int, t: int) -> ProjPoint:
    ctx = L.ctx
    return ProjPoint.of(ctx, [ctx.add(ctx.mul(s, b), ctx.mul(t, d))
                              for b, d in zip(base.coords, other.coords)])


# -- enumeration -----------------------------------------------------------------


def _subfield_elements(ctx: FieldCtx, q: int, j: int) -> np.ndarray:
    _, e = prime_power(q)
    return ctx.subfield(e * j)


def plane_arrays(ctx: FieldCtx, q: int, j: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coordinates of ℙ²(GF(q^j)) in enumeration order, as three arrays."""
    elems = _subfield_elements(ctx, q, j)
    n = len(elems)
    xs = [np.array([0]), np.zeros(n, dtype=np.int64), np.ones(n * n, dtype=np.int64)]
    ys = [np.array([0]), np.ones(n, dtype=np.int64), np.repeat(elems, n)]
    zs = [np.array([1]), elems, np.tile(elems, n)]
    return tuple(np.concatenate(parts).astype(np.int64) for parts in (xs, ys, zs))


def enumerate_plane(ctx: FieldCtx, q: int, j: int) -> List[ProjPoint]:
    """All q^(2j)+q^j+1 points of ℙ²(GF(q^j)), lexicographic on normalized coordinates."""
    xs, ys, zs = plane_arrays(ctx, q, j)
    return [ProjPoint(ctx, (int(a), int(b), int(c))) for a, b, c in zip(xs, ys, zs)]


def projective_line(ctx: FieldCtx, q: int, j: int) -> List[Tuple[int, int]]:
    """ℙ¹(GF(q^j)) as normalized pairs (1:a) and (0:1)."""
    return [(0, 1)] + [(1, int(a)) for a in _subfield_elements(ctx, q, j)]


def field_of_definition(P, q: int) -> int:
    """Smallest j with P^(q^j) = P on the normalized representative."""
    ctx = P.ctx
    degree = 1
    for c in P.coords:
        if c:
            d = element_degree(ctx, c, q)
            degree = lcm(degree, d)
    return degree


def is_rational(obj, q: int, j: int = 1) -> bool:
    """Whether a point or line is defined over GF(q^j)."""
    return j % field_of_definition(obj, q) == 0


@lru_cache(maxsize=None)
def moore_determinant(ctx: FieldCtx, q: int) -> TriPoly:
    """D₂ = det of the Frobenius powers 1, q, q²."""
    return frobenius_determinant(ctx, (1, q, q * q))


def frobenius_collinearity(R: ProjPoint, q: int) -> int:
    """det(R, R^q, R^(q²))."""
    return det3(R.ctx, [R.coords, R.frobenius(q).coords, R.frobenius(q * q).coords])


def lies_on_fq_line(R: ProjPoint, q: int) -> bool:
    """Membership in S, the union of the 𝔽_q-lines, computed two ways."""
    via_moore = moore_determinant(R.ctx, q).evaluate(R) == 0
    via_frobenius = frobenius_collinearity(R, q) == 0
    if via_moore != via_frobenius:
        raise ConsistencyError(f"D₂ and Frobenius collinearity disagree at {R}")
    return via_moore


def fq_lines(ctx: FieldCtx, q: int) -> List[ProjLine]:
    return [ProjLine(ctx, P.coords) for P in enumerate_plane(ctx, q, 1)]


def fq_lines_through(P: ProjPoint, q: int) -> List[ProjLine]:
    return [L for L in fq_lines(P.ctx, q) if L.contains(P)]


def points_on_line(L: ProjLine, q: int, j: int) -> List[ProjPoint]:
    """Points of L over GF(q^j), sorted."""
    if is_rational(L, q, j):
        A, B = L.basis()
        points = {point_on_line(L, A, B, s, t) for s, t in projective_line(L.ctx, q, j)}
        return sorted(points)
    return [P for P in enumerate_plane(L.ctx, q, j) if L.contains(P)]


def complement_basis(P: ProjPoint) -> Tuple[Triple, Triple]:
    """Two standard basis vectors A, B with det(P, A, B) ≠ 0."""
    ctx = P.ctx
    axes = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for a in range(3):
        for b in range(a + 1, 3):
            if det3(ctx, [P.coords, axes[a], axes[b]]):
                return axes[a], axes[b]
    raise ConsistencyError(f"no complement for {P}")


def line_in_pencil(P: ProjPoint, s: int, t: int) -> ProjLine:
    """Line through P and s·A + t·B for the fixed complement basis A, B of P."""
    ctx = P.ctx
    A, B = complement_basis(P)
    target = [ctx.add(ctx.mul(s, a), ctx.mul(t, b)) for a, b in zip(A, B)]
    return ProjLine.of(ctx, cross(ctx, P.coords, target))


def pencil(P: ProjPoint, q: int, j: int) -> List[ProjLine]:
    """All lines through P defined over GF(q^j); P must be GF(q^j)-rational."""
    if not is_rational(P, q, j):
        raise FieldError(f"{P} is not defined over GF({q}^{j})")
    return [line_in_pencil(P, s, t) for s, t in projective_line(P.ctx, q, j)]


# -- matrices --------------------------------------------------------------------


@dataclass(frozen=True)
class Mat3:
    """3×3 matrix over a field context; rows of encodings."""

    ctx: FieldCtx
    rows: Tuple[Triple, Triple, Triple]

    @classmethod
    def of(cls, ctx: FieldCtx, rows: Iterable[Iterable]) -> "Mat3":
        return cls(ctx, tuple(tuple(c.value if isinstance(c, FieldElement) else int(c) for c in r)
                              for r in rows))

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "Mat3":
        return cls(ctx, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @classmethod
    def from_columns(cls, ctx: FieldCtx, columns: Sequence[Sequence[int]]) -> "Mat3":
        return cls(ctx, tuple(tuple(int(columns[c][r]) for c in range(3)) for r in range(3)))

    def __matmul__(self, other: "Mat3") -> "Mat3":
        ctx = self.ctx
        cols = list(zip(*other.rows))
        return Mat3(ctx, tuple(tuple(dot(ctx, row, col) for col in cols) for row in self.rows))

    def det(self) -> int:
        return det3(self.ctx, self.rows)

    def inverse(self) -> "Mat3":
        ctx = self.ctx
        d = self.det()
        if not d:
            raise FieldError("matrix is singular")
        r = self.rows
        # columns of the inverse are cross products of pairs of rows
        adj_cols = [cross(ctx, r[1], r[2]), cross(ctx, r[2], r[0]), cross(ctx, r[0], r[1])]
        s = ctx.inv(d)
        return Mat3(ctx, tuple(tuple(ctx.mul(adj_cols[c][row], s) for c in range(3))
                               for row in range(3)))

    def scale(self, c: int) -> "Mat3":
        mul = self.ctx.mul
        return Mat3(self.ctx, tuple(tuple(mul(v, c) for v in row) for row in self.rows))

    def normalized(self) -> Tuple["Mat3", int]:
        """Representative with first nonzero entry 1, and the factor applied."""
        for row in self.rows:
            for v in row:
                if v:
                    s = self.ctx.inv(v)
                    return self.scale(s), s
        raise FieldError("zero matrix")

    def apply(self, P: ProjPoint) -> ProjPoint:
        return ProjPoint.of(self.ctx, [dot(self.ctx, row, P.coords) for row in self.rows])

    def apply_vector(self, v: Sequence[int]) -> Triple:
        return tuple(dot(self.ctx, row, v) for row in self.rows)

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(self.ctx.format(v) for v in row) for row in self.rows) + "]"

    def to_json(self) -> List[List[str]]:
        return [[self.ctx.format(v) for v in row] for row in self.rows]
