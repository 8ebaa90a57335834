"""Sparse trivariate polynomials and binary forms over GF(p^k).

Coefficients are stored as field encodings (see field.FieldCtx). The global
monomial order is graded-lexicographic with x > y > z.
"""

import heapq
from itertools import permutations
from math import factorial, lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import FieldError, FieldMismatchError, InfiniteOrder, NotDivisible
from .field import FieldCtx, FieldElement

Monomial = Tuple[int, int, int]
VARIABLES = ("x", "y", "z")


def grlex_key(m: Monomial) -> Tuple[int, int, int, int]:
    return (m[0] + m[1] + m[2], m[0], m[1], m[2])


def _coords(point) -> Tuple[int, int, int]:
    """Raw coordinates of a ProjPoint-like object or a plain triple."""
    coords = getattr(point, "coords", point)
    return tuple(int(c) for c in coords)


def _scalar(ctx: FieldCtx, c: Union[FieldElement, int]) -> int:
    if isinstance(c, FieldElement):
        if c.ctx != ctx:
            raise FieldMismatchError(f"{c.ctx!r} vs {ctx!r}")
        return c.value
    return ctx.from_int(c)


class TriPoly:
    """Sparse polynomial in x, y, z; terms maps exponent triples to nonzero encodings.

    Instances are treated as immutable.
    """

    __slots__ = ("ctx", "terms", "_by_x")

    def __init__(self, ctx: FieldCtx, terms: Optional[Mapping[Monomial, int]] = None):
        self.ctx = ctx
        self.terms: Dict[Monomial, int] = {m: c for m, c in (terms or {}).items() if c}
        # terms grouped by x exponent, then y exponent, for restriction to lines
        self._by_x: Dict[int, Dict[int, int]] = {}
        for (i, j, _), c in self.terms.items():
            self._by_x.setdefault(i, {})[j] = c

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "TriPoly":
        return cls(ctx)

    @classmethod
    def constant(cls, ctx: FieldCtx, c: Union[FieldElement, int]) -> "TriPoly":
        return cls(ctx, {(0, 0, 0): _scalar(ctx, c)})

    @classmethod
    def var(cls, ctx: FieldCtx, index: int) -> "TriPoly":
        exps = [0, 0, 0]
        exps[index] = 1
        return cls(ctx, {tuple(exps): 1})

    @classmethod
    def monomial(cls, ctx: FieldCtx, exps: Monomial, c: int = 1) -> "TriPoly":
        return cls(ctx, {tuple(exps): c})

    @classmethod
    def linear(cls, ctx: FieldCtx, coeffs: Sequence[int]) -> "TriPoly":
        """a*x + b*y + c*z from encodings (a, b, c)."""
        return cls(ctx, {(1, 0, 0): coeffs[0], (0, 1, 0): coeffs[1], (0, 0, 1): coeffs[2]})

    # -- structure -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=grlex_key)

    def coefficient(self, m: Monomial) -> FieldElement:
        return FieldElement(self.ctx, self.terms.get(tuple(m), 0))

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, TriPoly) and self.ctx == other.ctx and self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        return f"TriPoly({self.ctx!r}, {self})"

    def __str__(self) -> str:
        return format_poly(self)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "TriPoly") -> None:
        if other.ctx != self.ctx:
            raise FieldMismatchError(f"{self.ctx!r} vs {other.ctx!r}")

    def __add__(self, other: "TriPoly") -> "TriPoly":
        self._check(other)
        add = self.ctx.add
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = add(out.get(m, 0), c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return TriPoly(self.ctx, out)

    def __neg__(self) -> "TriPoly":
        neg = self.ctx.neg
        return TriPoly(self.ctx, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "TriPoly") -> "TriPoly":
        return self + (-other)

    def scale(self, c: Union[FieldElement, int]) -> "TriPoly":
        c = _scalar(self.ctx, c)
        mul = self.ctx.mul
        return TriPoly(self.ctx, {m: mul(v, c) for m, v in self.terms.items()})

    def __mul__(self, other) -> "TriPoly":
        if not isinstance(other, TriPoly):
            return self.scale(other)
        self._check(other)
        ctx = self.ctx
        add, mul = ctx.add, ctx.mul
        out: Dict[Monomial, int] = {}
        for (a0, a1, a2), c in self.terms.items():
            for (b0, b1, b2), d in other.terms.items():
                m = (a0 + b0, a1 + b1, a2 + b2)
                v = add(out.get(m, 0), mul(c, d))
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return TriPoly(ctx, out)

    def __rmul__(self, other) -> "TriPoly":
        return self.scale(other)

    def __pow__(self, e: int) -> "TriPoly":
        result = TriPoly.constant(self.ctx, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def partial(self, var: int) -> "TriPoly":
        return partial(self, var)

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, point) -> int:
        """Value (as an encoding) at a point given by its coordinates."""
        ctx = self.ctx
        add, mul, pw = ctx.add, ctx.mul, ctx.pow
        x, y, z = _coords(point)
        acc = 0
        for (i, j, k), c in self.terms.items():
            v = c
            if i:
                v = mul(v, pw(x, i))
            if j and v:
                v = mul(v, pw(y, j))
            if k and v:
                v = mul(v, pw(z, k))
            if v:
                acc = add(acc, v)
        return acc

    def evaluate_many(self, xs: np.ndarray, ys: np.ndarray, zs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation at the points (xs[r], ys[r], zs[r])."""
        ctx = self.ctx
        xs, ys, zs = (np.asarray(a, dtype=np.int64) for a in (xs, ys, zs))
        lx, ly, lz = ctx.vlog(xs), ctx.vlog(ys), ctx.vlog(zs)
        zx, zy, zz = xs == 0, ys == 0, zs == 0
        acc = np.zeros(xs.shape, dtype=np.int64)
        for (i, j, k), c in self.terms.items():
            e = ctx.log(c) + i * lx + j * ly + k * lz
            v = ctx.vexp(e)
            dead = np.zeros(xs.shape, dtype=bool)
            if i:
                dead |= zx
            if j:
                dead |= zy
            if k:
                dead |= zz
            acc = ctx.vadd(acc, np.where(dead, 0, v))
        return acc

    # -- coefficient maps ----------------------------------------------------

    def embed(self, target: FieldCtx) -> "TriPoly":
        """Carry the coefficients into a field containing this one."""
        if target == self.ctx:
            return self
        table = target.embedding(self.ctx)
        return TriPoly(target, {m: table[c] for m, c in self.terms.items()})

    def map_coefficients(self, Q: int) -> "TriPoly":
        """Raise every coefficient to the power Q (a power of p)."""
        frob = self.ctx.frob
        return TriPoly(self.ctx, {m: frob(c, Q) for m, c in self.terms.items()})

    def is_defined_over(self, q: int) -> bool:
        return all(self.ctx.pow(c, q) == c for c in self.terms.values())

    # -- substitutions -------------------------------------------------------

    def substitute(self, var: int, form: Sequence[int]) -> "TriPoly":
        """Replace variable `var` by the linear form form[0]*x + form[1]*y + form[2]*z."""
        ctx = self.ctx
        add, mul = ctx.add, ctx.mul
        form = tuple(int(c) for c in form)
        powers: Dict[int, Dict[Monomial, int]] = {}
        out: Dict[Monomial, int] = {}
        for m, c in self.terms.items():
            e = m[var]
            rest = list(m)
            rest[var] = 0
            if e not in powers:
                powers[e] = linear_power(ctx, form, e)
            for (a0, a1, a2), d in powers[e].items():
                key = (rest[0] + a0, rest[1] + a1, rest[2] + a2)
                v = add(out.get(key, 0), mul(c, d))
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
        return TriPoly(ctx, out)

    def permute(self, perm: Sequence[int]) -> "TriPoly":
        """G(v) = F(v[perm[0]], v[perm[1]], v[perm[2]])."""
        out = {}
        for m, c in self.terms.items():
            exps = [0, 0, 0]
            for slot in range(3):
                exps[perm[slot]] += m[slot]
            out[tuple(exps)] = c
        return TriPoly(self.ctx, out)

    def transform(self, rows: Sequence[Sequence[int]]) -> "TriPoly":
        """F∘A for an invertible 3×3 matrix A (rows of encodings), i.e. G(v) = F(A·v)."""
        return pgl_action(self, rows)

    def restrict_to_line(self, base, direction) -> "BinaryForm":
        return restrict_to_line(self, base, direction)


# -- derivatives and division ---------------------------------------------------


def partial(f: TriPoly, var: int) -> TriPoly:
    """Formal partial derivative; exponents are reduced mod p."""
    ctx = f.ctx
    out = {}
    for m, c in f.terms.items():
        e = m[var]
        if e % ctx.p == 0:
            continue
        exps = list(m)
        exps[var] -= 1
        out[tuple(exps)] = ctx.mul(c, ctx.from_int(e))
    return TriPoly(ctx, out)


def divide(f: TriPoly, g: TriPoly) -> Tuple[TriPoly, TriPoly]:
    """Multivariate long division of f by a single divisor g under grlex.

    Returns (quotient, remainder); no term of the remainder is divisible by
    the leading monomial of g.
    """
    f._check(g)
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    ctx = f.ctx
    add, sub, mul = ctx.add, ctx.sub, ctx.mul
    lm = g.leading_monomial()
    lc_inv = ctx.inv(g.terms[lm])
    tail = [(m, c) for m, c in g.terms.items() if m != lm]

    work = dict(f.terms)
    heap = [tuple(-v for v in grlex_key(m)) for m in work]
    heapq.heapify(heap)
    quotient: Dict[Monomial, int] = {}
    remainder: Dict[Monomial, int] = {}

    while heap:
        key = heapq.heappop(heap)
        m = (-key[1], -key[2], -key[3])
        c = work.pop(m, 0)
        if not c:
            continue
        if m[0] >= lm[0] and m[1] >= lm[1] and m[2] >= lm[2]:
            t = (m[0] - lm[0], m[1] - lm[1], m[2] - lm[2])
            coef = mul(c, lc_inv)
            quotient[t] = add(quotient.get(t, 0), coef)
            for (b0, b1, b2), d in tail:
                mm = (t[0] + b0, t[1] + b1, t[2] + b2)
                v = sub(work.get(mm, 0), mul(coef, d))
                if v:
                    if mm not in work:
                        heapq.heappush(heap, tuple(-u for u in grlex_key(mm)))
                    work[mm] = v
                else:
                    work.pop(mm, None)
        else:
            remainder[m] = c
    return TriPoly(ctx, quotient), TriPoly(ctx, remainder)


def exact_divide(f: TriPoly, g: TriPoly) -> TriPoly:
    quotient, remainder = divide(f, g)
    if not remainder.is_zero:
        raise NotDivisible(f"remainder has {len(remainder)} term(s)", remainder=remainder)
    return quotient


def reduce_mod(f: TriPoly, g: TriPoly) -> TriPoly:
    return divide(f, g)[1]


# -- linear substitutions -------------------------------------------------------


def _multinomial(d: int, a: int, b: int, c: int) -> int:
    return factorial(d) // (factorial(a) * factorial(b) * factorial(c))


def linear_power(ctx: FieldCtx, form: Sequence[int], e: int) -> Dict[Monomial, int]:
    """Expand (form·(x, y, z))^e.

    With e = Σ d_i p^i, L^e = Π (L^(p^i))^(d_i) and L^(p^i) has coefficients
    raised to p^i; digits d_i < p keep every multinomial coefficient nonzero.
    """
    result: Dict[Monomial, int] = {(0, 0, 0): 1}
    add, mul, pw = ctx.add, ctx.mul, ctx.pow
    p = ctx.p
    step = 1
    while e:
        d = e % p
        e //= p
        if d:
            lifted = [pw(c, step) for c in form]
            part: Dict[Monomial, int] = {}
            for a in range(d + 1):
                for b in range(d - a + 1):
                    c = d - a - b
                    if (a and not lifted[0]) or (b and not lifted[1]) or (c and not lifted[2]):
                        continue
                    v = ctx.from_int(_multinomial(d, a, b, c))
                    v = mul(v, pw(lifted[0], a))
                    v = mul(v, pw(lifted[1], b))
                    v = mul(v, pw(lifted[2], c))
                    if v:
                        part[(a * step, b * step, c * step)] = v
            merged: Dict[Monomial, int] = {}
            for (r0, r1, r2), u in result.items():
                for (s0, s1, s2), w in part.items():
                    key = (r0 + s0, r1 + s1, r2 + s2)
                    merged[key] = add(merged.get(key, 0), mul(u, w))
            result = {m: c for m, c in merged.items() if c}
        step *= p
    return result


def elementary_factors(ctx: FieldCtx, rows: Sequence[Sequence[int]]) -> List[Tuple]:
    """Gauss-Jordan reduction of A to I, recorded as elementary row operations.

    Each entry is ("swap", i, j), ("scale", i, s) or ("add", r, c, s)
    (row r += s·row c); A equals the product of their inverses in order.
    """
    A = [[int(v) for v in row] for row in rows]
    ops: List[Tuple] = []
    for col in range(3):
        pivot = next((r for r in range(col, 3) if A[r][col]), None)
        if pivot is None:
            raise FieldError("matrix is singular")
        if pivot != col:
            A[col], A[pivot] = A[pivot], A[col]
            ops.append(("swap", col, pivot))
        lead = A[col][col]
        if lead != 1:
            s = ctx.inv(lead)
            A[col] = [ctx.mul(v, s) for v in A[col]]
            ops.append(("scale", col, s))
        for r in range(3):
            c = A[r][col]
            if r != col and c:
                A[r] = [ctx.sub(A[r][t], ctx.mul(c, A[col][t])) for t in range(3)]
                ops.append(("add", r, col, ctx.neg(c)))
    return ops


def pgl_action(f: TriPoly, rows: Sequence[Sequence[int]]) -> TriPoly:
    """F∘A computed through the elementary factorization of A."""
    ctx = f.ctx
    g = f
    for op in elementary_factors(ctx, rows):
        if op[0] == "swap":
            perm = [0, 1, 2]
            perm[op[1]], perm[op[2]] = op[2], op[1]
            g = g.permute(perm)
        elif op[0] == "scale":
            form = [0, 0, 0]
            form[op[1]] = ctx.inv(op[2])
            g = g.substitute(op[1], form)
        else:
            _, r, c, s = op
            form = [0, 0, 0]
            form[r] = 1
            form[c] = ctx.neg(s)
            g = g.substitute(r, form)
    return g


def frobenius_determinant(ctx: FieldCtx, exponents: Sequence[int]) -> TriPoly:
    """det [[x^e0, x^e1, x^e2], [y^e0, ...], [z^e0, ...]] as its 6-term expansion."""
    minus_one = ctx.neg(1)
    terms: Dict[Monomial, int] = {}
    for perm in permutations(range(3)):
        inversions = sum(1 for a in range(3) for b in range(a + 1, 3) if perm[a] > perm[b])
        m = tuple(exponents[perm[r]] for r in range(3))
        sign = 1 if inversions % 2 == 0 else minus_one
        terms[m] = ctx.add(terms.get(m, 0), sign)
    return TriPoly(ctx, terms)


# -- restriction to lines ------------------------------------------------------


def _mul_linear(ctx: FieldCtx, coeffs: List[int], lin: Tuple[int, int]) -> List[int]:
    a, b = lin
    add, mul = ctx.add, ctx.mul
    out = [0] * (len(coeffs) + 1)
    for k, v in enumerate(coeffs):
        if v:
            if a:
                out[k] = add(out[k], mul(a, v))
            if b:
                out[k + 1] = add(out[k + 1], mul(b, v))
    return out


def _add_into(ctx: FieldCtx, acc: List[int], other: List[int], c: int = 1) -> List[int]:
    add, mul = ctx.add, ctx.mul
    for k, v in enumerate(other):
        if v:
            acc[k] = add(acc[k], v if c == 1 else mul(c, v))
    return acc


def restrict_to_line(f: TriPoly, base, direction) -> "BinaryForm":
    """G(s, t) = f(s·base + t·direction), by Horner grouping on the x exponent."""
    ctx = f.ctx
    B, D = _coords(base), _coords(direction)
    cross = (
        ctx.sub(ctx.mul(B[1], D[2]), ctx.mul(B[2], D[1])),
        ctx.sub(ctx.mul(B[2], D[0]), ctx.mul(B[0], D[2])),
        ctx.sub(ctx.mul(B[0], D[1]), ctx.mul(B[1], D[0])),
    )
    if not any(cross):
        raise ValueError("base and direction are the same projective point")
    if f.is_zero:
        return BinaryForm(ctx, [0])
    if not f.is_homogeneous():
        raise ValueError("restriction needs a homogeneous polynomial")

    d = f.degree
    X, Y, Z = ((B[v], D[v]) for v in range(3))
    groups = f._by_x

    zpow = [[1]]
    for _ in range(d):
        zpow.append(_mul_linear(ctx, zpow[-1], Z))

    result: Optional[List[int]] = None
    for i in range(d, -1, -1):
        e = d - i
        group = groups.get(i)
        if group:
            top = max(group)
            acc = [ctx.mul(group[top], v) for v in zpow[e - top]]
            for j in range(top - 1, -1, -1):
                acc = _mul_linear(ctx, acc, Y)
                c = group.get(j)
                if c:
                    _add_into(ctx, acc, zpow[e - j], c)
        else:
            acc = [0] * (e + 1)
        result = acc if result is None else _add_into(ctx, acc, _mul_linear(ctx, result, X))
    return BinaryForm(ctx, result)


# -- univariate helpers (dense lists, highest degree first) ------------------


def _u_strip(f: List[int]) -> List[int]:
    i = 0
    while i < len(f) - 1 and f[i] == 0:
        i += 1
    return f[i:]


def _u_div_linear(ctx: FieldCtx, f: List[int], a: int) -> Tuple[List[int], int]:
    """Synthetic division by (s - a)."""
    out = []
    acc = 0
    for c in f:
        acc = ctx.add(ctx.mul(acc, a), c)
        out.append(acc)
    return out[:-1], out[-1]


def _u_divmod(ctx: FieldCtx, f: List[int], g: List[int]) -> Tuple[List[int], List[int]]:
    f = _u_strip(list(f))
    g = _u_strip(list(g))
    if g == [0]:
        raise ZeroDivisionError("division by the zero polynomial")
    if len(f) < len(g):
        return [0], f
    lead_inv = ctx.inv(g[0])
    quot = [0] * (len(f) - len(g) + 1)
    rem = list(f)
    for i in range(len(quot)):
        c = ctx.mul(rem[i], lead_inv)
        quot[i] = c
        if c:
            for j, gv in enumerate(g):
                rem[i + j] = ctx.sub(rem[i + j], ctx.mul(c, gv))
    return quot, _u_strip(rem[len(quot):] or [0])


def _u_monic(ctx: FieldCtx, f: List[int]) -> List[int]:
    f = _u_strip(f)
    if f[0] in (0, 1):
        return f
    s = ctx.inv(f[0])
    return [ctx.mul(c, s) for c in f]


def _u_gcd(ctx: FieldCtx, f: List[int], g: List[int]) -> List[int]:
    f, g = _u_strip(list(f)), _u_strip(list(g))
    while g != [0]:
        f, g = g, _u_divmod(ctx, f, g)[1]
    return _u_monic(ctx, f)


def _u_derivative(ctx: FieldCtx, f: List[int]) -> List[int]:
    n = len(f) - 1
    if n == 0:
        return [0]
    return _u_strip([ctx.mul(c, ctx.from_int(n - i)) for i, c in enumerate(f[:-1])])


def _u_mulmod(ctx: FieldCtx, f: List[int], g: List[int], h: List[int]) -> List[int]:
    prod = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    prod[i + j] = ctx.add(prod[i + j], ctx.mul(a, b))
    return _u_divmod(ctx, prod, h)[1]


def _u_powmod(ctx: FieldCtx, f: List[int], e: int, h: List[int]) -> List[int]:
    result = [1]
    base = _u_divmod(ctx, f, h)[1]
    while e:
        if e & 1:
            result = _u_mulmod(ctx, result, base, h)
        e >>= 1
        if e:
            base = _u_mulmod(ctx, base, base, h)
    return result


def _u_sub(ctx: FieldCtx, f: List[int], g: List[int]) -> List[int]:
    n = max(len(f), len(g))
    f = [0] * (n - len(f)) + list(f)
    g = [0] * (n - len(g)) + list(g)
    return _u_strip([ctx.sub(a, b) for a, b in zip(f, g)])


# -- binary forms ------------------------------------------------------------------


Root = Tuple[int, int]


def normalize_root(ctx: FieldCtx, s: int, t: int) -> Root:
    if s:
        return (1, ctx.div(t, s))
    if t:
        return (0, 1)
    raise ValueError("(0:0) is not a point of the projective line")


class BinaryForm:
    """Homogeneous G(s, t) of degree d; coeffs[k] multiplies s^(d-k) t^k."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable[int]):
        self.ctx = ctx
        self.coeffs = tuple(int(c) for c in coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryForm) and self.ctx == other.ctx and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self) -> str:
        return f"BinaryForm({self.ctx!r}, {self})"

    def __str__(self) -> str:
        d = self.degree
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v for v, e in (("s", d - k), ("t", k)) if e
            )
            coef = self.ctx.format(c)
            if not mono:
                parts.append(coef)
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{coef if coef.isdigit() else '(' + coef + ')'}*{mono}")
        return " + ".join(parts) if parts else "0"

    def evaluate(self, s: int, t: int) -> int:
        ctx = self.ctx
        acc = 0
        tk = 1
        for c in self.coeffs:
            acc = ctx.add(ctx.mul(acc, s), ctx.mul(c, tk))
            tk = ctx.mul(tk, t)
        return acc

    def values_at(self, elements: np.ndarray) -> np.ndarray:
        """G(a, 1) for every a, vectorized."""
        ctx = self.ctx
        acc = np.zeros(np.shape(elements), dtype=np.int64)
        for c in self.coeffs:
            acc = ctx.vadd(ctx.vmul(acc, elements), np.full(acc.shape, c, dtype=np.int64))
        return acc

    def t_order(self) -> int:
        """Order of vanishing at (1:0)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        raise InfiniteOrder("the zero form vanishes to infinite order")

    def dehomogenized(self) -> List[int]:
        """G(s, 1) as a dense list, highest degree first, leading zeros removed."""
        return _u_strip(list(self.coeffs))

    def roots(self, elements: np.ndarray) -> List[Tuple[Root, int]]:
        """Projective roots with multiplicities among (a:1), a in elements, and (1:0)."""
        if self.is_zero:
            raise InfiniteOrder("the zero form vanishes everywhere")
        ctx = self.ctx
        found: List[Tuple[Root, int]] = []
        if self.coeffs[0] == 0:
            found.append(((1, 0), self.t_order()))
        elements = np.asarray(elements, dtype=np.int64)
        for a in elements[self.values_at(elements) == 0]:
            a = int(a)
            found.append((normalize_root(ctx, a, 1), vanish_order(self, a, 1)))
        return sorted(found)

    def residual(self, roots: Sequence[Tuple[Root, int]]) -> "BinaryForm":
        """Divide out the given roots with their multiplicities."""
        ctx = self.ctx
        g = self.dehomogenized()
        for (s, t), mult in roots:
            if t == 0:
                continue
            a = ctx.div(s, t)
            for _ in range(mult):
                g, rem = _u_div_linear(ctx, g, a)
                if rem:
                    raise ValueError("root multiplicity exceeds the form's")
        return BinaryForm(ctx, g or [0])

    def splitting_degree(self) -> int:
        """Degree over the coefficient field of the splitting field of G."""
        ctx = self.ctx
        h = _u_monic(ctx, self.dehomogenized())
        degs = [1]
        s_poly = [1, 0]
        power = s_poly
        i = 0
        while len(h) > 1:
            i += 1
            if 2 * i > len(h) - 1:
                degs.append(len(h) - 1)
                break
            power = _u_powmod(ctx, power, ctx.size, h)
            common = _u_gcd(ctx, h, _u_sub(ctx, power, s_poly))
            if len(common) > 1:
                degs.append(i)
                # strip every power of the degree-i factors, so what remains
                # has no irreducible factor of degree <= i
                while len(common) > 1:
                    h = _u_divmod(ctx, h, common)[0]
                    common = _u_gcd(ctx, h, common)
                power = _u_divmod(ctx, power, h)[1] if len(h) > 1 else [0]
        return lcm(*degs)


def vanish_order(G: BinaryForm, s0: int, t0: int) -> int:
    """Largest r with (t0·s − s0·t)^r dividing G."""
    if G.is_zero:
        raise InfiniteOrder("the zero form vanishes to infinite order")
    s0, t0 = int(getattr(s0, "value", s0)), int(getattr(t0, "value", t0))
    if not s0 and not t0:
        raise ValueError("(0:0) is not a point of the projective line")
    ctx = G.ctx
    if not t0:
        return G.t_order()
    a = ctx.div(s0, t0)
    g = G.dehomogenized()
    r = 0
    while len(g) > 1:
        quot, rem = _u_div_linear(ctx, g, a)
        if rem:
            break
        g = quot
        r += 1
    return r


def is_squarefree(G: BinaryForm) -> bool:
    if G.is_zero:
        return False
    if G.t_order() > 1:
        return False
    g = G.dehomogenized()
    if len(g) <= 2:
        return True
    return len(_u_gcd(G.ctx, g, _u_derivative(G.ctx, g))) == 1


def squarefree_and_roots(G: BinaryForm, q: int, search_ext: int) -> Tuple[List[Tuple[Root, int]], bool]:
    """Roots over ℙ¹(GF(q^search_ext)) with multiplicities, plus the squarefree flag."""
    from .field import prime_power

    _, e = prime_power(q)
    elements = G.ctx.subfield(e * search_ext)
    return G.roots(elements), is_squarefree(G)


# -- text format --------------------------------------------------------------------


def _format_coefficient(ctx: FieldCtx, c: int) -> str:
    text = ctx.format(c)
    return text if text.isdigit() else f"({text})"


def format_poly(f: TriPoly) -> str:
    """Terms in decreasing grlex order, e.g. ``x^2*y + (t+1)*z^3``."""
    if f.is_zero:
        return "0"
    parts = []
    for m in sorted(f.terms, key=grlex_key, reverse=True):
        c = f.terms[m]
        mono = "*".join(
            f"{v}^{e}" if e > 1 else v for v, e in zip(VARIABLES, m) if e
        )
        if not mono:
            parts.append(_format_coefficient(f.ctx, c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{_format_coefficient(f.ctx, c)}*{mono}")
    return " + ".join(parts)


def _split_top(text: str, sep: str) -> List[str]:
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def parse_poly(ctx: FieldCtx, text: str) -> TriPoly:
    """Inverse of format_poly."""
    text = text.replace(" ", "")
    if text == "0":
        return TriPoly(ctx)
    total = TriPoly(ctx)
    for term in _split_top(text, "+"):
        if not term:
            raise ValueError(f"empty term in {text!r}")
        coef = 1
        exps = [0, 0, 0]
        for factor in _split_top(term, "*"):
            if factor.startswith("(") and factor.endswith(")"):
                coef = ctx.mul(coef, ctx.parse(factor[1:-1]))
            elif factor[0] in VARIABLES:
                name, _, power = factor.partition("^")
                exps[VARIABLES.index(name)] += int(power) if power else 1
            else:
                coef = ctx.mul(coef, ctx.parse(factor))
        total = total + TriPoly(ctx, {tuple(exps): coef})
    return total
