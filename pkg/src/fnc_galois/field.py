"""Exact arithmetic in GF(p^k).

Elements are encoded as integers sum(c_i * p^i), the coordinates c_i being
taken over the polynomial basis 1, t, ..., t^(k-1) of GF(p)[t]/(modulus).
Fields with at most TABLE_LIMIT elements carry exp/log tables (and Zech
logarithms in odd characteristic); larger fields fall back to polynomial
arithmetic through sympy's galoistools.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_gcdex,
    gf_irreducible_p,
    gf_mul,
    gf_pow_mod,
    gf_rem,
)

from .errors import FieldError, FieldMismatchError, InvalidParams

MAX_FIELD_SIZE = 2 ** 32
TABLE_LIMIT = 2 ** 22


def prime_power(q: int) -> Tuple[int, int]:
    """Split q = p^e; raises InvalidParams when q is not a prime power."""
    if q < 2:
        raise InvalidParams(f"{q} is not a prime power")
    factors = factorint(q)
    if len(factors) != 1:
        raise InvalidParams(f"{q} is not a prime power")
    (p, e), = factors.items()
    return int(p), int(e)


def is_power_of(Q: int, p: int) -> bool:
    if Q < 1:
        return False
    while Q % p == 0:
        Q //= p
    return Q == 1


def _digits(a: int, p: int, k: int) -> List[int]:
    out = []
    for _ in range(k):
        out.append(a % p)
        a //= p
    return out


def _from_digits(digits: Sequence[int], p: int) -> int:
    value = 0
    for c in reversed(digits):
        value = value * p + (c % p)
    return value


def _to_gf(a: int, p: int, k: int) -> List[int]:
    """Encoding -> sympy dense list (highest degree first, stripped)."""
    coeffs = _digits(a, p, k)[::-1]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    return coeffs


def _from_gf(f: Sequence[int], p: int) -> int:
    value = 0
    for c in f:
        value = value * p + (int(c) % p)
    return value


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, k: int) -> Tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k over GF(p).

    Returned low-to-high, leading 1 included. Candidates are ordered by their
    lower coefficients read as a base-p number with the t^(k-1) coefficient
    most significant.
    """
    if k == 1:
        return (0, 1)
    for lower in range(p ** k):
        digits = _digits(lower, p, k)
        if digits[0] == 0:
            continue
        if gf_irreducible_p([1] + digits[::-1], p, ZZ):
            return tuple(digits) + (1,)
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")


class FieldCtx:
    """GF(p^k) with a fixed modulus. Immutable after construction."""

    def __init__(self, p: int, k: int, modulus: Optional[Sequence[int]] = None):
        if not isprime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if k < 1:
            raise FieldError(f"extension degree must be >= 1, got {k}")
        if p ** k > MAX_FIELD_SIZE:
            raise FieldError(f"GF({p}^{k}) exceeds {MAX_FIELD_SIZE} elements")

        if modulus is None:
            modulus = smallest_irreducible(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        if k > 1 and not gf_irreducible_p(list(modulus[::-1]), p, ZZ):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")

        self.p = p
        self.k = k
        self.size = p ** k
        self.order = self.size - 1
        self.modulus = modulus
        self.tabulated = self.size <= TABLE_LIMIT
        self._key = (p, k, modulus)
        self._mod_gf = list(modulus[::-1])
        self._subfields: Dict[int, np.ndarray] = {}
        self._embeddings: Dict[Tuple, List[int]] = {}

        self.generator = self._find_generator()
        if self.tabulated:
            self._build_tables()

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldCtx) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    # -- construction -----------------------------------------------------

    def _slow_mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        prod = gf_mul(_to_gf(a, self.p, self.k), _to_gf(b, self.p, self.k), self.p, ZZ)
        return _from_gf(gf_rem(prod, self._mod_gf, self.p, ZZ), self.p)

    def _slow_pow(self, a: int, e: int) -> int:
        if self.k == 1:
            return pow(a, e, self.p)
        return _from_gf(gf_pow_mod(_to_gf(a, self.p, self.k), e, self._mod_gf, self.p, ZZ), self.p)

    def _slow_inv(self, a: int) -> int:
        if self.k == 1:
            return pow(a, -1, self.p)
        s, _, h = gf_gcdex(_to_gf(a, self.p, self.k), self._mod_gf, self.p, ZZ)
        if h != [1]:
            raise FieldError("element is not invertible")
        return _from_gf(s, self.p)

    def _digit_add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        return _from_digits([x + y for x, y in zip(_digits(a, p, self.k), _digits(b, p, self.k))], p)

    def _digit_scale(self, a: int, c: int) -> int:
        p = self.p
        return _from_digits([x * c for x in _digits(a, p, self.k)], p)

    def _find_generator(self) -> int:
        primes = list(factorint(self.order)) if self.order > 1 else []
        start = 1 if self.k == 1 else self.p
        for candidate in range(start, self.size):
            if all(self._slow_pow(candidate, self.order // r) != 1 for r in primes):
                return candidate
        raise FieldError(f"no primitive element found in {self!r}")

    def _multiplier(self, g: int) -> Callable[[int], int]:
        """Return a -> g*a as a GF(p)-linear map on encodings."""
        p, k = self.p, self.k
        images = [self._slow_mul(g, p ** j) for j in range(k)]
        if p == 2:
            def step(a: int) -> int:
                r, j = 0, 0
                while a:
                    if a & 1:
                        r ^= images[j]
                    a >>= 1
                    j += 1
                return r
            return step

        if k > 1 and g == p:
            # multiplication by t: shift, then fold the overflow digit back via the modulus
            hi = p ** (k - 1)
            fold = _from_digits([-c for c in self.modulus[:k]], p)

            def step(a: int) -> int:
                top = a // hi
                a = (a % hi) * p
                if top:
                    a = self._digit_add(a, self._digit_scale(fold, top))
                return a
            return step

        def step(a: int) -> int:
            r = 0
            for j, d in enumerate(_digits(a, p, k)):
                if d:
                    r = self._digit_add(r, self._digit_scale(images[j], d))
            return r
        return step

    def _build_tables(self) -> None:
        order = self.order
        exp = [0] * (2 * order)
        log = [-1] * self.size
        step = self._multiplier(self.generator)
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = step(x)
        if x != 1:
            raise FieldError(f"generator of {self!r} has wrong order")
        exp[order:] = exp[:order]
        self._exp = exp
        self._log = log
        self._exp_np = np.array(exp, dtype=np.int64)
        self._log_np = np.array(log, dtype=np.int64)

        if self.p != 2:
            p = self.p
            zech = [-1] * order
            for i in range(order):
                v = exp[i]
                w = v - v % p + (v % p + 1) % p
                zech[i] = log[w] if w else -1
            self._zech = zech
            self._zech_np = np.array(zech, dtype=np.int64)

    # -- scalar arithmetic on encodings ------------------------------------

    def from_int(self, c: int) -> int:
        """Image of the integer c in the prime field."""
        return c % self.p

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if not a:
            return b
        if not b:
            return a
        if not self.tabulated:
            return self._digit_add(a, b)
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self.order]
        return 0 if z < 0 else self._exp[la + z]

    def neg(self, a: int) -> int:
        if self.p == 2 or not a:
            return a
        if not self.tabulated:
            return self._digit_scale(a, self.p - 1)
        return self._exp[self._log[a] + self.order // 2]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if not self.tabulated:
            return self._slow_mul(a, b)
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if not a:
            raise FieldError("inverse of zero")
        if not self.tabulated:
            return self._slow_inv(a)
        return self._exp[(self.order - self._log[a]) % self.order]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if not a:
            if e < 0:
                raise FieldError("inverse of zero")
            return 0
        if not self.tabulated:
            if e < 0:
                a, e = self._slow_inv(a), -e
            return self._slow_pow(a, e)
        return self._exp[(self._log[a] * e) % self.order]

    def frob(self, a: int, Q: int) -> int:
        """a^Q for Q a power of p."""
        if not is_power_of(Q, self.p):
            raise FieldError(f"{Q} is not a power of {self.p}")
        return self.pow(a, Q)

    def log(self, a: int) -> int:
        if not a:
            raise FieldError("log of zero")
        self._require_tables()
        return self._log[a]

    def exp(self, i: int) -> int:
        self._require_tables()
        return self._exp[i % self.order]

    # -- vectorized arithmetic ------------------------------------------------

    def _require_tables(self) -> None:
        if not self.tabulated:
            raise FieldError(f"{self!r} is too large for table arithmetic")

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        self._require_tables()
        la = self._log_np[a]
        z = self._zech_np[(self._log_np[b] - la) % self.order]
        out = np.where(z < 0, 0, self._exp_np[np.clip(la + z, 0, None)])
        out = np.where(a == 0, b, out)
        return np.where(b == 0, a, out)

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        self._require_tables()
        a, b = np.broadcast_arrays(a, b)
        out = self._exp_np[np.clip(self._log_np[a] + self._log_np[b], 0, None)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vlog(self, a: np.ndarray) -> np.ndarray:
        """Discrete logs; zero maps to -1 and must be masked by the caller."""
        self._require_tables()
        return self._log_np[np.asarray(a, dtype=np.int64)]

    def vexp(self, e: np.ndarray) -> np.ndarray:
        self._require_tables()
        return self._exp_np[np.asarray(e, dtype=np.int64) % self.order]

    def vpow(self, a: np.ndarray, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        self._require_tables()
        if e == 0:
            return np.ones_like(a)
        out = self._exp_np[(self._log_np[a] * e) % self.order]
        return np.where(a == 0, 0, out)

    # -- subfields, embeddings, text ------------------------------------------

    def subfield(self, d: int) -> np.ndarray:
        """Sorted encodings of GF(p^d) inside this field (d | k)."""
        if d < 1 or self.k % d:
            raise FieldError(f"GF({self.p}^{d}) is not a subfield of {self!r}")
        if d not in self._subfields:
            self._require_tables()
            m = self.p ** d - 1
            step = self.order // m
            elems = [0] + [self._exp[i * step] for i in range(m)]
            self._subfields[d] = np.array(sorted(elems), dtype=np.int64)
        return self._subfields[d]

    def embedding(self, sub: "FieldCtx") -> List[int]:
        """Encodings in this field of every element of `sub`, indexed by encoding."""
        if sub == self:
            return list(range(self.size))
        if sub.p != self.p or self.k % sub.k:
            raise FieldMismatchError(f"{sub!r} does not embed in {self!r}")
        if sub._key not in self._embeddings:
            root = None
            for x in self.subfield(sub.k):
                x = int(x)
                acc = 0
                for c in reversed(sub.modulus):
                    acc = self.add(self.mul(acc, x), c)
                if acc == 0:
                    root = x
                    break
            if root is None:
                raise FieldError(f"modulus of {sub!r} has no root in {self!r}")
            powers = [self.pow(root, i) for i in range(sub.k)]
            table = []
            for a in range(sub.size):
                acc = 0
                for i, d in enumerate(_digits(a, sub.p, sub.k)):
                    if d:
                        acc = self.add(acc, self.mul(d, powers[i]))
                table.append(acc)
            self._embeddings[sub._key] = table
        return self._embeddings[sub._key]

    def coords(self, a: int) -> Tuple[int, ...]:
        return tuple(_digits(a, self.p, self.k))

    def format(self, a: int) -> str:
        if self.k == 1:
            return str(a)
        terms = []
        for i, c in reversed(list(enumerate(_digits(a, self.p, self.k)))):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                power = "t" if i == 1 else f"t^{i}"
                terms.append(power if c == 1 else f"{c}*{power}")
        return "+".join(terms) if terms else "0"

    def parse(self, text: str) -> int:
        """Inverse of format(); also accepts bare integers for prime fields."""
        text = text.replace(" ", "")
        if not text:
            raise FieldError("empty field element")
        digits = [0] * self.k
        for term in text.split("+"):
            coef, _, power = term.rpartition("t") if "t" in term else ("", "", None)
            if power is None:
                c, i = int(term), 0
            else:
                coef = coef.rstrip("*")
                c = int(coef) if coef else 1
                i = int(power[1:]) if power.startswith("^") else 1
                if power and not power.startswith("^"):
                    raise FieldError(f"cannot parse field element {text!r}")
            if i >= self.k:
                raise FieldError(f"degree {i} term in {text!r} exceeds {self!r}")
            digits[i] = (digits[i] + c) % self.p
        return _from_digits(digits, self.p)


@lru_cache(maxsize=None)
def field_ctx(p: int, k: int) -> FieldCtx:
    """Cached context for GF(p^k) with the default modulus."""
    return FieldCtx(p, k)


def field_for(q: int, j: int = 1) -> FieldCtx:
    """Context for GF(q^j), flattened to GF(p^(e*j))."""
    p, e = prime_power(q)
    return field_ctx(p, e * j)


@dataclass(frozen=True)
class FieldElement:
    """Value type wrapping an encoding together with its context."""

    ctx: FieldCtx
    value: int

    def _other(self, other: Union["FieldElement", int]) -> Optional[int]:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise FieldMismatchError(f"{self.ctx!r} vs {other.ctx!r}")
            return other.value
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return None

    def _combine(self, other, op: Callable[[int, int], int], swap: bool = False):
        value = self._other(other)
        if value is None:
            return NotImplemented
        a, b = (value, self.value) if swap else (self.value, value)
        return FieldElement(self.ctx, op(a, b))

    def __add__(self, other):
        return self._combine(other, self.ctx.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, self.ctx.sub)

    def __rsub__(self, other):
        return self._combine(other, self.ctx.sub, swap=True)

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.value))

    def __mul__(self, other):
        return self._combine(other, self.ctx.mul)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._combine(other, self.ctx.div)

    def __rtruediv__(self, other):
        return self._combine(other, self.ctx.div, swap=True)

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow(self.value, e))

    def __bool__(self) -> bool:
        return self.value != 0

    def __str__(self) -> str:
        return self.ctx.format(self.value)

    def __repr__(self) -> str:
        return f"FieldElement({self.ctx!r}, {self})"

    @property
    def coords(self) -> Tuple[int, ...]:
        return self.ctx.coords(self.value)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.ctx, self.ctx.inv(self.value))


def element(ctx: FieldCtx, value: Union[int, str]) -> FieldElement:
    if isinstance(value, str):
        return FieldElement(ctx, ctx.parse(value))
    if not 0 <= value < ctx.size:
        raise FieldError(f"encoding {value} out of range for {ctx!r}")
    return FieldElement(ctx, value)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def frobenius(a: FieldElement, Q: int) -> FieldElement:
    return FieldElement(a.ctx, a.ctx.frob(a.value, Q))


def subfield_degree(a: FieldElement, q: int) -> int:
    """Smallest j >= 1 with a^(q^j) = a."""
    return element_degree(a.ctx, a.value, q)


def element_degree(ctx: FieldCtx, a: int, q: int) -> int:
    p, e = prime_power(q)
    if p != ctx.p or ctx.k % e:
        raise FieldMismatchError(f"GF({q}) is not a subfield of {ctx!r}")
    top = ctx.k // e
    for j in range(1, top + 1):
        if top % j == 0 and ctx.pow(a, q ** j) == a:
            return j
    return top


def enumerate_field(ctx: FieldCtx) -> List[FieldElement]:
    """All elements in encoding order."""
    return [FieldElement(ctx, v) for v in range(ctx.size)]


def embed(a: FieldElement, target: FieldCtx) -> FieldElement:
    return FieldElement(target, target.embedding(a.ctx)[a.value])
