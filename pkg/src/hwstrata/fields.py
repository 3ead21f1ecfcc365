"""Exact arithmetic in GF(p^r) for odd p, with a deterministic total order.

Elements of GF(p^r) are residues in GF(p)[t]/(m(t)) for a monic irreducible
modulus m of degree r, stored as a tuple of r coefficients low-to-high. The
modulus is not arbitrary: ``field_create`` always picks the irreducible monic
polynomial whose non-leading coefficient vector has the smallest integer
encoding sum(c[i] * p^i). That makes every canonical-form computation in the
package reproducible across runs and machines.

The total order on elements is the order of their encodings, again
sum(c[i] * p^i); ``encode`` is a bijection onto [0, q).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import DivisionByZero, FieldMismatch, InvalidCharacteristic, InvalidDegree

__all__ = [
    "FieldCtx",
    "FieldElement",
    "field_create",
    "arith",
    "frobenius",
    "encode",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# bootstrap polynomial arithmetic over GF(p), plain int lists low-to-high
# (used only for modulus selection and element mul/inv)
# ---------------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    return _trim(a)


def _polypow_mod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(list(base), m, p)
    while e:
        if e & 1:
            result = _polymod(_polymul(result, base, p), m, p)
        base = _polymod(_polymul(base, base, p), m, p)
        e >>= 1
    return result


def _polysub(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, ai in enumerate(a):
        out[i] = ai
    for i, bi in enumerate(b):
        out[i] = (out[i] - bi) % p
    return _trim(out)


def _polygcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while b:
        dm = len(b) - 1
        inv_lead = pow(b[-1], p - 2, p)
        r = list(a)
        while r and len(r) - 1 >= dm:
            if r[-1] == 0:
                r.pop()
                continue
            c = r[-1] * inv_lead % p
            shift = len(r) - 1 - dm
            for i, bi in enumerate(b):
                r[shift + i] = (r[shift + i] - c * bi) % p
            r.pop()
        a, b = b, _trim(r)
    return a


def _is_irreducible(m: list[int], p: int) -> bool:
    """Deterministic irreducibility test for a monic m over GF(p).

    m of degree r is irreducible iff t^(p^r) == t mod m and, for every prime
    divisor l of r, gcd(t^(p^(r/l)) - t, m) is constant.
    """
    r = len(m) - 1
    if r == 1:
        return True
    t = [0, 1]
    if _polysub(_polypow_mod(t, p**r, m, p), t, p):
        return False
    n, ell = r, 2
    prime_divs = []
    while ell * ell <= n:
        if n % ell == 0:
            prime_divs.append(ell)
            while n % ell == 0:
                n //= ell
        ell += 1
    if n > 1:
        prime_divs.append(n)
    for ell in prime_divs:
        diff = _polysub(_polypow_mod(t, p ** (r // ell), m, p), t, p)
        g = _polygcd(m, diff, p)
        if len(g) - 1 >= 1:
            return False
    return True


# ---------------------------------------------------------------------------
# public field context and elements
# ---------------------------------------------------------------------------

class FieldCtx:
    """Immutable description of GF(p^r): characteristic, degree, modulus."""

    __slots__ = ("p", "r", "q", "modulus", "_hash")

    def __init__(self, p: int, r: int, modulus: tuple[int, ...]):
        self.p = p
        self.r = r
        self.q = p**r
        self.modulus = modulus  # length r+1, low-to-high, monic
        self._hash = hash((p, r, modulus))

    def __eq__(self, other):
        return (
            isinstance(other, FieldCtx)
            and self.p == other.p
            and self.r == other.r
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FieldCtx(GF({self.p}^{self.r}))" if self.r > 1 else f"FieldCtx(GF({self.p}))"

    # -- element constructors ------------------------------------------------

    def element(self, coeffs) -> "FieldElement":
        """Build an element from an int (prime-field value) or coefficient list."""
        if isinstance(coeffs, FieldElement):
            if coeffs.ctx != self:
                raise FieldMismatch("element belongs to a different field")
            return coeffs
        if isinstance(coeffs, int):
            vec = [coeffs % self.p] + [0] * (self.r - 1)
        else:
            vec = [c % self.p for c in coeffs]
            if len(vec) > self.r:
                raise ValueError(f"expected at most {self.r} coefficients")
            vec += [0] * (self.r - len(vec))
        return FieldElement(tuple(vec), self)

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def gen(self) -> "FieldElement":
        """The residue class of t (equals 0 only in the degenerate case r=1)."""
        if self.r == 1:
            return self.zero()
        return self.element([0, 1])

    def decode(self, n: int) -> "FieldElement":
        """Inverse of encode: the element with encoding n ∈ [0, q)."""
        if not 0 <= n < self.q:
            raise ValueError(f"encoding {n} outside [0, {self.q})")
        vec = []
        for _ in range(self.r):
            n, c = divmod(n, self.p)
            vec.append(c)
        return FieldElement(tuple(vec), self)

    def elements(self):
        """All q elements in encoding order."""
        return (self.decode(n) for n in range(self.q))


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(p^r) as a coefficient vector in the power basis of t."""

    coeffs: tuple[int, ...]
    ctx: FieldCtx

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.ctx != self.ctx:
            raise FieldMismatch("operands from different fields")

    def __add__(self, other):
        self._check(other)
        p = self.ctx.p
        return FieldElement(
            tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)), self.ctx
        )

    def __sub__(self, other):
        self._check(other)
        p = self.ctx.p
        return FieldElement(
            tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)), self.ctx
        )

    def __neg__(self):
        p = self.ctx.p
        return FieldElement(tuple((-a) % p for a in self.coeffs), self.ctx)

    def __mul__(self, other):
        self._check(other)
        ctx = self.ctx
        if ctx.r == 1:
            return FieldElement((self.coeffs[0] * other.coeffs[0] % ctx.p,), ctx)
        prod = _polymul(list(self.coeffs), list(other.coeffs), ctx.p)
        red = _polymod(prod, list(ctx.modulus), ctx.p)
        red += [0] * (ctx.r - len(red))
        return FieldElement(tuple(red), ctx)

    def inv(self):
        """Multiplicative inverse via extended Euclid on the coefficient polynomial."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        ctx = self.ctx
        if ctx.r == 1:
            return FieldElement((pow(self.coeffs[0], ctx.p - 2, ctx.p),), ctx)
        p = ctx.p
        # extended Euclid: r0 = modulus, r1 = self
        r0, r1 = list(ctx.modulus), _trim(list(self.coeffs))
        s0, s1 = [], [1]
        while r1:
            # divide r0 by r1: quotient q_poly, remainder rem
            rem = list(r0)
            d1 = len(r1) - 1
            inv_lead = pow(r1[-1], p - 2, p)
            q_poly = [0] * max(1, len(rem) - d1)
            while rem and len(rem) - 1 >= d1:
                if rem[-1] == 0:
                    rem.pop()
                    continue
                c = rem[-1] * inv_lead % p
                shift = len(rem) - 1 - d1
                q_poly[shift] = c
                for i, bi in enumerate(r1):
                    rem[shift + i] = (rem[shift + i] - c * bi) % p
                rem.pop()
            r0, r1 = r1, _trim(rem)
            s0, s1 = s1, _polysub(s0, _polymul(_trim(q_poly), s1, p), p)
        # r0 = gcd = nonzero constant; scale s0 by its inverse
        c = pow(r0[0], p - 2, p)
        out = [(si * c) % p for si in s0]
        out += [0] * (ctx.r - len(out))
        return FieldElement(tuple(out[: ctx.r]), ctx)

    def __truediv__(self, other):
        self._check(other)
        return self * other.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = self.ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def encode(self) -> int:
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.ctx.p + c
        return n

    def is_square(self) -> bool:
        """True iff the element is a square in GF(q) (zero counts as a square)."""
        if self.is_zero():
            return True
        return (self ** ((self.ctx.q - 1) // 2)).encode() == 1

    def __lt__(self, other):
        self._check(other)
        return self.encode() < other.encode()

    def __le__(self, other):
        self._check(other)
        return self.encode() <= other.encode()

    def __repr__(self):
        return f"<{self.encode()} in GF({self.ctx.q})>"


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def field_create(p: int, r: int) -> FieldCtx:
    """GF(p^r) with the canonical modulus.

    The modulus is the first monic irreducible degree-r polynomial when the
    non-leading coefficient vectors are scanned in increasing integer encoding;
    for r = 1 it is t itself.
    """
    if not isinstance(p, int) or not _is_prime(p) or p == 2:
        raise InvalidCharacteristic(f"p = {p} is not an odd prime")
    if not isinstance(r, int) or r < 1:
        raise InvalidDegree(f"r = {r} must be a positive integer")
    if r == 1:
        return FieldCtx(p, 1, (0, 1))
    for enc in range(p**r):
        tail = []
        n = enc
        for _ in range(r):
            n, c = divmod(n, p)
            tail.append(c)
        m = tail + [1]
        if _is_irreducible(m, p):
            return FieldCtx(p, r, tuple(m))
    raise RuntimeError("unreachable: GF(p^r) always has an irreducible modulus")


def arith(a: FieldElement, b: FieldElement | None, kind: str) -> FieldElement:
    """Dispatch-style arithmetic: kind ∈ {add, sub, mul, div, inv, neg}."""
    if kind == "inv":
        return a.inv()
    if kind == "neg":
        return -a
    if b is None:
        raise TypeError(f"binary operation {kind!r} needs a second operand")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def frobenius(a: FieldElement, k: int = 1) -> FieldElement:
    """a^(p^k); k reduced mod r since the Frobenius has order r."""
    if k < 0:
        raise ValueError("Frobenius power must be non-negative")
    k %= a.ctx.r
    out = a
    for _ in range(k):
        out = out ** a.ctx.p
    return out


def encode(a: FieldElement) -> int:
    """Integer encoding sum(coeffs[i] * p^i); defines the element order."""
    return a.encode()
