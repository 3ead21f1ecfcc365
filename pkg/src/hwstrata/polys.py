"""Univariate polynomials and homogeneous binary forms over GF(q).

``Poly`` is a dense coefficient vector (low-to-high, trailing zeros stripped,
the zero polynomial has no coefficients). ``BinaryForm`` of degree n stores
n+1 coefficients where index k holds the coefficient of x^k z^(n-k); forms
carry the branch divisors of hyperelliptic models, including the root at
infinity that an odd-degree model keeps at z = 0.

The fixed comparison order used for every canonical minimum in the package:
lower degree first, then coefficient encodings from the constant term upward.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DivisionByZero,
    FieldMismatch,
    InvalidInput,
    SingularTransform,
)
from .fields import FieldCtx, FieldElement

__all__ = [
    "Poly",
    "BinaryForm",
    "poly_pow",
    "roots_in_fq",
    "is_squarefree",
    "substitute_linear",
    "mobius_image",
    "order_key",
    "poly_to_str",
    "poly_from_str",
]


@dataclass(frozen=True)
class Poly:
    """Polynomial over GF(q); coeffs low-to-high with nonzero top coefficient."""

    coeffs: tuple[FieldElement, ...]
    ctx: FieldCtx

    @staticmethod
    def make(coeffs: Iterable, ctx: FieldCtx) -> "Poly":
        """Build from ints/elements, stripping trailing zeros."""
        vec = [ctx.element(c) for c in coeffs]
        while vec and vec[-1].is_zero():
            vec.pop()
        return Poly(tuple(vec), ctx)

    @staticmethod
    def from_encodings(encs: Iterable[int], ctx: FieldCtx) -> "Poly":
        return Poly.make([ctx.decode(e) for e in encs], ctx)

    @staticmethod
    def zero(ctx: FieldCtx) -> "Poly":
        return Poly((), ctx)

    @staticmethod
    def x(ctx: FieldCtx) -> "Poly":
        return Poly.make([0, 1], ctx)

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> FieldElement:
        """Coefficient of x^k (zero outside the stored range)."""
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.ctx.zero()

    def encodings(self) -> tuple[int, ...]:
        return tuple(c.encode() for c in self.coeffs)

    def _check(self, other: "Poly") -> None:
        if other.ctx != self.ctx:
            raise FieldMismatch("polynomials over different fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly.make(
            [self.coeff(i) + other.coeff(i) for i in range(n)], self.ctx
        )

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly.make(
            [self.coeff(i) - other.coeff(i) for i in range(n)], self.ctx
        )

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs), self.ctx)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.ctx)
        out = [self.ctx.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(tuple(out), self.ctx)

    def scale(self, c: FieldElement) -> "Poly":
        """Multiply every coefficient by the scalar c."""
        if c.is_zero():
            return Poly.zero(self.ctx)
        return Poly(tuple(a * c for a in self.coeffs), self.ctx)

    def evaluate(self, x: FieldElement) -> FieldElement:
        acc = self.ctx.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        if len(self.coeffs) <= 1:
            return Poly.zero(self.ctx)
        out = []
        for k in range(1, len(self.coeffs)):
            out.append(self.coeffs[k] * self.ctx.element(k))
        return Poly.make(out, self.ctx)

    def monic(self) -> "Poly":
        if self.is_zero():
            raise InvalidInput("the zero polynomial has no monic form")
        lead = self.coeffs[-1]
        if lead.encode() == 1:
            return self
        return self.scale(lead.inv())

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd by the Euclidean algorithm."""
        self._check(other)
        a, b = self, other
        while not b.is_zero():
            a, b = b, a._rem(b)
        if a.is_zero():
            return a
        return a.monic()

    def _rem(self, other: "Poly") -> "Poly":
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        inv_lead = other.coeffs[-1].inv()
        while len(rem) - 1 >= d and rem:
            if rem[-1].is_zero():
                rem.pop()
                continue
            c = rem[-1] * inv_lead
            shift = len(rem) - 1 - d
            for i, bi in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - c * bi
            rem.pop()
        return Poly.make(rem, self.ctx)

    def __repr__(self):
        return f"Poly({poly_to_str(self)})"


def poly_pow(f: Poly, e: int) -> Poly:
    """f^e by repeated squaring; 0^0 = 1 by convention."""
    if e < 0:
        raise InvalidInput("negative polynomial power")
    result = Poly.make([1], f.ctx)
    base = f
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


def roots_in_fq(f: Poly) -> set[FieldElement]:
    """All roots of f in the base field, found by exhaustive evaluation."""
    if f.is_zero():
        raise InvalidInput("the zero polynomial vanishes everywhere")
    return {x for x in f.ctx.elements() if f.evaluate(x).is_zero()}


def is_squarefree(f: Poly) -> bool:
    """True iff gcd(f, f') is constant, i.e. f has no repeated root anywhere."""
    if f.degree < 1:
        raise InvalidInput("squarefreeness is about polynomials of degree >= 1")
    g = f.gcd(f.derivative())
    return g.degree == 0


def substitute_linear(f: Poly, a: FieldElement, mode: str) -> Poly:
    """Affine reparametrizations used by the canonicalization pipeline.

    mode='shift' returns f(x - a); mode='scale' returns a^deg(f) * f(x/a).
    """
    ctx = f.ctx
    if mode == "shift":
        # Taylor shift by -a via repeated synthetic division (Horner scheme)
        b = list(f.coeffs)
        n = len(b)
        c = -a
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                b[j] = b[j] + c * b[j + 1]
        return Poly.make(b, ctx)
    if mode == "scale":
        if a.is_zero():
            raise DivisionByZero("scale by zero")
        out = []
        d = f.degree
        power = ctx.one()
        scaled = [None] * (d + 1)
        for j in range(d, -1, -1):
            scaled[j] = f.coeff(j) * power
            power = power * a
        return Poly.make(scaled, ctx)
    raise ValueError(f"unknown substitution mode {mode!r}")


def order_key(f: Poly) -> tuple:
    """Comparison key: degree first (lower first), then encodings from x^0 up."""
    return (f.degree,) + f.encodings()


# ---------------------------------------------------------------------------
# binary forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form of degree n; coeffs[k] multiplies x^k z^(n-k)."""

    coeffs: tuple[FieldElement, ...]
    ctx: FieldCtx

    @staticmethod
    def make(coeffs: Sequence, ctx: FieldCtx) -> "BinaryForm":
        vec = tuple(ctx.element(c) for c in coeffs)
        if all(c.is_zero() for c in vec):
            raise InvalidInput("the zero form is not a valid branch divisor")
        return BinaryForm(vec, ctx)

    @staticmethod
    def from_poly(f: Poly, n: int | None = None) -> "BinaryForm":
        """Homogenize to degree n (default: deg f rounded up to even)."""
        if f.is_zero():
            raise InvalidInput("cannot homogenize the zero polynomial")
        d = f.degree
        if n is None:
            n = d + (d % 2)
        if n < d:
            raise InvalidInput(f"target degree {n} below deg f = {d}")
        return BinaryForm.make([f.coeff(k) for k in range(n + 1)], f.ctx)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def encodings(self) -> tuple[int, ...]:
        return tuple(c.encode() for c in self.coeffs)

    def affine(self) -> Poly:
        """Dehomogenize at z = 1."""
        return Poly.make(list(self.coeffs), self.ctx)

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        if other.ctx != self.ctx:
            raise FieldMismatch("forms over different fields")
        out = [self.ctx.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return BinaryForm(tuple(out), self.ctx)

    def normalized(self) -> "BinaryForm":
        """Scale so the lowest-index nonzero coefficient equals 1."""
        for c in self.coeffs:
            if not c.is_zero():
                if c.encode() == 1:
                    return self
                inv = c.inv()
                return BinaryForm(tuple(a * inv for a in self.coeffs), self.ctx)
        raise InvalidInput("zero form")

    def evaluate(self, x: FieldElement, z: FieldElement) -> FieldElement:
        acc = self.ctx.zero()
        n = self.degree
        # sum coeffs[k] x^k z^(n-k), Horner in x with z powers precomputed
        zp = [self.ctx.one()]
        for _ in range(n):
            zp.append(zp[-1] * z)
        xp = self.ctx.one()
        for k in range(n + 1):
            acc = acc + self.coeffs[k] * xp * zp[n - k]
            xp = xp * x
        return acc

    def order_tuple(self) -> tuple[int, ...]:
        """Encodings from index 0 upward — the fixed comparison order for forms."""
        return self.encodings()

    def __repr__(self):
        return f"BinaryForm(deg={self.degree}, {self.encodings()})"


def mobius_image(f, M) -> BinaryForm:
    """The form f ∘ M⁻¹, normalized so its lowest nonzero coefficient is 1.

    M is ((a, b), (c, d)) of FieldElements acting by x ↦ (ax+b)/(cx+d); the
    image form has exactly the M-images of f's roots (including z = 0 = ∞).
    A Poly input is first homogenized to even degree (odd-degree models carry
    a branch point at infinity).
    """
    if isinstance(f, Poly):
        form = BinaryForm.from_poly(f)
    else:
        form = f
    ctx = form.ctx
    (a, b), (c, d) = M
    det = a * d - b * c
    if det.is_zero():
        raise SingularTransform("Möbius matrix has zero determinant")
    # f ∘ M⁻¹ with the adjugate ((d, -b), (-c, a)): substitute
    #   x ↦ d·x − b·z,   z ↦ −c·x + a·z
    n = form.degree
    u = BinaryForm((-b, d), ctx)   # d·x − b·z   (index 0: z-coeff, index 1: x-coeff)
    v = BinaryForm((a, -c), ctx)   # −c·x + a·z
    u_pows = [BinaryForm((ctx.one(),), ctx)]
    v_pows = [BinaryForm((ctx.one(),), ctx)]
    for _ in range(n):
        u_pows.append(u_pows[-1] * u)
        v_pows.append(v_pows[-1] * v)
    out = [ctx.zero()] * (n + 1)
    for k in range(n + 1):
        ck = form.coeffs[k]
        if ck.is_zero():
            continue
        term = u_pows[k] * v_pows[n - k]
        for i, t in enumerate(term.coeffs):
            out[i] = out[i] + ck * t
    return BinaryForm(tuple(out), ctx).normalized()


# ---------------------------------------------------------------------------
# textual format (test fixtures, CLI echo)
# ---------------------------------------------------------------------------

def poly_to_str(f: Poly) -> str:
    """Render as `c0 + c1*x + c2*x^2 + ...` with coefficient encodings."""
    if f.is_zero():
        return "0"
    parts = []
    for k, c in enumerate(f.coeffs):
        e = c.encode()
        if e == 0:
            continue
        if k == 0:
            parts.append(str(e))
        elif k == 1:
            parts.append(f"{e}*x" if e != 1 else "x")
        else:
            parts.append(f"{e}*x^{k}" if e != 1 else f"x^{k}")
    return " + ".join(parts)


def poly_from_str(s: str, ctx: FieldCtx) -> Poly:
    """Parse the poly_to_str format (whitespace-insensitive)."""
    s = s.replace(" ", "")
    if s in ("", "0"):
        return Poly.zero(ctx)
    coeffs: dict[int, int] = {}
    for term in s.split("+"):
        if not term:
            continue
        if "x" not in term:
            coeffs[0] = coeffs.get(0, 0) + int(term)
            continue
        head, _, tail = term.partition("x")
        c = int(head.rstrip("*")) if head.rstrip("*") else 1
        k = int(tail.lstrip("^")) if tail else 1
        coeffs[k] = coeffs.get(k, 0) + c
    top = max(coeffs)
    vec = [0] * (top + 1)
    for k, c in coeffs.items():
        vec[k] = c % ctx.q
    return Poly.make([ctx.decode(c) for c in vec], ctx)
