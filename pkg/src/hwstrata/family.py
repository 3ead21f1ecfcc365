"""The coefficient-box family of pointed hyperelliptic curves and its dedup.

Members are monic f of degree 2g+1 with zero x^(2g) coefficient and equal
nonzero coefficients alpha at x^(2g-1) and x^(2g-2) — a box of size
(q-1)·q^(2g-2) that meets every isomorphism class it can reach in at most a
handful of points.  Canonicalization walks, for each rational root rho of f,
the chain: send rho to infinity via x ↦ rho + 1/x, rescale monic, kill the
x^(2g) term by a translation, and rescale x so the two marker coefficients
become equal again; the minimum of the original and all such images (under
the degree-then-constant-first order) names the class.

Requires p ∤ 2g+1 (the translation step divides by 2g+1); other genera fall
back to the split-configuration sampler.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import InvalidInput, MethodUnavailable, SingularCurve
from .fields import FieldCtx, FieldElement
from .polys import Poly, is_squarefree, order_key, roots_in_fq, substitute_linear

__all__ = [
    "FamilyCurve",
    "CanonicalKey",
    "sample_family",
    "is_in_family",
    "canonical_key",
    "enumerate_family",
    "family_box_size",
]


def _require_admissible(g: int, ctx: FieldCtx) -> None:
    if g < 1:
        raise InvalidInput(f"genus {g} < 1")
    if (2 * g + 1) % ctx.p == 0:
        raise MethodUnavailable(
            f"p = {ctx.p} divides 2g+1 = {2 * g + 1}; "
            "use the split-configuration sampler for this prime"
        )


@dataclass(frozen=True)
class FamilyCurve:
    """A family member: monic deg-(2g+1) f with the two marker coefficients."""

    g: int
    f: Poly
    alpha: FieldElement
    ctx: FieldCtx

    @staticmethod
    def make(f: Poly, g: int) -> "FamilyCurve":
        _require_admissible(g, f.ctx)
        if not is_in_family(f, g):
            raise InvalidInput("polynomial is not in the family shape")
        if not is_squarefree(f):
            raise SingularCurve("family member must be squarefree")
        return FamilyCurve(g, f, f.coeff(2 * g - 1), f.ctx)


@dataclass(frozen=True, order=True)
class CanonicalKey:
    """Coefficient encodings (constant term first) of the class minimum."""

    encodings: tuple[int, ...]

    def poly(self, ctx: FieldCtx) -> Poly:
        return Poly.from_encodings(self.encodings, ctx)


def is_in_family(f: Poly, g: int) -> bool:
    """Shape test: monic deg 2g+1, zero x^(2g), equal nonzero markers."""
    d = 2 * g + 1
    if f.degree != d or f.coeff(d).encode() != 1:
        return False
    if not f.coeff(2 * g).is_zero():
        return False
    a1 = f.coeff(2 * g - 1)
    a2 = f.coeff(2 * g - 2)
    return (not a1.is_zero()) and a1 == a2


def sample_family(g: int, ctx: FieldCtx, rng: random.Random) -> FamilyCurve:
    """Uniform draw from the admissible box, redrawn until squarefree.

    alpha is uniform over GF(q)^x, the 2g-2 low coefficients (degrees
    0..2g-3) uniform over GF(q); the draw sequence is fully determined by
    the rng state.
    """
    _require_admissible(g, ctx)
    q = ctx.q
    d = 2 * g + 1
    while True:
        alpha = ctx.decode(1 + rng.randrange(q - 1))
        coeffs = [ctx.decode(rng.randrange(q)) for _ in range(2 * g - 2)]
        vec = coeffs + [alpha, alpha, ctx.zero(), ctx.one()]
        f = Poly(tuple(vec), ctx)
        if is_squarefree(f):
            return FamilyCurve(g, f, alpha, ctx)


def _root_candidates(f: Poly, g: int) -> list[Poly]:
    """One family-shaped image per rational root of f (skipping degenerate ones)."""
    ctx = f.ctx
    n = 2 * g + 1
    inv_n = ctx.element(n).inv()
    out = []
    for rho in sorted(roots_in_fq(f), key=lambda e: e.encode()):
        taylor = substitute_linear(f, -rho, "shift")  # f(x + rho); coeff 0 vanishes
        # x^(2g+2) · f(rho + 1/x): reverse the nonconstant Taylor coefficients
        vec = [ctx.zero()] + [taylor.coeff(m) for m in range(n, 0, -1)]
        ft = Poly.make(vec, ctx).monic()  # top coeff is f'(rho) ≠ 0 (squarefree)
        alpha0 = ft.coeff(2 * g) * inv_n
        ft = substitute_linear(ft, alpha0, "shift")  # now the x^(2g) term is zero
        a = ft.coeff(2 * g - 1)
        b = ft.coeff(2 * g - 2)
        if a.is_zero() or b.is_zero():
            continue
        u = a / b
        out.append(substitute_linear(ft, u, "scale"))  # u^(2g+1) · ft(x/u)
    return out


def canonical_key(c: FamilyCurve) -> CanonicalKey:
    """Minimum of the curve and all its root-images under the fixed order."""
    best = c.f
    for cand in _root_candidates(c.f, c.g):
        if order_key(cand) < order_key(best):
            best = cand
    return CanonicalKey(tuple(best.coeff(k).encode() for k in range(2 * c.g + 2)))


def family_box_size(g: int, q: int) -> int:
    """Number of admissible coefficient vectors: (q-1)·q^(2g-2)."""
    return (q - 1) * q ** (2 * g - 2)


def enumerate_family(g: int, ctx: FieldCtx):
    """Yield one FamilyCurve per canonical key, walking the whole box.

    The representative yielded is the key polynomial itself; iteration order
    is by first discovery in the fixed box order, so repeated runs agree.
    """
    _require_admissible(g, ctx)
    q = ctx.q
    seen: set[CanonicalKey] = set()
    zero, one = ctx.zero(), ctx.one()
    for a_enc in range(1, q):
        alpha = ctx.decode(a_enc)
        for lows in itertools.product(range(q), repeat=2 * g - 2):
            vec = [ctx.decode(e) for e in lows] + [alpha, alpha, zero, one]
            f = Poly(tuple(vec), ctx)
            if not is_squarefree(f):
                continue
            key = canonical_key(FamilyCurve(g, f, alpha, ctx))
            if key in seen:
                continue
            seen.add(key)
            yield FamilyCurve.make(key.poly(ctx), g)
