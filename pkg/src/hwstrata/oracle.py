"""Brute-force cross-checks: point counting, L-polynomials, isomorphism search.

Everything here is deliberately exhaustive and exact — the point is to be
obviously correct on small inputs, so the fast path can be tested against it.
The p-rank comes out as the degree of the zeta numerator L(T) reduced mod p
(the count of p-adic unit Frobenius eigenvalues), a route completely
independent of the Hasse-Witt computation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OracleTooLarge
from .fields import FieldCtx, FieldElement, field_create
from .polys import BinaryForm, Poly

__all__ = [
    "ZetaData",
    "count_points",
    "zeta_data",
    "oracle_p_rank",
    "brute_force_isomorphic",
    "pgl2_elements",
]

_POINT_LIMIT = 100_000
_ISO_Q_LIMIT = 13


@dataclass(frozen=True)
class ZetaData:
    """Counts over GF(q^i) for i = 1..g and the L(T) coefficients a₀..a_{2g}."""

    counts: tuple[int, ...]
    l_coeffs: tuple[int, ...]
    l_coeffs_mod_p: tuple[int, ...]


def _embed_map(ctx: FieldCtx, ext: FieldCtx):
    """Field embedding GF(p^r) → GF(p^(r·i)) as a coefficient-vector map.

    Sends the generator of ctx to the smallest-encoding root of ctx's modulus
    in ext (all roots are Frobenius-conjugate, so the choice only fixes a
    convention). Constants map to constants.
    """
    if ctx.r == 1:
        def embed(a: FieldElement) -> FieldElement:
            return ext.element(a.coeffs[0])
        return embed
    m = ctx.modulus  # int coefficients, monic
    root = None
    for cand in ext.elements():
        acc = ext.zero()
        for coef in reversed(m):
            acc = acc * cand + ext.element(coef)
        if acc.is_zero():
            root = cand
            break
    if root is None:  # r | r·i always holds, so a root must exist
        raise AssertionError("no root of subfield modulus found")

    def embed(a: FieldElement) -> FieldElement:
        acc = ext.zero()
        for coef in reversed(a.coeffs):
            acc = acc * root + ext.element(coef)
        return acc

    return embed


def count_points(c, i: int = 1) -> int:
    """#C(GF(q^i)) of the smooth projective model, by full enumeration.

    Affine points contribute 1 + χ(f(x)) each (χ(0) = 0); odd-degree models
    add one point at infinity, even-degree models add two or zero depending
    on whether the leading coefficient is a square in the extension.
    """
    ctx = c.ctx
    q_ext = ctx.q ** i
    if q_ext > _POINT_LIMIT:
        raise OracleTooLarge(f"q^i = {q_ext} exceeds the counting regime")
    if i == 1:
        ext = ctx
        coeffs = list(c.f.coeffs)
    else:
        ext = field_create(ctx.p, ctx.r * i)
        embed = _embed_map(ctx, ext)
        coeffs = [embed(a) for a in c.f.coeffs]
    nonzero_squares = set()
    for x in ext.elements():
        if not x.is_zero():
            nonzero_squares.add((x * x).encode())
    total = 0
    for x in ext.elements():
        acc = ext.zero()
        for coef in reversed(coeffs):
            acc = acc * x + coef
        if acc.is_zero():
            total += 1
        elif acc.encode() in nonzero_squares:
            total += 2
    if c.f.degree % 2 == 1:
        total += 1
    elif coeffs[-1].encode() in nonzero_squares:
        total += 2
    return total


def zeta_data(c) -> ZetaData:
    """Counts for i = 1..g and the exact + mod-p numerator coefficients."""
    g = c.genus
    q = c.ctx.q
    counts = tuple(count_points(c, i) for i in range(1, g + 1))
    power_sums = [q**i + 1 - counts[i - 1] for i in range(1, g + 1)]
    # Newton's identities: k·e_k = Σ_{j=1..k} (−1)^(j−1) e_{k−j} S_j
    e = [1] + [0] * g
    for k in range(1, g + 1):
        acc = 0
        for j in range(1, k + 1):
            acc += (-1) ** (j - 1) * e[k - j] * power_sums[j - 1]
        if acc % k:
            raise AssertionError("Newton identity gave a non-integer e_k")
        e[k] = acc // k
    a = [0] * (2 * g + 1)
    a[0] = 1
    for k in range(1, g + 1):
        a[k] = (-1) ** k * e[k]
    for k in range(g):
        a[2 * g - k] = q ** (g - k) * a[k]
    p = c.ctx.p
    return ZetaData(counts, tuple(a), tuple(v % p for v in a))


def oracle_p_rank(c) -> int:
    """Degree of L(T) mod p — the number of unit Frobenius eigenvalues."""
    reduced = zeta_data(c).l_coeffs_mod_p
    for k in range(len(reduced) - 1, -1, -1):
        if reduced[k]:
            return k
    return 0


def pgl2_elements(ctx: FieldCtx):
    """All q³−q elements of PGL₂(GF(q)), first nonzero entry scaled to 1."""
    one = ctx.one()
    zero = ctx.zero()
    elems = list(ctx.elements())
    out = []
    for b in elems:
        for cc in elems:
            for d in elems:
                if (one * d - b * cc).is_zero():
                    continue
                out.append(((one, b), (cc, d)))
    for cc in elems:
        if cc.is_zero():
            continue
        for d in elems:
            out.append(((zero, one), (cc, d)))
    return out


def _compose(form: BinaryForm, M) -> tuple[FieldElement, ...]:
    """Coefficients of F(ax+bz, cx+dz), unnormalized."""
    (a, b), (c, d) = M
    ctx = form.ctx
    n = form.degree
    u = BinaryForm((b, a), ctx)   # a·x + b·z
    v = BinaryForm((d, c), ctx)   # c·x + d·z
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
        for idx, t in enumerate(term.coeffs):
            out[idx] = out[idx] + ck * t
    return tuple(out)


def brute_force_isomorphic(f1: Poly, f2: Poly, g: int, ctx: FieldCtx) -> bool:
    """GF(q)-isomorphism of y² = f₁ and y² = f₂ by exhausting PGL₂ × scalars.

    The models are isomorphic iff some M sends the degree-(2g+2) homogenized
    form of f₁ to λ·(form of f₂) with λ a nonzero square: the substitution y
    picks up (cx+d)^(g+1) times a unit e, and only e² ever multiplies f.  A
    non-square λ would produce the quadratic twist instead.
    """
    if ctx.q > _ISO_Q_LIMIT:
        raise OracleTooLarge(f"q = {ctx.q} exceeds the isomorphism-search regime")
    n = 2 * g + 2
    form1 = BinaryForm.make([f1.coeff(k) for k in range(n + 1)], ctx)
    form2 = BinaryForm.make([f2.coeff(k) for k in range(n + 1)], ctx)
    pivot = next(k for k, v in enumerate(form2.coeffs) if not v.is_zero())
    pivot_inv = form2.coeffs[pivot].inv()
    squares = set()
    for x in ctx.elements():
        if not x.is_zero():
            squares.add((x * x).encode())
    for M in pgl2_elements(ctx):
        image = _compose(form1, M)
        lam = image[pivot] * pivot_inv
        if lam.is_zero() or lam.encode() not in squares:
            continue
        if all((lam * form2.coeffs[k]) == image[k] for k in range(n + 1)):
            return True
    return False


def brute_force_same_up_to_twist(
    f1: Poly, f2: Poly, g: int, ctx: FieldCtx
) -> bool:
    """Like brute_force_isomorphic but with λ unrestricted (any nonzero).

    Accepts exactly when the models are GF(q)-isomorphic or quadratic twists
    of one another — the equivalence the reduced-model key actually refines,
    since the key chain never tracks the square class of the y-rescaling.
    """
    if ctx.q > _ISO_Q_LIMIT:
        raise OracleTooLarge(f"q = {ctx.q} exceeds the isomorphism-search regime")
    n = 2 * g + 2
    form1 = BinaryForm.make([f1.coeff(k) for k in range(n + 1)], ctx)
    form2 = BinaryForm.make([f2.coeff(k) for k in range(n + 1)], ctx)
    pivot = next(k for k, v in enumerate(form2.coeffs) if not v.is_zero())
    pivot_inv = form2.coeffs[pivot].inv()
    for M in pgl2_elements(ctx):
        image = _compose(form1, M)
        lam = image[pivot] * pivot_inv
        if lam.is_zero():
            continue
        if all((lam * form2.coeffs[k]) == image[k] for k in range(n + 1)):
            return True
    return False
