"""Fully-split branch configurations, one per isomorphism class.

A configuration is {∞, 0, a₃, …, a_{2g+2}} ⊂ P¹(GF(q)) with the a_i distinct
and nonzero; the attached curve is y² = x·∏(x − a_i), whose branch divisor
splits completely over the base field.  For such curves rational and
geometric isomorphism coincide, so classes can be enumerated by pure
PGL₂-orbit bookkeeping: a configuration is accepted iff its own normalized
form is the minimum over all (2g+2)(2g+1)(2g) three-point renormalizations
of itself (send any ordered pair of branch points to ∞ and 0, a third to 1)
and no two of those renormalizations coincide (trivial stabilizer).

Requires q > 2g+1 — fewer nonzero field elements cannot host 2g distinct
finite roots besides 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import FieldTooSmall, InvalidInput
from .fields import FieldCtx, FieldElement
from .polys import BinaryForm, Poly, mobius_image

__all__ = [
    "BranchConfig",
    "OrbitSet",
    "orbit_set",
    "has_trivial_automorphisms",
    "stabilizer_order",
    "enumerate_split",
    "split_configs",
    "triple_transform",
]

# projective points are (x, z) pairs with z ∈ {0, 1}: (1, 0) is ∞, (a, 1) is a


@dataclass(frozen=True)
class BranchConfig:
    """Branch points {∞, 0} ∪ roots with the roots distinct and nonzero."""

    g: int
    roots: tuple[FieldElement, ...]
    ctx: FieldCtx

    @staticmethod
    def make(g: int, roots, ctx: FieldCtx) -> "BranchConfig":
        if g < 1:
            raise InvalidInput(f"genus {g} < 1")
        vec = sorted((ctx.element(a) for a in roots), key=lambda e: e.encode())
        if len(vec) != 2 * g:
            raise InvalidInput(f"need 2g = {2 * g} finite nonzero roots")
        if any(a.is_zero() for a in vec):
            raise InvalidInput("0 is already a branch point")
        if len({a.encode() for a in vec}) != len(vec):
            raise InvalidInput("branch points must be distinct")
        return BranchConfig(g, tuple(vec), ctx)

    def points(self) -> list[tuple[FieldElement, FieldElement]]:
        """All 2g+2 branch points, ∞ and 0 first."""
        one, zero = self.ctx.one(), self.ctx.zero()
        return [(one, zero), (zero, one)] + [(a, one) for a in self.roots]

    def form(self) -> BinaryForm:
        """z · x · ∏(x − a_i z), the degree-(2g+2) branch divisor form."""
        ctx = self.ctx
        acc = BinaryForm((ctx.one(), ctx.zero()), ctx)          # z
        acc = acc * BinaryForm((ctx.zero(), ctx.one()), ctx)    # x
        for a in self.roots:
            acc = acc * BinaryForm((-a, ctx.one()), ctx)        # x − a·z
        return acc

    def affine_poly(self) -> Poly:
        """x · ∏(x − a_i): the monic fully-split curve equation."""
        return self.form().affine()


def _det(P, Q) -> FieldElement:
    return P[0] * Q[1] - P[1] * Q[0]


def triple_transform(Pi, Pj, Pk):
    """Matrix of the unique Möbius map with Pi ↦ ∞, Pj ↦ 0, Pk ↦ 1."""
    k1 = _det(Pk, Pi)
    k2 = _det(Pk, Pj)
    return ((k1 * Pj[1], -(k1 * Pj[0])), (k2 * Pi[1], -(k2 * Pi[0])))


@dataclass(frozen=True)
class OrbitSet:
    """Multiset of normalized renormalization images, as encoding tuples."""

    forms: tuple[tuple[int, ...], ...]

    def min_form(self) -> tuple[int, ...]:
        return min(self.forms)

    def has_duplicates(self) -> bool:
        return len(set(self.forms)) != len(self.forms)


def orbit_set(b: BranchConfig) -> OrbitSet:
    """Images of the form under every ordered branch triple (→ ∞, 0, 1)."""
    f = b.form()
    pts = b.points()
    out = []
    for Pi, Pj, Pk in itertools.permutations(pts, 3):
        M = triple_transform(Pi, Pj, Pk)
        out.append(mobius_image(f, M).encodings())
    return OrbitSet(tuple(out))


def _matmul2(A, B):
    (a, b), (c, d) = A
    (e, f), (g, h) = B
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _adjugate(M):
    (a, b), (c, d) = M
    return ((d, -b), (-c, a))


def _apply(M, P):
    (a, b), (c, d) = M
    return (a * P[0] + b * P[1], c * P[0] + d * P[1])


def _normalize_point(P, ctx: FieldCtx):
    x, z = P
    if z.is_zero():
        return (1, 0)
    return ((x / z).encode(), 1)


def stabilizer_order(b: BranchConfig) -> int:
    """|{γ ∈ PGL₂(GF(q)) : γ permutes the branch points}| by direct search.

    Every stabilizer element is pinned by where it sends ∞, 0 and the
    smallest finite root, so running over ordered triples of branch points
    hits each exactly once.
    """
    ctx = b.ctx
    pts = b.points()
    base = frozenset(_normalize_point(P, ctx) for P in pts)
    anchor = triple_transform(pts[0], pts[1], pts[2])
    count = 0
    for P, Q, R in itertools.permutations(pts, 3):
        M = _matmul2(_adjugate(triple_transform(P, Q, R)), anchor)
        image = frozenset(
            _normalize_point(_apply(M, point), ctx) for point in pts
        )
        if image == base:
            count += 1
    return count


def has_trivial_automorphisms(b: BranchConfig) -> bool:
    """True iff only the identity renormalization fixes the branch divisor."""
    return stabilizer_order(b) == 1


def _colex_subsets(n_max: int, k: int):
    """k-subsets of {1..n_max} in colexicographic order (largest element last)."""
    if k == 0:
        yield ()
        return
    for top in range(k, n_max + 1):
        for rest in _colex_subsets(top - 1, k - 1):
            yield rest + (top,)


# ---------------------------------------------------------------------------
# prime-field fast path: the same orbit scan on machine ints
# ---------------------------------------------------------------------------

_INF = -1


def _form_key_prime(p: int, finite_roots) -> tuple[int, ...]:
    """Normalized-form encoding tuple for roots {∞, 0} ∪ finite_roots, mod p."""
    coeffs = [1]
    for c in finite_roots:
        nc = (-c) % p
        new = [0] * (len(coeffs) + 1)
        for idx, v in enumerate(coeffs):
            new[idx] = (new[idx] + v * nc) % p
            new[idx + 1] = (new[idx + 1] + v) % p
        coeffs = new
    inv0 = pow(coeffs[0], p - 2, p)
    return (0,) + tuple((v * inv0) % p for v in coeffs) + (0,)


def _scan_config_prime(p: int, roots: tuple[int, ...]) -> bool:
    """Acceptance test (own form minimal, trivial stabilizer) over GF(p)."""
    pts = [(1, 0), (0, 1)] + [(a, 1) for a in roots]
    own = _form_key_prime(p, roots)
    keys = []
    n = len(pts)
    for i in range(n):
        xi, zi = pts[i]
        for j in range(n):
            if j == i:
                continue
            xj, zj = pts[j]
            for k in range(n):
                if k == i or k == j:
                    continue
                xk, zk = pts[k]
                k1 = (xk * zi - zk * xi) % p
                k2 = (xk * zj - zk * xj) % p
                a = (k1 * zj) % p
                b = (-k1 * xj) % p
                c = (k2 * zi) % p
                d = (-k2 * xi) % p
                cs = []
                for x, z in pts:
                    nx = (a * x + b * z) % p
                    nz = (c * x + d * z) % p
                    if nz and nx:
                        cs.append((nx * pow(nz, p - 2, p)) % p)
                key = _form_key_prime(p, cs)
                if key < own:
                    return False
                keys.append(key)
    if own not in keys:
        return False
    return len(set(keys)) == len(keys)


def split_configs(g: int, ctx: FieldCtx):
    """All fully-split configurations, in colex order of root encodings."""
    if ctx.q <= 2 * g + 1:
        raise FieldTooSmall(
            f"q = {ctx.q} ≤ 2g+1 = {2 * g + 1}: not enough nonzero roots"
        )
    for combo in _colex_subsets(ctx.q - 1, 2 * g):
        roots = tuple(ctx.decode(e) for e in combo)
        yield BranchConfig(g, roots, ctx)


def enumerate_split(g: int, ctx: FieldCtx, s: int | None = None) -> list[Poly]:
    """One monic fully-split f per isomorphism class, smallest configs first.

    Acceptance: the configuration's own normalized form equals the minimum
    of its orbit set, and the orbit images are pairwise distinct (any
    coincidence Γ₁(f) = Γ₂(f) exhibits the nontrivial stabilizer element
    Γ₂⁻¹Γ₁).  Stops after s curves when s is given.
    """
    if g < 2:
        raise InvalidInput("the split-configuration method needs genus ≥ 2")
    out: list[Poly] = []
    if ctx.r == 1:
        # same scan on machine ints; encodings are the elements themselves
        if ctx.q <= 2 * g + 1:
            raise FieldTooSmall(
                f"q = {ctx.q} ≤ 2g+1 = {2 * g + 1}: not enough nonzero roots"
            )
        for combo in _colex_subsets(ctx.q - 1, 2 * g):
            if not _scan_config_prime(ctx.p, combo):
                continue
            b = BranchConfig(
                g, tuple(ctx.decode(e) for e in combo), ctx
            )
            out.append(b.affine_poly())
            if s is not None and len(out) >= s:
                return out
        return out
    for b in split_configs(g, ctx):
        orb = orbit_set(b)
        own = b.form().normalized().encodings()
        if own != orb.min_form():
            continue
        if orb.has_duplicates():
            continue
        out.append(b.affine_poly())
        if s is not None and len(out) >= s:
            break
    return out
