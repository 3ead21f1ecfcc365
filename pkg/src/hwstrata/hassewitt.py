"""Hasse-Witt matrices and p-ranks of hyperelliptic curves y² = f(x).

For a smooth model of genus g over GF(q), q = p^r, the matrix A has entries
a_{i,j} = c_{jp-i} (1 ≤ i, j ≤ g) where the c_m are the coefficients of
f^((p-1)/2); coefficients outside the expansion are zero.  The p-rank of the
curve is the rank of the g-fold semilinear power A · A^σ · ... · A^(σ^(g-1)),
with σ raising entries to the p-th power.  Over a prime field this collapses
to the ordinary matrix power A^g.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidDegree, ShapeError, SingularCurve
from .fields import FieldCtx, FieldElement, frobenius
from .polys import Poly, is_squarefree, poly_pow

__all__ = [
    "CurveModel",
    "HWMatrix",
    "PRank",
    "hasse_witt",
    "semilinear_power",
    "rank",
    "p_rank",
]


@dataclass(frozen=True)
class CurveModel:
    """Smooth hyperelliptic model y² = f(x) with deg f ∈ {2g+1, 2g+2}."""

    f: Poly
    genus: int
    ctx: FieldCtx

    @staticmethod
    def make(f: Poly) -> "CurveModel":
        d = f.degree
        if d < 3:
            raise InvalidDegree(f"deg f = {d} gives genus < 1")
        if not is_squarefree(f):
            raise SingularCurve("f has a repeated root; the model is singular")
        return CurveModel(f, (d - 1) // 2, f.ctx)


@dataclass(frozen=True)
class HWMatrix:
    """Square matrix of field elements, stored as a tuple of row tuples."""

    entries: tuple[tuple[FieldElement, ...], ...]
    ctx: FieldCtx

    @staticmethod
    def make(rows, ctx: FieldCtx) -> "HWMatrix":
        g = len(rows)
        out = []
        for row in rows:
            if len(row) != g:
                raise ShapeError("matrix is not square")
            out.append(tuple(ctx.element(v) for v in row))
        return HWMatrix(tuple(out), ctx)

    @property
    def dim(self) -> int:
        return len(self.entries)

    @staticmethod
    def identity(g: int, ctx: FieldCtx) -> "HWMatrix":
        one, zero = ctx.one(), ctx.zero()
        return HWMatrix(
            tuple(
                tuple(one if i == j else zero for j in range(g))
                for i in range(g)
            ),
            ctx,
        )

    def __matmul__(self, other: "HWMatrix") -> "HWMatrix":
        if other.dim != self.dim or other.ctx != self.ctx:
            raise ShapeError("matrix dimensions or fields differ")
        g = self.dim
        rows = []
        for i in range(g):
            row = []
            for j in range(g):
                acc = self.ctx.zero()
                for k in range(g):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(tuple(row))
        return HWMatrix(tuple(rows), self.ctx)

    def frobenius_twist(self, k: int = 1) -> "HWMatrix":
        """Apply x ↦ x^(p^k) to every entry."""
        return HWMatrix(
            tuple(tuple(frobenius(a, k) for a in row) for row in self.entries),
            self.ctx,
        )

    def encodings(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(a.encode() for a in row) for row in self.entries)


@dataclass(frozen=True)
class PRank:
    """p-rank value in [0, genus]; the curve is ordinary iff value = genus."""

    value: int
    genus: int

    @property
    def ordinary(self) -> bool:
        return self.value == self.genus


def hasse_witt(c: CurveModel) -> HWMatrix:
    """Matrix a_{i,j} = c_{jp−i} (1 ≤ i,j ≤ g) of f^((p−1)/2)."""
    p = c.ctx.p
    g = c.genus
    h = poly_pow(c.f, (p - 1) // 2)
    rows = []
    for i in range(1, g + 1):
        rows.append(tuple(h.coeff(j * p - i) for j in range(1, g + 1)))
    return HWMatrix(tuple(rows), c.ctx)


def semilinear_power(A: HWMatrix, g: int) -> HWMatrix:
    """A · A^σ · ... · A^(σ^(g−1)) with σ the entrywise p-power map."""
    if A.dim != g:
        raise ShapeError(f"expected a {g}x{g} matrix, got {A.dim}x{A.dim}")
    result = A
    for k in range(1, g):
        result = result @ A.frobenius_twist(k)
    return result


def rank(A: HWMatrix) -> int:
    """Rank over GF(q) by Gaussian elimination (exact field arithmetic)."""
    g = A.dim
    rows = [list(r) for r in A.entries]
    rnk = 0
    col = 0
    for col in range(g):
        pivot = None
        for i in range(rnk, g):
            if not rows[i][col].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        rows[rnk], rows[pivot] = rows[pivot], rows[rnk]
        inv = rows[rnk][col].inv()
        rows[rnk] = [v * inv for v in rows[rnk]]
        for i in range(g):
            if i == rnk or rows[i][col].is_zero():
                continue
            c = rows[i][col]
            rows[i] = [a - c * b for a, b in zip(rows[i], rows[rnk])]
        rnk += 1
        if rnk == g:
            break
    return rnk


def p_rank(c: CurveModel) -> PRank:
    """Rank of the g-fold semilinear power of the Hasse-Witt matrix."""
    A = hasse_witt(c)
    return PRank(rank(semilinear_power(A, c.genus)), c.genus)
