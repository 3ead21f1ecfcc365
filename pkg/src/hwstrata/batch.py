"""Vectorized GF(p^r) kernels for campaign-scale work.

Elements are int64 digit vectors along the last axis (length r, base-p
digits of the same polynomial representation the scalar layer uses), so a
batch of B polynomials of degree n is a (B, n+1, r) array.  Every routine
here is an exact re-implementation of a scalar counterpart (fields / polys /
hassewitt / family) and is required to be bit-identical to it; tests compare
the two layers on randomized batches.

Intermediate products stay far below 2^63 for the field sizes the campaigns
touch (q ≤ ~1700), so reductions happen once per convolution, not per term.
"""

from __future__ import annotations

import numpy as np

from .fields import FieldCtx

__all__ = ["FieldOps"]


class FieldOps:
    """Batched arithmetic bound to one field context."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.p = ctx.p
        self.r = ctx.r
        self.q = ctx.q
        # reduction table: digits of x^(r+k) mod modulus, k = 0..r-2
        r, p = self.r, self.p
        mod = [c % p for c in ctx.modulus]  # monic, length r+1
        rows = []
        # x^r ≡ -(m_0 + m_1 x + ... + m_{r-1} x^{r-1})
        cur = [(-c) % p for c in mod[:r]]
        for _ in range(max(r - 1, 0)):
            rows.append(list(cur))
            # multiply by x and reduce
            nxt = [0] + cur[: r - 1]
            top = cur[r - 1]
            nxt = [(nxt[i] + top * rows[0][i]) % p for i in range(r)]
            cur = nxt
        self.red = np.array(rows, dtype=np.int64).reshape(max(r - 1, 0), r)
        # frobenius table: digits of t^(i*p) mod modulus, i = 0..r-1
        frob = np.zeros((r, r), dtype=np.int64)
        frob[0, 0] = 1
        gen_pow = ctx.gen() ** p
        acc = ctx.one()
        for i in range(1, r):
            acc = acc * gen_pow
            frob[i] = np.array(acc.coeffs, dtype=np.int64)
        self.frob = frob
        self.pow_base = np.array([p**i for i in range(r)], dtype=np.int64)

    # -- elementwise field operations ------------------------------------

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(tuple(shape) + (self.r,), dtype=np.int64)

    def ones(self, shape) -> np.ndarray:
        out = self.zeros(shape)
        out[..., 0] = 1
        return out

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        """Product along the digit axis; broadcasts like elementwise ops."""
        r = self.r
        if r == 1:
            return (a * b) % self.p
        a, b = np.broadcast_arrays(a, b)
        conv = np.zeros(a.shape[:-1] + (2 * r - 1,), dtype=np.int64)
        for i in range(r):
            for j in range(r):
                conv[..., i + j] += a[..., i] * b[..., j]
        low = conv[..., :r]
        high = conv[..., r:]
        return (low + high @ self.red) % self.p

    def square(self, a):
        return self.mul(a, a)

    def pow_scalar(self, a, e: int):
        """a**e elementwise (e ≥ 0), square-and-multiply."""
        result = self.ones(a.shape[:-1])
        base = a % self.p
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.square(base)
            e >>= 1
        return result

    def inv(self, a):
        """Inverses via a^(q-2); zero maps to zero (callers mask)."""
        return self.pow_scalar(a, self.q - 2)

    def frobenius(self, a, k: int = 1):
        out = a % self.p
        for _ in range(k % self.r):
            out = out @ self.frob % self.p
        return out

    def is_zero(self, a) -> np.ndarray:
        return ~np.any(a != 0, axis=-1)

    def encode(self, a) -> np.ndarray:
        return a @ self.pow_base

    def decode(self, encs) -> np.ndarray:
        encs = np.asarray(encs, dtype=np.int64)
        out = np.zeros(encs.shape + (self.r,), dtype=np.int64)
        rest = encs
        for i in range(self.r):
            out[..., i] = rest % self.p
            rest = rest // self.p
        return out

    def elements(self) -> np.ndarray:
        """All q field elements as digits, in encoding order: shape (q, r)."""
        return self.decode(np.arange(self.q, dtype=np.int64))

    # -- batched polynomial kernels ---------------------------------------
    # polynomials: (..., n+1, r) coefficient-digit arrays, low-to-high

    def poly_eval(self, fs, xs):
        """Evaluate each f at each x: fs (B, n+1, r) × xs (E, r) → (B, E, r).

        Chunk callers keep B·E modest; this is a plain Horner sweep.
        """
        B, n1, _ = fs.shape
        acc = np.broadcast_to(
            fs[:, n1 - 1, None, :], (B, xs.shape[0], self.r)
        ).copy()
        pts = xs[None, :, :]
        for k in range(n1 - 2, -1, -1):
            acc = self.add(self.mul(acc, pts), fs[:, k, None, :])
        return acc

    def poly_mul_dense(self, F, f):
        """Rowwise product: F (B, D+1, r) × f (B, d+1, r) → (B, D+d+1, r)."""
        B, D1, _ = F.shape
        d1 = f.shape[1]
        out = np.zeros((B, D1 + d1 - 1, self.r), dtype=np.int64)
        if self.r == 1:
            for k in range(d1):
                out[:, k : k + D1, 0] += f[:, k, 0, None] * F[:, :, 0]
                out %= self.p
            return out
        for k in range(d1):
            prod = self.mul(f[:, k, None, :], F)
            out[:, k : k + D1, :] = self.add(out[:, k : k + D1, :], prod)
        return out

    def poly_degrees(self, fs) -> np.ndarray:
        """Degree per row (−1 for the zero polynomial)."""
        nz = np.any(fs != 0, axis=-1)  # (B, n+1)
        n1 = fs.shape[1]
        idx = np.arange(1, n1 + 1, dtype=np.int64)
        return np.max(np.where(nz, idx, 0), axis=1) - 1

    def poly_shift_up(self, fs, shifts):
        """Multiply row b by x^shifts[b] (shifts ≥ 0), same array width."""
        B, n1, _ = fs.shape
        dest = np.arange(n1, dtype=np.int64)[None, :] - shifts[:, None]
        valid = dest >= 0
        src = np.clip(dest, 0, n1 - 1)
        gathered = np.take_along_axis(fs, src[:, :, None], axis=1)
        return np.where(valid[:, :, None], gathered, 0)

    def leading_coeff(self, fs, degs):
        """Coefficient at degs[b] per row (degs ≥ 0): (B, r)."""
        idx = np.clip(degs, 0, fs.shape[1] - 1)
        return np.take_along_axis(fs, idx[:, None, None], axis=1)[:, 0, :]

    def squarefree_mask(self, fs) -> np.ndarray:
        """gcd(f, f') is constant, per row — cross-multiplication Euclid."""
        B, n1, _ = fs.shape
        # derivative
        mult = (np.arange(1, n1, dtype=np.int64) % self.p)[None, :, None]
        dfs = np.zeros_like(fs)
        dfs[:, : n1 - 1, :] = fs[:, 1:, :] * mult % self.p
        A = fs.copy()
        Bp = dfs
        dA = self.poly_degrees(A)
        dB = self.poly_degrees(Bp)
        # ensure deg A >= deg B by swapping where needed (derivative is lower anyway)
        for _ in range(2 * n1 + 2):
            active = (dB >= 0) & (dA >= dB)
            if not active.any():
                break
            lcA = self.leading_coeff(A, dA)
            lcB = self.leading_coeff(Bp, dB)
            shift = np.where(active, dA - dB, 0)
            shifted = self.poly_shift_up(Bp, shift)
            # A := lc(B)·A − lc(A)·x^(dA−dB)·B  (top coefficient cancels)
            newA = self.sub(
                self.mul(lcB[:, None, :], A), self.mul(lcA[:, None, :], shifted)
            )
            A = np.where(active[:, None, None], newA, A)
            dA = self.poly_degrees(A)
            # swap so deg A >= deg B again
            swap = dA < dB
            if swap.any():
                A2 = np.where(swap[:, None, None], Bp, A)
                B2 = np.where(swap[:, None, None], A, Bp)
                A, Bp = A2, B2
                dA2 = np.where(swap, dB, dA)
                dB2 = np.where(swap, dA, dB)
                dA, dB = dA2, dB2
        # remainder chain ended: gcd is A where B is zero; squarefree iff deg == 0
        return dA == 0

    def roots_pairs(self, fs, chunk_elems: int = 1 << 22):
        """(curve_index, root_encoding) pairs, in (curve, encoding) order."""
        B = fs.shape[0]
        elems = self.elements()
        step = max(1, chunk_elems // max(self.q, 1))
        idx_list = []
        enc_list = []
        for lo in range(0, B, step):
            vals = self.poly_eval(fs[lo : lo + step], elems)
            zero = self.is_zero(vals)  # (b, q)
            bi, ei = np.nonzero(zero)
            idx_list.append(bi + lo)
            enc_list.append(ei)
        if idx_list:
            return np.concatenate(idx_list), np.concatenate(enc_list)
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)

    def poly_taylor(self, fs, a):
        """Rowwise f(x − a): fs (P, n+1, r), a (P, r) — synthetic division."""
        out = fs.copy()
        n1 = fs.shape[1]
        c = self.neg(a)
        for i in range(n1 - 1):
            for j in range(n1 - 2, i - 1, -1):
                out[:, j, :] = self.add(out[:, j, :], self.mul(c, out[:, j + 1, :]))
        return out

    def poly_scale_arg(self, fs, u, deg: int):
        """Rowwise u^deg·f(x/u): coefficient k picks up u^(deg−k)."""
        out = fs.copy()
        n1 = fs.shape[1]
        upow = self.ones(u.shape[:-1])
        for k in range(deg, -1, -1):
            if k < n1:
                out[:, k, :] = self.mul(out[:, k, :], upow)
            upow = self.mul(upow, u)
        return out

    # -- Hasse–Witt / p-rank pipeline -------------------------------------

    def hasse_witt_batch(self, fs, g: int):
        """Hasse–Witt matrices for monic squarefree rows: (B, g, g, r)."""
        m = (self.p - 1) // 2
        h = fs
        for _ in range(m - 1):
            h = self.poly_mul_dense(h, fs)
        width = h.shape[1]
        out = self.zeros((fs.shape[0], g, g))
        for i in range(1, g + 1):
            for j in range(1, g + 1):
                k = j * self.p - i
                if k < width:
                    out[:, i - 1, j - 1, :] = h[:, k, :]
        return out

    def matmul_batch(self, A, B):
        """(B, g, g, r) @ (B, g, g, r) entrywise over the field."""
        g = A.shape[1]
        out = self.zeros((A.shape[0], g, g))
        for k in range(g):
            out = self.add(out, self.mul(A[:, :, k, None, :], B[:, None, k, :, :]))
        return out

    def semilinear_power(self, A, g: int):
        """A · A^σ · … · A^(σ^(g−1)) batched."""
        M = A
        for k in range(1, g):
            M = self.matmul_batch(M, self.frobenius(A, k))
        return M

    def rank_batch(self, A):
        """Matrix ranks over GF(q) by masked Gaussian elimination."""
        A = A % self.p
        Bn, g = A.shape[0], A.shape[1]
        A = A.copy()
        rank = np.zeros(Bn, dtype=np.int64)
        pivot_row = np.zeros(Bn, dtype=np.int64)
        rows = np.arange(g, dtype=np.int64)[None, :]
        for col in range(g):
            nz = np.any(A[:, :, col, :] != 0, axis=-1)  # (B, g)
            allowed = nz & (rows >= pivot_row[:, None])
            has = allowed.any(axis=1)
            sel = np.nonzero(has)[0]
            if sel.size:
                pidx = np.argmax(allowed[sel], axis=1)
                pr = pivot_row[sel]
                tmp = A[sel, pr].copy()
                A[sel, pr] = A[sel, pidx]
                A[sel, pidx] = tmp
                pinv = self.inv(A[sel, pr, col])
                A[sel, pr] = self.mul(pinv[:, None, :], A[sel, pr])
                for row in range(g):
                    rmask = has & (pivot_row != row)
                    rsel = np.nonzero(rmask)[0]
                    if not rsel.size:
                        continue
                    c = A[rsel, row, col]
                    live = np.any(c != 0, axis=-1)
                    rsel = rsel[live]
                    if not rsel.size:
                        continue
                    c = c[live]
                    prs = pivot_row[rsel]
                    A[rsel, row] = self.sub(
                        A[rsel, row], self.mul(c[:, None, :], A[rsel, prs])
                    )
            rank += has
            pivot_row += has
        return rank

    def p_rank_batch(self, fs, g: int, chunk: int = 1 << 15) -> np.ndarray:
        """p-ranks of monic squarefree rows, chunked to bound memory."""
        B = fs.shape[0]
        out = np.zeros(B, dtype=np.int64)
        for lo in range(0, B, chunk):
            block = fs[lo : lo + chunk]
            hw = self.hasse_witt_batch(block, g)
            out[lo : lo + chunk] = self.rank_batch(self.semilinear_power(hw, g))
        return out

    # -- family canonical keys ---------------------------------------------

    def canonical_keys(self, fs, g: int) -> np.ndarray:
        """Reduced-model keys per row: (B, 2g+2) encoding vectors.

        Mirrors the scalar chain exactly: for each rational root, invert at
        the root, renormalize to the family shape, and keep the smallest
        coefficient-encoding vector (constant term first) among the original
        and every surviving candidate.
        """
        B, n1, _ = fs.shape
        n = 2 * g + 1
        own = self.encode(fs)  # (B, n1)
        cidx, cenc = self.roots_pairs(fs)
        if cidx.size:
            rho = self.decode(cenc)  # (P, r)
            fsel = fs[cidx]
            taylor = self.poly_taylor(fsel, self.neg(rho))  # f(x + rho)
            vec = np.zeros_like(fsel)
            for k in range(1, n1):
                vec[:, k, :] = taylor[:, n1 - k, :]
            top = vec[:, n1 - 1, :].copy()  # = f'(rho), nonzero
            vec = self.mul(self.inv(top)[:, None, :], vec)
            const = self.ones(rho.shape[:-1]) * ((2 * g + 1) % self.p)
            alpha0 = self.mul(vec[:, 2 * g, :], self.inv(const % self.p))
            ft = self.poly_taylor(vec, alpha0)
            a = ft[:, 2 * g - 1, :]
            b = ft[:, 2 * g - 2, :]
            ok = ~(self.is_zero(a) | self.is_zero(b))
            cidx = cidx[ok]
            if cidx.size:
                u = self.mul(a[ok], self.inv(b[ok]))
                cand = self.poly_scale_arg(ft[ok], u, n)
                cand_enc = self.encode(cand)
                all_enc = np.concatenate([own, cand_enc], axis=0)
                owners = np.concatenate(
                    [np.arange(B, dtype=np.int64), cidx], axis=0
                )
                order = np.lexsort(
                    tuple(all_enc[:, k] for k in range(n1 - 1, -1, -1))
                    + (owners,)
                )
                owners_sorted = owners[order]
                first = np.ones(owners_sorted.size, dtype=bool)
                first[1:] = owners_sorted[1:] != owners_sorted[:-1]
                return all_enc[order][first]
        return own

    def dedup_rows(self, keys: np.ndarray) -> np.ndarray:
        """Distinct rows of an int64 (B, w) array, lexicographically sorted."""
        if keys.shape[0] == 0:
            return keys
        order = np.lexsort(tuple(keys[:, k] for k in range(keys.shape[1] - 1, -1, -1)))
        srt = keys[order]
        keep = np.ones(srt.shape[0], dtype=bool)
        keep[1:] = np.any(srt[1:] != srt[:-1], axis=1)
        return srt[keep]

    # -- family sampling and enumeration -----------------------------------

    def family_draw(self, rng: np.random.Generator, g: int, count: int,
                    block: int = 1 << 16) -> np.ndarray:
        """Exactly `count` squarefree family curves, in draw order.

        Each block draws alpha encodings then low-coefficient encodings;
        non-squarefree rows are rejected without being counted.
        """
        chunks = []
        have = 0
        while have < count:
            alphas = rng.integers(1, self.q, size=block, dtype=np.int64)
            lows = rng.integers(
                0, self.q, size=(block, 2 * g - 2), dtype=np.int64
            )
            fs = self.assemble_family(alphas, lows, g)
            good = fs[self.squarefree_mask(fs)]
            chunks.append(good)
            have += good.shape[0]
        return np.concatenate(chunks, axis=0)[:count]

    def assemble_family(self, alphas, lows, g: int) -> np.ndarray:
        n1 = 2 * g + 2
        B = alphas.shape[0]
        enc = np.zeros((B, n1), dtype=np.int64)
        enc[:, : 2 * g - 2] = lows
        enc[:, 2 * g - 2] = alphas
        enc[:, 2 * g - 1] = alphas
        enc[:, n1 - 1] = 1
        return self.decode(enc)

    def family_box_blocks(self, g: int):
        """Yield the whole family coefficient box, one alpha at a time."""
        width = 2 * g - 2
        size = self.q**width
        lows = np.zeros((size, width), dtype=np.int64)
        rest = np.arange(size, dtype=np.int64)
        for k in range(width - 1, -1, -1):
            lows[:, k] = rest % self.q
            rest //= self.q
        for alpha in range(1, self.q):
            alphas = np.full(size, alpha, dtype=np.int64)
            yield self.assemble_family(alphas, lows, g)

    # -- fully split configurations (conjecture scan) ----------------------

    def split_poly_rows(self, root_encs: np.ndarray) -> np.ndarray:
        """x·∏(x−aᵢ) per row of encodings: (B, k) → (B, k+2, r) monic."""
        B, k = root_encs.shape
        out = self.zeros((B, k + 2))
        out[:, 1, 0] = 1  # start from the factor x
        deg = 1
        roots = self.decode(root_encs)  # (B, k, r)
        for i in range(k):
            a = roots[:, i, :]
            shifted = np.zeros_like(out)
            shifted[:, 1 : deg + 2, :] = out[:, : deg + 1, :]
            out = self.sub(shifted, self.mul(a[:, None, :], out))
            deg += 1
        return out
