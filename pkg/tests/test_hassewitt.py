"""Curve models, Hasse-Witt matrices, semilinear powers, p-rank."""

import pytest

from hwstrata.errors import InvalidDegree, ShapeError, SingularCurve
from hwstrata.fields import field_create, frobenius
from hwstrata.hassewitt import (
    CurveModel,
    HWMatrix,
    PRank,
    hasse_witt,
    p_rank,
    rank,
    semilinear_power,
)
from hwstrata.polys import Poly


def P(encs, ctx):
    return Poly.from_encodings(encs, ctx)


# ---------------------------------------------------------------------------
# model validation

def test_genus_from_degree():
    F = field_create(5, 1)
    assert CurveModel.make(P([1, 1, 0, 1], F)).genus == 1
    assert CurveModel.make(P([1, 1, 0, 0, 0, 1], F)).genus == 2
    assert CurveModel.make(P([2, 1, 0, 0, 0, 0, 1], F)).genus == 2


def test_low_degree_rejected():
    F = field_create(5, 1)
    with pytest.raises(InvalidDegree):
        CurveModel.make(P([1, 0, 1], F))


def test_singular_model_rejected():
    F = field_create(5, 1)
    with pytest.raises(SingularCurve):
        CurveModel.make(P([0, 0, 0, 1], F))  # x^3 = x^3, triple root at 0


# ---------------------------------------------------------------------------
# matrix pins

def test_hw_entries_gf3_elliptic():
    F = field_create(3, 1)
    c = CurveModel.make(P([1, 1, 0, 1], F))
    A = hasse_witt(c)
    assert A.encodings() == ((0,),)


def test_hw_entries_gf5_elliptic():
    F = field_create(5, 1)
    c = CurveModel.make(P([1, 1, 0, 1], F))
    A = hasse_witt(c)
    assert A.encodings() == ((2,),)


def test_hw_vanishes_for_x5_plus_x_gf7():
    # (x^5+x)^3 has no x^k terms with k in {6, 5, 13, 12}, so all four
    # relevant coefficients vanish.
    F = field_create(7, 1)
    c = CurveModel.make(P([0, 1, 0, 0, 0, 1], F))
    A = hasse_witt(c)
    assert A.encodings() == ((0, 0), (0, 0))
    assert p_rank(c).value == 0


# ---------------------------------------------------------------------------
# matrix algebra

def test_matmul_and_shape_checks():
    F = field_create(7, 1)
    A = HWMatrix.make([[1, 2], [3, 4]], F)
    I = HWMatrix.identity(2, F)
    assert A @ I == A
    assert I @ A == A
    B = HWMatrix.make([[1]], F)
    with pytest.raises(ShapeError):
        A @ B
    with pytest.raises(ShapeError):
        HWMatrix.make([[1, 2, 3], [4, 5, 6]], F)


def test_matmul_rejects_field_mismatch():
    A = HWMatrix.make([[1]], field_create(5, 1))
    B = HWMatrix.make([[1]], field_create(7, 1))
    with pytest.raises(ShapeError):
        A @ B


def test_frobenius_twist_acts_entrywise():
    F = field_create(3, 2)
    t = F.gen()
    A = HWMatrix.make([[t, F.one()], [F.zero(), t + F.one()]], F)
    T = A.frobenius_twist()
    for i in range(2):
        for j in range(2):
            assert T.entries[i][j] == frobenius(A.entries[i][j])


def test_rank_pins():
    F = field_create(7, 1)
    assert rank(HWMatrix.make([[1, 2], [2, 4]], F)) == 1
    assert rank(HWMatrix.identity(3, F)) == 3
    assert rank(HWMatrix.make([[0, 0], [0, 0]], F)) == 0


# ---------------------------------------------------------------------------
# semilinear power

def test_semilinear_power_gf9_example():
    # A = [[t, 0], [0, 1]]: A * A^sigma = [[t*t^3, 0], [0, 1]] = [[t^4, 0], [0, 1]]
    # and t^4 = (t^2)^2 = (-1)^2 = 1, so the product is the identity.
    F = field_create(3, 2)
    t = F.gen()
    A = HWMatrix.make([[t, F.zero()], [F.zero(), F.one()]], F)
    assert semilinear_power(A, 2) == HWMatrix.identity(2, F)


def test_semilinear_power_checks_genus():
    F = field_create(5, 1)
    A = HWMatrix.identity(2, F)
    with pytest.raises(ShapeError):
        semilinear_power(A, 3)


def test_semilinear_collapses_to_plain_power_over_prime_field():
    import random

    F = field_create(5, 1)
    rng = random.Random(7)
    for _ in range(10):
        g = rng.randrange(1, 4)
        A = HWMatrix.make(
            [[rng.randrange(5) for _ in range(g)] for _ in range(g)], F
        )
        plain = HWMatrix.identity(g, F)
        for _ in range(g):
            plain = plain @ A
        assert semilinear_power(A, g) == plain


# ---------------------------------------------------------------------------
# p-rank

def test_p_rank_pins():
    F3 = field_create(3, 1)
    assert p_rank(CurveModel.make(P([1, 1, 0, 1], F3))).value == 0
    F5 = field_create(5, 1)
    pr = p_rank(CurveModel.make(P([1, 1, 0, 1], F5)))
    assert pr.value == 1
    assert pr.genus == 1
    assert pr.ordinary


def test_ordinary_flag():
    assert PRank(2, 3).ordinary is False
    assert PRank(3, 3).ordinary is True


def test_p_rank_bounded_by_genus():
    import random

    rng = random.Random(11)
    for p, r in [(3, 1), (5, 1), (3, 2), (7, 1)]:
        ctx = field_create(p, r)
        hits = 0
        while hits < 8:
            d = rng.choice([5, 7])
            encs = [rng.randrange(ctx.q) for _ in range(d)] + [1]
            f = P(encs, ctx)
            try:
                c = CurveModel.make(f)
            except SingularCurve:
                continue
            hits += 1
            v = p_rank(c).value
            assert 0 <= v <= c.genus
