"""Polynomial layer: powers, roots, squarefree tests, substitutions, binary forms."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hwstrata.errors import DivisionByZero, InvalidInput, SingularTransform
from hwstrata.fields import field_create
from hwstrata.polys import (
    BinaryForm,
    Poly,
    is_squarefree,
    mobius_image,
    poly_from_str,
    poly_pow,
    poly_to_str,
    roots_in_fq,
    substitute_linear,
)


def P(encs, ctx):
    return Poly.from_encodings(encs, ctx)


# ---------------------------------------------------------------------------
# construction basics

def test_trailing_zeros_stripped():
    F = field_create(5, 1)
    f = P([1, 2, 0, 0], F)
    assert f.degree == 1
    assert f.encodings() == (1, 2)


def test_zero_poly_degree():
    F = field_create(5, 1)
    assert Poly.zero(F).degree == -1
    assert P([0, 0], F) == Poly.zero(F)


def test_coeff_out_of_range_is_zero():
    F = field_create(7, 1)
    f = P([3, 1], F)
    assert f.coeff(5) == F.zero()
    assert f.coeff(0) == F.element(3)


# ---------------------------------------------------------------------------
# poly_pow

def test_square_of_linear_gf3():
    F = field_create(3, 1)
    f = P([1, 1], F)  # x + 1
    assert poly_pow(f, 2).encodings() == (1, 2, 1)  # x^2 + 2x + 1


def test_square_of_cubic_gf5():
    F = field_create(5, 1)
    f = P([1, 1, 0, 1], F)  # x^3 + x + 1
    assert poly_pow(f, 2).encodings() == (1, 2, 1, 2, 2, 0, 1)


def test_zeroth_power_is_one():
    F = field_create(5, 1)
    assert poly_pow(Poly.zero(F), 0) == P([1], F)
    assert poly_pow(P([3, 1], F), 0) == P([1], F)


def test_negative_power_rejected():
    F = field_create(5, 1)
    with pytest.raises(InvalidInput):
        poly_pow(P([1, 1], F), -1)


@settings(max_examples=40, derandomize=True)
@given(st.data())
def test_power_exponents_add(data):
    F = field_create(5, 1)
    encs = data.draw(st.lists(st.integers(0, 4), min_size=1, max_size=4))
    f = P(encs, F)
    e1 = data.draw(st.integers(0, 4))
    e2 = data.draw(st.integers(0, 4))
    assert poly_pow(f, e1 + e2) == poly_pow(f, e1) * poly_pow(f, e2)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_freshmans_dream(p):
    """(f + g)^p = f^p + g^p in characteristic p."""
    F = field_create(p, 1)
    f = P([1, 2, 1], F)
    g = P([0, 1, 0, 1], F)
    assert poly_pow(f + g, p) == poly_pow(f, p) + poly_pow(g, p)


# ---------------------------------------------------------------------------
# roots

def test_roots_examples():
    F7 = field_create(7, 1)
    assert {a.encode() for a in roots_in_fq(P([6, 0, 1], F7))} == {1, 6}
    F3 = field_create(3, 1)
    assert roots_in_fq(P([1, 0, 1], F3)) == set()
    F9 = field_create(3, 2)
    t = F9.gen()
    assert roots_in_fq(P([1, 0, 1], F9)) == {t, t + t}


def test_roots_of_zero_poly_rejected():
    F = field_create(3, 1)
    with pytest.raises(InvalidInput):
        roots_in_fq(Poly.zero(F))


@pytest.mark.parametrize("p,r", [(3, 1), (5, 1), (3, 2), (7, 1), (3, 4)])
def test_roots_agree_with_exhaustive_evaluation(p, r):
    ctx = field_create(p, r)
    import random

    rng = random.Random(1009 * p + r)
    for _ in range(8):
        encs = [rng.randrange(ctx.q) for _ in range(rng.randrange(2, 6))]
        f = P(encs, ctx)
        if f.degree < 1:
            continue
        expect = {a for a in ctx.elements() if f.evaluate(a).is_zero()}
        assert roots_in_fq(f) == expect


# ---------------------------------------------------------------------------
# squarefree

def test_squarefree_examples():
    F5 = field_create(5, 1)
    assert not is_squarefree(P([0, 0, 1], F5))  # x^2
    F3 = field_create(3, 1)
    assert is_squarefree(P([1, 1, 0, 1], F3))  # x^3 + x + 1
    F7 = field_create(7, 1)
    f = P([6, 1], F7) * P([5, 1], F7) * P([4, 1], F7)
    assert is_squarefree(f)


def test_squarefree_needs_positive_degree():
    F = field_create(5, 1)
    with pytest.raises(InvalidInput):
        is_squarefree(P([3], F))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_squarefree_iff_distinct_roots_in_splitting_field(p):
    """For deg <= 4 over GF(p), count distinct roots across GF(p^k) by brute
    force (k = 1..4 suffices) and compare with the gcd-based test.

    A point of GF(p^4) or GF(p^3) lies over GF(p) exactly when fixed by
    Frobenius, so the number of distinct roots in a splitting field is
    n4 + n3 - n1 where n_k counts roots in GF(p^k).
    """
    import random

    rng = random.Random(31 * p)
    exts = {k: field_create(p, k) for k in (1, 3, 4)}
    for _ in range(12):
        deg = rng.randrange(2, 5)
        encs = [rng.randrange(p) for _ in range(deg)] + [1 + rng.randrange(p - 1)]
        f = P(encs, exts[1])
        n = {}
        for k, ctx in exts.items():
            g = P(encs, ctx)
            n[k] = sum(1 for a in ctx.elements() if g.evaluate(a).is_zero())
        distinct = n[4] + n[3] - n[1]
        assert is_squarefree(f) == (distinct == deg)


# ---------------------------------------------------------------------------
# substitutions

def test_shift_example():
    F = field_create(7, 1)
    f = P([0, 0, 1], F)  # x^2
    assert substitute_linear(f, F.element(1), "shift").encodings() == (1, 5, 1)


def test_scale_example():
    F = field_create(7, 1)
    f = P([0, 1, 0, 1], F)  # x^3 + x
    g = substitute_linear(f, F.element(2), "scale")
    assert g.encodings() == (0, 4, 0, 1)


def test_scale_by_zero():
    F = field_create(7, 1)
    with pytest.raises(DivisionByZero):
        substitute_linear(P([0, 1], F), F.zero(), "scale")


def test_unknown_mode():
    F = field_create(7, 1)
    with pytest.raises(ValueError):
        substitute_linear(P([0, 1], F), F.element(1), "rotate")


def test_shift_moves_roots():
    F = field_create(11, 1)
    f = P([8, 1], F) * P([5, 1], F)  # roots 3 and 6
    a = F.element(2)
    g = substitute_linear(f, a, "shift")  # g(x) = f(x - 2)
    assert {z.encode() for z in roots_in_fq(g)} == {5, 8}


# ---------------------------------------------------------------------------
# binary forms and Möbius images

def test_binary_form_from_poly_defaults_to_even_degree():
    F = field_create(5, 1)
    f = P([1, 0, 0, 1], F)  # degree 3
    B = BinaryForm.from_poly(f)
    assert B.degree == 4
    assert B.affine() == f


def test_binary_form_degree_too_small():
    F = field_create(5, 1)
    with pytest.raises(InvalidInput):
        BinaryForm.from_poly(P([1, 0, 0, 1], F), 2)


def test_normalization_sets_first_nonzero_to_one():
    F = field_create(7, 1)
    B = BinaryForm.make([F.zero(), F.element(3), F.element(5)], F)
    N = B.normalized()
    assert N.encodings()[1] == 1


def test_mobius_identity_returns_normalized_input():
    F = field_create(5, 1)
    f = P([2, 0, 2], F)  # 2x^2 + 2
    M = ((F.one(), F.zero()), (F.zero(), F.one()))
    img = mobius_image(f, M)
    assert img == BinaryForm.from_poly(f).normalized()


def test_mobius_swap_preserves_root_set_of_symmetric_poly():
    # x^2 - 1 has roots {1, 6}; x -> 1/x permutes them.
    F = field_create(7, 1)
    f = P([6, 0, 1], F)
    M = ((F.zero(), F.one()), (F.one(), F.zero()))
    img = mobius_image(f, M)
    assert {a.encode() for a in roots_in_fq(img.affine())} == {1, 6}


def test_mobius_shift_example_gf5():
    # f = x*(x - z) as a quartic form; M = x + 1 sends roots {0, 1} -> {1, 2},
    # i.e. the image form is z^2 * (x - z)(x - 2z) up to normalization.
    F = field_create(5, 1)
    f = BinaryForm.make(
        [F.zero(), F.element(4), F.one(), F.zero(), F.zero()], F
    )  # x z^3 * (x - z) ~ coeffs for z^4*0 + ...
    M = ((F.one(), F.one()), (F.zero(), F.one()))
    img = mobius_image(f, M)
    expect = BinaryForm.make(
        [F.element(2), F.element(2), F.one(), F.zero(), F.zero()], F
    ).normalized()
    assert img == expect


def test_singular_transform_rejected():
    F = field_create(5, 1)
    M = ((F.one(), F.element(2)), (F.element(2) + F.element(2), F.element(3)))
    # det = 3 - 8 = 0 mod 5
    with pytest.raises(SingularTransform):
        mobius_image(P([1, 1], F), M)


def _mat_mul(M2, M1, ctx):
    (a2, b2), (c2, d2) = M2
    (a1, b1), (c1, d1) = M1
    return (
        (a2 * a1 + b2 * c1, a2 * b1 + b2 * d1),
        (c2 * a1 + d2 * c1, c2 * b1 + d2 * d1),
    )


def test_mobius_composition_is_a_group_action():
    import random

    ctx = field_create(7, 1)
    rng = random.Random(4242)

    def draw_matrix():
        while True:
            a, b, c, d = (ctx.element(rng.randrange(7)) for _ in range(4))
            if not (a * d - b * c).is_zero():
                return ((a, b), (c, d))

    for _ in range(30):
        encs = [rng.randrange(7) for _ in range(rng.randrange(2, 6))]
        f = P(encs, ctx)
        if f.degree < 1:
            f = f + P([0, 1], ctx)
        M1 = draw_matrix()
        M2 = draw_matrix()
        step = mobius_image(mobius_image(f, M1), M2)
        combined = mobius_image(f, _mat_mul(M2, M1, ctx))
        assert step == combined


# ---------------------------------------------------------------------------
# string round trip

def test_poly_str_roundtrip():
    F = field_create(3, 2)
    f = P([5, 0, 7, 1], F)
    s = poly_to_str(f)
    assert poly_from_str(s, F) == f


def test_poly_to_str_format():
    F = field_create(7, 1)
    assert poly_to_str(P([2, 0, 1], F)) == "2 + x^2"
    assert poly_to_str(P([0, 3], F)) == "3*x"
    assert poly_to_str(Poly.zero(F)) == "0"
