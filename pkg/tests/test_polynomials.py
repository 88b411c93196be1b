from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from prolong.polynomials import (
    ZERO,
    Grading,
    WeightedPolynomial as P,
    contact_bracket,
    monomials,
    to_field,
    weight,
)

K = 2  # variables x0..x2, y0..y2, z


def test_basic_brackets():
    assert contact_bracket(P.x(K, 0), P.y(K, 0)) == P.constant(K, 1)
    assert contact_bracket(P.y(K, 0), P.x(K, 0)) == P.constant(K, -1)
    f = P.x(K, 1) * P.z(K) + P.y(K, 2)
    assert contact_bracket(f, f).is_zero()


def test_x_and_y_operators():
    g = P.z(K) * P.y(K, 1) + P.x(K, 0) * P.y(K, 1) ** 2
    for j in range(K + 1):
        want_x = g.dy(j) + P.x(K, j) * g.dz() * F(1, 2)
        want_y = -g.dx(j) + P.y(K, j) * g.dz() * F(1, 2)
        assert contact_bracket(P.x(K, j), g) == want_x
        assert contact_bracket(P.y(K, j), g) == want_y


def test_k_mismatch():
    with pytest.raises(ValueError):
        contact_bracket(P.x(2, 0), P.x(3, 0))


def test_weights():
    assert weight(P.x(4, 2), Grading.SECOND) == 2
    assert weight(P.y(4, 0), Grading.SECOND) == 2
    assert weight(P.y(4, 3), Grading.SECOND) == -1
    minor = P.x(4, 0) * P.x(4, 2) * 2 - P.x(4, 1) ** 2
    assert weight(minor, Grading.SECOND) == 2
    assert weight(minor, Grading.STANDARD) == 2
    assert weight(P.x(4, 0) + P.z(4) * P.x(4, 0), Grading.STANDARD) is None
    assert weight(P(4), Grading.STANDARD) is ZERO
    assert weight(P.constant(4, 1), Grading.STANDARD) == 0


def test_fields_of_constants_and_z():
    one = to_field(P.constant(K, 1))
    assert one.dz_coeff == P.constant(K, 1)
    assert all(c.is_zero() for c in one.coeffs[:-1])
    Z = to_field(P.z(K))
    assert Z.dz_coeff == P.z(K)
    for i in range(K + 1):
        assert Z.dx_coeffs[i] == P.x(K, i) * F(1, 2)
        assert Z.dy_coeffs[i] == P.y(K, i) * F(1, 2)


def test_field_of_x0_and_commutator():
    X = to_field(P.x(K, 0))
    assert X.dy_coeffs[0] == P.constant(K, 1)
    assert X.dz_coeff == P.x(K, 0) * F(1, 2)
    Y = to_field(P.y(K, 0))
    assert X.commutator(Y) == to_field(P.constant(K, 1))


def test_contact_form_normalization():
    # theta(X_f) = f with theta = dz + 1/2 sum(x_i dy_i - y_i dx_i)
    f = P.x(K, 1) * P.y(K, 0) * P.z(K) + P.y(K, 2) ** 3
    X = to_field(f)
    theta = X.dz_coeff
    for i in range(K + 1):
        theta = theta + (P.x(K, i) * X.dy_coeffs[i] - P.y(K, i) * X.dx_coeffs[i]) * F(1, 2)
    assert theta == f


def test_monomial_counts():
    from math import comb

    for k in (2, 3):
        n = 2 * k + 2
        for w in range(5):
            want = sum(comb(n + w - 2 * c - 1, w - 2 * c) for c in range(w // 2 + 1))
            assert len(monomials(k, w)) == want
    assert monomials(2, 0) == ((0,) * 7,)
    assert monomials(2, -1) == ()


def test_text_round_trip():
    f = P.x(K, 0) * P.x(K, 2) * 2 - P.x(K, 1) ** 2 * F(1, 3) + P.z(K) * P.y(K, 1)
    text = f.to_text()
    assert text == "+(2)·x0·x2 -(1/3)·x1^2 +(1)·y1·z"
    assert P.from_text(K, text) == f
    assert P(K).to_text() == "0"
    assert P.from_text(K, "0").is_zero()
    assert P.from_json_terms(K, f.to_json_terms()) == f


def test_arithmetic():
    a, b = P.x(K, 0), P.y(K, 1)
    assert (a + b) * (a - b) == a ** 2 - b ** 2
    assert a * 0 == P(K)
    assert (a * 3).evaluate([F(1, 2)] + [0] * 6) == F(3, 2)


# -- properties --------------------------------------------------------------

k_prop = 2


@st.composite
def polys(draw, max_weight=6, homogeneous=False):
    if homogeneous:
        w = draw(st.integers(0, max_weight))
        pool = monomials(k_prop, w)
    else:
        pool = [e for w in range(max_weight + 1) for e in monomials(k_prop, w)]
    es = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=3))
    cs = draw(st.lists(st.integers(-3, 3).filter(bool), min_size=len(es), max_size=len(es)))
    return P(k_prop, {e: c for e, c in zip(es, cs)})


@settings(max_examples=100)
@given(polys(6), polys(6), polys(6))
def test_jacobi(f, g, h):
    b = contact_bracket
    total = b(f, b(g, h)) + b(g, b(h, f)) + b(h, b(f, g))
    assert total.is_zero()


@settings(max_examples=60)
@given(polys(3), polys(3))
def test_field_homomorphism(f, g):
    assert to_field(contact_bracket(f, g)) == to_field(f).commutator(to_field(g))


@given(polys(4), polys(4), st.integers(-3, 3))
def test_bilinear_antisymmetric(f, g, c):
    assert contact_bracket(f, g) == -contact_bracket(g, f)
    assert contact_bracket(f * c + g, g) == contact_bracket(f, g) * c


@given(polys(3), polys(4))
def test_bracket_with_one_is_z_derivative(f, g):
    one = P.constant(k_prop, 1)
    assert contact_bracket(one, g) == g.dz()


@settings(max_examples=80)
@given(polys(4, homogeneous=True), polys(4, homogeneous=True), st.sampled_from(list(Grading)))
def test_grading_additivity_standard(f, g, grading):
    wf, wg = weight(f, grading), weight(g, grading)
    br = contact_bracket(f, g)
    if wf is None or wg is None or br.is_zero():
        return
    assert weight(br, grading) == wf + wg - 2


@st.composite
def second_homogeneous(draw):
    w = draw(st.integers(0, 4))
    mons = monomials(k_prop, w)
    blocks = {}
    for e in mons:
        blocks.setdefault(weight(P(k_prop, {e: 1}), Grading.SECOND), []).append(e)
    block = draw(st.sampled_from(sorted(blocks.values())))
    es = draw(st.lists(st.sampled_from(block), min_size=1, max_size=3))
    return P(k_prop, {e: 1 for e in es})


@settings(max_examples=80)
@given(second_homogeneous(), second_homogeneous())
def test_grading_additivity_second(f, g):
    assert weight(f, Grading.SECOND) is not None
    br = contact_bracket(f, g)
    if br.is_zero():
        return
    assert weight(br, Grading.SECOND) == weight(f, Grading.SECOND) + weight(g, Grading.SECOND) - 2
