import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klpar.errors import MalformedInputError, NotAQPolynomialError
from klpar.laurent import (ALPHA, ONE, Q, V, ZERO, LaurentPoly, as_q_polynomial, bar, divide_by_alpha,
                           exact_divide, format_q, from_json, from_q_coefficients, is_nonneg,
                           peel_symmetric, to_json)

polys = st.dictionaries(st.integers(-8, 8), st.integers(-5, 5), max_size=6).map(LaurentPoly)
positive_part = st.dictionaries(st.integers(1, 20), st.integers(-5, 5), max_size=6).map(LaurentPoly)


def test_zero_coefficients_are_dropped():
    assert LaurentPoly({3: 0, 1: 2}) == LaurentPoly({1: 2})
    assert LaurentPoly({0: 0}) == ZERO
    assert not ZERO and ONE


def test_bar_examples():
    assert bar(V) == LaurentPoly({-1: 1})
    assert bar(ALPHA) == -ALPHA
    assert bar(LaurentPoly({0: 1, 2: 1})) == LaurentPoly({0: 1, -2: 1})


def test_nonneg_examples():
    assert is_nonneg(ZERO)
    assert not is_nonneg(ALPHA)
    assert is_nonneg(LaurentPoly({1: 1, 3: 2}))


def test_q_view():
    assert as_q_polynomial(Q) == [0, 1]
    assert as_q_polynomial(LaurentPoly({0: 1, -4: 1})) == [1, 0, 1]
    assert as_q_polynomial(ZERO) == []
    with pytest.raises(NotAQPolynomialError):
        as_q_polynomial(V)
    with pytest.raises(NotAQPolynomialError):
        as_q_polynomial(LaurentPoly({-1: 1}))
    assert from_q_coefficients([1, 1, 1]) == ONE + Q + Q * Q
    assert format_q(from_q_coefficients([1, 1, 1])) == "1 + q + q^2"
    assert format_q(from_q_coefficients([0, -1, 1])) == "-q + q^2"
    assert format_q(ZERO) == "0"


def test_text_form():
    assert str(LaurentPoly({-2: 1, 0: -1, 3: 2})) == "v^-2 - 1 + 2v^3"
    assert str(ZERO) == "0"


def test_peel_examples():
    assert peel_symmetric(ZERO) == ZERO
    assert peel_symmetric(ONE) == V
    assert peel_symmetric(LaurentPoly({-2: 1, 0: 1, 2: 1})) == LaurentPoly({3: 1})
    with pytest.raises(MalformedInputError):
        peel_symmetric(V)
    with pytest.raises(MalformedInputError):
        peel_symmetric(LaurentPoly({0: 1, 2: 1}))


def test_exact_division():
    assert divide_by_alpha(ALPHA * ALPHA) == ALPHA
    assert exact_divide(ONE - Q * Q, ONE - Q) == ONE + Q
    with pytest.raises(MalformedInputError):
        divide_by_alpha(ONE)
    with pytest.raises(MalformedInputError):
        exact_divide(ONE, LaurentPoly({0: 2}))
    with pytest.raises(ZeroDivisionError):
        exact_divide(ONE, ZERO)


def test_json_round_trip():
    p = LaurentPoly({-2: 1, 0: -1, 3: 2})
    obj = to_json(p)
    assert obj == {"variable": "v", "terms": [{"exp": -2, "coef": 1}, {"exp": 0, "coef": -1},
                                               {"exp": 3, "coef": 2}]}
    assert from_json(json.loads(json.dumps(obj))) == p
    qp = from_q_coefficients([1, 0, 3])
    assert to_json(qp, "q")["terms"] == [{"exp": 0, "coef": 1}, {"exp": 2, "coef": 3}]
    assert from_json(to_json(qp, "q")) == qp
    with pytest.raises(MalformedInputError):
        from_json({"terms": []})


@settings(max_examples=200, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == ZERO and a * ONE == a


@settings(max_examples=200, deadline=None)
@given(polys, polys)
def test_bar_is_ring_involution(a, b):
    assert bar(a * b) == bar(a) * bar(b)
    assert bar(a + b) == bar(a) + bar(b)
    assert bar(bar(a)) == a


@settings(max_examples=200, deadline=None)
@given(positive_part)
def test_peel_inverts_symmetrization(x):
    assert peel_symmetric(divide_by_alpha(bar(x) - x)) == x


@settings(max_examples=100, deadline=None)
@given(polys, polys.filter(bool))
def test_division_inverts_multiplication(a, d):
    assert exact_divide(a * d, d) == a
