import math
import pickle
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffgap.scalars import (
    IncompatibleFieldError,
    QuadraticScalar,
    ScalarVector,
    int_sign,
    qf_approx,
    qf_arith,
    qf_make,
    qf_sign,
    qf_to_float,
    sqrt_of,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=60)
fields = st.sampled_from([1, 2, 5])


@st.composite
def scalars(draw, k=None):
    k = draw(fields) if k is None else k
    return qf_make(draw(rationals), draw(rationals), k)


@st.composite
def same_field_pair(draw):
    k = draw(fields)
    return draw(scalars(k)), draw(scalars(k))


@given(same_field_pair())
def test_ring_axioms(pair):
    x, y = pair
    assert x + y == y + x
    assert x * y == y * x
    assert (x - y) + y == x
    assert x * (y + 1) == x * y + x


@given(same_field_pair())
def test_division_inverts_multiplication(pair):
    x, y = pair
    if y:
        assert (x / y) * y == x


@given(scalars())
def test_sign_agrees_with_float(x):
    f = float(x.a) + float(x.b) * math.sqrt(x.k)
    if abs(f) > 1e-9:
        assert qf_sign(x) == (1 if f > 0 else -1)


@given(scalars())
def test_json_round_trip(x):
    assert QuadraticScalar.from_json(x.to_json()) == x


@given(scalars())
def test_pickle_round_trip(x):
    y = pickle.loads(pickle.dumps(x))
    assert y == x and y.k == x.k


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), fields)
def test_int_sign_matches_qf_sign(a, b, k):
    assert int_sign(a, b, k) == qf_sign(qf_make(a, b, k))


@settings(max_examples=50)
@given(scalars(), st.integers(53, 200))
def test_approx_error_bound(x, prec):
    approx = qf_approx(x, prec)
    eps = Fraction(1, 2**prec)
    assert qf_sign(x - (approx - eps)) >= 0
    assert qf_sign(x - (approx + eps)) <= 0


def test_exact_sign_of_near_cancellation():
    # 99/70 approximates sqrt 2 from above
    assert qf_sign(qf_make(Fraction(-99, 70), 1, 2)) == -1
    assert qf_sign(qf_make(Fraction(-140, 99), 1, 2)) == 1
    assert qf_sign(sqrt_of(2) * sqrt_of(2) - 2) == 0


def test_triangular_lambda_rendering():
    x = qf_make(Fraction(-30, 11), Fraction(20, 11), 5)
    assert qf_to_float(x) == pytest.approx(1.3383054136, abs=1e-10)


def test_canonical_forms():
    assert qf_make(3, 0, 5).k == 1
    assert qf_make(3, 0, 5) == 3
    assert hash(qf_make(3, 0, 2)) == hash(QuadraticScalar(3))
    assert str(qf_make(1, -2, 5)) == "1 - 2*sqrt(5)"


def test_mixed_fields_rejected():
    with pytest.raises(IncompatibleFieldError):
        sqrt_of(2) + sqrt_of(5)
    with pytest.raises(ValueError):
        qf_make(1, 1, 3)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        sqrt_of(2) / 0
    with pytest.raises(ZeroDivisionError):
        QuadraticScalar(0).inverse()


def test_qf_arith_and_precision_floor():
    assert qf_arith(1, sqrt_of(5), "mul") == sqrt_of(5)
    with pytest.raises(ValueError):
        qf_arith(1, 2, "pow")
    with pytest.raises(ValueError):
        qf_to_float(sqrt_of(2), 40)


def test_tiny_values_keep_relative_accuracy():
    x = (sqrt_of(2) - qf_make(Fraction(665857, 470832))) * 10**6
    f = qf_to_float(x)
    assert f == pytest.approx(float(x.a) + float(x.b) * math.sqrt(2), rel=1e-3)
    assert f < 0


@given(st.lists(scalars(2), min_size=1, max_size=8), st.lists(scalars(2), min_size=1, max_size=8))
def test_vector_dot_matches_scalar_sum(xs, ys):
    vx, vy = ScalarVector(xs), ScalarVector(ys)
    n = min(len(xs), len(ys))
    expect = sum((a * b for a, b in zip(xs[:n], ys[:n])), QuadraticScalar(0))
    assert vx.dot(vy) == expect
    assert vx.total() == sum(xs, QuadraticScalar(0))
