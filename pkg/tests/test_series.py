"""Truncated series arithmetic over exact coefficients."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qloop.coeff import ONE, ZERO, Mono, field, qnum
from qloop.series import (
    ASC,
    DESC,
    TruncatedSeries,
    exponential,
    from_coefficient_map,
    log_one_minus,
)


def ser(*ints, direction=ASC):
    return TruncatedSeries(direction, [field(n) for n in ints])


def test_shape_and_access():
    s = ser(1, 2, 3)
    assert s.order == 2
    assert s.direction == ASC
    assert s.constant_term == ONE
    assert s.coefficient(2) == field(3)
    with pytest.raises(IndexError):
        s.coefficient(3)
    with pytest.raises(ValueError):
        TruncatedSeries(ASC, [])
    with pytest.raises(ValueError):
        TruncatedSeries("v", [ONE])


def test_immutability():
    s = ser(1, 2)
    with pytest.raises(AttributeError):
        s.order = 5


def test_direction_and_order_mixing_is_an_error():
    with pytest.raises(ValueError):
        ser(1, 2) + ser(1, 2, direction=DESC)
    with pytest.raises(ValueError):
        ser(1, 2) * ser(1, 2, 3)


def test_product_truncates_consistently():
    # (1 + u)(1 - u + u^2) = 1 + u^3, invisible at order 2
    a = ser(1, 1, 0)
    b = ser(1, -1, 1)
    assert a * b == ser(1, 0, 0)


def test_inverse_of_geometric():
    one_minus_u = ser(1, -1, 0, 0)
    geo = one_minus_u.inverse()
    assert geo == ser(1, 1, 1, 1)
    assert geo * one_minus_u == ser(1, 0, 0, 0)


def test_rescale_arg():
    s = ser(1, 1, 1)
    t = s.rescale_arg(field(Mono(q=2)))
    assert t.coefficient(0) == ONE
    assert t.coefficient(1) == field(Mono(q=2))
    assert t.coefficient(2) == field(Mono(q=4))


def test_truncate():
    s = ser(5, 6, 7)
    assert s.truncate(1) == ser(5, 6)
    with pytest.raises(ValueError):
        s.truncate(9)


def test_from_coefficient_map_fills_gaps():
    s = from_coefficient_map(DESC, 3, lambda n: field(n) if n % 2 else None, ZERO)
    assert s == TruncatedSeries(DESC, [ZERO, ONE, ZERO, field(3)])


def test_log_requires_nilpotent_part():
    with pytest.raises(ValueError):
        log_one_minus(ser(1, 1))
    with pytest.raises(ValueError):
        exponential(ser(2, 0), ONE)


def test_log_of_one_minus_u():
    # log(1 - u) with s = u
    s = TruncatedSeries(ASC, [ZERO, ONE, ZERO, ZERO])
    out = log_one_minus(s)
    from fractions import Fraction

    assert out.coefficient(0) == ZERO
    assert out.coefficient(1) == -ONE
    assert out.coefficient(2) == field(Fraction(-1, 2))
    assert out.coefficient(3) == field(Fraction(-1, 3))


small_series = st.builds(
    lambda cs: TruncatedSeries(ASC, [field(c) for c in cs]),
    st.lists(st.integers(min_value=-5, max_value=5), min_size=4, max_size=4),
)


class TestSeriesLaws:
    @given(small_series, small_series, small_series)
    @settings(max_examples=50, deadline=None)
    def test_ring_laws(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c

    @given(small_series)
    @settings(max_examples=50, deadline=None)
    def test_inverse_roundtrip(self, s):
        if not s.constant_term:
            return
        one = TruncatedSeries(ASC, [ONE, ZERO, ZERO, ZERO])
        assert s * s.inverse() == one

    @given(small_series)
    @settings(max_examples=50, deadline=None)
    def test_exp_log_roundtrip(self, s):
        nil = TruncatedSeries(ASC, (ZERO,) + s.coeffs[1:])
        one = TruncatedSeries(ASC, [ONE, ZERO, ZERO, ZERO])
        # exp(log(1 - s)) = 1 - s for nilpotent s
        assert exponential(log_one_minus(nil), ONE) == one - nil

    @given(small_series, st.integers(min_value=-3, max_value=3))
    @settings(max_examples=50, deadline=None)
    def test_rescale_is_multiplicative(self, s, e):
        a = field(Mono(q=e))
        assert (s * s).rescale_arg(a) == s.rescale_arg(a) * s.rescale_arg(a)


def test_noncommutative_coefficients_keep_order():
    # series multiplication must not assume coefficient commutativity
    class W:
        def __init__(self, word):
            self.word = word

        def __mul__(self, other):
            return W(self.word + other.word)

        def __add__(self, other):
            return W(f"({self.word}+{other.word})")

    s = TruncatedSeries(ASC, [W("a"), W("b")])
    t = TruncatedSeries(ASC, [W("x"), W("y")])
    assert (s * t).coefficient(1).word == "(ay+bx)"


def test_qnum_coefficient_series():
    s = TruncatedSeries(ASC, [ONE, qnum(2), qnum(3)])
    p = s * s
    assert p.coefficient(1) == qnum(2) + qnum(2)
    assert p.coefficient(2) == qnum(3) + qnum(2) * qnum(2) + qnum(3)
