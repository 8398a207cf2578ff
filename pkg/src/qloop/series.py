"""Truncated power series over an arbitrary coefficient algebra.

A series is a tuple of coefficients for u^0 .. u^N (direction "u") or
u^0 .. u^-N (direction "u^-1"), together with the truncation order N.
Coefficients may be field elements or linear operators; the only protocol
assumed is +, -, unary minus, * (both between coefficients and with scalar
multipliers), truth-value testing for zero detection, and .inverse() on
the constant term when a series is inverted.

Operations never mix directions or orders implicitly: combining series of
different shape is a programming error here, not a broadcast.
"""

from __future__ import annotations

from fractions import Fraction

ASC = "u"
DESC = "u^-1"
_DIRECTIONS = (ASC, DESC)


class TruncatedSeries:
    __slots__ = ("direction", "order", "coeffs")

    def __init__(self, direction, coeffs):
        if direction not in _DIRECTIONS:
            raise ValueError(f"direction must be one of {_DIRECTIONS}, got {direction!r}")
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "direction", direction)
        object.__setattr__(self, "order", len(coeffs) - 1)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    def coefficient(self, n):
        if not 0 <= n <= self.order:
            raise IndexError(f"coefficient u^{n} beyond truncation order {self.order}")
        return self.coeffs[n]

    @property
    def constant_term(self):
        return self.coeffs[0]

    def _check_compatible(self, other):
        if self.direction != other.direction:
            raise ValueError("cannot combine series in u with series in u^-1")
        if self.order != other.order:
            raise ValueError(
                f"cannot combine series of different orders ({self.order} vs {other.order})"
            )

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_compatible(other)
        return TruncatedSeries(self.direction, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_compatible(other)
        return TruncatedSeries(self.direction, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return TruncatedSeries(self.direction, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_compatible(other)
        out = []
        for n in range(self.order + 1):
            acc = None
            for k in range(n + 1):
                term = self.coeffs[k] * other.coeffs[n - k]
                acc = term if acc is None else acc + term
            out.append(acc)
        return TruncatedSeries(self.direction, out)

    def scale(self, scalar):
        """Multiply every coefficient on the right by a central scalar."""
        return TruncatedSeries(self.direction, tuple(c * scalar for c in self.coeffs))

    def map(self, fn):
        return TruncatedSeries(self.direction, tuple(fn(c) for c in self.coeffs))

    def rescale_arg(self, a):
        """Substitute the series variable x by a*x (x is u or u^-1)."""
        out = []
        power = None
        for n, c in enumerate(self.coeffs):
            if n == 0:
                out.append(c)
                power = a
            else:
                out.append(c * power)
                power = power * a
        return TruncatedSeries(self.direction, out)

    def truncate(self, new_order):
        if new_order > self.order:
            raise ValueError(f"cannot extend a truncated series ({new_order} > {self.order})")
        return TruncatedSeries(self.direction, self.coeffs[: new_order + 1])

    def inverse(self):
        """The multiplicative inverse, requiring an invertible constant term."""
        c0_inv = self.coeffs[0].inverse()
        inv = [c0_inv]
        for n in range(1, self.order + 1):
            acc = None
            for k in range(1, n + 1):
                term = self.coeffs[k] * inv[n - k]
                acc = term if acc is None else acc + term
            inv.append(-(c0_inv * acc))
        return TruncatedSeries(self.direction, inv)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.direction == other.direction
            and self.order == other.order
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __repr__(self):
        var = "u" if self.direction == ASC else "u^-1"
        parts = ", ".join(f"{var}^{n}: {c!r}" for n, c in enumerate(self.coeffs))
        return f"<series [{parts}]>"


def from_coefficient_map(direction, order, coeff_at, zero):
    """Series whose n-th coefficient is coeff_at(n); zero fills gaps of None."""
    coeffs = []
    for n in range(order + 1):
        c = coeff_at(n)
        coeffs.append(zero if c is None else c)
    return TruncatedSeries(direction, coeffs)


def _nilpotent_check(s):
    if s.coeffs[0]:
        raise ValueError("series must have zero constant term here")


def log_one_minus(s):
    """log(1 - s) = -sum_{n>=1} s^n / n, for s with zero constant term."""
    _nilpotent_check(s)
    acc = -s
    power = s
    for n in range(2, s.order + 1):
        power = power * s
        acc = acc - power.scale(Fraction(1, n))
    return acc


def exponential(s, one):
    """exp(s) for s with zero constant term; `one` is the algebra identity."""
    _nilpotent_check(s)
    zero = one - one
    coeffs = [one] + [zero] * s.order
    acc = TruncatedSeries(s.direction, coeffs)
    power = None
    fact = 1
    for n in range(1, s.order + 1):
        power = s if power is None else power * s
        fact *= n
        acc = acc + power.scale(Fraction(1, fact))
    return acc
