"""Exact coefficient arithmetic for q-algebra computations.

Everything downstream works over the field Q(q, z1, ..., zk, zeta, ...):
fractions of multivariate Laurent polynomials with rational coefficients.
The marker z_i stands for q^{lambda_i}, so weight parameters stay symbolic
and identities are verified generically rather than at sample points.
A fixed variable order makes canonical forms, and hence equality,
deterministic.

The canonical form of a fraction is:

* the denominator is an ordinary polynomial (no negative exponents, and no
  variable divides it), monic with respect to the lexicographic order below,
* numerator and denominator have no common polynomial factor,
* any monomial or rational content sits in the numerator.

Reduction uses a polynomial gcd; the gcd itself is delegated to sympy's
sparse polynomial rings, which is the one place this module leans on an
external library.
"""

from __future__ import annotations

import functools
import re
from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.rings import ring as _sympy_ring

# Lexicographic variable order used for every canonical form.  Variables not
# listed here sort after the known ones, alphabetically.
VAR_ORDER = ("q", "z1", "z2", "z3", "zeta", "zeta1", "zeta2", "zeta3")

_VAR_RANK = {v: i for i, v in enumerate(VAR_ORDER)}


def _var_rank(v):
    return (_VAR_RANK.get(v, len(VAR_ORDER)), v)


class Mono:
    """An immutable Laurent monomial: a map from variable to integer exponent."""

    __slots__ = ("_exps", "_hash")

    def __init__(self, exps=None, **kw):
        combined = {}
        if exps:
            combined.update(exps)
        for v, e in kw.items():
            combined[v] = combined.get(v, 0) + e
        items = tuple(
            (v, e) for v, e in sorted(combined.items(), key=lambda p: _var_rank(p[0])) if e != 0
        )
        for v, e in items:
            if not isinstance(e, int):
                raise TypeError(f"exponent of {v} must be an integer, got {e!r}")
        object.__setattr__(self, "_exps", items)
        object.__setattr__(self, "_hash", hash(items))

    def __setattr__(self, name, value):
        raise AttributeError("Mono is immutable")

    @staticmethod
    def _raw(items):
        self = object.__new__(Mono)
        object.__setattr__(self, "_exps", items)
        object.__setattr__(self, "_hash", hash(items))
        return self

    @property
    def exps(self):
        return self._exps

    def exponent(self, var):
        for v, e in self._exps:
            if v == var:
                return e
        return 0

    def variables(self):
        return tuple(v for v, _ in self._exps)

    @property
    def is_one(self):
        return not self._exps

    def __mul__(self, other):
        if not isinstance(other, Mono):
            return NotImplemented
        a, b = self._exps, other._exps
        if not a:
            return other
        if not b:
            return self
        out = []
        i = j = 0
        la, lb = len(a), len(b)
        while i < la and j < lb:
            va, ea = a[i]
            vb, eb = b[j]
            if va == vb:
                e = ea + eb
                if e:
                    out.append((va, e))
                i += 1
                j += 1
            elif _var_rank(va) < _var_rank(vb):
                out.append(a[i])
                i += 1
            else:
                out.append(b[j])
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return Mono._raw(tuple(out))

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k == 1:
            return self
        if k == 0:
            return _MONO_ONE
        return Mono._raw(tuple((v, e * k) for v, e in self._exps))

    def inverse(self):
        return self ** -1

    def __eq__(self, other):
        return isinstance(other, Mono) and self._exps == other._exps

    def __hash__(self):
        return self._hash

    def lex_key(self, ordered_vars):
        """Exponent vector along `ordered_vars`, for lexicographic comparison."""
        return tuple(self.exponent(v) for v in ordered_vars)

    def __repr__(self):
        return f"Mono({dict(self._exps)!r})"

    def __str__(self):
        if not self._exps:
            return "1"
        return "*".join(v if e == 1 else f"{v}^{e}" for v, e in self._exps)


_MONO_ONE = Mono()


def qpow(nu=0, **weights):
    """The monomial q^nu * prod(var^c) -- 'q to a linear exponent'."""
    return Mono(q=nu) * Mono(weights)


class LaurentPoly:
    """A multivariate Laurent polynomial with Fraction coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if not isinstance(m, Mono):
                    raise TypeError(f"term key must be Mono, got {m!r}")
                c = Fraction(c)
                if c:
                    clean[m] = clean.get(m, 0) + c
            clean = {m: c for m, c in clean.items() if c}
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def from_int(cls, n):
        return cls({_MONO_ONE: Fraction(n)}) if n else cls()

    @classmethod
    def from_mono(cls, m, c=1):
        return cls({m: Fraction(c)})

    @property
    def terms(self):
        return self._terms

    @property
    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and _MONO_ONE in self._terms)

    def constant_value(self):
        if not self._terms:
            return Fraction(0)
        if not self.is_constant:
            raise ValueError("not a constant polynomial")
        return self._terms[_MONO_ONE]

    @property
    def is_monomial(self):
        return len(self._terms) == 1

    def variables(self):
        vs = set()
        for m in self._terms:
            vs.update(m.variables())
        return sorted(vs, key=_var_rank)

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self._terms:
            return other
        if not other._terms:
            return self
        d = dict(self._terms)
        for m, c in other._terms.items():
            s = d.get(m, 0) + c
            if s:
                d[m] = s
            elif m in d:
                del d[m]
        return LaurentPoly(d)

    def __neg__(self):
        return LaurentPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self._terms or not other._terms:
            return _POLY_ZERO
        if other.is_monomial:
            (m2, c2), = other._terms.items()
            return LaurentPoly({m * m2: c * c2 for m, c in self._terms.items()})
        if self.is_monomial:
            return other * self
        d = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                s = d.get(m, 0) + c1 * c2
                if s:
                    d[m] = s
                elif m in d:
                    del d[m]
        return LaurentPoly(d)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("LaurentPoly power needs a non-negative integer")
        out = _POLY_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return _POLY_ZERO
        return LaurentPoly({m: cc * c for m, cc in self._terms.items()})

    def shift(self, mono):
        """Multiply by a monomial."""
        if mono.is_one:
            return self
        return LaurentPoly({m * mono: c for m, c in self._terms.items()})

    def monomial_gcd(self):
        """The largest monomial dividing every term (exponent-wise minimum)."""
        if not self._terms:
            return _MONO_ONE
        vs = self.variables()
        mins = {}
        for v in vs:
            mins[v] = min(m.exponent(v) for m in self._terms)
        return Mono({v: e for v, e in mins.items() if e})

    def leading(self):
        """(Mono, coeff) of the lexicographically greatest term."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        vs = self.variables()
        m = max(self._terms, key=lambda mm: mm.lex_key(vs))
        return m, self._terms[m]

    def substitute(self, mapping):
        """Replace variables by scaled monomials.

        `mapping` sends a variable name to a (Fraction, Mono) pair, a bare
        Mono, or an integer power of q.  Each occurrence var^e becomes
        coeff^e * mono^e, which keeps the result a Laurent polynomial.
        """
        norm = {}
        for v, target in mapping.items():
            if isinstance(target, Mono):
                norm[v] = (Fraction(1), target)
            elif isinstance(target, int):
                norm[v] = (Fraction(1), Mono(q=target))
            else:
                c, m = target
                c = Fraction(c)
                if not c:
                    raise ValueError("substitution coefficient must be nonzero")
                norm[v] = (c, m)
        d = {}
        for m, c in self._terms.items():
            new_c = c
            new_m = _MONO_ONE
            for v, e in m.exps:
                if v in norm:
                    cv, mv = norm[v]
                    new_c *= cv ** e
                    new_m = new_m * mv ** e
                else:
                    new_m = new_m * Mono({v: e})
            s = d.get(new_m, 0) + new_c
            if s:
                d[new_m] = s
            elif new_m in d:
                del d[new_m]
        return LaurentPoly(d)

    def divexact(self, other):
        """Exact division by `other`, or None when it does not divide.

        Both operands are first shifted to ordinary polynomials; the monomial
        parts divide trivially.
        """
        if not other._terms:
            raise ZeroDivisionError("polynomial division by zero")
        if not self._terms:
            return _POLY_ZERO
        sm, om = self.monomial_gcd(), other.monomial_gcd()
        a = self.shift(sm.inverse())
        b = other.shift(om.inverse())
        carry = sm * om.inverse()
        if b.is_constant:
            return a.scale(1 / b.constant_value()).shift(carry)
        vs = sorted(set(a.variables()) | set(b.variables()), key=_var_rank)
        lead_m, lead_c = b.leading()
        lead_key = lead_m.lex_key(vs)
        lead_inv = lead_m.inverse()
        quot = {}
        rem = dict(a._terms)
        while rem:
            m = max(rem, key=lambda mm: mm.lex_key(vs))
            key = m.lex_key(vs)
            if any(k < lk for k, lk in zip(key, lead_key)):
                return None
            qm = m * lead_inv
            if any(qm.exponent(v) < 0 for v in vs):
                return None
            qc = rem[m] / lead_c
            quot[qm] = qc
            for bm, bc in b._terms.items():
                t = qm * bm
                s = rem.get(t, 0) - qc * bc
                if s:
                    rem[t] = s
                elif t in rem:
                    del rem[t]
        return LaurentPoly(quot).shift(carry)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({self._terms!r})"

    def __str__(self):
        return _render_poly(self)


_POLY_ZERO = LaurentPoly()
_POLY_ONE = LaurentPoly({_MONO_ONE: Fraction(1)})

_FR0 = Fraction(0)


def _single_variable(poly):
    """The only variable in the support, or None when there are several."""
    seen = None
    for m in poly._terms:
        for v, _ in m.exps:
            if seen is None:
                seen = v
            elif v != seen:
                return None
    return seen


def _uni_trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _uni_rem(a, b):
    """Remainder of dense coefficient lists; clobbers a."""
    db = len(b) - 1
    lead = b[-1]
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if not c:
            continue
        f = c / lead
        a[i] = _FR0
        for j in range(db):
            a[i - db + j] -= f * b[j]
    return _uni_trim(a)


def _uni_gcd(a, b):
    a = _uni_trim(a[:])
    b = _uni_trim(b[:])
    while b:
        a, b = b, _uni_rem(a, b)
    if a and a[-1] != 1:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _uni_div(a, g):
    """Exact quotient of dense coefficient lists."""
    a = a[:]
    dg = len(g) - 1
    lead = g[-1]
    out = [_FR0] * (len(a) - dg)
    for i in range(len(a) - 1, dg - 1, -1):
        c = a[i]
        if not c:
            continue
        f = c / lead
        out[i - dg] = f
        a[i] = _FR0
        for j in range(dg):
            a[i - dg + j] -= f * g[j]
    return out


def _dense_bucket(bucket):
    deg = max(bucket)
    return [bucket.get(i, _FR0) for i in range(deg + 1)]


def _split_by_var(poly, var):
    """Bucket the terms by their monomial part away from `var`."""
    buckets = {}
    for m, c in poly._terms.items():
        e = m.exponent(var)
        rest = m * Mono._raw(((var, -e),)) if e else m
        buckets.setdefault(rest, {})[e] = c
    return buckets


def _join_buckets(buckets, var):
    terms = {}
    for rest, dense in buckets.items():
        for i, c in enumerate(dense):
            if c:
                terms[rest * Mono._raw(((var, i),)) if i else rest] = c
    return LaurentPoly(terms)


def _to_sympy_key(mono, vs):
    return tuple(mono.exponent(v) for v in vs)


@functools.lru_cache(maxsize=8192)
def _poly_gcd(a, b):
    """gcd of two ordinary (non-negative exponent) polynomials.

    Returned normalized so the lexicographic leading coefficient is 1.
    """
    if a == b:
        return a
    vs = sorted(set(a.variables()) | set(b.variables()), key=_var_rank)
    if not vs:
        return _POLY_ONE
    R, *_gens = _sympy_ring(vs, QQ)
    fa = R.from_dict({_to_sympy_key(m, vs): QQ(c.numerator, c.denominator) for m, c in a.terms.items()})
    fb = R.from_dict({_to_sympy_key(m, vs): QQ(c.numerator, c.denominator) for m, c in b.terms.items()})
    g = fa.gcd(fb)
    terms = {}
    for exps, c in g.terms():
        mono = Mono({v: e for v, e in zip(vs, exps) if e})
        terms[mono] = Fraction(int(c.numerator), int(c.denominator))
    gp = LaurentPoly(terms)
    _, lead = gp.leading()
    if lead != 1:
        gp = gp.scale(1 / lead)
    return gp


class FieldElement:
    """A canonical fraction of Laurent polynomials."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den, _raw=False):
        if not _raw:
            raise ValueError("use field(), FieldElement.make() or arithmetic to build elements")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @staticmethod
    def make(num, den=_POLY_ONE):
        """Build the canonical fraction num/den."""
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            return ZERO
        if den is _POLY_ONE or den == _POLY_ONE:
            return FieldElement(num, _POLY_ONE, _raw=True)
        mn = num.monomial_gcd()
        md = den.monomial_gcd()
        num0 = num.shift(mn.inverse())
        den0 = den.shift(md.inverse())
        carry = mn * md.inverse()
        if den0.is_constant:
            c = den0.constant_value()
            return FieldElement(num0.scale(1 / c).shift(carry), _POLY_ONE, _raw=True)
        if num0.is_monomial:
            # after the shift a single-term numerator is a constant
            c = den0.leading()[1]
            return FieldElement(num0.scale(1 / c).shift(carry), den0.scale(1 / c), _raw=True)
        v = _single_variable(den0)
        if v is not None:
            g = _dense_bucket({m.exponent(v): c for m, c in den0._terms.items()})
            buckets = _split_by_var(num0, v)
            dense = {}
            for rest, bucket in buckets.items():
                dense[rest] = _dense_bucket(bucket)
                if len(g) > 1:
                    g = _uni_gcd(g, dense[rest])
            if len(g) > 1:
                den0 = _join_buckets({_MONO_ONE: _uni_div(_dense_bucket(
                    {m.exponent(v): c for m, c in den0._terms.items()}), g)}, v)
                num0 = _join_buckets({r: _uni_div(d, g) for r, d in dense.items()}, v)
                if den0.is_constant:
                    return FieldElement(
                        num0.scale(1 / den0.constant_value()).shift(carry), _POLY_ONE, _raw=True
                    )
        else:
            q = num0.divexact(den0)
            if q is not None:
                return FieldElement(q.shift(carry), _POLY_ONE, _raw=True)
            g = _poly_gcd(num0, den0)
            if not g.is_constant:
                num0 = num0.divexact(g)
                den0 = den0.divexact(g)
        c = den0.leading()[1]
        if den0.is_constant:
            return FieldElement(num0.scale(1 / den0.constant_value()).shift(carry), _POLY_ONE, _raw=True)
        if c != 1:
            num0 = num0.scale(1 / c)
            den0 = den0.scale(1 / c)
        return FieldElement(num0.shift(carry), den0, _raw=True)

    @property
    def is_zero(self):
        return self.num.is_zero

    def __bool__(self):
        return bool(self.num)

    @property
    def is_polynomial(self):
        return self.den == _POLY_ONE

    @property
    def is_monomial(self):
        """True when the element is c * (a single monomial)."""
        return self.is_polynomial and self.num.is_monomial

    def as_mono(self):
        """The (coefficient, Mono) pair of a monomial element."""
        if not self.is_monomial:
            raise ValueError(f"not a monomial: {self}")
        (m, c), = self.num.terms.items()
        return c, m

    def mono_power(self, k):
        """Integer power of a monomial element, exact for negative k too."""
        c, m = self.as_mono()
        return FieldElement.make(LaurentPoly.from_mono(m ** k, c ** k))

    def __add__(self, other):
        other = field(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den is _POLY_ONE and other.den is _POLY_ONE:
            s = self.num + other.num
            return ZERO if s.is_zero else FieldElement(s, _POLY_ONE, _raw=True)
        if self.den == other.den:
            return FieldElement.make(self.num + other.num, self.den)
        return FieldElement.make(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        if not self.num:
            return self
        return FieldElement(-self.num, self.den, _raw=True)

    def __sub__(self, other):
        other = field(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return field(other) - self

    def __mul__(self, other):
        other = field(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if self.is_polynomial and other.is_polynomial:
            return FieldElement(self.num * other.num, _POLY_ONE, _raw=True)
        # cross-cancel so the product of the reduced pairs is already reduced
        r1 = FieldElement.make(self.num, other.den)
        r2 = FieldElement.make(other.num, self.den)
        num = r1.num * r2.num
        den = r1.den * r2.den
        if den == _POLY_ONE:
            return FieldElement(num, _POLY_ONE, _raw=True)
        return FieldElement(num, den, _raw=True)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement.make(self.den, self.num)

    def __truediv__(self, other):
        other = field(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return field(other) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def substitute(self, mapping):
        return FieldElement.make(self.num.substitute(mapping), self.den.substitute(mapping))

    def __eq__(self, other):
        other = field(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.num, self.den)))
        return self._hash

    def __repr__(self):
        return f"<FieldElement {self}>"

    def __str__(self):
        return render(self)


ZERO = FieldElement(_POLY_ZERO, _POLY_ONE, _raw=True)
ONE = FieldElement(_POLY_ONE, _POLY_ONE, _raw=True)


def field(x):
    """Coerce ints, Fractions, Monos and LaurentPolys into the field."""
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, int):
        return FieldElement(LaurentPoly.from_int(x), _POLY_ONE, _raw=True)
    if isinstance(x, Fraction):
        return FieldElement(LaurentPoly({_MONO_ONE: x}), _POLY_ONE, _raw=True) if x else ZERO
    if isinstance(x, Mono):
        return FieldElement(LaurentPoly.from_mono(x), _POLY_ONE, _raw=True)
    if isinstance(x, LaurentPoly):
        return FieldElement.make(x)
    return NotImplemented


def canonicalize(x):
    """Re-normalize an element; a no-op for values built through the API."""
    x = field(x)
    return FieldElement.make(x.num, x.den)


def kappa():
    """kappa_q = q - q^-1."""
    return field(Mono(q=1)) - field(Mono(q=-1))


_KAPPA = None


def _kappa_cached():
    global _KAPPA
    if _KAPPA is None:
        _KAPPA = kappa()
    return _KAPPA


def qnum(a, sym=()):
    """The q-number [v]_q = (q^v - q^-v) / (q - q^-1).

    The exponent is v = a + sum of c*lambda for (var, c) pairs in `sym`,
    with q^lambda_i written as the marker z_i.  A bare Mono may be passed
    as `a` to mean q^v directly.
    """
    if isinstance(a, Mono):
        if sym:
            raise ValueError("sym must be empty when a Mono is given")
        m = a
    else:
        m = Mono(q=a)
        for var, c in sym:
            m = m * Mono({var: c})
    return (field(m) - field(m.inverse())) / _kappa_cached()


def qfactorial(n):
    """[n]_q! as an exact field element."""
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"q-factorial needs a non-negative integer, got {n!r}")
    out = ONE
    for k in range(2, n + 1):
        out = out * qnum(k)
    return out


def qbinomial(n, m):
    """The q-binomial coefficient; always a Laurent polynomial."""
    if not isinstance(n, int) or not isinstance(m, int) or n < 0 or m < 0:
        raise ValueError("q-binomial needs non-negative integers")
    if m > n:
        raise ValueError(f"q-binomial undefined for m > n ({m} > {n})")
    return qfactorial(n) / (qfactorial(m) * qfactorial(n - m))


# ---------------------------------------------------------------------------
# Text rendering and parsing.
#
# Grammar (tokens separated by optional spaces):
#
#   element  := poly | '(' poly ')' '/' '(' poly ')'
#   poly     := ['-'] term (('+'|'-') term)*
#   term     := rational ['*' monomial] | monomial
#   monomial := power ('*' power)*
#   power    := var ['^' integer]
#   rational := natural ['/' natural]
#   var      := letter (letter | digit)*
#
# A denominator is printed only when it is not 1, and then both numerator
# and denominator are parenthesized, so '/' at top level is unambiguous.
# ---------------------------------------------------------------------------


def _render_coeff_mono(c, m):
    if m.is_one:
        return str(c)
    if c == 1:
        return str(m)
    if c == -1:
        return f"-{m}"
    return f"{c}*{m}"


def _render_poly(p):
    if p.is_zero:
        return "0"
    vs = p.variables()
    items = sorted(p.terms.items(), key=lambda t: t[0].lex_key(vs), reverse=True)
    out = _render_coeff_mono(items[0][1], items[0][0])
    for m, c in items[1:]:
        if c < 0:
            out += f" - {_render_coeff_mono(-c, m)}"
        else:
            out += f" + {_render_coeff_mono(c, m)}"
    return out


def render(x):
    """The stable plain-text form of a field element."""
    x = field(x)
    if x.is_polynomial:
        return _render_poly(x.num)
    return f"({_render_poly(x.num)})/({_render_poly(x.den)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(\^)|(\*)|(\+)|(-)|(/)|(\()|(\)))")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ValueError(f"cannot tokenize {text[pos:]!r}")
            break
        pos = m.end()
        for kind, val in enumerate(m.groups()):
            if val is not None:
                out.append((kind, val))
                break
    return out


class _Parser:
    INT, NAME, CARET, STAR, PLUS, MINUS, SLASH, LPAR, RPAR = range(9)

    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None):
        k, v = self.peek()
        if kind is not None and k != kind:
            raise ValueError(f"unexpected token {v!r}")
        self.i += 1
        return k, v

    def parse_integer(self):
        sign = 1
        if self.peek()[0] == self.MINUS:
            self.take()
            sign = -1
        _, v = self.take(self.INT)
        return sign * int(v)

    def parse_power(self):
        _, name = self.take(self.NAME)
        if self.peek()[0] == self.CARET:
            self.take()
            e = self.parse_integer()
        else:
            e = 1
        return Mono({name: e})

    def parse_term(self):
        k, v = self.peek()
        coeff = Fraction(1)
        mono = _MONO_ONE
        if k == self.INT:
            self.take()
            coeff = Fraction(int(v))
            if self.peek()[0] == self.SLASH:
                self.take()
                _, d = self.take(self.INT)
                coeff /= int(d)
            while self.peek()[0] == self.STAR:
                self.take()
                mono = mono * self.parse_power()
        elif k == self.NAME:
            mono = self.parse_power()
            while self.peek()[0] == self.STAR:
                self.take()
                mono = mono * self.parse_power()
        else:
            raise ValueError(f"unexpected token {v!r} in term")
        return LaurentPoly({mono: coeff})

    def parse_poly(self):
        sign = 1
        if self.peek()[0] == self.MINUS:
            self.take()
            sign = -1
        out = self.parse_term().scale(sign)
        while self.peek()[0] in (self.PLUS, self.MINUS):
            k, _ = self.take()
            t = self.parse_term()
            out = out + (t if k == self.PLUS else -t)
        return out

    def parse_element(self):
        if self.peek()[0] == self.LPAR:
            self.take()
            num = self.parse_poly()
            self.take(self.RPAR)
            if self.peek()[0] == self.SLASH:
                self.take()
                self.take(self.LPAR)
                den = self.parse_poly()
                self.take(self.RPAR)
                return FieldElement.make(num, den)
            if self.peek()[0] is not None:
                raise ValueError("trailing input after parenthesized polynomial")
            return FieldElement.make(num)
        num = self.parse_poly()
        if self.peek()[0] is not None:
            raise ValueError("trailing input after polynomial")
        return FieldElement.make(num)


def parse(text):
    """Parse the plain-text form produced by render()."""
    if text.strip() == "0":
        return ZERO
    return _Parser(_tokenize(text)).parse_element()
