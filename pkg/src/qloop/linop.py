"""Weight modules with ordered bases, and exact sparse operators on them.

A module here is a finite window of an infinite-dimensional weight module:
basis indices are integer tuples of bounded total degree.  Operators track,
per source index, whether the image is certified exact or was cut by the
truncation ("escaped").  Anything derived from an escaped column is again
escaped, so every certified value downstream is a theorem about the full
module, not about the window.

Cartan generators act diagonally with monomial eigenvalues, which keeps
q^{nu x} exact for every integer nu at once.
"""

from __future__ import annotations

import itertools

from .coeff import ONE, ZERO, Mono, field


#: sentinel a from_rule callback may return to mark a source as escaped
ESCAPED = object()


def weight_mono(w):
    """Eigenvalue marker for a weight parameter: a z-variable or an integer."""
    if isinstance(w, str):
        return Mono({w: 1})
    if isinstance(w, int):
        return Mono(q=w)
    raise TypeError(f"weight parameter must be a marker name or an integer, got {w!r}")


class WeightModule:
    """An ordered basis window together with Cartan eigenvalue data."""

    def __init__(self, kind, basis, cartan, bound, closed=False, params=(), factors=None):
        self.kind = kind
        self.basis = tuple(basis)
        self.basis_set = frozenset(self.basis)
        self.cartan = dict(cartan)  # label -> (index -> Mono)
        self.bound = bound
        self.closed = closed
        self.params = tuple(params)
        self.factors = factors
        self.dim = len(self.basis)

    def __repr__(self):
        return f"<WeightModule {self.kind} dim={self.dim} bound={self.bound}>"

    def weight_of(self, idx):
        return {label: fn(idx) for label, fn in self.cartan.items()}

    def cartan_operator(self, coeffs, power=1):
        """Diagonal image of q^{power * sum coeffs[label] * label}."""

        def eigen(idx):
            m = Mono()
            for label, c in coeffs.items():
                m = m * self.cartan[label](idx) ** (c * power)
            return field(m)

        shift = {label: 0 for label in self.cartan}
        return SparseOperator.diagonal(self, eigen, shift=shift)

    def vector(self, idx, coeff=ONE):
        if idx not in self.basis_set:
            raise KeyError(f"index {idx} not in basis window")
        return Vec({idx: field(coeff)}, certified=True)


def verma_gl2(bound, weights=("z1", "z2")):
    w1, w2 = (weight_mono(w) for w in weights)
    basis = [(m,) for m in range(bound + 1)]
    cartan = {
        "K1": lambda idx, w1=w1: w1 * Mono(q=-idx[0]),
        "K2": lambda idx, w2=w2: w2 * Mono(q=idx[0]),
    }
    return WeightModule("verma-gl2", basis, cartan, bound, params=tuple(weights))


def verma_gl3(bound, weights=("z1", "z2", "z3")):
    w1, w2, w3 = (weight_mono(w) for w in weights)
    basis = [
        (m1, m2, m3)
        for m1, m2, m3 in itertools.product(range(bound + 1), repeat=3)
        if m1 + m2 + m3 <= bound
    ]
    basis.sort()
    cartan = {
        "K1": lambda idx, w=w1: w * Mono(q=-idx[0] - idx[1]),
        "K2": lambda idx, w=w2: w * Mono(q=idx[0] - idx[2]),
        "K3": lambda idx, w=w3: w * Mono(q=idx[1] + idx[2]),
    }
    return WeightModule("verma-gl3", basis, cartan, bound, params=tuple(weights))


def finite_gl2(l1, l2):
    """The finite quotient for an integral dominant gl_2 weight."""
    if not (isinstance(l1, int) and isinstance(l2, int) and l1 >= l2):
        raise ValueError("finite quotient needs integers with l1 >= l2")
    top = l1 - l2
    basis = [(m,) for m in range(top + 1)]
    cartan = {
        "K1": lambda idx: Mono(q=l1 - idx[0]),
        "K2": lambda idx: Mono(q=l2 + idx[0]),
    }
    return WeightModule("finite-gl2", basis, cartan, top, closed=True, params=(l1, l2))


def osc_module(sign, bound):
    """Single q-oscillator Fock window; sign picks which of the two actions."""
    if sign not in (+1, -1):
        raise ValueError("oscillator sign must be +1 or -1")
    basis = [(m,) for m in range(bound + 1)]
    if sign > 0:
        cartan = {"N": lambda idx: Mono(q=idx[0])}
    else:
        cartan = {"N": lambda idx: Mono(q=-idx[0] - 1)}
    kind = "osc-plus" if sign > 0 else "osc-minus"
    return WeightModule(kind, basis, cartan, bound, params=(sign,))


def osc_pair(signs, bound):
    """Two q-oscillators, basis cut at total degree <= bound."""
    s1, s2 = signs
    if s1 not in (+1, -1) or s2 not in (+1, -1):
        raise ValueError("oscillator signs must be +1 or -1")
    basis = [(m1, m2) for m1 in range(bound + 1) for m2 in range(bound + 1 - m1)]
    basis.sort()

    def eigen(sign, pos):
        if sign > 0:
            return lambda idx: Mono(q=idx[pos])
        return lambda idx: Mono(q=-idx[pos] - 1)

    cartan = {"N1": eigen(s1, 0), "N2": eigen(s2, 1)}
    return WeightModule("osc-pair", basis, cartan, bound, params=(s1, s2))


def tensor_module(factors, bound=None):
    """Concatenated-index product of windows, optionally cut in total degree."""
    lengths = [len(f.basis[0]) for f in factors]
    offsets = []
    pos = 0
    for n in lengths:
        offsets.append((pos, pos + n))
        pos += n

    basis = []
    for combo in itertools.product(*(f.basis for f in factors)):
        idx = tuple(itertools.chain.from_iterable(combo))
        if bound is None or sum(idx) <= bound:
            basis.append(idx)
    basis.sort()

    cartan = {}
    for k, f in enumerate(factors):
        a, b = offsets[k]
        for label, fn in f.cartan.items():
            cartan[f"{k}:{label}"] = (lambda idx, fn=fn, a=a, b=b: fn(idx[a:b]))

    mod = WeightModule(
        "tensor",
        basis,
        cartan,
        bound if bound is not None else max(f.bound for f in factors),
        closed=all(f.closed for f in factors) and bound is None,
        params=tuple(f.kind for f in factors),
        factors=tuple(factors),
    )
    mod.offsets = tuple(offsets)
    return mod


class Vec:
    """A vector in a module window, with an exactness certificate."""

    __slots__ = ("terms", "certified")

    def __init__(self, terms=None, certified=True):
        clean = {}
        if terms:
            for idx, c in terms.items():
                c = field(c)
                if c:
                    clean[idx] = c
        self.terms = clean
        self.certified = certified

    @property
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        d = dict(self.terms)
        for idx, c in other.terms.items():
            s = d.get(idx, ZERO) + c
            if s:
                d[idx] = s
            elif idx in d:
                del d[idx]
        return Vec(d, certified=self.certified and other.certified)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = field(c)
        if not c:
            return Vec({}, certified=self.certified)
        return Vec({idx: cc * c for idx, cc in self.terms.items()}, certified=self.certified)

    def __eq__(self, other):
        if not isinstance(other, Vec):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        body = ", ".join(f"{idx}: {c}" for idx, c in sorted(self.terms.items()))
        tag = "" if self.certified else " UNCERTIFIED"
        return f"<Vec {{{body}}}{tag}>"


def _merge_shift_add(a, b):
    if a is None or b is None:
        return None
    return a if a == b else None


def _merge_shift_mul(a, b):
    if a is None or b is None:
        return None
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return out


class SparseOperator:
    """A column-sparse linear map on a module window.

    `escaped` lists source indices whose true image left the window, so their
    columns (dropped here) are not certified.  `shift` optionally declares the
    operator's weight: the integer q-power by which each Cartan eigenvalue
    moves, checkable against the stored columns.
    """

    __slots__ = ("module", "columns", "escaped", "shift")

    def __init__(self, module, columns, escaped=frozenset(), shift=None):
        self.module = module
        self.columns = columns
        self.escaped = frozenset(escaped)
        self.shift = dict(shift) if shift is not None else None

    @classmethod
    def build(cls, module, entries, escaped=(), shift=None):
        cols = {}
        for src, targets in entries.items():
            items = targets.items() if isinstance(targets, dict) else targets
            acc = {}
            for tgt, c in items:
                c = field(c)
                if not c:
                    continue
                s = acc.get(tgt, ZERO) + c
                if s:
                    acc[tgt] = s
                elif tgt in acc:
                    del acc[tgt]
            if acc:
                cols[src] = tuple(sorted(acc.items(), key=lambda t: t[0]))
        return cls(module, cols, frozenset(escaped), shift)

    @classmethod
    def zero(cls, module):
        return cls(module, {}, frozenset(), shift=None)

    @classmethod
    def identity(cls, module):
        cols = {idx: ((idx, ONE),) for idx in module.basis}
        return cls(module, cols, frozenset(), shift={label: 0 for label in module.cartan})

    @classmethod
    def diagonal(cls, module, eigen, shift=None):
        cols = {}
        for idx in module.basis:
            c = field(eigen(idx))
            if c:
                cols[idx] = ((idx, c),)
        return cls(module, cols, frozenset(), shift)

    @classmethod
    def from_rule(cls, module, rule, shift=None):
        """Build from a map index -> [(target, coeff), ...].

        Targets with a negative coordinate are genuine zeros and are dropped.
        Targets outside the window mark the source as escaped, unless the
        module is closed (a true quotient), where they are zeros too.
        """
        cols = {}
        escaped = set()
        for src in module.basis:
            targets = rule(src)
            if targets is ESCAPED:
                escaped.add(src)
                continue
            acc = {}
            for tgt, c in targets:
                c = field(c)
                if not c:
                    continue
                if any(x < 0 for x in tgt):
                    continue
                if tgt not in module.basis_set:
                    if module.closed:
                        continue
                    escaped.add(src)
                    acc = None
                    break
                s = acc.get(tgt, ZERO) + c
                if s:
                    acc[tgt] = s
                elif tgt in acc:
                    del acc[tgt]
            if acc:
                cols[src] = tuple(sorted(acc.items(), key=lambda t: t[0]))
        return cls(module, cols, frozenset(escaped), shift)

    @property
    def certified(self):
        return tuple(idx for idx in self.module.basis if idx not in self.escaped)

    def column(self, src):
        if src in self.escaped:
            raise KeyError(f"column {src} escaped the truncation window")
        return self.columns.get(src, ())

    def _same_module(self, other):
        if self.module is not other.module:
            raise ValueError("operators live on different modules")

    def __add__(self, other):
        if not isinstance(other, SparseOperator):
            return NotImplemented
        self._same_module(other)
        escaped = self.escaped | other.escaped
        cols = {}
        for src in set(self.columns) | set(other.columns):
            if src in escaped:
                continue
            acc = dict(self.columns.get(src, ()))
            for tgt, c in other.columns.get(src, ()):
                s = acc.get(tgt, ZERO) + c
                if s:
                    acc[tgt] = s
                elif tgt in acc:
                    del acc[tgt]
            if acc:
                cols[src] = tuple(sorted(acc.items(), key=lambda t: t[0]))
        return SparseOperator(self.module, cols, escaped, _merge_shift_add(self.shift, other.shift))

    def __neg__(self):
        cols = {s: tuple((t, -c) for t, c in col) for s, col in self.columns.items()}
        return SparseOperator(self.module, cols, self.escaped, self.shift)

    def __sub__(self, other):
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SparseOperator):
            self._same_module(other)
            cols = {}
            escaped = set(other.escaped)
            for src, mid_col in other.columns.items():
                if src in escaped:
                    continue
                if any(mid in self.escaped for mid, _ in mid_col):
                    escaped.add(src)
                    continue
                acc = {}
                for mid, c in mid_col:
                    for tgt, d in self.columns.get(mid, ()):
                        s = acc.get(tgt, ZERO) + d * c
                        if s:
                            acc[tgt] = s
                        elif tgt in acc:
                            del acc[tgt]
                if acc:
                    cols[src] = tuple(sorted(acc.items(), key=lambda t: t[0]))
            return SparseOperator(
                self.module, cols, frozenset(escaped), _merge_shift_mul(self.shift, other.shift)
            )
        scalar = field(other)
        if scalar is NotImplemented:
            return NotImplemented
        if not scalar:
            return SparseOperator(self.module, {}, self.escaped, self.shift)
        cols = {s: tuple((t, c * scalar) for t, c in col) for s, col in self.columns.items()}
        return SparseOperator(self.module, cols, self.escaped, self.shift)

    def __rmul__(self, other):
        # only scalars reach here, and scalars are central
        return self.__mul__(other)

    def inverse(self):
        """Inverse of a diagonal operator with invertible entries.

        Sources already marked escaped stay escaped; everywhere else the
        operator must act as a nonzero scalar.
        """
        cols = {}
        for src in self.module.basis:
            if src in self.escaped:
                continue
            col = self.columns.get(src)
            if col is None or len(col) != 1 or col[0][0] != src:
                raise ValueError("only diagonal operators can be inverted")
            cols[src] = ((src, col[0][1].inverse()),)
        shift = None
        if self.shift is not None:
            shift = {k: -v for k, v in self.shift.items()}
        return SparseOperator(self.module, cols, self.escaped, shift)

    def diagonal_power(self, k):
        """Integer power of a diagonal operator, exact for negative k."""
        if k == 1:
            return self
        cols = {}
        for src, col in self.columns.items():
            if len(col) != 1 or col[0][0] != src:
                raise ValueError("diagonal_power needs a diagonal operator")
            cols[src] = ((src, col[0][1] ** k),)
        shift = None
        if self.shift is not None:
            shift = {lab: v * k for lab, v in self.shift.items()}
        return SparseOperator(self.module, cols, self.escaped, shift)

    def apply(self, vec):
        terms = {}
        certified = vec.certified
        for idx, c in vec.terms.items():
            if idx in self.escaped:
                certified = False
                continue
            for tgt, d in self.columns.get(idx, ()):
                s = terms.get(tgt, ZERO) + d * c
                if s:
                    terms[tgt] = s
                elif tgt in terms:
                    del terms[tgt]
        return Vec(terms, certified=certified)

    def substitute(self, mapping):
        cols = {}
        for src, col in self.columns.items():
            newcol = tuple((t, c.substitute(mapping)) for t, c in col)
            newcol = tuple((t, c) for t, c in newcol if c)
            if newcol:
                cols[src] = newcol
        return SparseOperator(self.module, cols, self.escaped, self.shift)

    def __bool__(self):
        return bool(self.columns) or bool(self.escaped)

    def __eq__(self, other):
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return (
            self.module is other.module
            and self.columns == other.columns
            and self.escaped == other.escaped
        )

    def agrees_with(self, other, window=None):
        """Exact equality of columns over a source window.

        With no window, compares on all sources certified in both operators.
        Raises ValueError if the requested window is not certified.
        """
        self._same_module(other)
        if window is None:
            window = [s for s in self.module.basis if s not in self.escaped and s not in other.escaped]
        else:
            for s in window:
                if s in self.escaped or s in other.escaped:
                    raise ValueError(f"window index {s} is not certified in both operators")
        for s in window:
            if self.columns.get(s, ()) != other.columns.get(s, ()):
                return False
        return True

    def check_shift(self):
        """Verify declared Cartan shifts against the stored columns."""
        if self.shift is None:
            raise ValueError("no declared shift to check")
        bad = []
        for src, col in self.columns.items():
            wsrc = self.module.weight_of(src)
            for tgt, _ in col:
                wtgt = self.module.weight_of(tgt)
                for label, expect in self.shift.items():
                    ratio = wtgt[label] * wsrc[label].inverse()
                    if ratio != Mono(q=expect):
                        bad.append((src, tgt, label, ratio))
        return bad

    def __repr__(self):
        n_esc = len(self.escaped)
        return f"<SparseOperator on {self.module.kind}, {len(self.columns)} cols, {n_esc} escaped>"


def commutator(a, b):
    return a * b - b * a
