"""Concrete realizations of the loop-algebra generators on weight modules.

Two families are built here.  The evaluation family sends the affine
generators through a gl-type algebra acting on a Verma module window; the
q-oscillator family sends the Borel half onto one or two Fock windows.
Diagram twists (the rotation and the flip of the extended Dynkin diagram),
spectral-parameter twists and one-dimensional shifts all act on a finished
realization and return a new one, so composites like "rotate, then flip,
then twist by zeta" are ordinary function composition.

Index conventions: affine nodes are 0..l; the finite nodes are 1..l.
"""

from __future__ import annotations

from .coeff import ONE, Mono, field, kappa, qnum
from .linop import (
    ESCAPED,
    SparseOperator,
    finite_gl2,
    osc_module,
    osc_pair,
    tensor_module,
    verma_gl2,
    verma_gl3,
    weight_mono,
)

AFFINE_CARTAN = {
    "sl2": ((2, -2), (-2, 2)),
    "sl3": ((2, -1, -1), (-1, 2, -1), (-1, -1, 2)),
}

FINITE_CARTAN = {
    "sl2": ((2,),),
    "sl3": ((2, -1), (-1, 2)),
}

#: fixed sign choices o_i entering the loop-generator dictionary, one per
#: finite node, alternating over adjacent nodes
O_SIGNS = {"sl2": (1,), "sl3": (1, -1)}


class GeneratorImages:
    """Images of the affine generators (and whatever they were built from)."""

    def __init__(self, algebra, scope, module, e, f, cartan_ops, aux=None):
        if algebra not in AFFINE_CARTAN:
            raise ValueError(f"unknown algebra {algebra!r}")
        if scope not in ("full", "borel"):
            raise ValueError(f"scope must be 'full' or 'borel', got {scope!r}")
        self.algebra = algebra
        self.scope = scope
        self.module = module
        self.e = dict(e)
        self.f = dict(f) if f is not None else None
        self.cartan_ops = dict(cartan_ops)
        self.aux = dict(aux) if aux else {}
        self.o_signs = O_SIGNS[algebra]

    @property
    def rank(self):
        return len(self.o_signs)

    @property
    def nodes(self):
        return range(self.rank + 1)

    def qh(self, i, nu=1):
        """Image of q^{nu h_i}, exact for any integer nu."""
        return self.cartan_ops[i].diagonal_power(nu)

    def replace(self, **kw):
        args = {
            "algebra": self.algebra,
            "scope": self.scope,
            "module": self.module,
            "e": self.e,
            "f": self.f,
            "cartan_ops": self.cartan_ops,
            "aux": self.aux,
        }
        args.update(kw)
        return GeneratorImages(**args)


# ---------------------------------------------------------------------------
# Evaluation realizations through gl-type operators on Verma windows.
# ---------------------------------------------------------------------------


def jimbo_sl2(bound, weights=("z1", "z2")):
    """Rank-one evaluation realization on a gl_2 Verma window."""
    return _jimbo_sl2_on(verma_gl2(bound, weights), weights)


def jimbo_sl2_finite(l1, l2):
    """The same realization on the closed finite window at a dominant weight."""
    return _jimbo_sl2_on(finite_gl2(l1, l2), (l1, l2))


def _jimbo_sl2_on(module, weights):
    w1, w2 = (weight_mono(w) for w in weights)

    def e_rule(idx):
        (m,) = idx
        coeff = qnum(m) * qnum(w1 * w2 ** -1 * Mono(q=-m + 1))
        return [((m - 1,), coeff)]

    E = SparseOperator.from_rule(module, e_rule, shift={"K1": 1, "K2": -1})
    F = SparseOperator.from_rule(
        module, lambda idx: [((idx[0] + 1,), ONE)], shift={"K1": -1, "K2": 1}
    )
    qK12 = module.cartan_operator({"K1": 1, "K2": 1})
    gl = {"E": E, "F": F}

    e = {0: F * qK12, 1: E}
    f = {0: E * qK12.diagonal_power(-1), 1: F}
    cartan = {
        0: module.cartan_operator({"K2": 1, "K1": -1}),
        1: module.cartan_operator({"K1": 1, "K2": -1}),
    }
    return GeneratorImages("sl2", "full", module, e, f, cartan, aux=gl)


def jimbo_sl3(bound, weights=("z1", "z2", "z3")):
    """Rank-two evaluation realization on a gl_3 Verma window.

    The Verma basis is ordered by the lowering words F1^{m1} F3^{m2} F2^{m3}
    applied to the highest vector, with F3 the q-commutator of F2 and F1.
    """
    module = verma_gl3(bound, weights)
    w1, w2, w3 = (weight_mono(w) for w in weights)

    def w(i, j, c):
        # the monomial q^{lambda_i - lambda_j + c}
        ws = {1: w1, 2: w2, 3: w3}
        return ws[i] * ws[j] ** -1 * Mono(q=c)

    def f1_rule(idx):
        m1, m2, m3 = idx
        return [((m1 + 1, m2, m3), ONE)]

    def f2_rule(idx):
        m1, m2, m3 = idx
        return [
            ((m1, m2, m3 + 1), field(Mono(q=-m1 + m2))),
            ((m1 - 1, m2 + 1, m3), qnum(m1)),
        ]

    def f3_rule(idx):
        m1, m2, m3 = idx
        return [((m1, m2 + 1, m3), field(Mono(q=m1)))]

    def e1_rule(idx):
        m1, m2, m3 = idx
        return [
            ((m1 - 1, m2, m3), qnum(w(1, 2, -m1 - m2 + m3 + 1)) * qnum(m1)),
            ((m1, m2 - 1, m3 + 1), -field(w(2, 1, m2 - m3 - 2)) * qnum(m2)),
        ]

    def e2_rule(idx):
        m1, m2, m3 = idx
        return [
            ((m1, m2, m3 - 1), qnum(w(2, 3, -m3 + 1)) * qnum(m3)),
            ((m1 + 1, m2 - 1, m3), field(w(2, 3, -2 * m3)) * qnum(m2)),
        ]

    F1 = SparseOperator.from_rule(module, f1_rule, shift={"K1": -1, "K2": 1, "K3": 0})
    F2 = SparseOperator.from_rule(module, f2_rule, shift={"K1": 0, "K2": -1, "K3": 1})
    F3 = SparseOperator.from_rule(module, f3_rule, shift={"K1": -1, "K2": 0, "K3": 1})
    E1 = SparseOperator.from_rule(module, e1_rule, shift={"K1": 1, "K2": -1, "K3": 0})
    E2 = SparseOperator.from_rule(module, e2_rule, shift={"K1": 0, "K2": 1, "K3": -1})
    q1 = field(Mono(q=1))
    E3 = E1 * E2 - q1 * (E2 * E1)
    gl = {"E1": E1, "E2": E2, "E3": E3, "F1": F1, "F2": F2, "F3": F3}

    qK13 = module.cartan_operator({"K1": 1, "K3": 1})
    e = {0: F3 * qK13, 1: E1, 2: E2}
    f = {0: E3 * qK13.diagonal_power(-1), 1: F1, 2: F2}
    cartan = {
        0: module.cartan_operator({"K3": 1, "K1": -1}),
        1: module.cartan_operator({"K1": 1, "K2": -1}),
        2: module.cartan_operator({"K2": 1, "K3": -1}),
    }
    return GeneratorImages("sl3", "full", module, e, f, cartan, aux=gl)


def e3_displayed_rule(module, weights):
    """The closed-form matrix elements of the composite raising operator.

    Kept separate from the construction (which composes the simple ones)
    so the two can be compared in tests.
    """
    w1, w2, w3 = (weight_mono(w) for w in weights)

    def rule(idx):
        m1, m2, m3 = idx
        a = field(Mono(q=-m1)) * qnum(w1 * w3 ** -1 * Mono(q=-m1 - m2 - m3 + 1)) * qnum(m2)
        b = (
            -field(w1 * w2 ** -1 * Mono(q=-m1 - m2 + m3 + 1))
            * qnum(w2 * w3 ** -1 * Mono(q=-m3 + 1))
            * qnum(m1)
            * qnum(m3)
        )
        return [((m1, m2 - 1, m3), a), ((m1 - 1, m2, m3 - 1), b)]

    return SparseOperator.from_rule(module, rule, shift={"K1": 1, "K2": 0, "K3": -1})


def f3_displayed_rule(module):
    def rule(idx):
        m1, m2, m3 = idx
        return [((m1, m2 + 1, m3), field(Mono(q=m1)))]

    return SparseOperator.from_rule(module, rule, shift={"K1": -1, "K2": 0, "K3": 1})


# ---------------------------------------------------------------------------
# q-oscillator realizations of the Borel half on Fock windows.
# ---------------------------------------------------------------------------


def _osc_ops(module, pos, sign, label):
    """Annihilation, creation and the number-eigenvalue handle at one slot."""

    def step(idx, d):
        lst = list(idx)
        lst[pos] += d
        return tuple(lst)

    if sign > 0:
        b = SparseOperator.from_rule(
            module, lambda idx: [(step(idx, -1), qnum(idx[pos]))], shift={label: -1}
        )
        bdag = SparseOperator.from_rule(
            module, lambda idx: [(step(idx, +1), ONE)], shift={label: +1}
        )
    else:
        b = SparseOperator.from_rule(
            module, lambda idx: [(step(idx, +1), ONE)], shift={label: -1}
        )
        bdag = SparseOperator.from_rule(
            module, lambda idx: [(step(idx, -1), -qnum(idx[pos]))], shift={label: +1}
        )
    return b, bdag


def osc_rep_sl2(sign, bound):
    """The Borel realization through one q-oscillator, on the chosen Fock
    action (sign +1 or -1)."""
    module = osc_module(sign, bound)
    b, bdag = _osc_ops(module, 0, sign, "N")
    qN = module.cartan_operator({"N": 1})
    e = {0: bdag, 1: -kappa().inverse() * (b * qN)}
    cartan = {
        0: module.cartan_operator({"N": 2}),
        1: module.cartan_operator({"N": -2}),
    }
    aux = {"b": b, "bdag": bdag}
    return GeneratorImages("sl2", "borel", module, e, None, cartan, aux=aux)


def osc_rep_sl3(signs, bound):
    """The Borel realization through two q-oscillators."""
    module = osc_pair(signs, bound)
    b1, b1d = _osc_ops(module, 0, signs[0], "N1")
    b2, b2d = _osc_ops(module, 1, signs[1], "N2")
    qN = module.cartan_operator
    e = {
        0: b1d * qN({"N2": 1}),
        1: -field(Mono(q=-1)) * (b1 * b2d * qN({"N1": 1, "N2": -1})),
        2: -kappa().inverse() * (b2 * qN({"N2": 1})),
    }
    cartan = {
        0: qN({"N1": 2, "N2": 1}),
        1: qN({"N1": -1, "N2": 1}),
        2: qN({"N1": -1, "N2": -2}),
    }
    aux = {"b1": b1, "b1d": b1d, "b2": b2, "b2d": b2d}
    return GeneratorImages("sl3", "borel", module, e, None, cartan, aux=aux)


# ---------------------------------------------------------------------------
# Twists.
# ---------------------------------------------------------------------------


def twist_sigma(images, power=1):
    """Precompose with the rotation of the extended diagram, taken to `power`.

    The rotation sends node i to node i+1 cyclically, so the twisted
    realization reads its node-i generators from node (i+power) mod (l+1).
    """
    n = images.rank + 1
    perm = {i: (i + power) % n for i in range(n)}
    e = {i: images.e[perm[i]] for i in range(n)}
    f = {i: images.f[perm[i]] for i in range(n)} if images.f is not None else None
    cartan = {i: images.cartan_ops[perm[i]] for i in range(n)}
    return images.replace(e=e, f=f, cartan_ops=cartan)


def tau_node_map(rank):
    n = rank + 1
    return {0: 0, **{i: n - i for i in range(1, n)}}


def twist_tau(images):
    """Precompose with the flip of the extended diagram (trivial at rank 1)."""
    perm = tau_node_map(images.rank)
    n = images.rank + 1
    e = {i: images.e[perm[i]] for i in range(n)}
    f = {i: images.f[perm[i]] for i in range(n)} if images.f is not None else None
    cartan = {i: images.cartan_ops[perm[i]] for i in range(n)}
    return images.replace(e=e, f=f, cartan_ops=cartan)


def spectral_twist(images, exps, marker="zeta"):
    """Grade the raising generators by powers of a spectral marker.

    `exps` maps node -> integer s_i; e_i picks up marker^{s_i} and f_i the
    inverse power.  Cartan images are untouched.
    """
    e = {}
    f = {} if images.f is not None else None
    for i in images.nodes:
        s = exps.get(i, 0)
        e[i] = images.e[i] * field(Mono({marker: s})) if s else images.e[i]
        if f is not None:
            f[i] = images.f[i] * field(Mono({marker: -s})) if s else images.f[i]
    return images.replace(e=e, f=f)


def shift_rep(images, xi):
    """Multiply q^{h_i} by the constant q^{xi_i}; raising images unchanged.

    `xi` maps node -> Mono (a q-power, possibly with weight markers).  Only
    meaningful for Borel realizations, and only when the combination pairs
    to zero against the central element, i.e. the xi monomials multiply to 1.
    """
    total = Mono()
    for i in images.nodes:
        total = total * xi.get(i, Mono())
    if not total.is_one:
        raise ValueError("shift exponents must pair to zero with the central element")
    cartan = {
        i: images.cartan_ops[i] * field(xi.get(i, Mono())) for i in images.nodes
    }
    return images.replace(cartan_ops=cartan)


# ---------------------------------------------------------------------------
# The named oscillator realizations at each rank.
# ---------------------------------------------------------------------------


def theta_sl2(variant, bound):
    """variant 1: minus-Fock action, rotated; variant 2: plus-Fock action."""
    if variant == 1:
        return twist_sigma(osc_rep_sl2(-1, bound), -1)
    if variant == 2:
        return osc_rep_sl2(+1, bound)
    raise ValueError(f"no rank-one oscillator realization numbered {variant!r}")


def theta_sl3(variant, bound, barred=False):
    """The six rank-two oscillator realizations, three plain and three barred."""
    if variant == 1:
        base = osc_rep_sl3((-1, -1), bound)
        plain = twist_sigma(base, -1)
        if not barred:
            return plain
        return twist_tau(osc_rep_sl3((+1, +1), bound))
    if variant == 2:
        base = osc_rep_sl3((-1, +1), bound)
        plain = twist_sigma(base, -2)
        if not barred:
            return plain
        return twist_tau(plain)
    if variant == 3:
        base = osc_rep_sl3((+1, +1), bound)
        if not barred:
            return base
        return twist_tau(twist_sigma(osc_rep_sl3((-1, -1), bound), -1))
    raise ValueError(f"no rank-two oscillator realization numbered {variant!r}")


# ---------------------------------------------------------------------------
# Tensor products of Borel realizations.
# ---------------------------------------------------------------------------


def _lift(module, k, op):
    a, b = module.offsets[k]

    def rule(idx):
        part = idx[a:b]
        if part in op.escaped:
            return ESCAPED
        return [
            (idx[:a] + tgt + idx[b:], c) for tgt, c in op.columns.get(part, ())
        ]

    shift = None
    if op.shift is not None:
        shift = {f"{j}:{lab}": 0 for j, f in enumerate(module.factors) for lab in f.cartan}
        for lab, v in op.shift.items():
            shift[f"{k}:{lab}"] = v
    return SparseOperator.from_rule(module, rule, shift=shift)


def tensor_rep(factors, bound=None):
    """Coproduct action on a product of Borel realization windows.

    The raising generator acts as e_i (x) 1 + q^{h_i} (x) e_i, folded left
    to right across all factors.
    """
    if not factors:
        raise ValueError("need at least one tensor factor")
    algebra = factors[0].algebra
    for fac in factors:
        if fac.algebra != algebra:
            raise ValueError("tensor factors realize different algebras")
    module = tensor_module([fac.module for fac in factors], bound)
    nfac = len(factors)

    lifted_e = [
        {i: _lift(module, k, fac.e[i]) for i in fac.nodes} for k, fac in enumerate(factors)
    ]
    lifted_h = [
        {i: _lift(module, k, fac.cartan_ops[i]) for i in fac.nodes}
        for k, fac in enumerate(factors)
    ]

    e = {}
    cartan = {}
    for i in factors[0].nodes:
        acc = None
        for k in range(nfac):
            term = lifted_e[k][i]
            for j in range(k):
                term = lifted_h[j][i] * term
            acc = term if acc is None else acc + term
        e[i] = acc
        prod = lifted_h[0][i]
        for k in range(1, nfac):
            prod = prod * lifted_h[k][i]
        cartan[i] = prod
    return GeneratorImages(algebra, "borel", module, e, None, cartan)


# ---------------------------------------------------------------------------
# Defining-relation report.
# ---------------------------------------------------------------------------


def _divided_power(op, n):
    from .coeff import qfactorial

    out = None
    for _ in range(n):
        out = op if out is None else out * op
    if out is None:
        return SparseOperator.identity(op.module)
    return out * qfactorial(n).inverse()


def serre_sum(x, i, j, a_ij):
    """sum_n (-1)^n x_i^{(1-a_ij-n)} x_j x_i^{(n)}, which must vanish."""
    top = 1 - a_ij
    acc = None
    for n in range(top + 1):
        term = _divided_power(x[i], top - n) * x[j] * _divided_power(x[i], n)
        if n % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def defining_relation_checks(images, nu_probe=(-2, -1, 0, 1, 2)):
    """Yield (name, operator) pairs; each operator must vanish on its
    certified window for the realization to satisfy the presentation."""
    alg = images.algebra
    A = AFFINE_CARTAN[alg]
    n = images.rank + 1
    kappa_inv = kappa().inverse()
    idop = SparseOperator.identity(images.module)

    # q^0 = 1 and q^{nu1 x} q^{nu2 x} = q^{(nu1+nu2) x}
    for i in range(n):
        yield f"cartan-unit-h{i}", images.qh(i, 0) - idop
        for nu1 in nu_probe:
            for nu2 in (-1, 2):
                yield (
                    f"cartan-add-h{i}-{nu1}-{nu2}",
                    images.qh(i, nu1) * images.qh(i, nu2) - images.qh(i, nu1 + nu2),
                )

    # the central combination acts trivially
    prod = images.qh(0)
    for i in range(1, n):
        prod = prod * images.qh(i)
    yield "central-element", prod - idop

    # conjugation of e and f by the Cartan images
    gens = [("e", images.e)]
    if images.f is not None:
        gens.append(("f", images.f))
    for i in range(n):
        for j in range(n):
            for name, g in gens:
                sgn = 1 if name == "e" else -1
                lhs = images.qh(i) * g[j] * images.qh(i, -1)
                rhs = g[j] * field(Mono(q=sgn * A[i][j]))
                yield f"cartan-conj-{name}{j}-h{i}", lhs - rhs

    # [e_i, f_j] = delta_ij (q^{h_i} - q^{-h_i}) / kappa
    if images.f is not None:
        for i in range(n):
            for j in range(n):
                lhs = images.e[i] * images.f[j] - images.f[j] * images.e[i]
                if i == j:
                    lhs = lhs - kappa_inv * (images.qh(i) - images.qh(i, -1))
                yield f"ef-commutator-{i}{j}", lhs

    # Serre relations
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            yield f"serre-e-{i}{j}", serre_sum(images.e, i, j, A[i][j])
            if images.f is not None:
                yield f"serre-f-{i}{j}", serre_sum(images.f, i, j, A[i][j])
