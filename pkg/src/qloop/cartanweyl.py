"""Root vectors of the loop algebra by iterated q-commutators.

Starting from the images of the Chevalley generators, this module builds
the real root vectors along the convex order

    alpha + n delta  <  m delta  <  (delta - alpha) + k delta

(with the finite positive roots interleaved at rank two), then the two
families attached to the imaginary roots: the primed vectors obtained by
bracketing across delta, and the unprimed ones related to them by a
logarithm of generating series.  Everything is exact on whatever part of
the module window survives truncation; escape bookkeeping rides along in
the operators themselves.

Roots are integer tuples over the affine simple basis, so gamma + n delta
is literal tuple arithmetic and the invariant bilinear form is the affine
Cartan pairing.
"""

from __future__ import annotations

from fractions import Fraction

from .coeff import ONE, Mono, field, kappa, qnum
from .linop import SparseOperator
from .presentations import AFFINE_CARTAN, FINITE_CARTAN
from .series import ASC, DESC, TruncatedSeries, log_one_minus

ROOT_DATA = {
    "sl2": {
        "delta": (1, 1),
        "simple": {1: (0, 1)},
        "finite_positive": ((0, 1),),
        "order_pos": {(0, 1): 0},
    },
    "sl3": {
        "delta": (1, 1, 1),
        "simple": {1: (0, 1, 0), 2: (0, 0, 1)},
        "finite_positive": ((0, 1, 0), (0, 1, 1), (0, 0, 1)),
        "order_pos": {(0, 1, 0): 0, (0, 1, 1): 1, (0, 0, 1): 2},
    },
}


def root_add(a, b, n=1):
    return tuple(x + n * y for x, y in zip(a, b))


def pairing(algebra, a, b):
    """The invariant form on the affine root lattice; delta pairs to zero."""
    A = AFFINE_CARTAN[algebra]
    return sum(a[i] * A[i][j] * b[j] for i in range(len(a)) for j in range(len(b)))


def qcomm_plus(x, y, s):
    """Positive-cone q-commutator x y - q^{-s} y x for pairing value s."""
    return x * y - field(Mono(q=-s)) * (y * x)


def qcomm_minus(x, y, s):
    """Negative-cone q-commutator x y - q^{s} y x for pairing value s."""
    return x * y - field(Mono(q=s)) * (y * x)


class RootVectorTable:
    """All root vectors of one realization up to a loop depth."""

    def __init__(self, algebra, n_max, has_f):
        self.algebra = algebra
        self.n_max = n_max
        self.has_f = has_f
        self.e_real = {}
        self.f_real = {}
        self.e_prime = {}
        self.f_prime = {}
        self.e_imag = {}
        self.f_imag = {}

    def real_root_list(self):
        return sorted(self.e_real)


def build_root_vectors(images, n_max):
    """Construct the full table for one realization, to loop depth n_max."""
    alg = images.algebra
    data = ROOT_DATA[alg]
    delta = data["delta"]
    simple = data["simple"]
    finite = data["finite_positive"]
    order_pos = data["order_pos"]
    has_f = images.f is not None
    table = RootVectorTable(alg, n_max, has_f)

    pair = lambda a, b: pairing(alg, a, b)
    height = lambda r: sum(r)
    theta = max(finite, key=height)

    e, f = table.e_real, table.f_real
    for i, root in simple.items():
        e[root] = images.e[i]
        if has_f:
            f[root] = images.f[i]
    e[root_add(delta, theta, -1)] = images.e[0]
    if has_f:
        f[root_add(delta, theta, -1)] = images.f[0]

    # non-simple finite roots, by increasing height
    for gamma in sorted(finite, key=height):
        if gamma in e:
            continue
        for i in sorted(simple):
            beta = root_add(gamma, simple[i], -1)
            if beta in finite:
                break
        else:
            raise RuntimeError(f"no simple summand found for {gamma}")
        ai = simple[i]
        if order_pos[ai] < order_pos[beta]:
            e[gamma] = qcomm_plus(e[ai], e[beta], pair(ai, beta))
            if has_f:
                f[gamma] = qcomm_minus(f[beta], f[ai], pair(beta, ai))
        else:
            e[gamma] = qcomm_plus(e[beta], e[ai], pair(beta, ai))
            if has_f:
                f[gamma] = qcomm_minus(f[ai], f[beta], pair(ai, beta))

    # delta - gamma for the other finite roots, by decreasing height
    for gamma in sorted(finite, key=height, reverse=True):
        dg = root_add(delta, gamma, -1)
        if dg in e:
            continue
        for i in sorted(simple):
            beta = root_add(gamma, simple[i])
            if beta in finite:
                break
        else:
            raise RuntimeError(f"no descent found for {gamma}")
        ai = simple[i]
        db = root_add(delta, beta, -1)
        e[dg] = qcomm_plus(e[ai], e[db], pair(ai, db))
        if has_f:
            f[dg] = qcomm_minus(f[db], f[ai], pair(db, ai))

    # the loop ladder over each finite positive root
    two_inv = qnum(2).inverse()
    for gamma in finite:
        dg = root_add(delta, gamma, -1)
        table.e_prime[1, gamma] = qcomm_plus(e[gamma], e[dg], pair(gamma, dg))
        if has_f:
            table.f_prime[1, gamma] = qcomm_minus(f[dg], f[gamma], pair(dg, gamma))
        for n in range(1, n_max + 1):
            # ladder brackets pair a real root with delta, so they are plain
            # commutators; the operand order follows the normal order, where
            # gamma + (n-1)delta precedes delta and delta precedes
            # (delta - gamma) + (n-1)delta
            prev = root_add(gamma, delta, n - 1)
            cur = root_add(gamma, delta, n)
            e[cur] = two_inv * qcomm_plus(e[prev], table.e_prime[1, gamma], pair(prev, delta))
            if has_f:
                f[cur] = two_inv * qcomm_minus(
                    table.f_prime[1, gamma], f[prev], pair(delta, prev)
                )
            prev_d = root_add(dg, delta, n - 1)
            cur_d = root_add(dg, delta, n)
            e[cur_d] = two_inv * qcomm_plus(table.e_prime[1, gamma], e[prev_d], pair(delta, prev_d))
            if has_f:
                f[cur_d] = two_inv * qcomm_minus(
                    f[prev_d], table.f_prime[1, gamma], pair(prev_d, delta)
                )
            if n + 1 <= n_max:
                nxt = root_add(gamma, delta, n)
                table.e_prime[n + 1, gamma] = qcomm_plus(e[nxt], e[dg], pair(nxt, dg))
                if has_f:
                    table.f_prime[n + 1, gamma] = qcomm_minus(f[dg], f[nxt], pair(dg, nxt))

    _fill_unprimed(images, table)
    return table


def _zero_op(images):
    return SparseOperator.zero(images.module)


def prime_series(table, images, gamma_key, side, order=None):
    """The generating series of primed vectors over one finite root.

    side 'e' ascends in u, side 'f' in u^-1; the constant term is zero.
    """
    order = table.n_max if order is None else order
    store = table.e_prime if side == "e" else table.f_prime
    zero = _zero_op(images)
    coeffs = [zero]
    for n in range(1, order + 1):
        coeffs.append(store[n, gamma_key])
    return TruncatedSeries(ASC if side == "e" else DESC, coeffs)


def _fill_unprimed(images, table):
    kq = kappa()
    kq_inv = kq.inverse()
    data = ROOT_DATA[table.algebra]
    for gamma in data["finite_positive"]:
        es = prime_series(table, images, gamma, "e")
        e_log = log_one_minus(es.scale(kq)).scale(-kq_inv)
        for n in range(1, table.n_max + 1):
            table.e_imag[n, gamma] = e_log.coefficient(n)
        if table.has_f:
            fs = prime_series(table, images, gamma, "f")
            f_log = log_one_minus(fs.scale(-kq)).scale(kq_inv)
            for n in range(1, table.n_max + 1):
                table.f_imag[n, gamma] = f_log.coefficient(n)


def _sign(k):
    return 1 if k % 2 == 0 else -1


def phi_plus_series(images, table, i, order=None):
    """phi_i^+(u) = q^{h_i} (1 - kappa E'_{delta,alpha_i}(-o_i u))."""
    order = table.n_max if order is None else order
    alpha = ROOT_DATA[images.algebra]["simple"][i]
    o = images.o_signs[i - 1]
    qh = images.qh(i)
    coeffs = [qh]
    kq = kappa()
    for n in range(1, order + 1):
        scalar = -kq * field((-o) ** n)
        coeffs.append(qh * table.e_prime[n, alpha] * scalar)
    return TruncatedSeries(ASC, coeffs)


def phi_minus_series(images, table, i, order=None):
    """phi_i^-(u^-1) = q^{-h_i} (1 + kappa F'_{delta,alpha_i}(-o_i u^-1))."""
    order = table.n_max if order is None else order
    alpha = ROOT_DATA[images.algebra]["simple"][i]
    o = images.o_signs[i - 1]
    qh_inv = images.qh(i, -1)
    coeffs = [qh_inv]
    kq = kappa()
    for n in range(1, order + 1):
        scalar = kq * field((-o) ** n)
        coeffs.append(qh_inv * table.f_prime[n, alpha] * scalar)
    return TruncatedSeries(DESC, coeffs)


# ---------------------------------------------------------------------------
# The loop-generator dictionary.
# ---------------------------------------------------------------------------


def xi_plus(images, table, i, n):
    data = ROOT_DATA[images.algebra]
    alpha, delta = data["simple"][i], data["delta"]
    o = images.o_signs[i - 1]
    if n >= 0:
        root = root_add(alpha, delta, n)
        return table.e_real[root] * field(_sign(n) * o ** abs(n))
    root = root_add(root_add(delta, alpha, -1), delta, -(n + 1))
    qh_inv = images.qh(i, -1)
    return qh_inv * table.f_real[root] * field(_sign(n + 1) * o ** abs(n))


def xi_minus(images, table, i, n):
    data = ROOT_DATA[images.algebra]
    alpha, delta = data["simple"][i], data["delta"]
    o = images.o_signs[i - 1]
    if n > 0:
        root = root_add(root_add(delta, alpha, -1), delta, n - 1)
        return table.e_real[root] * images.qh(i) * field(_sign(n + 1) * o ** n)
    root = root_add(alpha, delta, -n)
    return table.f_real[root] * field(_sign(n) * o ** abs(n))


def chi(images, table, i, n):
    alpha = ROOT_DATA[images.algebra]["simple"][i]
    o = images.o_signs[i - 1]
    if n == 0:
        raise ValueError("the zero mode is not one of the commuting loop generators")
    if n > 0:
        return table.e_imag[n, alpha] * field(_sign(n + 1) * o ** n)
    return table.f_imag[-n, alpha] * field(_sign(n + 1) * o ** abs(n))


def phi_mode(images, table, i, n):
    """The single mode phi^{+}_{i,n} (n >= 0) or phi^{-}_{i,n} (n <= 0)."""
    alpha = ROOT_DATA[images.algebra]["simple"][i]
    o = images.o_signs[i - 1]
    kq = kappa()
    if n == 0:
        raise ValueError("ambiguous at n = 0; take images.qh(i, +1) or (i, -1)")
    if n > 0:
        return images.qh(i) * table.e_prime[n, alpha] * (kq * field(_sign(n + 1) * o ** n))
    return images.qh(i, -1) * table.f_prime[-n, alpha] * (kq * field(_sign(n) * o ** abs(n)))


def drinfeld_checks(images, table, depth=2):
    """Yield (name, operator) pairs for the loop-presentation spot checks.

    Every yielded operator must vanish on its certified window: the
    commuting family commutes, moves the ladder operators by the expected
    q-number multiple, and closes onto the diagonal modes.
    """
    B = FINITE_CARTAN[images.algebra]
    rank = images.rank
    kq_inv = kappa().inverse()
    nodes = range(1, rank + 1)
    nz = [n for n in range(-depth, depth + 1) if n != 0]

    chis = {(i, n): chi(images, table, i, n) for i in nodes for n in nz}
    xps = {(i, m): xi_plus(images, table, i, m) for i in nodes for m in range(-depth, depth + 1)}
    xms = {(i, m): xi_minus(images, table, i, m) for i in nodes for m in range(-depth, depth + 1)}

    for i in nodes:
        for j in nodes:
            for n in nz:
                for m in nz:
                    op = chis[i, n] * chis[j, m] - chis[j, m] * chis[i, n]
                    yield f"loop-commute-{i}{n}-{j}{m}", op

    def plus_mode_known(n):
        return -table.n_max - 1 <= n <= table.n_max

    for i in nodes:
        for j in nodes:
            b = B[i - 1][j - 1]
            for n in nz:
                scalar = qnum(n * b) * Fraction(1, n)
                for m in range(-depth, depth + 1):
                    if not plus_mode_known(n + m):
                        continue
                    lhs = chis[i, n] * xps[j, m] - xps[j, m] * chis[i, n]
                    yield (
                        f"loop-ladder-plus-{i}{n}-{j}{m}",
                        lhs - xi_plus(images, table, j, n + m) * scalar,
                    )

    def minus_mode_known(n):
        return -table.n_max <= n <= table.n_max + 1

    for i in nodes:
        for j in nodes:
            b = B[i - 1][j - 1]
            for n in nz:
                scalar = qnum(n * b) * Fraction(-1, n)
                for m in range(-depth, depth + 1):
                    if not minus_mode_known(n + m):
                        continue
                    lhs = chis[i, n] * xms[j, m] - xms[j, m] * chis[i, n]
                    yield (
                        f"loop-ladder-minus-{i}{n}-{j}{m}",
                        lhs - xi_minus(images, table, j, n + m) * scalar,
                    )

    for i in nodes:
        for j in nodes:
            for n in range(-depth, depth + 1):
                for m in range(-depth, depth + 1):
                    if i == j and abs(n + m) > table.n_max:
                        continue
                    lhs = xps[i, n] * xms[j, m] - xms[j, m] * xps[i, n]
                    if i == j:
                        k = n + m
                        if k > 0:
                            rhs = phi_mode(images, table, i, k) * kq_inv
                        elif k < 0:
                            rhs = -phi_mode(images, table, i, k) * kq_inv
                        else:
                            rhs = (images.qh(i) - images.qh(i, -1)) * kq_inv
                        lhs = lhs - rhs
                    yield f"ladder-pair-{i}{n}-{j}{m}", lhs
