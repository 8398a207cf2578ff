"""Root-vector ladders, the imaginary family, and the loop dictionary."""

import pytest

from qloop.cartanweyl import (
    ROOT_DATA,
    build_root_vectors,
    chi,
    drinfeld_checks,
    pairing,
    phi_minus_series,
    phi_mode,
    phi_plus_series,
    prime_series,
    qcomm_plus,
    root_add,
    xi_minus,
    xi_plus,
)
from qloop.coeff import Mono, field, kappa
from qloop.linop import SparseOperator
from qloop.presentations import jimbo_sl2, jimbo_sl3, osc_rep_sl2
from qloop.series import TruncatedSeries, exponential


def test_root_arithmetic():
    assert root_add((0, 1), (1, 1)) == (1, 2)
    assert root_add((1, 0, 0), (1, 1, 1), -1) == (0, -1, -1)


def test_pairing_values():
    # simple roots have squared length two, delta is isotropic
    for alg in ("sl2", "sl3"):
        data = ROOT_DATA[alg]
        delta = data["delta"]
        for a in data["simple"].values():
            assert pairing(alg, a, a) == 2
            assert pairing(alg, a, delta) == 0
        assert pairing(alg, delta, delta) == 0
    assert pairing("sl3", (0, 1, 0), (0, 0, 1)) == -1


def test_first_closing_bracket_sl2():
    # the depth-one closing vector is e1 e0 - q^2 e0 e1 on the nose
    rep = jimbo_sl2(6)
    table = build_root_vectors(rep, 2)
    alpha = (0, 1)
    e0, e1 = rep.e[0], rep.e[1]
    q2 = field(Mono(q=2))
    expect = e1 * e0 - q2 * (e0 * e1)
    assert table.e_prime[1, alpha].agrees_with(expect)


def test_ladder_operand_order_is_normal_order():
    # e_{alpha+delta} brackets the lower root against the closing vector
    # in that order; the reversed bracket flips the sign and is wrong
    rep = jimbo_sl2(8)
    table = build_root_vectors(rep, 2)
    alpha, delta = (0, 1), (1, 1)
    two_inv = (field(Mono(q=1)) + field(Mono(q=-1))).inverse()
    closing = table.e_prime[1, alpha]
    normal = two_inv * qcomm_plus(table.e_real[alpha], closing, 0)
    reversed_ = two_inv * qcomm_plus(closing, table.e_real[alpha], 0)
    got = table.e_real[root_add(alpha, delta)]
    assert got.agrees_with(normal)
    assert not got.agrees_with(reversed_)


def test_deeper_closing_brackets_repeat_the_pattern():
    # [e_{alpha+(n-1)delta}, e_{delta-alpha}] with the same q-weight again
    rep = jimbo_sl2(8)
    table = build_root_vectors(rep, 3)
    alpha, delta = (0, 1), (1, 1)
    dma = (1, 0)
    q2 = field(Mono(q=2))
    for n in (2, 3):
        x = table.e_real[root_add(alpha, delta, n - 1)]
        y = table.e_real[dma]
        expect = x * y - q2 * (y * x)
        assert table.e_prime[n, alpha].agrees_with(expect)


def _imag_series(table, rep, alpha, side):
    store = table.e_imag if side == "e" else table.f_imag
    direction = prime_series(table, rep, alpha, side).direction
    coeffs = [SparseOperator.zero(rep.module)]
    for n in range(1, table.n_max + 1):
        coeffs.append(store[n, alpha])
    return TruncatedSeries(direction, coeffs)


def test_imag_family_inverts_the_logarithm():
    # exp(-kappa sum_n e_{n delta} u^n) must reproduce 1 - kappa E'(u)
    rep = jimbo_sl2(10)
    table = build_root_vectors(rep, 3)
    alpha = (0, 1)
    kq = kappa()
    es = prime_series(table, rep, alpha, "e")
    one = SparseOperator.identity(rep.module)
    back = exponential(_imag_series(table, rep, alpha, "e").scale(-kq), one)
    rhs = TruncatedSeries(
        es.direction, [one] + [(-kq) * es.coefficient(n) for n in range(1, es.order + 1)]
    )
    for n in range(es.order + 1):
        assert back.coefficient(n).agrees_with(rhs.coefficient(n))


def test_log_inversion_on_f_side():
    rep = jimbo_sl2(10)
    table = build_root_vectors(rep, 3)
    alpha = (0, 1)
    kq = kappa()
    fs = prime_series(table, rep, alpha, "f")
    one = SparseOperator.identity(rep.module)
    back = exponential(_imag_series(table, rep, alpha, "f").scale(kq), one)
    rhs = TruncatedSeries(
        fs.direction, [one] + [kq * fs.coefficient(n) for n in range(1, fs.order + 1)]
    )
    for n in range(fs.order + 1):
        assert back.coefficient(n).agrees_with(rhs.coefficient(n))


def test_diagonal_series_shapes():
    rep = jimbo_sl2(8)
    table = build_root_vectors(rep, 2)
    plus = phi_plus_series(rep, table, 1)
    minus = phi_minus_series(rep, table, 1)
    assert plus.direction == "u" and minus.direction == "u^-1"
    assert plus.constant_term.agrees_with(rep.qh(1))
    assert minus.constant_term.agrees_with(rep.qh(1, -1))
    for n in (1, 2):
        assert plus.coefficient(n).agrees_with(phi_mode(rep, table, 1, n))
        assert minus.coefficient(n).agrees_with(phi_mode(rep, table, 1, -n))


def test_dictionary_zero_modes():
    rep = jimbo_sl2(8)
    table = build_root_vectors(rep, 2)
    alpha = (0, 1)
    assert xi_plus(rep, table, 1, 0).agrees_with(table.e_real[alpha])
    assert xi_minus(rep, table, 1, 0).agrees_with(table.f_real[alpha])


def test_dictionary_negative_plus_mode():
    # the n = -1 mode reads from the f ladder through q^{-h}
    rep = jimbo_sl2(8)
    table = build_root_vectors(rep, 2)
    dma = (1, 0)
    got = xi_plus(rep, table, 1, -1)
    expect = rep.qh(1, -1) * table.f_real[dma]
    assert got.agrees_with(expect)


def test_dictionary_positive_minus_mode():
    rep = jimbo_sl2(8)
    table = build_root_vectors(rep, 2)
    dma = (1, 0)
    got = xi_minus(rep, table, 1, 1)
    expect = table.e_real[dma] * rep.qh(1)
    assert got.agrees_with(expect)


def test_mode_argument_errors():
    rep = jimbo_sl2(6)
    table = build_root_vectors(rep, 1)
    with pytest.raises(ValueError):
        chi(rep, table, 1, 0)
    with pytest.raises(ValueError):
        phi_mode(rep, table, 1, 0)


def test_borel_table_has_no_f_side():
    rep = osc_rep_sl2(+1, 6)
    table = build_root_vectors(rep, 2)
    assert not table.has_f
    assert table.f_real == {} and table.f_prime == {} and table.f_imag == {}
    assert (1, (0, 1)) in table.e_prime


def run_drinfeld(images, n_max, depth):
    table = build_root_vectors(images, n_max)
    zero = SparseOperator.zero(images.module)
    bad = [name for name, op in drinfeld_checks(images, table, depth=depth) if not op.agrees_with(zero)]
    assert bad == []


def test_loop_presentation_rank_one():
    run_drinfeld(jimbo_sl2(10), 2, 2)


def test_loop_presentation_rank_two():
    run_drinfeld(jimbo_sl3(5), 2, 1)


def test_loop_presentation_specialized_weights():
    run_drinfeld(jimbo_sl2(10, weights=(3, 0)), 2, 2)
