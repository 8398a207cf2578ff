"""Realization constructors and the defining-relation battery.

Every realization in scope must kill the full relation list on its
certified window; the battery below runs each at desk scale.
"""

import pytest

from qloop.coeff import Mono, field, kappa
from qloop.linop import SparseOperator, commutator
from qloop.presentations import (
    defining_relation_checks,
    e3_displayed_rule,
    f3_displayed_rule,
    jimbo_sl2,
    jimbo_sl2_finite,
    jimbo_sl3,
    osc_rep_sl2,
    osc_rep_sl3,
    shift_rep,
    spectral_twist,
    tensor_rep,
    theta_sl2,
    theta_sl3,
    twist_sigma,
    twist_tau,
)


def assert_relations_hold(images):
    zero = SparseOperator.zero(images.module)
    failures = [name for name, op in defining_relation_checks(images) if not op.agrees_with(zero)]
    assert failures == []


REALIZATIONS = [
    ("eval-sl2-symbolic", lambda: jimbo_sl2(6)),
    ("eval-sl2-specialized", lambda: jimbo_sl2(6, weights=(4, 1))),
    ("eval-sl2-finite", lambda: jimbo_sl2_finite(3, 0)),
    ("eval-sl3-symbolic", lambda: jimbo_sl3(4)),
    ("osc-sl2-plus", lambda: osc_rep_sl2(+1, 6)),
    ("osc-sl2-minus", lambda: osc_rep_sl2(-1, 6)),
    ("theta-sl2-1", lambda: theta_sl2(1, 6)),
    ("theta-sl2-2", lambda: theta_sl2(2, 6)),
    ("theta-sl3-1", lambda: theta_sl3(1, 5)),
    ("theta-sl3-2", lambda: theta_sl3(2, 5)),
    ("theta-sl3-3", lambda: theta_sl3(3, 5)),
    ("theta-sl3-1-bar", lambda: theta_sl3(1, 5, barred=True)),
    ("theta-sl3-2-bar", lambda: theta_sl3(2, 5, barred=True)),
    ("theta-sl3-3-bar", lambda: theta_sl3(3, 5, barred=True)),
    ("tensor-sl2", lambda: tensor_rep([theta_sl2(1, 4), theta_sl2(2, 4)], bound=4)),
    (
        "tensor-sl3",
        lambda: tensor_rep([theta_sl3(1, 3), theta_sl3(3, 3)], bound=3),
    ),
]


@pytest.mark.parametrize("label,build", REALIZATIONS, ids=[r[0] for r in REALIZATIONS])
def test_defining_relations(label, build):
    assert_relations_hold(build())


class TestEvaluationActions:
    def test_raising_kills_highest_vector(self):
        rep = jimbo_sl3(3)
        v0 = rep.module.vector((0, 0, 0))
        for name in ("E1", "E2", "E3"):
            assert rep.aux[name].apply(v0).is_zero

    def test_single_lowering_steps(self):
        rep = jimbo_sl3(3)
        v0 = rep.module.vector((0, 0, 0))
        assert rep.aux["F1"].apply(v0) == rep.module.vector((1, 0, 0))
        assert rep.aux["F3"].apply(v0) == rep.module.vector((0, 1, 0))
        assert rep.aux["F2"].apply(v0) == rep.module.vector((0, 0, 1))

    def test_mixed_raising_matrix_element(self):
        # E2 on the second string vector lands on v_(1,0,0) with the
        # bare weight ratio as coefficient
        rep = jimbo_sl3(3)
        out = rep.aux["E2"].apply(rep.module.vector((0, 1, 0)))
        assert out.terms == {(1, 0, 0): field(Mono(z2=1, z3=-1))}

    def test_composite_raising_matches_displayed_form(self):
        rep = jimbo_sl3(4)
        displayed = e3_displayed_rule(rep.module, ("z1", "z2", "z3"))
        assert rep.aux["E3"].agrees_with(displayed)
        assert rep.aux["F3"].agrees_with(f3_displayed_rule(rep.module))

    def test_composite_is_q_commutator(self):
        rep = jimbo_sl3(4)
        e1, e2 = rep.aux["E1"], rep.aux["E2"]
        q1 = field(Mono(q=1))
        assert rep.aux["E3"].agrees_with(e1 * e2 - q1 * (e2 * e1))

    def test_gl2_commutator(self):
        # [E, F] = (K1 K2^-1 - K1^-1 K2)/(q - q^-1)
        rep = jimbo_sl2(6)
        lhs = commutator(rep.aux["E"], rep.aux["F"])
        k1, k2 = (rep.module.cartan_operator({lab: 1}) for lab in ("K1", "K2"))
        rhs = (k1 * k2.inverse() - k1.inverse() * k2) * kappa().inverse()
        assert lhs.agrees_with(rhs)

    def test_finite_window_matches_specialized_verma(self):
        fin = jimbo_sl2_finite(3, 0)
        big = jimbo_sl2(8, weights=(3, 0))
        window = [(m,) for m in range(4)]
        for i in fin.nodes:
            for idx in window:
                via_fin = fin.e[i].apply(fin.module.vector(idx))
                via_big = big.e[i].apply(big.module.vector(idx))
                assert via_fin.terms == {
                    k: c for k, c in via_big.terms.items() if k in fin.module.basis_set
                }


class TestOscillatorActions:
    def test_plus_action_exchange_relation(self):
        rep = osc_rep_sl2(+1, 6)
        b, bdag = rep.aux["b"], rep.aux["bdag"]
        q1 = field(Mono(q=1))
        lhs = b * bdag - q1 * (bdag * b)
        assert lhs.agrees_with(rep.module.cartan_operator({"N": -1}))

    def test_minus_action_exchange_relation(self):
        rep = osc_rep_sl2(-1, 6)
        b, bdag = rep.aux["b"], rep.aux["bdag"]
        lhs = b * bdag - field(Mono(q=-1)) * (bdag * b)
        assert lhs.agrees_with(rep.module.cartan_operator({"N": 1}))

    def test_borel_scope_has_no_lowering_images(self):
        rep = osc_rep_sl2(+1, 4)
        assert rep.f is None
        assert rep.scope == "borel"


class TestTwists:
    def test_rotation_has_full_period(self):
        rep = theta_sl3(3, 4)
        back = twist_sigma(twist_sigma(twist_sigma(rep, 1), 1), 1)
        for i in rep.nodes:
            assert back.e[i].agrees_with(rep.e[i])
        once = twist_sigma(rep, 1)
        assert not once.e[0].agrees_with(rep.e[0])

    def test_rotation_power_composes(self):
        rep = theta_sl3(3, 4)
        assert twist_sigma(rep, 2).e[0].agrees_with(twist_sigma(twist_sigma(rep, 1), 1).e[0])

    def test_flip_is_involutive(self):
        rep = jimbo_sl3(3)
        back = twist_tau(twist_tau(rep))
        for i in rep.nodes:
            assert back.e[i].agrees_with(rep.e[i])
            assert back.f[i].agrees_with(rep.f[i])

    def test_flip_fixes_node_zero_and_swaps_the_rest(self):
        rep = jimbo_sl3(3)
        flipped = twist_tau(rep)
        assert flipped.e[0].agrees_with(rep.e[0])
        assert flipped.e[1].agrees_with(rep.e[2])
        assert flipped.e[2].agrees_with(rep.e[1])

    def test_flip_trivial_at_rank_one(self):
        rep = jimbo_sl2(4)
        flipped = twist_tau(rep)
        for i in rep.nodes:
            assert flipped.e[i].agrees_with(rep.e[i])

    def test_spectral_twist_grades_raising_images(self):
        rep = jimbo_sl2(4)
        tw = spectral_twist(rep, {0: 1}, marker="zeta")
        z = field(Mono(zeta=1))
        assert tw.e[0].agrees_with(rep.e[0] * z)
        assert tw.e[1].agrees_with(rep.e[1])
        assert tw.f[0].agrees_with(rep.f[0] * z.inverse())
        assert_relations_hold(tw)

    def test_shift_rep_needs_central_pairing(self):
        rep = osc_rep_sl2(+1, 4)
        ok = shift_rep(rep, {0: Mono(q=2), 1: Mono(q=-2)})
        assert_relations_hold(ok)
        with pytest.raises(ValueError):
            shift_rep(rep, {0: Mono(q=1)})


class TestTensor:
    def test_coproduct_on_two_factors(self):
        f1, f2 = theta_sl2(1, 4), theta_sl2(2, 4)
        both = tensor_rep([f1, f2], bound=4)
        # pure tensor vector (1) x (2)
        v = both.module.vector((1, 2))
        for i in both.nodes:
            direct = both.e[i].apply(v)
            left = {
                (k[0], 2): c for k, c in f1.e[i].apply(f1.module.vector((1,))).terms.items()
            }
            # q^{h_i} acts diagonally on the left slot
            h_col = f1.cartan_ops[i].column((1,))
            scale = h_col[0][1] if h_col else None
            right = {
                (1, k[0]): c * scale
                for k, c in f2.e[i].apply(f2.module.vector((2,))).terms.items()
            }
            expect = dict(left)
            for k, c in right.items():
                expect[k] = expect.get(k, field(0)) + c
            expect = {k: c for k, c in expect.items() if c}
            assert direct.terms == expect

    def test_cartan_images_multiply(self):
        f1, f2 = theta_sl2(1, 3), theta_sl2(2, 3)
        both = tensor_rep([f1, f2], bound=3)
        v = both.module.vector((1, 1))
        for i in both.nodes:
            got = both.cartan_ops[i].apply(v).terms[(1, 1)]
            a = f1.cartan_ops[i].column((1,))[0][1]
            b = f2.cartan_ops[i].column((1,))[0][1]
            assert got == a * b

    def test_mixed_algebras_rejected(self):
        with pytest.raises(ValueError):
            tensor_rep([theta_sl2(1, 3), theta_sl3(1, 3)])

    def test_threefold_relations(self):
        triple = tensor_rep([theta_sl3(a, 2) for a in (1, 2, 3)], bound=2)
        assert_relations_hold(triple)


def test_constructor_argument_checks():
    with pytest.raises(ValueError):
        theta_sl2(3, 4)
    with pytest.raises(ValueError):
        theta_sl3(0, 4)
    with pytest.raises(ValueError):
        tensor_rep([])
