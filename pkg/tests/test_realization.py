import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from djkm.fock import FockState, RealizationParams
from djkm.realization import (
    TAU_GENERATORS,
    Deriv,
    Gen,
    ModeOperator,
    NormProd,
    Prod,
    Realization,
    ScalarMul,
    Sum,
    default_params_list,
    default_states,
    generator_pairs,
    mode_apply,
    mode_terms,
    normal_order_apply,
    tau_apply,
    tau_field,
    verify_realization,
    weight,
)

VAC = FockState.vacuum(0)
P0 = RealizationParams(Fraction(2), 0, 1, 5, 1, 2, 3)
P1 = RealizationParams(Fraction(2), 1, 1, 5, 1, 2, 3)
ALPHA, ALPHA_S = Gen("alpha"), Gen("alpha*")


def test_normal_order_examples():
    x = FockState.monomial([("x", -1, 1), ("x", 0, 1)])
    assert normal_order_apply([("a", -1), ("a*", 0)], VAC, P0) == x
    assert not normal_order_apply([("a", 0), ("a*", 0)], VAC, P0)
    assert not normal_order_apply([("a", 0), ("a*", 0)], VAC, P1)


def test_mode_apply_examples():
    op = ModeOperator(NormProd((ALPHA, ALPHA_S)), -1)
    assert mode_apply(op, VAC, P0) == FockState.monomial([("x", -1, 1), ("x", 0, 1)])
    assert not mode_apply(ModeOperator(tau_field("e", P0), 1), VAC, P0)
    assert mode_apply(ModeOperator(Gen("beta"), 0), VAC, P0) == VAC.scale(5)


def test_tau_apply_examples():
    assert tau_apply("h", 0, VAC, P0) == VAC.scale(5)
    assert tau_apply("f", -1, VAC, P0) == FockState.monomial([("x", -1, 1)]).scale(-1)
    assert not Realization(P0).central_apply(-3, default_states()[4])
    assert Realization(P0).central_apply(0, VAC) == VAC.scale(5)


def test_tau_field_shapes():
    assert tau_field("f", P0) == ScalarMul(-1, ALPHA)
    h = tau_field("h", P0)
    assert h.terms[0] == ScalarMul(2, NormProd((ALPHA, ALPHA_S)))
    assert ScalarMul(P0.chi0, Deriv(ALPHA_S)) in tau_field("e", P0).terms
    with pytest.raises(ValueError):
        tau_field("g", P0)


def test_literal_product_guard():
    with pytest.raises(ValueError):
        Prod((ALPHA, ALPHA_S))
    with pytest.raises(TypeError):
        NormProd((Sum((ALPHA,)),))


@pytest.mark.parametrize(
    "X,m,Y,n",
    [("h", 1, "h", -1), ("e", 0, "e1", 2), ("h1", 0, "e1", 0), ("e", 1, "f", -1), ("e1", 2, "f1", -3)],
)
@pytest.mark.parametrize("params", [P0, P1])
def test_commutator_examples(X, m, Y, n, params):
    real = Realization(params)
    for s in default_states():
        assert not real.check_commutator(X, m, Y, n, s)


def test_h_h_bracket_contribution():
    real = Realization(P0)
    s = default_states()[2]
    hh = real.tau_apply("h", 1, real.tau_apply("h", -1, s)) - real.tau_apply("h", -1, real.tau_apply("h", 1, s))
    assert hh == s.scale(-2 * P0.chi0)


def test_sweep_counts_and_zero_residuals():
    res = verify_realization(1, params_list=[P0, P1], workers=1)
    assert res["checked"] == 2 * 21 * 9 * 5
    assert res["violations"] == [] and res["minimal_witness"] is None


def test_both_e1_readings_agree():
    for p in (P0, P1):
        lit = verify_realization(1, params_list=[p], conventions={"e1_leading_term": "literal"}, workers=1)
        assert lit["violations"] == []


def test_broken_field_is_detected():
    real = Realization(P0)
    real.fields["f"] = ScalarMul(-2, ALPHA)
    assert real.check_commutator("e", 1, "f", -1, default_states()[2])


def test_defaults():
    assert len(generator_pairs()) == 21
    assert len(default_params_list()) == 36
    assert len(default_states()) == 5


def test_degree_bookkeeping():
    allowed = {"f": {0}, "f1": {0}, "h": {0}, "h1": {-4, -2, 0}, "e": {-4, -2, 0}, "e1": {-4, -2, 0}}
    for p in (P0, P1):
        real = Realization(p)
        for s in default_states():
            for (mono, v), _c in s.terms.items():
                w = weight(mono, p.r)
                for g in TAU_GENERATORS:
                    for m in range(-3, 4):
                        for (m2, _v2), _c2 in real.apply_terms(g, m, {(mono, v): 1}).items():
                            assert weight(m2, p.r) - w + m in allowed[g]


def _sample_case(rng):
    params = rng.choice(default_params_list())
    gen = rng.choice(TAU_GENERATORS)
    field = tau_field(gen, params)
    state = rng.choice(default_states())
    return field, rng.randint(-5, 5), state, params


def test_window_soundness_sample():
    rng = random.Random(7)
    for _ in range(25):
        field, m, state, params = _sample_case(rng)
        assert mode_terms(field, m, state.terms, params) == mode_terms(field, m, state.terms, params, slack=True)


@given(st.sampled_from(TAU_GENERATORS), st.integers(-4, 4), st.integers(0, 1))
def test_mode_apply_linear(g, m, r):
    p = P0 if r == 0 else P1
    real = Realization(p)
    s1, s2 = default_states()[3], default_states()[4]
    assert real.tau_apply(g, m, s1 + s2) == real.tau_apply(g, m, s1) + real.tau_apply(g, m, s2)
