from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from lpx.errors import BadParametersError, FormDisagreementError, ZeroThetaError
from lpx.laurent import LaurentPoly
from lpx.satake import (
    SatakeImage,
    eval_Ak,
    eval_Ak_ratio,
    eval_Ak_sum,
    growth_bound_check,
    is_p_tempered,
    lp_operator_bound,
    one_dimensional_quotients,
    phi2,
    phi2_generators,
    phi2_nb_power,
    phi2_relation_check,
    phi3_check,
    phi3_generators,
    phi4_check,
    phi4_generators,
    satake_Ak,
    satake_table,
    temperedness_exponent,
    verify_hecke_symbolic,
)
from lpx.words import IDENTITY, OperatorWord

x = LaurentPoly.var()


def nb_walk_counts(k, q):
    """A_k(q) by counting non-backtracking walks on the tree: (q+1) q^(k-1)."""
    return 1 if k == 0 else (q + 1) * q ** (k - 1)


def test_satake_small_cases():
    assert satake_Ak(0, 3).poly == LaurentPoly.const(1)
    assert satake_Ak(1, 2).poly == x + 2 * x**-1
    assert satake_Ak(2, 2).poly == x**2 + 4 * x**-2 + 1


def test_satake_A2_by_recurrence():
    # A_2 = A_1^2 - (q+1) computed independently of the closed form
    for q in (2, 3, 7):
        a1 = x + q * x**-1
        assert satake_Ak(2, q).poly == a1 * a1 - (q + 1)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_trivial_point_is_sphere_size(q):
    for k in range(8):
        assert satake_Ak(k, q)(Fraction(q)) == nb_walk_counts(k, q)


def test_invariance_under_twist():
    for q in (2, 3, 5):
        for img in satake_table(8, q):
            assert img.is_invariant()
            assert img.twisted().poly == img.poly


def test_non_invariant_polynomial_detected():
    assert not SatakeImage(x + 1, 2).is_invariant()


@pytest.mark.parametrize("q", [2, 5])
def test_verify_hecke_symbolic_passes(q):
    rep = verify_hecke_symbolic(6, q)
    assert rep.passed
    assert all(c.exact for c in rep.checks)


def _mutated_table(k_max):
    table = satake_table(k_max, 2)
    bad = table[3].poly + LaurentPoly.monomial(1, Fraction(1, 7))
    table[3] = SatakeImage(bad, 2)
    return table


def _failed_products(rep):
    return [c.identity for c in rep.checks if not c.passed and "A1*" in c.identity]


def test_mutation_breaks_exactly_k2_and_k3():
    rep = verify_hecke_symbolic(4, 2, table=_mutated_table(4))
    assert _failed_products(rep) == ["A1*A2 = A3 + q*A1", "A1*A3 = A4 + q*A2"]


def test_mutation_also_reaches_k4_when_present():
    # A3 is the q*A_(k-1) term of the k=4 identity
    rep = verify_hecke_symbolic(6, 2, table=_mutated_table(6))
    assert _failed_products(rep) == [
        "A1*A2 = A3 + q*A1",
        "A1*A3 = A4 + q*A2",
        "A1*A4 = A5 + q*A3",
    ]


def test_eval_examples():
    assert eval_Ak(math.sqrt(2), 1, 2) == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    assert eval_Ak(2, 2, 2) == pytest.approx(6)
    assert eval_Ak(1 + 1j, 2, 2) == pytest.approx(1)
    # ratio form evaluated by hand: theta~ = 1 - i
    t, tt = 1 + 1j, 1 - 1j
    assert (t * (t * t - 1) - tt * (tt * tt - 1)) / (t - tt) == pytest.approx(1)


def test_eval_zero_theta():
    with pytest.raises(ZeroThetaError):
        eval_Ak(0, 2, 2)


def test_eval_agrees_with_exact_symbolic():
    for q in (2, 3):
        for k in range(9):
            t = Fraction(3, 2)
            assert eval_Ak(complex(t), k, q) == pytest.approx(float(satake_Ak(k, q)(t)), rel=1e-12)


def test_form_disagreement_is_raised(monkeypatch):
    import lpx.satake as s

    monkeypatch.setattr(s, "eval_Ak_ratio", lambda th, k, q: eval_Ak_ratio(th, k, q) * 1.01)
    with pytest.raises(FormDisagreementError):
        s.eval_Ak(1.7, 4, 2)


def test_two_forms_agree_random():
    rnd = random.Random(11)
    n = 0
    while n < 200:
        q = rnd.choice((2, 3, 5))
        k = rnd.randint(0, 10)
        t = cmath.rect(rnd.uniform(0.3, 2 * q), rnd.uniform(-math.pi, math.pi))
        if abs(t - q / t) <= 1e-8:
            continue
        a, b = eval_Ak_sum(t, k, q), eval_Ak_ratio(t, k, q)
        scale = max(abs(t), q / abs(t)) ** k
        # cancellation in the ratio form is governed by |theta - theta~|
        assert abs(a - b) <= scale * (1e-9 + 1e-13 / abs(t - q / t))
        n += 1


def test_temperedness_examples():
    v = temperedness_exponent(math.sqrt(2) * cmath.exp(1j * math.pi / 3), 2)
    assert v.dominant == pytest.approx(math.sqrt(2))
    assert v.p_star == 2 and not v.clamped
    assert math.isinf(temperedness_exponent(2, 2).p_star)
    assert temperedness_exponent(2, 2).p_star_display == "inf"
    # independent root solve of 2^((p-1)/p) = 1.58952
    oracle = brentq(lambda p: 2 ** ((p - 1) / p) - 1.58952, 2, 50)
    assert temperedness_exponent(1.58952, 2).p_star == pytest.approx(oracle, rel=1e-9)
    assert oracle == pytest.approx(3.017, abs=1e-3)


def test_temperedness_clamp():
    v = temperedness_exponent(1.2 + 0.1j, 2)
    # |theta| < sqrt(q) but q/|theta| > sqrt(q); the dominant is the larger
    assert v.dominant == pytest.approx(2 / abs(1.2 + 0.1j))
    assert not v.clamped


@given(
    st.floats(0.2, 6),
    st.floats(-math.pi, math.pi),
    st.sampled_from([2, 3, 5]),
)
def test_temperedness_twist_symmetric(r, phi, q):
    t = cmath.rect(r, phi)
    a = temperedness_exponent(t, q)
    b = temperedness_exponent(q / t, q)
    assert a.dominant == pytest.approx(b.dominant)
    assert (math.isinf(a.p_star) and math.isinf(b.p_star)) or a.p_star == pytest.approx(b.p_star)


def test_is_p_tempered_threshold():
    assert is_p_tempered(math.sqrt(2) * 1j, 2, 2)
    assert not is_p_tempered(1.6, 2, 2)
    assert is_p_tempered(1.58, 2, 3.1)


def test_lp_operator_bound():
    assert lp_operator_bound(1, 2, 2) == pytest.approx(2 * math.sqrt(2))
    assert lp_operator_bound(2, 2, 2) == pytest.approx(5)
    assert lp_operator_bound(3, 1e9, 2) == pytest.approx(12, rel=1e-6)


def test_growth_bound_random():
    rnd = random.Random(5)
    for _ in range(100):
        q = rnd.choice((2, 3))
        t = cmath.rect(rnd.uniform(math.sqrt(q), 3 * q), rnd.uniform(-math.pi, math.pi))
        assert growth_bound_check(t, q).passed


# ---------------------------------------------------------------- matrix models


def test_phi2_identity_word():
    assert np.allclose(phi2(1 + 1j, IDENTITY, 2), np.eye(2))


def test_phi2_nb_square_exact():
    g = phi2_generators(x, 2)
    sq = g["NB"] @ g["NB"]
    closed = phi2_nb_power(x, 2, 2)
    assert all(a == b for a, b in zip(sq.ravel(), closed.ravel()))
    assert closed[0, 1] == (2 - 1) * (x + 2 * x**-1)


def test_phi2_nb_eigenvalues():
    for t in (1 + 1j, 0.7 - 2j, 3.0):
        eig = np.sort_complex(np.linalg.eigvals(phi2_generators(t, 2)["NB"]))
        assert np.allclose(eig, np.sort_complex(np.array([t, 2 / t])))


def test_phi2_product_rule():
    w = OperatorWord(1, 2, 1)
    g = phi2_generators(x, 3)
    expected = g["tau"] @ g["NB"] @ g["NB"] @ g["s1"]
    got = phi2(x, w, 3)
    assert all(a == b for a, b in zip(got.ravel(), expected.ravel()))


@pytest.mark.parametrize("theta", [x, Fraction(3, 2), 1 + 1j, math.sqrt(2), -0.4 + 2j])
def test_phi2_relations(theta):
    assert phi2_relation_check(theta, 2).passed
    assert phi2_relation_check(theta, 5).passed


def test_phi2_zero_theta():
    with pytest.raises(ZeroThetaError):
        phi2(0, IDENTITY, 2)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_one_dimensional_quotients(q):
    assert one_dimensional_quotients(q).passed


def test_phi2_trivial_point_nb_eigenvalues():
    nb = phi2_generators(Fraction(2), 2)["NB"]
    assert sorted([nb[0, 0], nb[1, 1]]) == [1, 2]


@pytest.mark.parametrize("theta", [x, Fraction(2), 1 + 1j, math.sqrt(2), 0.3 - 1.1j])
def test_phi3(theta):
    assert phi3_check(theta, 2).passed
    assert phi3_check(theta, 3).passed


def test_phi3_examples():
    g = phi3_generators(math.sqrt(2), 2)
    assert (g["D"] @ g["tau"] @ g["U"])[2, 2] == pytest.approx(2 * math.sqrt(2))
    g = phi3_generators(Fraction(2), 2)
    m3 = g["D"] @ g["NB"] @ g["NB"] @ g["tau"] @ g["U"]
    assert m3[2, 2] == 12
    g = phi3_generators(1 + 1j, 2)
    m2 = g["D"] @ g["NB"] @ g["tau"] @ g["U"]
    assert m2[2, 2] == pytest.approx(1)


def test_phi3_literal_order_does_not_recover_A2():
    # D tau NB U collapses to q (q+1) at the trivial-free level
    g = phi3_generators(x, 2)
    m = g["D"] @ g["tau"] @ g["NB"] @ g["U"]
    assert m[2, 2] == LaurentPoly.const(6)


def test_phi4_example_product():
    g = phi4_generators(2, 1, 2)
    nb = np.real(g["NB~"][:2, :2])
    assert np.allclose(nb, [[2, 1], [0, 1]])


def test_phi4_exact_and_random():
    assert phi4_check(x, 1, 2).passed
    assert phi4_check(x, 2, 5).passed
    rnd = random.Random(2)
    for _ in range(5):
        t = complex(rnd.uniform(-3, 3), rnd.uniform(-3, 3))
        rep = phi4_check(t, 2, 3)
        assert rep.passed, [c for c in rep.checks if not c.passed]


def test_phi4_tempered_circle():
    t = cmath.rect(math.sqrt(6), 0.9)
    g = phi4_generators(t, 2, 3)
    eig = np.linalg.eigvals(np.array(g["NB~"][:2, :2], dtype=complex))
    assert np.allclose(np.abs(eig), math.sqrt(6))


def test_phi4_vertex_block_char_poly():
    # eigenvalues of [[0, a], [b, 0]] are +-sqrt(ab); compare with trace/det
    t, q0, q1 = 1.3 - 0.4j, 1, 3
    va = np.array(phi4_generators(t, q0, q1)["A"][2:, 2:], dtype=complex)
    assert np.trace(va) == 0
    assert -np.linalg.det(va) == pytest.approx((1 + q0 / t) * (q1 + t))


def test_phi4_inverted_diagonal_variant_noted():
    rep = phi4_check(x, 1, 2)
    assert rep.notes and "typo" not in rep.notes[0]


def test_phi4_bad_parameters():
    with pytest.raises(BadParametersError):
        phi4_check(1.0, 2, 2)
    with pytest.raises(ZeroThetaError):
        phi4_check(0, 1, 2)
