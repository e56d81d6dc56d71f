from __future__ import annotations

import random

import pytest
import scipy.sparse as sp

from lpx.fixtures import complete_graph
from lpx.hecke import hecke_matrices, word_matrix
from lpx.words import IDENTITY, NB, S0, S1, TAU, OperatorWord, words_up_to


def test_length():
    assert OperatorWord(1, 3, 1).length == 4
    assert S0.length == 1 and TAU.length == 0


def test_invalid_normal_form():
    with pytest.raises(ValueError):
        OperatorWord(2, 0, 0)


def test_generator_round_trip():
    for w in words_up_to(5):
        assert OperatorWord.from_generators(w.generators()) == w


def test_basic_normalisation():
    assert OperatorWord.from_generators(["tau", "tau"]) == IDENTITY
    assert OperatorWord.from_generators(["s0", "s0"]) == IDENTITY
    assert OperatorWord.from_generators(["tau", "s0"]) == NB
    assert OperatorWord.from_generators(["s1", "tau"]) == NB
    assert S0 == OperatorWord(1, 1, 0)


def test_inverse_is_involution_and_group_inverse():
    for w in words_up_to(4):
        assert w.inverse().inverse() == w
        assert w * w.inverse() == IDENTITY
        assert w.inverse().length == w.length


def _reduced_sequence(rnd, n_s):
    """Random generator string whose s-letters alternate after pushing tau left."""
    gens, last, tau = [], None, 0
    while sum(g != "tau" for g in gens) < n_s:
        if rnd.random() < 0.3:
            gens.append("tau")
            tau ^= 1
            continue
        # effective letter after moving all taus to the left is s_{i ^ tau}
        choices = [i for i in (0, 1) if (i ^ tau) != last]
        i = rnd.choice(choices)
        gens.append(f"s{i}")
        last = i ^ tau
    return gens


def test_normal_form_matches_operator_products():
    # h_w for a reduced product equals the product of generator operators
    ops = hecke_matrices(complete_graph(4))
    rnd = random.Random(3)
    for _ in range(60):
        gens = _reduced_sequence(rnd, rnd.randint(0, 4))
        w = OperatorWord.from_generators(gens)
        assert w.length == sum(g != "tau" for g in gens)
        M = sp.identity(12, dtype=int, format="csr")
        for gname in gens:
            M = M @ ops[gname]
        assert (M != word_matrix(ops, w)).nnz == 0, gens


def test_str():
    assert str(IDENTITY) == "1"
    assert str(OperatorWord(1, 2, 1)) == "tau*NB^2*s1"
    assert str(S1) == "s1"
