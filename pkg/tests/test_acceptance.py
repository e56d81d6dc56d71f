"""The ten acceptance criteria, each at its stated tolerance and time limit."""
from __future__ import annotations

import cmath
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest
from scipy.optimize import brentq

from conftest import ACCEPTANCE, petersen_by_pentagram
from lpx.cover import lift, ray_coordinate, sectorial_function, spherical_average, spherical_function, unfold
from lpx.fixtures import builtin_fixtures, circular_ladder, complete_bipartite, complete_graph, subdivision
from lpx.generate import random_regular
from lpx.graph import classify
from lpx.hecke import apply_Ak, hecke_matrices, relation_suite
from lpx.laurent import LaurentPoly
from lpx.satake import eval_Ak, growth_bound_check, phi4_check, verify_hecke_symbolic
from lpx.spectral import (
    approx_eigenvector_residual,
    biregular_report,
    expander_exponent,
    full_theorem_suite,
    ihara_zeta_check,
    lp_norm_bound_check,
    nb_spectrum,
)


@contextmanager
def criterion(key: str, limit: float | None = None):
    """Record PASS/FAIL for the summary; the body's asserts decide."""
    t0 = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        ACCEPTANCE[key] = (False, f"{type(exc).__name__}: {exc}".splitlines()[0][:100])
        raise
    dt = time.perf_counter() - t0
    ok = limit is None or dt < limit
    ACCEPTANCE[key] = (ok, f"{dt:.2f}s" + (f", limit {limit:g}s" if limit else ""))
    assert ok, f"criterion {key} took {dt:.2f}s, limit {limit}s"


def test_01_symbolic_hecke_relations():
    with criterion("1: symbolic Hecke relations on Satake images", limit=1.0):
        for q in (2, 3, 5):
            rep = verify_hecke_symbolic(8, q)
            assert rep.passed
            assert all(c.exact for c in rep.checks)


def test_02_named_graph_classification():
    def p_star_by_root(theta_dom, q):
        return brentq(lambda p: q ** ((p - 1) / p) - theta_dom, 2.0, 1e6, xtol=1e-14)

    with criterion("2: named-graph classification"):
        for g, limit in ((builtin_fixtures()["Petersen"], 1.0), (complete_graph(4), 1.0)):
            t0 = time.perf_counter()
            rep = expander_exponent(g)
            assert rep.ramanujan
            assert time.perf_counter() - t0 < limit
        assert abs(expander_exponent(petersen_by_pentagram()).p_star - 2.0) <= 1e-6

        t0 = time.perf_counter()
        rep = expander_exponent(circular_ladder(16))
        assert time.perf_counter() - t0 < 1.0
        lam = 2 * math.cos(math.pi / 8) + 1
        assert not rep.ramanujan
        assert abs(rep.lambda_x - lam) <= 1e-9
        # independent route: dominant root of theta^2 - lam theta + 2, then 2^((p-1)/p) = theta
        theta = (lam + math.sqrt(lam * lam - 8)) / 2
        oracle = p_star_by_root(theta, 2)
        assert abs(oracle - 3.017) <= 0.01
        assert abs(rep.p_star - oracle) <= 0.01
        assert abs(rep.p_star - 3.017) <= 0.01


BRIDGE = [f"A_{m} = D h_NB^{m - 1} h_tau U" for m in range(1, 6)]


def test_03_operator_relations():
    with criterion("3: exact operator relations", limit=5.0):
        for g in (complete_graph(4), builtin_fixtures()["Petersen"]):
            rep = relation_suite(g, m_max=5)
            assert rep.kind == "regular"
            names = {c.identity for c in rep.checks}
            for ident in BRIDGE + ["h_tau^2 = I", "U D = h_s0 + I", "A = D h_tau U"]:
                assert ident in names, ident
            for c in rep.checks:
                assert c.exact and c.residual == 0, c.identity
        rep = relation_suite(complete_bipartite(2, 3))
        assert rep.kind == "biregular"
        assert all(c.exact and c.residual == 0 for c in rep.checks)


@pytest.mark.xfail(
    strict=True,
    reason="with U f(x,y) = f(x) and D summing over out-edges, D h_tau h_NB^(m-1) U "
    "equals q(q+1) I at m = 2; the adjoint order D h_NB^(m-1) h_tau U is the identity that holds",
)
def test_bridge_in_tau_first_operator_order():
    for g in (complete_graph(4), builtin_fixtures()["Petersen"]):
        ops = hecke_matrices(g)
        P = ops["I_E"]
        for m in range(1, 6):
            lhs = (ops["D"] @ ops["tau"] @ P @ ops["U"]).toarray()
            rhs = apply_Ak(g, np.eye(g.n), m)
            assert np.array_equal(lhs, rhs), f"m = {m}"
            P = P @ ops["NB"]


def test_04_ihara_bass():
    us = np.linspace(0.04, 0.44, 10)
    with criterion("4: Ihara-Bass factorisation and NB spectrum"):
        graphs = [complete_graph(4), builtin_fixtures()["Petersen"]]
        sizes = [10, 12, 14, 16, 18, 20, 20, 16, 12, 14]
        graphs += [random_regular(n, 3, seed=s) for s, n in enumerate(sizes)]
        for g in graphs:
            assert g.n <= 20
            z = ihara_zeta_check(g, us, tol=1e-8)
            assert z.passed, max(s["rel_error"] for s in z.samples)
            nb = nb_spectrum(g)
            assert nb.size == 2 * g.m
            assert nb.min_singular and all(s <= 1e-6 for _, s in nb.min_singular)
            assert nb.verified


def test_05_lp_criteria_coherence():
    with criterion("5: coherence of the three L^p criteria"):
        for name, g in builtin_fixtures().items():
            cls = classify(g)
            if cls.kind == "regular":
                for p in (2, 2.5, 3, 4):
                    v = full_theorem_suite(g, p, k_max=5)
                    assert v.agree, (name, p, v.criteria)
            else:
                # biregular fixtures: band criterion vs h~_NB temperedness at p = 2
                rep = biregular_report(g, p=2)
                assert rep.ramanujan == rep.verdicts["nb_tempered"], name


def test_06_tree_realizations():
    with criterion("6: tree realizations"):
        g = complete_graph(4)
        cover = unfold(g, 0, 12)
        q = cover.q
        inner = cover.interior()
        rc = ray_coordinate(cover)
        rng = np.random.default_rng(6)
        for _ in range(20):
            th = cmath.rect(rng.uniform(0.5, 2.5), rng.uniform(-math.pi, math.pi))
            f = spherical_function(cover, th)
            r = cover.adjacency_apply(f) - (th + q / th) * f
            scale = max(1.0, float(np.max(np.abs(f[inner]))))
            assert np.max(np.abs(r[inner])) <= 1e-10 * scale
            avg = spherical_average(cover, sectorial_function(cover, rc, th))
            assert np.max(np.abs(avg - f)) <= 1e-10 * max(1.0, float(np.max(np.abs(f))))
        for _ in range(5):
            x = rng.normal(size=g.n)
            tf = lift(cover, x)
            for k in range(0, 5):
                sphere = tf[cover.level(k)].sum()
                assert abs(sphere - apply_Ak(g, x, k)[0]) <= 1e-10


def test_07_tree_lp_bounds():
    with criterion("7: L^p operator bounds on the tree"):
        cover = unfold(complete_graph(4), 0, 10)
        for k in (1, 2, 3):
            for p in (2, 3, 10):
                rep = lp_norm_bound_check(cover, k, p, trials=100, seed=10 * k + p)
                assert rep.trials == 100
                assert rep.violations == 0, (k, p, rep.max_ratio, rep.bound)


def test_08_approximate_eigenvectors():
    with criterion("8: approximate eigenvectors"):
        cover = unfold(complete_graph(4), 0, 12)
        q = cover.q
        for phase in (0.0, 0.7, 2.0, math.pi / 2):
            theta = math.sqrt(q) * cmath.exp(1j * phase)
            for eps in (0.2, 0.1, 0.05):
                a = approx_eigenvector_residual(cover, theta, eps, 2)
                assert a.residual_ratio <= 2 * (q + 1) * eps
            assert approx_eigenvector_residual(cover, theta, 0.0, 2).residual_ratio <= 1e-10


def test_09_biregular():
    with criterion("9: biregular classification and 4x4 model"):
        k23 = biregular_report(complete_bipartite(2, 3))
        assert not k23.ramanujan
        assert (k23.zero_multiplicity, k23.expected_zero_multiplicity) == (3, 1)
        sub = biregular_report(subdivision(complete_graph(4)))
        assert sub.ramanujan
        assert sub.zero_multiplicity == 2 == sub.n0 - sub.n1
        rng = np.random.default_rng(9)
        assert phi4_check(LaurentPoly.var(), 1, 2).passed
        for _ in range(5):
            tp = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            rep = phi4_check(tp, 1, 2)
            assert rep.passed
            assert any(c.identity.startswith("eig NB~") and c.passed for c in rep.checks)


def test_10_growth_bounds():
    with criterion("10: growth bounds for A_k(theta)"):
        rng = np.random.default_rng(10)
        for q in (2, 3):
            for _ in range(100):
                th = cmath.rect(rng.uniform(0.3, 3.0), rng.uniform(-math.pi, math.pi))
                gc = growth_bound_check(th, q, k_max=40)
                assert gc.passed
                # recomputed through the checked closed forms, on the dominant parameter
                dom = th if abs(th) >= q / abs(th) else q / th
                r = abs(dom)
                vals = [abs(eval_Ak(dom, k, q)) for k in range(41)]
                assert all(v <= (k + 1) * r**k * (1 + 1e-9) for k, v in enumerate(vals))
                assert any(vals[k] >= 0.1 * r**k for k in range(1, 41))

