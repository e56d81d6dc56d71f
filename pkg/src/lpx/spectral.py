"""Adjacency spectra, Satake parameters, L^p-expander classification,
non-backtracking spectra and the tree-side L^p validations."""
from __future__ import annotations

import cmath
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .checks import Check
from .cover import TruncatedCover, spherical_function
from .errors import (
    BadEpsilonError,
    BadParametersError,
    ConvergenceFailureError,
    NotBiregularError,
    NotRegularError,
    OutOfRangeError,
    SupportTooDeepError,
)
from .graph import Graph, classify
from .hecke import Ak_matrix, hecke_matrices
from .satake import (
    dominant_modulus,
    eval_Ak,
    p_star_from_dominant,
    tempered_threshold,
)

GROUP_TOL = 1e-8
SLACK = 1e-9


def fingerprint(g: Graph) -> str:
    return hashlib.sha256(g.to_edge_list().encode()).hexdigest()[:12]


def group_values(values, tol: float = GROUP_TOL) -> list[tuple[float, int]]:
    """Group sorted reals into (mean, multiplicity) runs of width ``tol``."""
    groups: list[list[float]] = []
    for v in values:
        if groups and abs(v - groups[-1][-1]) <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return [(float(np.mean(gr)), len(gr)) for gr in groups]


@dataclass(frozen=True)
class Spectrum:
    values: np.ndarray  # ascending

    @property
    def groups(self) -> list[tuple[float, int]]:
        return group_values(self.values)

    def multiplicity(self, lam: float, tol: float = GROUP_TOL) -> int:
        return int(np.sum(np.abs(self.values - lam) <= tol))


def symmetric_spectrum(g: Graph) -> Spectrum:
    """Full adjacency spectrum by a dense symmetric eigensolver."""
    try:
        vals = np.linalg.eigvalsh(g.adjacency_matrix().astype(float))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceFailureError(
            f"eigensolver did not converge on graph {fingerprint(g)} (n={g.n}, m={g.m})"
        ) from exc
    dmax = max(g.degrees)
    if vals[-1] > dmax + SLACK or vals[0] < -dmax - SLACK:
        raise ConvergenceFailureError(
            f"eigenvalue outside [-{dmax}, {dmax}] on graph {fingerprint(g)}"
        )
    return Spectrum(vals)


def satake_params(lam: float, q: int) -> tuple[complex, complex]:
    """Roots of ``theta^2 - lam theta + q``, the larger modulus first.

    ``|lam|`` within 1e-9 of ``2 sqrt(q)`` is treated as the double root.
    """
    if abs(lam) > q + 1 + SLACK:
        raise OutOfRangeError(f"|lambda| = {abs(lam)} exceeds q+1 = {q + 1}")
    lam = float(lam)
    r = 2 * math.sqrt(q)
    if abs(abs(lam) - r) <= SLACK:
        t = math.copysign(math.sqrt(q), lam)
        return complex(t), complex(t)
    disc = lam * lam - 4 * q
    if disc >= 0:
        s = math.sqrt(disc)
        a, b = (lam + s) / 2, (lam - s) / 2
        return (complex(a), complex(b)) if abs(a) >= abs(b) else (complex(b), complex(a))
    s = math.sqrt(-disc)
    return complex(lam / 2, s / 2), complex(lam / 2, -s / 2)


def lp_bound(p: float, q: float) -> float:
    """``q^(1/p) + q^((p-1)/p)``."""
    return q ** (1 / p) + q ** ((p - 1) / p)


def _strip_trivial(values: np.ndarray, q: int, bipartite: bool) -> np.ndarray:
    vals = list(values)
    for t in ([q + 1, -(q + 1)] if bipartite else [q + 1]):
        i = int(np.argmin([abs(v - t) for v in vals]))
        if abs(vals[i] - t) > 1e-6:
            raise ConvergenceFailureError(f"expected trivial eigenvalue {t} not found")
        vals.pop(i)
    return np.array(vals)


@dataclass
class SpectralReport:
    q: int
    bipartite: bool
    eigenvalues: np.ndarray
    trivial: list[float]
    nontrivial: np.ndarray
    lambda_x: float
    satake: list[tuple[float, int, complex, complex]]  # (lambda, mult, theta, theta~)
    p_star: float
    p_star_clamped: bool
    ramanujan: bool
    boundary: bool
    p: float | None = None
    verdicts: dict = field(default_factory=dict)
    nb: "NBSpectrum | None" = None

    def to_dict(self) -> dict:
        d = {
            "kind": "regular",
            "q": self.q,
            "bipartite": self.bipartite,
            "eigenvalues": [[lam, mult] for lam, mult in group_values(self.eigenvalues)],
            "trivial_eigenvalues": self.trivial,
            "lambda_x": self.lambda_x,
            "satake": [
                {"lambda": lam, "multiplicity": mult, "theta": t, "theta_tilde": tt}
                for lam, mult, t, tt in self.satake
            ],
            "p_star": self.p_star,
            "ramanujan": self.ramanujan,
            "boundary": self.boundary,
        }
        if self.p is not None:
            d["p"] = self.p
            d["verdicts"] = self.verdicts
        if self.nb is not None:
            d["nb_spectrum"] = self.nb.summary()
        return d


def expander_exponent(g: Graph, p: float | None = None, with_nb: bool = False) -> SpectralReport:
    cls = classify(g)
    if cls.kind != "regular":
        raise NotRegularError("expander_exponent needs a (q+1)-regular graph with q >= 2")
    q = cls.q
    spec = symmetric_spectrum(g)
    nontriv = _strip_trivial(spec.values, q, cls.bipartite)
    lam_x = float(np.max(np.abs(nontriv))) if len(nontriv) else 0.0
    satake = []
    p_star, clamped = 2.0, False
    for lam, mult in group_values(np.sort(nontriv)):
        t, tt = satake_params(lam, q)
        satake.append((lam, mult, t, tt))
        ps, cl = p_star_from_dominant(dominant_modulus(t, q), q)
        if ps > p_star:
            p_star = ps
        clamped = clamped or cl
    r = 2 * math.sqrt(q)
    rep = SpectralReport(
        q=q,
        bipartite=cls.bipartite,
        eigenvalues=spec.values,
        trivial=[float(q + 1)] + ([-float(q + 1)] if cls.bipartite else []),
        nontrivial=nontriv,
        lambda_x=lam_x,
        satake=satake,
        p_star=p_star,
        p_star_clamped=clamped,
        ramanujan=lam_x <= r + SLACK,
        boundary=abs(lam_x - r) <= SLACK,
        p=p,
    )
    if p is not None:
        bound = lp_bound(p, q)
        rep.verdicts = {
            "lp_expander": lam_x <= bound + SLACK,
            "bound": bound,
            "boundary": abs(lam_x - bound) <= SLACK,
        }
    if with_nb:
        rep.nb = nb_spectrum(g)
    return rep


# ---------------------------------------------------------------------------
# non-backtracking spectrum


@dataclass
class NBSpectrum:
    values: list[complex]
    q: int
    checks: list[Check] = field(default_factory=list)
    min_singular: list[tuple[complex, float]] = field(default_factory=list)
    verified: bool | None = None

    @property
    def size(self) -> int:
        return len(self.values)

    def max_nontrivial_modulus(self, bipartite: bool) -> float:
        vals = _strip_nb_trivial(self.values, self.q, bipartite)
        return max((abs(v) for v in vals), default=0.0)

    def summary(self) -> dict:
        return {
            "size": self.size,
            "verified": self.verified,
            "max_modulus": max(abs(v) for v in self.values),
            "checks": [c.to_dict() for c in self.checks],
        }


def _strip_nb_trivial(values, q: int, bipartite: bool) -> list[complex]:
    vals = list(values)
    for t in ([q, -q] if bipartite else [q]):
        i = int(np.argmin([abs(v - t) for v in vals]))
        vals.pop(i)
    return vals


def nb_spectrum(g: Graph, verify_limit: int = 400) -> NBSpectrum:
    """Spectrum of h_NB from the Ihara-Bass factorisation.

    Each adjacency eigenvalue contributes the two roots of
    ``theta^2 - lambda theta + q``; ``+1`` and ``-1`` each appear ``m - n``
    times.  When ``2m <= verify_limit`` every distinct value is confirmed as
    an eigenvalue of the explicit matrix through the smallest singular value
    of ``B - theta I``.
    """
    cls = classify(g)
    if cls.kind != "regular":
        raise NotRegularError("nb_spectrum needs a (q+1)-regular graph")
    q = cls.q
    spec = symmetric_spectrum(g)
    vals: list[complex] = []
    for lam, mult in spec.groups:
        if abs(lam) > q + 1 - 1e-7:
            lam = math.copysign(q + 1, lam)
        t, tt = satake_params(lam, q)
        vals += [t] * mult + [tt] * mult
    extra = g.m - g.n
    vals += [1 + 0j] * extra + [-1 + 0j] * extra
    out = NBSpectrum(values=vals, q=q)
    out.checks.append(Check("size = 2m", len(vals) == 2 * g.m, exact=True))
    s1 = abs(sum(vals))
    s2 = abs(sum(v * v for v in vals))
    out.checks.append(Check("sum theta = tr B = 0", s1 <= 1e-8 * len(vals), residual=s1))
    out.checks.append(Check("sum theta^2 = tr B^2 = 0", s2 <= 1e-8 * len(vals) * q, residual=s2))
    if 2 * g.m <= verify_limit:
        B = hecke_matrices(g)["NB"].toarray().astype(complex)
        I = np.eye(len(B))
        ok = True
        seen: list[complex] = []
        for v in vals:
            if any(abs(v - s) <= 1e-9 for s in seen):
                continue
            seen.append(v)
            smin = float(np.linalg.svd(B - v * I, compute_uv=False)[-1])
            out.min_singular.append((v, smin))
            ok = ok and smin <= 1e-6
        out.checks.append(
            Check(
                "every value is an eigenvalue of B (min singular value <= 1e-6)",
                ok,
                residual=max(s for _, s in out.min_singular),
            )
        )
        out.verified = all(c.passed for c in out.checks)
    return out


@dataclass
class ZetaReport:
    samples: list[dict]

    @property
    def passed(self) -> bool:
        return all(s["passed"] for s in self.samples)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "samples": self.samples}


def ihara_zeta_check(g: Graph, samples, tol: float = 1e-8) -> ZetaReport:
    """Compare ``det(I - uB)`` (LU) with the Ihara-Bass product at each u."""
    cls = classify(g)
    if cls.kind != "regular":
        raise NotRegularError("ihara_zeta_check needs a (q+1)-regular graph")
    q = cls.q
    B = hecke_matrices(g)["NB"].toarray().astype(float)
    I = np.eye(len(B))
    lams = symmetric_spectrum(g).values
    extra = g.m - g.n
    out = []
    for u in samples:
        u = float(u)
        lhs = float(np.linalg.det(I - u * B))
        terms = 1 - u * lams + q * u * u
        rhs = float((1 - u * u) ** extra * np.prod(terms))
        scale = float((1 + u * u) ** extra * np.prod(1 + abs(u) * np.abs(lams) + q * u * u))
        factors = np.append(np.abs(terms), abs(1 - u * u) if extra else np.inf)
        pole = float(factors.min()) <= 1e-9
        if pole:
            err = abs(lhs - rhs) / scale
            note = "zero of det(I - uB): pole of the zeta function, compared absolutely"
        else:
            err = abs(lhs - rhs) / abs(rhs)
            note = None
        rec = {"u": u, "det": lhs, "product": rhs, "rel_error": err, "passed": err <= tol}
        if note:
            rec["note"] = note
        out.append(rec)
    return ZetaReport(out)


# ---------------------------------------------------------------------------
# theorem criteria


def _nontrivial_basis(g: Graph, bipartite: bool, types=None) -> np.ndarray:
    """Orthonormal basis of the complement of the trivial eigenvectors."""
    cols = [np.ones(g.n)]
    if bipartite:
        from .graph import bipartition

        c = np.array(bipartition(g))
        cols.append(np.where(c == 0, 1.0, -1.0))
    T = np.column_stack(cols)
    Qfull, _ = np.linalg.qr(np.column_stack([T, np.eye(g.n)]))
    return Qfull[:, T.shape[1] : g.n]


@dataclass
class TheoremVerdicts:
    p: float
    criteria: dict
    agree: bool
    notes: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"p": self.p, "criteria": self.criteria, "agree": self.agree, "notes": self.notes}


def full_theorem_suite(g: Graph, p: float, k_max: int = 5) -> TheoremVerdicts:
    """Evaluate three equivalent L^p-expander criteria independently and
    compare them.

    lambda_bound: lambda(X) <= q^(1/p) + q^((p-1)/p);
    hecke_bound: every nontrivial eigenvalue of A_k, k <= k_max, is at most
        A_k(q^((p-1)/p)) in modulus;
    nb_tempered: every nontrivial h_NB eigenvalue has modulus <= q^((p-1)/p).
    """
    cls = classify(g)
    if cls.kind != "regular":
        raise NotRegularError("full_theorem_suite needs a regular graph")
    q = cls.q
    notes = []
    if cls.bipartite:
        notes.append("bipartite input: criteria evaluated on functions summing to 0 on each side")
    spec = symmetric_spectrum(g)
    nontriv = _strip_trivial(spec.values, q, cls.bipartite)
    lam_x = float(np.max(np.abs(nontriv))) if len(nontriv) else 0.0
    c1 = lam_x <= lp_bound(p, q) + SLACK

    Q = _nontrivial_basis(g, cls.bipartite)
    thr = tempered_threshold(p, q)
    c6 = True
    worst6 = {}
    for k in range(1, k_max + 1):
        Ak = Ak_matrix(g, k).toarray().astype(float)
        ev = np.linalg.eigvalsh(Q.T @ Ak @ Q) if Q.shape[1] else np.zeros(0)
        bound = eval_Ak(thr, k, q).real
        top = float(np.max(np.abs(ev))) if len(ev) else 0.0
        worst6[k] = (top, bound)
        if top > bound + SLACK * max(1.0, bound):
            c6 = False

    nb = nb_spectrum(g, verify_limit=0)
    top7 = nb.max_nontrivial_modulus(cls.bipartite)
    c7 = top7 <= thr + SLACK
    crit = {"lambda_bound": c1, "hecke_bound": c6, "nb_tempered": c7}
    return TheoremVerdicts(
        p=p,
        criteria=crit,
        agree=len(set(crit.values())) == 1,
        notes=notes,
        details={"lambda_x": lam_x, "A_k": worst6, "nb_max": top7, "threshold": thr},
    )


# ---------------------------------------------------------------------------
# biregular


@dataclass
class BiregularReport:
    q0: int
    q1: int
    eigenvalues: np.ndarray
    n0: int
    n1: int
    zero_multiplicity: int
    expected_zero_multiplicity: int
    trivial_ok: bool
    band_check: bool
    ramanujan: bool
    theta_prime: list[tuple[float, int, complex, complex]]
    p_star: float
    p: float | None = None
    verdicts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "kind": "biregular",
            "q0": self.q0,
            "q1": self.q1,
            "eigenvalues": [[lam, mult] for lam, mult in group_values(self.eigenvalues)],
            "type_sizes": [self.n0, self.n1],
            "zero_multiplicity": self.zero_multiplicity,
            "expected_zero_multiplicity": self.expected_zero_multiplicity,
            "trivial_ok": self.trivial_ok,
            "band_check": self.band_check,
            "ramanujan": self.ramanujan,
            "theta_prime": [
                {"lambda": lam, "multiplicity": mult, "theta_prime": t, "partner": tt}
                for lam, mult, t, tt in self.theta_prime
            ],
            "p_star": self.p_star,
        }
        if self.p is not None:
            d["p"] = self.p
            d["verdicts"] = self.verdicts
        return d


def theta_prime(lam: float, q0: int, q1: int) -> tuple[complex, complex]:
    """Roots of ``t^2 + (q0 + q1 - lam^2) t + q0 q1``, larger modulus first,
    i.e. the solutions of ``lam^2 = (1 + q0/t)(q1 + t)``."""
    b = q0 + q1 - lam * lam
    disc = b * b - 4 * q0 * q1
    s = cmath.sqrt(disc)
    a, c = (-b + s) / 2, (-b - s) / 2
    return (a, c) if abs(a) >= abs(c) else (c, a)


def biregular_report(g: Graph, p: float | None = None) -> BiregularReport:
    cls = classify(g)
    if cls.kind != "biregular":
        raise NotBiregularError("biregular_report needs a bipartite graph with degrees q0+1 < q1+1")
    q0, q1 = cls.q0, cls.q1
    Q = q0 * q1
    n0 = sum(1 for t in cls.types if t == 0)
    n1 = g.n - n0
    spec = symmetric_spectrum(g)
    vals = spec.values
    triv = math.sqrt((1 + q0) * (1 + q1))
    trivial_ok = bool(
        spec.multiplicity(triv, 1e-7) == 1
        and spec.multiplicity(-triv, 1e-7) == 1
        and abs(vals[-1] - triv) <= 1e-7
        and abs(vals[0] + triv) <= 1e-7
    )
    zero_mult = int(np.sum(np.abs(vals) <= GROUP_TOL))
    expected = n0 - n1
    rest = [v for v in vals if abs(v) > GROUP_TOL]
    rest = sorted(rest, key=lambda v: abs(abs(v) - triv))[2:]  # drop the trivial pair
    lo, hi = math.sqrt(q1) - math.sqrt(q0), math.sqrt(q1) + math.sqrt(q0)
    band = bool(all(lo - SLACK <= abs(v) <= hi + SLACK for v in rest))
    tps = []
    p_star = 2.0
    for lam, mult in group_values(sorted(rest)):
        t, tt = theta_prime(lam, q0, q1)
        tps.append((lam, mult, t, tt))
        dom = abs(t)
        if lo - SLACK <= abs(lam) <= hi + SLACK:
            dom = math.sqrt(Q)
        p_star = max(p_star, p_star_from_dominant(dom, Q)[0])
    if zero_mult > expected:
        # excess kernel: h~_NB eigenvalues -q0, -q1; dominant q1
        t, tt = theta_prime(0.0, q0, q1)
        tps.append((0.0, zero_mult - expected, t, tt))
        p_star = max(p_star, p_star_from_dominant(q1, Q)[0])
    rep = BiregularReport(
        q0=q0,
        q1=q1,
        eigenvalues=vals,
        n0=n0,
        n1=n1,
        zero_multiplicity=zero_mult,
        expected_zero_multiplicity=expected,
        trivial_ok=trivial_ok,
        band_check=band,
        ramanujan=bool(band and zero_mult == expected and trivial_ok),
        theta_prime=tps,
        p_star=p_star,
        p=p,
    )
    if p is not None:
        thr = Q ** ((p - 1) / p)
        worst = max((abs(t) for _, _, t, _ in tps), default=0.0)
        rep.verdicts = {"nb_tempered": bool(worst <= thr + SLACK), "threshold": thr, "max_theta_prime": worst}
    return rep


# ---------------------------------------------------------------------------
# tree-side checks


@dataclass
class ApproxEigen:
    theta: complex
    eps: float
    p: float
    residual_ratio: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.residual_ratio <= self.bound + 1e-12


def approx_eigenvector_residual(cover: TruncatedCover, theta: complex, eps: float, p: float) -> ApproxEigen:
    """``||A f - A(theta) f||_p / ||f||_p`` over interior vertices for the
    damped spherical function ``f(v) = f_theta(v) (1 - eps)^d(v)``."""
    if not 0 <= eps < 0.5:
        raise BadEpsilonError(f"eps must lie in [0, 1/2), got {eps}")
    q = cover.q
    theta = complex(theta)
    if dominant_modulus(theta, q) > tempered_threshold(p, q) + SLACK:
        raise BadParametersError(f"theta = {theta} is not {p}-tempered for q = {q}")
    f = spherical_function(cover, theta) * (1 - eps) ** cover.depth
    r = cover.adjacency_apply(f) - (theta + q / theta) * f
    inner = cover.interior()
    num = np.sum(np.abs(r[inner]) ** p) ** (1 / p)
    den = np.sum(np.abs(f[inner]) ** p) ** (1 / p)
    return ApproxEigen(theta, eps, p, float(num / den), 2 * (q + 1) * eps)


@dataclass
class NormBoundReport:
    k: int
    p: float
    bound: float
    trials: int
    violations: int
    max_ratio: float

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "p": self.p,
            "bound": self.bound,
            "trials": self.trials,
            "violations": self.violations,
            "max_ratio": self.max_ratio,
        }


def lp_norm_bound_check(
    cover: TruncatedCover, k: int, p: float, trials: int, seed: int = 0
) -> NormBoundReport:
    """Random complex f supported at depth <= R - k must satisfy
    ``||A_k f||_p <= A_k(q^((p-1)/p)) ||f||_p + 1e-9`` with A_k the tree
    sphere-sum operator."""
    if k > cover.radius - 1:
        raise SupportTooDeepError(f"k = {k} needs radius >= {k + 1}, have {cover.radius}")
    q = cover.q
    bound = eval_Ak(tempered_threshold(p, q), k, q).real
    Sk = cover.sphere_sum_operator(k)
    support = np.flatnonzero(cover.depth <= cover.radius - k)
    rng = np.random.default_rng(seed)
    viol, worst = 0, 0.0
    for t in range(trials):
        f = np.zeros(cover.size, dtype=complex)
        if t % 3 == 2:
            # radial profile with random phases: closer to the extremal shape
            decay = rng.uniform(0.3, 1.0)
            mags = decay ** cover.depth[support] * q ** (-cover.depth[support] / p)
            f[support] = mags * np.exp(2j * np.pi * rng.random(len(support)) * rng.uniform(0, 0.2))
        else:
            sel = support if t % 3 == 0 else rng.choice(support, size=min(8, len(support)), replace=False)
            f[sel] = rng.standard_normal(len(sel)) + 1j * rng.standard_normal(len(sel))
        nf = np.sum(np.abs(f) ** p) ** (1 / p)
        ng = np.sum(np.abs(Sk(f)) ** p) ** (1 / p)
        if ng > bound * nf + 1e-9:
            viol += 1
        worst = max(worst, float(ng / nf))
    return NormBoundReport(k, p, bound, trials, viol, worst)
