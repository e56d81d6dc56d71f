"""Satake parameters: symbolic and numeric A_k(theta), temperedness, and the
2x2 / 3x3 / 4x4 matrix models of the edge Hecke algebras.
"""
from __future__ import annotations

import cmath
import math
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from .checks import Check
from .errors import BadParametersError, FormDisagreementError, ZeroThetaError
from .laurent import LaurentPoly
from .words import OperatorWord

_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class SatakeImage:
    """Image of A_k: a Laurent polynomial in theta, already written in terms of
    theta and theta~ = q/theta."""

    poly: LaurentPoly
    q: int

    def __call__(self, theta):
        return self.poly(theta)

    def twisted(self) -> "SatakeImage":
        return SatakeImage(self.poly.substitute_scaled_inverse(self.q), self.q)

    def is_invariant(self, samples: int = 5, seed: int = 0) -> bool:
        """Check ``P(theta) == P(q/theta)`` exactly at random rational points."""
        rng = random.Random(seed)
        for _ in range(samples):
            t = Fraction(rng.randint(1, 97), rng.randint(1, 97)) * rng.choice((1, -1))
            if self.poly(t) != self.poly(Fraction(self.q) / t):
                return False
        return True


def satake_Ak(k: int, q: int) -> SatakeImage:
    """Exact twisted Satake image
    ``theta^k + theta~^k + (1 - 1/q) sum_{i=1}^{k-1} theta^(k-i) theta~^i``."""
    if k < 0 or q < 2:
        raise ValueError("need k >= 0 and q >= 2")
    if k == 0:
        return SatakeImage(LaurentPoly.const(1), q)
    c = {k: Fraction(1), -k: Fraction(q) ** k}
    for i in range(1, k):
        e = k - 2 * i
        c[e] = c.get(e, 0) + (1 - Fraction(1, q)) * Fraction(q) ** i
    return SatakeImage(LaurentPoly(c), q)


def _check_theta(theta) -> None:
    if theta == 0:
        raise ZeroThetaError("theta must be non-zero")


def eval_Ak_sum(theta: complex, k: int, q: int) -> complex:
    theta = complex(theta)
    tt = q / theta
    if k == 0:
        return 1 + 0j
    s = sum(theta ** (k - i) * tt**i for i in range(1, k))
    return theta**k + tt**k + (1 - 1 / q) * s


def eval_Ak_ratio(theta: complex, k: int, q: int) -> complex:
    """Second closed form; valid only when theta != q/theta."""
    theta = complex(theta)
    tt = q / theta
    if k == 0:
        return 1 + 0j
    return (theta ** (k - 1) * (theta**2 - 1) - tt ** (k - 1) * (tt**2 - 1)) / (theta - tt)


def eval_Ak(theta: complex, k: int, q: int, check: bool = True) -> complex:
    """Eigenvalue of A_k on V_theta.

    The sum form is returned.  When ``theta`` is away from ``q/theta`` the
    ratio form is evaluated as well and the two must agree to 1e-9 relative
    to ``max(|theta|, |q/theta|)^k``, widened only by the conditioning of the
    ratio form.
    """
    _check_theta(theta)
    value = eval_Ak_sum(theta, k, q)
    if check and k > 0:
        theta = complex(theta)
        tt = q / theta
        gap = abs(theta - tt)
        if gap > 1e-8:
            other = eval_Ak_ratio(theta, k, q)
            big = max(abs(theta), abs(tt))
            scale = big**k
            tol = scale * (1e-9 + 8 * (k + 2) * _EPS * big / gap)
            if abs(value - other) > tol:
                raise FormDisagreementError(
                    f"A_{k}({theta}) sum form {value} vs ratio form {other}"
                )
    return value


def satake_table(k_max: int, q: int) -> list[SatakeImage]:
    return [satake_Ak(k, q) for k in range(k_max + 1)]


@dataclass
class SymbolicReport:
    q: int
    k_max: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "k_max": self.k_max,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def verify_hecke_symbolic(k_max: int, q: int, table: list[SatakeImage] | None = None) -> SymbolicReport:
    """Check the Hecke relations exactly on Satake images.

    ``A1*A1 == A2 + (q+1) A0`` and ``A1*Ak == A(k+1) + q A(k-1)`` for
    ``2 <= k < k_max``.  A caller supplied ``table`` (e.g. a deliberately
    corrupted one) replaces the freshly computed images.
    """
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    if table is None:
        table = satake_table(k_max, q)
    A = [t.poly for t in table]
    rep = SymbolicReport(q=q, k_max=k_max)
    lhs, rhs = A[1] * A[1], A[2] + (q + 1) * A[0]
    rep.checks.append(Check("A1*A1 = A2 + (q+1)*A0", lhs == rhs, exact=True))
    for k in range(2, k_max):
        lhs, rhs = A[1] * A[k], A[k + 1] + q * A[k - 1]
        rep.checks.append(Check(f"A1*A{k} = A{k + 1} + q*A{k - 1}", lhs == rhs, exact=True))
    for k, img in enumerate(table):
        rep.checks.append(Check(f"A{k}(theta) = A{k}(q/theta)", img.is_invariant(), exact=True))
    return rep


# ---------------------------------------------------------------------------
# temperedness


@dataclass(frozen=True)
class TemperednessVerdict:
    theta: complex
    dominant: float
    p_star: float
    clamped: bool = False

    @property
    def p_star_display(self) -> str:
        return "inf" if math.isinf(self.p_star) else f"{self.p_star:.4g}"

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "dominant": self.dominant,
            "p_star": self.p_star_display,
            "clamped": self.clamped,
        }


def p_star_from_dominant(dominant: float, base: float) -> tuple[float, bool]:
    """Solve ``base^((p-1)/p) = dominant`` for p; returns ``(p, clamped)``.

    ``dominant`` at or below sqrt(base) gives 2 (flagged when strictly below),
    ``dominant >= base`` gives infinity.
    """
    root = math.sqrt(base)
    if dominant <= root * (1 + 1e-12):
        return 2.0, dominant < root * (1 - 1e-9)
    if dominant >= base * (1 - 1e-12):
        return math.inf, False
    return 1.0 / (1.0 - math.log(dominant) / math.log(base)), False


def dominant_modulus(theta: complex, q: float) -> float:
    a = abs(theta)
    return max(a, q / a)


def temperedness_exponent(theta: complex, q: int) -> TemperednessVerdict:
    """Smallest p for which V_theta is p-tempered."""
    _check_theta(theta)
    dom = dominant_modulus(complex(theta), q)
    p_star, clamped = p_star_from_dominant(dom, q)
    return TemperednessVerdict(complex(theta), dom, p_star, clamped)


def tempered_threshold(p: float, q: float) -> float:
    """``q^((p-1)/p)``, the largest admissible dominant modulus at exponent p."""
    return q ** ((p - 1) / p)


def is_p_tempered(theta: complex, q: int, p: float, tol: float = 1e-9) -> bool:
    return dominant_modulus(complex(theta), q) <= tempered_threshold(p, q) + tol


def lp_operator_bound(k: int, p: float, q: int) -> float:
    """Upper bound ``A_k(q^((p-1)/p))`` for the norm of A_k on l^p of the tree."""
    return eval_Ak(tempered_threshold(p, q), k, q).real


@dataclass(frozen=True)
class GrowthCheck:
    theta: complex
    upper_ok: bool
    witness_k: int | None

    @property
    def passed(self) -> bool:
        return self.upper_ok and self.witness_k is not None


def growth_bound_check(theta: complex, q: int, k_max: int = 40) -> GrowthCheck:
    """``|A_k| <= (k+1)|theta|^k`` for all k <= k_max, and some k with
    ``|A_k| >= 0.1 |theta|^k`` (theta taken as the dominant parameter)."""
    _check_theta(theta)
    theta = complex(theta)
    if abs(theta) < q / abs(theta):
        theta = q / theta
    r = abs(theta)
    upper_ok, witness = True, None
    for k in range(k_max + 1):
        a = abs(eval_Ak_sum(theta, k, q))
        if a > (k + 1) * r**k * (1 + 1e-12):
            upper_ok = False
        if witness is None and k > 0 and a >= 0.1 * r**k:
            witness = k
    return GrowthCheck(theta, upper_ok, witness)


# ---------------------------------------------------------------------------
# matrix models


def _is_exact(theta) -> bool:
    return isinstance(theta, (LaurentPoly, Rational))


def _tilde(theta, q):
    if isinstance(theta, LaurentPoly):
        return q * theta.inverse()
    if isinstance(theta, Rational):
        return Fraction(q) / Fraction(theta)
    return q / complex(theta)


def _mat(rows, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty((len(rows), len(rows[0])), dtype=object)
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                out[i, j] = v
        return out
    return np.array(rows, dtype=complex)


def _eye(n: int, exact: bool) -> np.ndarray:
    return _mat([[1 if i == j else 0 for j in range(n)] for i in range(n)], exact)


def _mpow(a: np.ndarray, k: int) -> np.ndarray:
    out = _eye(a.shape[0], a.dtype == object)
    for _ in range(k):
        out = out @ a
    return out


def matrix_residual(a: np.ndarray, b: np.ndarray) -> float:
    """0 for exact equality of object matrices, else max abs entry difference."""
    if a.dtype == object or b.dtype == object:
        return 0.0 if all(x == y for x, y in zip(a.ravel(), b.ravel())) else math.inf
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def phi2_generators(theta, q: int) -> dict[str, np.ndarray]:
    """2x2 images of h_tau, h_s0, h_s1 and h_NB."""
    _check_theta(theta)
    ex = _is_exact(theta)
    tt = _tilde(theta, q)
    gens = {
        "tau": _mat([[0, 1], [1, 0]], ex),
        "s0": _mat([[0, tt], [theta, q - 1]], ex),
        "s1": _mat([[q - 1, theta], [tt, 0]], ex),
    }
    gens["NB"] = phi2_nb_power(theta, 1, q)
    return gens


def phi2_nb_power(theta, k: int, q: int) -> np.ndarray:
    """Closed form of the k-th power of the NB image."""
    _check_theta(theta)
    ex = _is_exact(theta)
    tt = _tilde(theta, q)
    s = 0
    for i in range(k):
        s = s + theta ** (k - 1 - i) * tt**i
    return _mat([[theta**k, (q - 1) * s], [0, tt**k]], ex)


def phi2(theta, w: OperatorWord, q: int) -> np.ndarray:
    g = phi2_generators(theta, q)
    return (
        _mpow(g["tau"], w.delta_tau)
        @ phi2_nb_power(theta, w.m, q)
        @ _mpow(g["s1"], w.delta_1)
    )


@dataclass
class RepReport:
    kind: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
        }


def _add(rep: RepReport, name: str, lhs: np.ndarray, rhs: np.ndarray, tol: float = 1e-12) -> None:
    res = matrix_residual(lhs, rhs)
    exact = lhs.dtype == object
    if not exact:
        tol = tol * max(1.0, float(np.max(np.abs(rhs))))
    rep.checks.append(Check(name, res <= tol, residual=res, exact=exact))


def _multiset_close(a, b, tol: float) -> bool:
    a, b = list(a), list(b)
    for x in a:
        j = min(range(len(b)), key=lambda i: abs(b[i] - x), default=None)
        if j is None or abs(b[j] - x) > tol:
            return False
        b.pop(j)
    return not b


def phi2_relation_check(theta, q: int, m_max: int = 6) -> RepReport:
    """Iwahori-Hecke relations and the NB power closed form in the 2x2 model."""
    g = phi2_generators(theta, q)
    ex = _is_exact(theta)
    I = _eye(2, ex)
    rep = RepReport("phi2")
    _add(rep, "tau^2 = 1", g["tau"] @ g["tau"], I)
    _add(rep, "s0^2 = q + (q-1) s0", g["s0"] @ g["s0"], q * I + (q - 1) * g["s0"])
    _add(rep, "s1^2 = q + (q-1) s1", g["s1"] @ g["s1"], q * I + (q - 1) * g["s1"])
    _add(rep, "tau s0 = s1 tau", g["tau"] @ g["s0"], g["s1"] @ g["tau"])
    _add(rep, "NB = tau s0", g["NB"], g["tau"] @ g["s0"])
    for k in range(2, m_max + 1):
        _add(rep, f"NB^{k} closed form", _mpow(g["NB"], k), phi2_nb_power(theta, k, q))
    if not ex:
        t = complex(theta)
        eig = np.linalg.eigvals(g["NB"])
        ok = _multiset_close(eig, [t, q / t], 1e-9 * max(1.0, abs(t), q / abs(t)))
        rep.checks.append(Check("eig NB = {theta, q/theta}", ok))
    return rep


# left eigenvectors spanning the four one-dimensional quotients
_ONE_DIM = {
    "trivial+": (lambda q: q, (1, 1), 1, "q"),
    "trivial-": (lambda q: -q, (1, -1), -1, "q"),
    "steinberg+": (lambda q: -1, (1, 1), 1, "-1"),
    "steinberg-": (lambda q: 1, (1, -1), -1, "-1"),
}


def one_dimensional_quotients(q: int) -> RepReport:
    """At theta in {+-1, +-q} the 2x2 model has a one-dimensional quotient on
    which tau acts by +-1 and s0, s1 both by q (trivial) or -1 (Steinberg)."""
    rep = RepReport("phi2-one-dim")
    for name, (theta_of, u, tau_val, s_val) in _ONE_DIM.items():
        theta = Fraction(theta_of(q))
        g = phi2_generators(theta, q)
        u = _mat([list(u)], True)
        s = q if s_val == "q" else -1
        ok = all(
            matrix_residual(u @ g[h], val * u) == 0
            for h, val in (("tau", tau_val), ("s0", s), ("s1", s))
        )
        rep.checks.append(Check(f"{name} quotient at theta={theta}", ok, exact=True))
        nb = g["NB"]
        # NB is upper triangular: its diagonal is the spectrum
        diag = sorted([nb[0, 0], nb[1, 1]])
        rep.checks.append(
            Check(
                f"{name} NB spectrum {{theta, q/theta}}",
                diag == sorted([theta, Fraction(q) / theta]),
                exact=True,
            )
        )
    return rep


def phi3_generators(theta, q: int) -> dict[str, np.ndarray]:
    """3x3 model of the full algebra: edge block 2x2, vertex block 1x1."""
    ex = _is_exact(theta)
    tt = _tilde(theta, q)
    out = {}
    for name, m in phi2_generators(theta, q).items():
        big = _mat([[0] * 3 for _ in range(3)], ex)
        big[:2, :2] = m
        out[name] = big
    out["U"] = _mat([[0, 0, 1], [0, 0, theta], [0, 0, 0]], ex)
    out["D"] = _mat([[0, 0, 0], [0, 0, 0], [1, tt, 0]], ex)
    out["Id_E"] = _mat([[1, 0, 0], [0, 1, 0], [0, 0, 0]], ex)
    out["Id_V"] = _mat([[0, 0, 0], [0, 0, 0], [0, 0, 1]], ex)
    return out


def phi3_check(theta, q: int, m_max: int = 6) -> RepReport:
    """Relations of the 3x3 model and recovery of A_m(theta) from
    ``D NB^(m-1) tau U``."""
    _check_theta(theta)
    g = phi3_generators(theta, q)
    ex = _is_exact(theta)
    rep = RepReport("phi3")
    _add(rep, "UD = s0 + Id_E", g["U"] @ g["D"], g["s0"] + g["Id_E"])
    _add(rep, "DU = (q+1) Id_V", g["D"] @ g["U"], (q + 1) * g["Id_V"])
    tt = _tilde(theta, q)
    a1 = _mat([[0] * 3 for _ in range(3)], ex)
    a1[2, 2] = theta + tt
    _add(rep, "D tau U = (theta + q/theta) Id_V", g["D"] @ g["tau"] @ g["U"], a1)
    for m in range(1, m_max + 1):
        mat = g["D"] @ _mpow(g["NB"], m - 1) @ g["tau"] @ g["U"]
        corner = mat[2, 2]
        if ex:
            if isinstance(theta, LaurentPoly):
                expected = satake_Ak(m, q).poly
            else:
                expected = satake_Ak(m, q)(theta)
            ok = corner == expected
            res = 0.0 if ok else math.inf
        else:
            expected = eval_Ak(theta, m, q)
            res = abs(corner - expected)
            ok = res <= 1e-10 * max(1.0, abs(expected), max(abs(complex(theta)), abs(tt)) ** m)
        rest_zero = all(mat[i, j] == 0 for i in range(3) for j in range(3) if (i, j) != (2, 2))
        rep.checks.append(
            Check(f"D NB^{m - 1} tau U = A_{m}(theta)", ok and rest_zero, residual=res, exact=ex)
        )
    return rep


def phi4_generators(theta_p, q0: int, q1: int) -> dict[str, np.ndarray]:
    """4x4 model of the biregular full algebra: rows 0-1 edge block, 2 the
    type-0 vertex, 3 the type-1 vertex."""
    ex = _is_exact(theta_p)
    inv = _tilde(theta_p, 1)
    z = [0, 0, 0, 0]
    g = {
        "s0": _mat([[0, q0, 0, 0], [1, q0 - 1, 0, 0], z, z], ex),
        "s1": _mat([[q1 - 1, theta_p, 0, 0], [q1 * inv, 0, 0, 0], z, z], ex),
        "D0": _mat([z, z, [1, q0, 0, 0], z], ex),
        "U0": _mat([[0, 0, 1, 0], [0, 0, 1, 0], z, z], ex),
        "D1": _mat([z, z, z, [q1, theta_p, 0, 0]], ex),
        "U1": _mat([[0, 0, 0, 1], [0, 0, 0, inv], z, z], ex),
        "Id_E": _mat([[1, 0, 0, 0], [0, 1, 0, 0], z, z], ex),
        "Id_V0": _mat([z, z, [0, 0, 1, 0], z], ex),
        "Id_V1": _mat([z, z, z, [0, 0, 0, 1]], ex),
    }
    g["NB~"] = g["s1"] @ g["s0"]
    g["A"] = g["D0"] @ g["U1"] + g["D1"] @ g["U0"]
    return g


def phi4_nb_inverted_diagonal(theta_p, q0: int, q1: int) -> np.ndarray:
    """A variant of NB~ with diagonal (1/theta', q0 q1/theta'), kept to show
    that it is not the product s1 s0."""
    ex = _is_exact(theta_p)
    inv = _tilde(theta_p, 1)
    z = [0, 0, 0, 0]
    return _mat(
        [[inv, q0 * (q1 - 1) + theta_p * (q0 - 1), 0, 0], [0, inv * q0 * q1, 0, 0], z, z], ex
    )


def phi4_check(theta_p, q0: int, q1: int) -> RepReport:
    _check_theta(theta_p)
    if not (q1 > q0 >= 1):
        raise BadParametersError(f"need q1 > q0 >= 1, got q0={q0}, q1={q1}")
    g = phi4_generators(theta_p, q0, q1)
    rep = RepReport("phi4")
    E = g["Id_E"]
    _add(rep, "s0^2 = (q0-1) s0 + q0 Id_E", g["s0"] @ g["s0"], (q0 - 1) * g["s0"] + q0 * E)
    _add(rep, "s1^2 = (q1-1) s1 + q1 Id_E", g["s1"] @ g["s1"], (q1 - 1) * g["s1"] + q1 * E)
    _add(rep, "U0 D0 = s0 + Id_E", g["U0"] @ g["D0"], g["s0"] + E)
    _add(rep, "U1 D1 = s1 + Id_E", g["U1"] @ g["D1"], g["s1"] + E)
    _add(rep, "D0 U0 = (q0+1) Id_V0", g["D0"] @ g["U0"], (q0 + 1) * g["Id_V0"])
    _add(rep, "D1 U1 = (q1+1) Id_V1", g["D1"] @ g["U1"], (q1 + 1) * g["Id_V1"])
    _add(rep, "A = D0 U1 + D1 U0", g["A"], g["D0"] @ g["U1"] + g["D1"] @ g["U0"])

    t = complex(theta_p) if not isinstance(theta_p, LaurentPoly) else None
    if t is not None:
        Q = q0 * q1
        nb = np.array(g["NB~"][:2, :2], dtype=complex)
        eig = np.linalg.eigvals(nb)
        scale = max(1.0, abs(t), Q / abs(t))
        rep.checks.append(
            Check("eig NB~ = {theta', q0 q1/theta'}", _multiset_close(eig, [t, Q / t], 1e-9 * scale))
        )
        va = np.array(g["A"][2:, 2:], dtype=complex)
        lam = cmath.sqrt((1 + q0 / t) * (q1 + t))
        rep.checks.append(
            Check(
                "eig A = +-sqrt((1 + q0/theta')(q1 + theta'))",
                _multiset_close(np.linalg.eigvals(va), [lam, -lam], 1e-9 * max(1.0, abs(lam))),
            )
        )
    if matrix_residual(phi4_nb_inverted_diagonal(theta_p, q0, q1), g["NB~"]) != 0:
        rep.notes.append(
            "an NB~ matrix with diagonal (1/theta', q0*q1/theta') does not equal s1*s0, whose "
            "diagonal is (theta', q0*q1/theta'); the product is used"
        )
    return rep
