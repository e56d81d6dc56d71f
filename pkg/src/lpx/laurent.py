"""Exact Laurent polynomials in one variable with rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from numbers import Number, Rational
from typing import Mapping


class LaurentPoly:
    """Finite sum ``sum_e c_e * x**e`` with ``e`` in Z and ``c_e`` rational.

    Zero coefficients are never stored, so equality is structural.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        c: dict[int, Fraction] = {}
        for e, v in (coeffs or {}).items():
            v = Fraction(v)
            if v:
                c[int(e)] = v
        self._c = c

    @classmethod
    def var(cls) -> "LaurentPoly":
        return cls({1: 1})

    @classmethod
    def monomial(cls, exponent: int, coeff=1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return dict(self._c)

    def __getitem__(self, e: int) -> Fraction:
        return self._c.get(e, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def degree_range(self) -> tuple[int, int]:
        if not self._c:
            raise ValueError("zero polynomial has no degree")
        return min(self._c), max(self._c)

    @staticmethod
    def _coerce(other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Rational)):
            return LaurentPoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for e, v in o._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c: dict[int, Fraction] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in o._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "LaurentPoly":
        """Inverse of a monomial (the only units of the ring)."""
        if not self.is_monomial():
            raise ZeroDivisionError("only monomials are invertible in Q[x, 1/x]")
        (e, v), = self._c.items()
        return LaurentPoly({-e: 1 / v})

    def __truediv__(self, other):
        if isinstance(other, LaurentPoly):
            return self * other.inverse()
        if isinstance(other, (int, Rational)):
            return LaurentPoly({e: v / Fraction(other) for e, v in self._c.items()})
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __bool__(self):
        return bool(self._c)

    def substitute_scaled_inverse(self, q) -> "LaurentPoly":
        """Apply ``x -> q / x``; ``c x^e`` becomes ``c q^e x^-e``."""
        q = Fraction(q)
        return LaurentPoly({-e: v * q**e for e, v in self._c.items()})

    def __call__(self, x):
        """Evaluate at ``x`` (exact for Fractions, complex otherwise)."""
        if not self._c:
            return 0
        if isinstance(x, (int, Rational)):
            x = Fraction(x)
            if x == 0 and min(self._c) < 0:
                raise ZeroDivisionError("negative powers at x = 0")
            return sum((v * x**e for e, v in self._c.items()), Fraction(0))
        if isinstance(x, Number):
            return sum(complex(v) * complex(x) ** e for e, v in sorted(self._c.items()))
        raise TypeError(f"cannot evaluate at {type(x).__name__}")

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        terms = []
        for e in sorted(self._c, reverse=True):
            v = self._c[e]
            if e == 0:
                terms.append(str(v))
            else:
                mono = "x" if e == 1 else f"x^{e}"
                if v == 1:
                    terms.append(mono)
                elif v == -1:
                    terms.append(f"-{mono}")
                else:
                    terms.append(f"{v}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")
