"""Normal forms in the extended Coxeter group <s0, s1, tau>."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

GENERATORS = ("s0", "s1", "tau")


@dataclass(frozen=True, order=True)
class OperatorWord:
    """The element ``tau^delta_tau * w_NB^m * s1^delta_1`` with ``w_NB = tau s0``."""

    delta_tau: int = 0
    m: int = 0
    delta_1: int = 0

    def __post_init__(self) -> None:
        if self.delta_tau not in (0, 1) or self.delta_1 not in (0, 1) or self.m < 0:
            raise ValueError(f"not a normal form: {self!r}")

    @property
    def length(self) -> int:
        return self.m + self.delta_1

    def generators(self) -> list[str]:
        """Expand into generators, leftmost first."""
        return ["tau"] * self.delta_tau + ["tau", "s0"] * self.m + ["s1"] * self.delta_1

    @classmethod
    def from_generators(cls, gens: Iterable[str]) -> "OperatorWord":
        """Normalise a product of generators (leftmost first)."""
        tau = 0
        reduced: list[int] = []
        # move every tau to the left: s_i tau = tau s_{1-i}
        for g in reversed(list(gens)):
            if g == "tau":
                tau ^= 1
                continue
            if g not in ("s0", "s1"):
                raise ValueError(f"unknown generator {g!r}")
            i = int(g[1]) ^ tau
            if reduced and reduced[-1] == i:
                reduced.pop()
            else:
                reduced.append(i)
        word = reduced[::-1]  # word in s0/s1, leftmost first, alternating
        alpha0 = 1 if word and word[0] == 0 else 0
        rest = word[alpha0:]
        delta_1 = len(rest) % 2
        m = 2 * (len(rest) // 2) + alpha0
        return cls(delta_tau=tau ^ alpha0, m=m, delta_1=delta_1)

    def __mul__(self, other: "OperatorWord") -> "OperatorWord":
        return OperatorWord.from_generators(self.generators() + other.generators())

    def inverse(self) -> "OperatorWord":
        return OperatorWord.from_generators(reversed(self.generators()))

    def __str__(self) -> str:
        parts = []
        if self.delta_tau:
            parts.append("tau")
        if self.m:
            parts.append("NB" if self.m == 1 else f"NB^{self.m}")
        if self.delta_1:
            parts.append("s1")
        return "*".join(parts) or "1"


IDENTITY = OperatorWord()
TAU = OperatorWord(1, 0, 0)
S1 = OperatorWord(0, 0, 1)
NB = OperatorWord(0, 1, 0)
S0 = OperatorWord.from_generators(["s0"])


def words_up_to(length: int) -> list[OperatorWord]:
    return [
        OperatorWord(t, m, d)
        for m in range(length + 1)
        for d in (0, 1)
        if m + d <= length
        for t in (0, 1)
    ]
