"""Result record shared by all verification routines."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Check:
    identity: str
    passed: bool
    residual: float | None = None
    exact: bool = False
    detail: str | None = None

    def to_dict(self) -> dict:
        d = {"identity": self.identity, "passed": bool(self.passed), "exact": self.exact}
        if self.residual is not None:
            d["residual"] = self.residual
        if self.detail:
            d["detail"] = self.detail
        return d
