from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one check.

    Exact checks pass iff ``residual == "0"``; numeric checks declare a
    ``tolerance`` in ``params`` and pass iff ``|residual| <= tolerance``.
    """

    check: str
    params: dict[str, Any] = field(default_factory=dict)
    passed: bool = False
    lhs: str = ""
    rhs: str = ""
    residual: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "params": dict(self.params),
            "pass": self.passed,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
        }

    def __bool__(self) -> bool:
        return self.passed


def exact_report(check: str, params: dict[str, Any], lhs, rhs) -> VerificationReport:
    diff = lhs - rhs
    return VerificationReport(
        check=check,
        params=params,
        passed=diff == 0,
        lhs=str(lhs),
        rhs=str(rhs),
        residual=str(diff),
    )
