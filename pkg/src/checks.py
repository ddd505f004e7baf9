#!/usr/bin/env python3
"""
Check results shared by the trigonometric and eigen-data checks
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Tuple

LOG2 = math.log(2.0)


@dataclass
class CheckResult:
    """Outcome of one numeric identity check"""
    name: str
    params: Dict[str, Any]
    passed: bool
    residual: float
    sign: int = 1
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "params": dict(self.params),
            "passed": self.passed,
            "residual": self.residual,
            "sign": self.sign,
            "detail": dict(self.detail),
        }


def log_abs_product(factors: Iterable[float]) -> Tuple[float, int]:
    """Sum of log|f| and the sign of the product; (-inf, 0) if any factor is zero"""
    logs = []
    sign = 1
    for f in factors:
        if f == 0.0:
            return float("-inf"), 0
        if f < 0.0:
            sign = -sign
        logs.append(math.log(abs(f)))
    return math.fsum(logs), sign
