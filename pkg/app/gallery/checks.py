"""
Check results of gallery entries and the comparisons that produce them.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional
import logging

import numpy as np

from app.config import settings

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    """
    One comparison of computed values with a reference.

    Attributes:
        name: What is compared
        kind: pointwise, integral or value
        error: Largest absolute deviation
        tolerance: Allowed deviation
        samples: Number of compared values
        detail: Extra report fields (computed and reference values of integrals)
    """
    name: str
    kind: str
    error: float
    tolerance: float
    samples: int = 1
    detail: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.error)) and self.error <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind,
            "error": self.error,
            "tolerance": self.tolerance,
            "samples": self.samples,
            "passed": self.passed,
            **self.detail,
        }


@dataclass
class EntryReport:
    name: str
    title: str
    citation: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "title": self.title,
            "citation": self.citation,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def report_rows(self) -> List[Dict[str, Any]]:
        return [{"entry": self.name, **c.to_dict()} for c in self.checks]


def pointwise(name: str, computed, reference, tolerance: Optional[float] = None,
              relative: bool = False) -> CheckResult:
    """
    Max deviation between two arrays of samples.

    With relative=True the deviation is scaled by max(1, |reference|), for
    references that grow near a singular set.
    """
    tol = settings.GALLERY_POINT_TOL if tolerance is None else tolerance
    computed = np.asarray(computed, dtype=float)
    reference = np.asarray(reference, dtype=float)
    diff = np.abs(computed - reference)
    if relative:
        diff = diff / np.maximum(1.0, np.abs(reference))
    error = float(np.max(diff)) if diff.size else 0.0
    if not np.all(np.isfinite(computed)):
        error = float("inf")
    return CheckResult(name, "pointwise", error, tol, int(diff.size), {"relative": relative})


def integral(name: str, computed: float, reference: float, tolerance: Optional[float] = None,
             estimate: Optional[float] = None) -> CheckResult:
    tol = settings.GALLERY_INTEGRAL_TOL if tolerance is None else tolerance
    detail = {"computed": float(computed), "reference": float(reference)}
    if estimate is not None:
        detail["estimate"] = float(estimate)
    return CheckResult(name, "integral", abs(float(computed) - float(reference)), tol, 1, detail)


def value(name: str, computed: float, reference: float, tolerance: Optional[float] = None) -> CheckResult:
    tol = settings.GALLERY_POINT_TOL if tolerance is None else tolerance
    return CheckResult(name, "value", abs(float(computed) - float(reference)), tol, 1,
                       {"computed": float(computed), "reference": float(reference)})


def condition(name: str, holds: bool, detail: Optional[Dict[str, Any]] = None) -> CheckResult:
    """A yes/no check; error 0 when it holds"""
    return CheckResult(name, "condition", 0.0 if holds else 1.0, 0.0, 1, dict(detail or {}))
