"""
ε → 0 extrapolation of excised integrals.

The excision correction is assumed O(ε^p) (p = 1 by default). The limit is the
Richardson combination of the last two values; the combination of the two
values before them gives the error bar.
"""
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence
import logging
import math

import numpy as np

from app.errors import ExtrapolationError

logger = logging.getLogger(__name__)


@dataclass
class ExtrapolationResult:
    """
    Attributes:
        value: Extrapolated ε → 0 value
        error: |value − previous Richardson estimate|, or the last difference with only two values
        eps: ε sequence used
        values: I(ε) per ε
        corrections: Boundary-correction magnitudes per ε, when recorded
        slope: Log-log slope of |I(ε) − value| against ε
        order: Assumed correction order p
    """
    value: float
    error: float
    eps: List[float]
    values: List[float]
    corrections: List[float] = field(default_factory=list)
    slope: Optional[float] = None
    order: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "error": self.error,
            "eps": self.eps,
            "values": self.values,
            "corrections": self.corrections,
            "slope": self.slope,
            "order": self.order,
        }


def _check_sequence(eps: Sequence[float], values: Sequence[float]):
    if len(eps) != len(values):
        raise ExtrapolationError("eps and values differ in length", eps=len(eps), values=len(values))
    if len(eps) < 2:
        raise ExtrapolationError("at least two ε values are needed", count=len(eps))
    if any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ExtrapolationError("eps sequence must be positive and strictly decreasing", eps=list(eps))
    if not all(math.isfinite(v) for v in values):
        raise ExtrapolationError("non-finite value in the ε family", values=list(values))


def richardson_pair(e1: float, v1: float, e2: float, v2: float, order: int = 1) -> float:
    """Limit of I(ε) = I0 + cε^p through (e1, v1), (e2, v2)"""
    a, b = e1 ** order, e2 ** order
    return (a * v2 - b * v1) / (a - b)


def log_log_slope(eps: Sequence[float], deviations: Sequence[float]) -> Optional[float]:
    """Least-squares slope of log|deviation| against log ε; None when deviations vanish"""
    e = np.asarray(eps, dtype=float)
    d = np.abs(np.asarray(deviations, dtype=float))
    keep = d > 0.0
    if np.count_nonzero(keep) < 2:
        return None
    slope, _ = np.polyfit(np.log(e[keep]), np.log(d[keep]), 1)
    return float(slope)


def richardson(eps: Sequence[float], values: Sequence[float], order: int = 1,
               corrections: Optional[Sequence[float]] = None) -> ExtrapolationResult:
    """
    First-order (by default) Richardson extrapolation of an ε-family.

    Raises:
        ExtrapolationError: Sequence malformed, non-finite or not converging
    """
    eps = [float(e) for e in eps]
    values = [float(v) for v in values]
    _check_sequence(eps, values)

    diffs = [abs(b - a) for a, b in zip(values, values[1:])]
    if len(diffs) >= 2 and diffs[-1] > 1.5 * diffs[-2] and diffs[-1] > 1e-14 * max(1.0, abs(values[-1])):
        raise ExtrapolationError(
            "ε-family is not converging: successive differences grow",
            eps=eps,
            values=values,
        )

    value = richardson_pair(eps[-2], values[-2], eps[-1], values[-1], order)
    if len(values) >= 3:
        previous = richardson_pair(eps[-3], values[-3], eps[-2], values[-2], order)
        error = abs(value - previous)
    else:
        error = diffs[-1]

    slope = log_log_slope(eps, [v - value for v in values])
    if slope is not None and slope < 0.5 * order:
        logger.warning(f"ε-family decays with slope {slope:.2f}, below the assumed order {order}")
    logger.debug(f"Extrapolated {values} at eps={eps} to {value} ± {error:.3e}")
    return ExtrapolationResult(value, error, eps, values, list(corrections or []), slope, order)


def excise_and_extrapolate(family: Callable[[float], float], eps_sequence: Sequence[float], order: int = 1,
                           correction: Optional[Callable[[float], float]] = None) -> ExtrapolationResult:
    """
    Evaluate an excised integral at each ε and extrapolate to ε = 0.

    Args:
        family: ε ↦ I(ε)
        eps_sequence: Strictly decreasing radii
        order: Assumed correction order
        correction: ε ↦ boundary-correction magnitude, recorded per ε

    Raises:
        ExtrapolationError: Sequence malformed or not converging
    """
    eps = [float(e) for e in eps_sequence]
    values, corrections = [], []
    for e in eps:
        values.append(float(family(e)))
        if correction is not None:
            corrections.append(float(correction(e)))
        logger.info(f"ε = {e:g}: I = {values[-1]:.12g}")
    return richardson(eps, values, order, corrections)
