"""Observed order of accuracy under time-step refinement."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from numerics.grid import Field, linf_norm
from utils.errors import DegenerateInput

logger = logging.getLogger(__name__)


def observed_orders(errors: Sequence[float], ratio: float = 2.0) -> List[float]:
    orders = []
    for coarse, fine in zip(errors, errors[1:]):
        if coarse <= 0 or fine <= 0:
            orders.append(math.nan)
        else:
            orders.append(math.log(coarse / fine) / math.log(ratio))
    return orders


def fitted_order(steps: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(dt)."""
    steps, errors = np.asarray(steps, dtype=float), np.asarray(errors, dtype=float)
    if np.any(errors <= 0):
        raise DegenerateInput("errors must be positive to fit an order")
    slope, _ = np.polyfit(np.log(steps), np.log(errors), 1)
    return float(slope)


def richardson_extrapolate(coarse, fine, order: float, ratio: float = 2.0):
    return fine + (fine - coarse) / (ratio ** order - 1.0)


@dataclass
class ConvergenceStudy:
    steps: List[float]
    errors: List[float]
    reference: str
    extrapolated_error: Optional[float] = None

    @property
    def orders(self) -> List[float]:
        return observed_orders(self.errors)

    @property
    def fitted(self) -> float:
        return fitted_order(self.steps, self.errors)

    def rows(self):
        orders = [math.nan] + self.orders
        return [(dt, err, p) for dt, err, p in zip(self.steps, self.errors, orders)]

    def to_dict(self) -> dict:
        return {
            "reference": self.reference,
            "dt": self.steps,
            "errors": self.errors,
            "observed_orders": [None if math.isnan(p) else p for p in self.orders],
            "fitted_order": self.fitted,
            "extrapolated_error": self.extrapolated_error,
        }


def refinement_study(
    solve: Callable[[float], Field],
    dt0: float,
    levels: int,
    exact: Optional[Field] = None,
) -> ConvergenceStudy:
    """Errors of solve(dt0 / 2^k), k < levels, at the final time.

    Without an exact field the reference is solve at dt / 8 of the finest level.
    """
    if levels < 3:
        raise DegenerateInput(f"an order estimate needs at least 3 refinement levels, got {levels}")
    steps = [dt0 / 2 ** k for k in range(levels)]
    finals = []
    for dt in steps:
        logger.info(f"Refinement level dt={dt:.3e}")
        finals.append(solve(dt))

    if exact is None:
        reference, label = solve(steps[-1] / 8), f"self (dt={steps[-1] / 8:.3e})"
    else:
        reference, label = exact, "exact"
    errors = [linf_norm(f - reference) for f in finals]

    order = observed_orders(errors)[-1]
    extrapolated = None
    if math.isfinite(order) and order > 0:
        estimate = richardson_extrapolate(finals[-2].values, finals[-1].values, order)
        extrapolated = float(np.max(np.abs(estimate - reference.values)))
    study = ConvergenceStudy(steps, errors, label, extrapolated)
    logger.info(f"Observed orders {', '.join(f'{p:.3f}' for p in study.orders)}, fitted {study.fitted:.3f}")
    return study
