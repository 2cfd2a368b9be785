import logging
import math
from enum import Enum
from typing import Tuple, Union

import numpy as np
from numpy.typing import ArrayLike

from config import INVERSION_MARGIN
from utils.errors import DomainError


Scalar = Union[float, np.ndarray]


class ModelKind(str, Enum):
    RATIONAL_SQUARE_ROOT = "RationalSquareRoot"
    ARCTANGENT = "Arctangent"
    CUBIC = "Cubic"
    LINEAR = "Linear"


def _like_input(values: np.ndarray, original: ArrayLike) -> Scalar:
    if np.ndim(original) == 0:
        return float(values)
    return values


class ConstitutiveModel:
    """Strictly increasing law eps + nu*eps_t = h(S) together with g = h^-1.

    Subclasses provide h, h' and an unpolished inverse; the base class handles
    the admissibility gate and one Newton polish so that h(g(w)) = w to
    round-off. Instances hold no mutable state.
    """

    kind: ModelKind
    name: str = ""
    alpha_minus: float = -math.inf
    alpha_plus: float = math.inf

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(kind={self.kind.value})"

    @property
    def delta_max(self) -> float:
        return min(abs(self.alpha_minus), abs(self.alpha_plus))

    def h(self, stress: ArrayLike) -> Scalar:
        raise NotImplementedError

    def h_prime(self, stress: ArrayLike) -> Scalar:
        raise NotImplementedError

    def _inverse(self, omega: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def admissible_bounds(self) -> Tuple[float, float]:
        lo = self.alpha_minus + INVERSION_MARGIN if math.isfinite(self.alpha_minus) else -math.inf
        hi = self.alpha_plus - INVERSION_MARGIN if math.isfinite(self.alpha_plus) else math.inf
        return lo, hi

    def check_admissible(self, omega: np.ndarray) -> None:
        lo, hi = self.admissible_bounds()
        bad = ~np.isfinite(omega) | (omega <= lo) | (omega >= hi)
        if np.any(bad):
            index = int(np.flatnonzero(np.ravel(bad))[0])
            value = float(np.ravel(omega)[index])
            raise DomainError(
                f"{self.kind.value}: strain-sum {value:.12g} at node {index} "
                f"is outside the admissible interval ({lo:.12g}, {hi:.12g})",
                index=index,
                value=value,
            )

    def g(self, omega: ArrayLike) -> Scalar:
        w = np.asarray(omega, dtype=float)
        self.check_admissible(w)
        s = self._inverse(w)
        # one Newton polish on h(s) = w
        s = s - (np.asarray(self.h(s)) - w) / np.asarray(self.h_prime(s))
        s = np.where(w == 0.0, 0.0, s)
        return _like_input(s, omega)

    def g_prime(self, omega: ArrayLike) -> Scalar:
        s = np.asarray(self.g(omega), dtype=float)
        return _like_input(1.0 / np.asarray(self.h_prime(s)), omega)


def h_eval(model: ConstitutiveModel, s_val: ArrayLike) -> Scalar:
    return model.h(s_val)


def h_prime(model: ConstitutiveModel, s_val: ArrayLike) -> Scalar:
    return model.h_prime(s_val)


def g_eval(model: ConstitutiveModel, omega_val: ArrayLike) -> Scalar:
    return model.g(omega_val)


def g_prime(model: ConstitutiveModel, omega_val: ArrayLike) -> Scalar:
    return model.g_prime(omega_val)


def admissible_delta(model: ConstitutiveModel) -> float:
    return model.delta_max


def g_prime_range(model: ConstitutiveModel, delta: float, samples: int = 2001) -> Tuple[float, float]:
    """(min, max) of g' over |z| <= delta, sampled on a uniform grid."""
    lo, hi = model.admissible_bounds()
    reach = min(delta, hi - INVERSION_MARGIN, -lo - INVERSION_MARGIN)
    z = np.linspace(-reach, reach, samples)
    values = np.asarray(model.g_prime(z))
    return float(values.min()), float(values.max())
