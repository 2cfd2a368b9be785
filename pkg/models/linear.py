import numpy as np
from numpy.typing import ArrayLike

from .base import ConstitutiveModel, ModelKind, Scalar, _like_input


class LinearModel(ConstitutiveModel):
    """h(S) = S. Classical Kelvin-Voigt baseline, no strain limit."""

    kind = ModelKind.LINEAR
    name = "linear"

    def h(self, stress: ArrayLike) -> Scalar:
        return _like_input(np.asarray(stress, dtype=float), stress)

    def h_prime(self, stress: ArrayLike) -> Scalar:
        return _like_input(np.ones_like(np.asarray(stress, dtype=float)), stress)

    def _inverse(self, omega: np.ndarray) -> np.ndarray:
        return omega.copy()
