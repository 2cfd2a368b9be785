"""
h(S) = arctan(S), limits -pi/2 and +pi/2; g(w) = tan(w).
"""

import math

import numpy as np
from numpy.typing import ArrayLike

from .base import ConstitutiveModel, ModelKind, Scalar, _like_input


class ArctangentModel(ConstitutiveModel):
    kind = ModelKind.ARCTANGENT
    name = "arctan"
    alpha_minus = -math.pi / 2
    alpha_plus = math.pi / 2

    def h(self, stress: ArrayLike) -> Scalar:
        return _like_input(np.arctan(np.asarray(stress, dtype=float)), stress)

    def h_prime(self, stress: ArrayLike) -> Scalar:
        s = np.asarray(stress, dtype=float)
        return _like_input(1.0 / (1.0 + s * s), stress)

    def _inverse(self, omega: np.ndarray) -> np.ndarray:
        return np.tan(omega)
