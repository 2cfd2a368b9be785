"""
h(S) = S / (1 + S^2)^(1/2), limits -1 and +1.

Closed-form inverse g(w) = w / sqrt(1 - w^2).
"""

import numpy as np
from numpy.typing import ArrayLike

from .base import ConstitutiveModel, ModelKind, Scalar, _like_input


class RationalSquareRootModel(ConstitutiveModel):
    kind = ModelKind.RATIONAL_SQUARE_ROOT
    name = "rational_sqrt"
    alpha_minus = -1.0
    alpha_plus = 1.0

    def h(self, stress: ArrayLike) -> Scalar:
        s = np.asarray(stress, dtype=float)
        return _like_input(s / np.hypot(1.0, s), stress)

    def h_prime(self, stress: ArrayLike) -> Scalar:
        s = np.asarray(stress, dtype=float)
        return _like_input(np.hypot(1.0, s) ** -3, stress)

    def _inverse(self, omega: np.ndarray) -> np.ndarray:
        # (1 - w)(1 + w) keeps precision near the strain limit
        return omega / np.sqrt((1.0 - omega) * (1.0 + omega))
