"""
h(S) = (1 + S^2) S, unbounded, so no strain limit.

Written in the literature as (-1 + 2(1 + S^2/2)) S, which simplifies to the
form used here; the unsimplified expression suggests dropped material
parameters, only the unit-parameter law is implemented.

No convenient closed-form inverse: g is computed by Newton's method on
S + S^3 = w, safeguarded by bisection on the bracket [0, min(|w|, |w|^(1/3))].
"""

import numpy as np
from numpy.typing import ArrayLike

from config import INVERSION_MAX_ITER, INVERSION_TOLERANCE
from .base import ConstitutiveModel, ModelKind, Scalar, _like_input


class CubicModel(ConstitutiveModel):
    kind = ModelKind.CUBIC
    name = "cubic"

    def h(self, stress: ArrayLike) -> Scalar:
        s = np.asarray(stress, dtype=float)
        return _like_input(s * (1.0 + s * s), stress)

    def h_prime(self, stress: ArrayLike) -> Scalar:
        s = np.asarray(stress, dtype=float)
        return _like_input(1.0 + 3.0 * s * s, stress)

    def _inverse(self, omega: np.ndarray) -> np.ndarray:
        sign = np.sign(omega)
        target = np.abs(omega)
        lo = np.zeros_like(target)
        hi = np.minimum(target, np.cbrt(target))
        s = target / (1.0 + target ** (2.0 / 3.0))

        for _ in range(INVERSION_MAX_ITER):
            residual = s + s ** 3 - target
            lo = np.where(residual < 0.0, s, lo)
            hi = np.where(residual > 0.0, s, hi)
            trial = s - residual / (1.0 + 3.0 * s * s)
            outside = (trial < lo) | (trial > hi)
            trial = np.where(outside, 0.5 * (lo + hi), trial)
            converged = np.abs(trial - s) <= INVERSION_TOLERANCE * (1.0 + s)
            s = trial
            if np.all(converged):
                break
        else:
            self.logger.warning(
                f"Cubic inversion hit {INVERSION_MAX_ITER} iterations, "
                f"max residual {np.max(np.abs(s + s ** 3 - target)):.3e}"
            )

        return sign * s
