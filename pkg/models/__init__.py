"""
Constitutive laws of strain-limiting viscoelasticity.

Usage:
    from models import get_model

    model = get_model("rational_sqrt")
    if model:
        stress = model.g(0.5)
"""

from typing import Optional, Union

from config import MODEL_IDENTIFIERS
from .base import (
    ConstitutiveModel,
    ModelKind,
    admissible_delta,
    g_eval,
    g_prime,
    g_prime_range,
    h_eval,
    h_prime,
)
from .rational_sqrt import RationalSquareRootModel
from .arctan import ArctangentModel
from .cubic import CubicModel
from .linear import LinearModel

_MODELS = {
    ModelKind.RATIONAL_SQUARE_ROOT: RationalSquareRootModel,
    ModelKind.ARCTANGENT: ArctangentModel,
    ModelKind.CUBIC: CubicModel,
    ModelKind.LINEAR: LinearModel,
}


def get_model(name: Union[str, ModelKind]) -> Optional[ConstitutiveModel]:
    """Factory: accepts a scenario name ("rational_sqrt", ...) or a kind; None if unknown."""
    if isinstance(name, ModelKind):
        kind = name
    else:
        label = MODEL_IDENTIFIERS.get(str(name).strip().lower(), str(name))
        try:
            kind = ModelKind(label)
        except ValueError:
            return None
    cls = _MODELS.get(kind)
    return cls() if cls else None


__all__ = [
    "get_model",
    "ConstitutiveModel",
    "ModelKind",
    "h_eval",
    "h_prime",
    "g_eval",
    "g_prime",
    "g_prime_range",
    "admissible_delta",
    "RationalSquareRootModel",
    "ArctangentModel",
    "CubicModel",
    "LinearModel",
]
