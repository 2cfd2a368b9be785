"""
Uniform grid on [-L, L) standing in for the real line.

Finite differences are used for every PDE operator; the FFT only enters the
Sobolev norms, which are defined through the Fourier transform:

    ||z||_{H^s}^2 = int (1 + xi^2)^s |z_hat(xi)|^2 dxi

realized on the periodic extension of the truncated field with Parseval
scaling, so that s = 0 reproduces the L2 norm.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np
import scipy.fft
from scipy.integrate import cumulative_trapezoid, trapezoid
from scipy.special import gamma

from config import DECAY_BAND, DECAY_TOLERANCE, MEAN_ZERO_RELATIVE_TOL
from utils.errors import DecayViolation, MeanZeroViolation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec:
    half_length: float
    points: int

    def __post_init__(self):
        if not self.half_length > 0:
            raise ValueError(f"half_length must be positive, got {self.half_length}")
        n = self.points
        if n < 16 or n & (n - 1):
            raise ValueError(f"points must be a power of two >= 16, got {n}")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_length / self.points

    @property
    def span(self) -> float:
        """Distance between the first and last node, 2L - dx."""
        return (self.points - 1) * self.dx

    @cached_property
    def nodes(self) -> np.ndarray:
        x = -self.half_length + np.arange(self.points) * self.dx
        x.setflags(write=False)
        return x

    @cached_property
    def frequencies(self) -> np.ndarray:
        # xi_k = pi k / L in FFT order
        xi = 2.0 * np.pi * scipy.fft.fftfreq(self.points, d=self.dx)
        xi.setflags(write=False)
        return xi

    def field(self, values) -> "Field":
        return Field(self, values)

    def zeros(self) -> "Field":
        return Field(self, np.zeros(self.points))

    def sample(self, func: Callable[[np.ndarray], np.ndarray]) -> "Field":
        return Field(self, func(self.nodes))


@dataclass(frozen=True, eq=False)
class Field:
    """Samples of one real function of x at the grid nodes."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.points,):
            raise ValueError(f"expected {self.grid.points} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("field contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __add__(self, other: "Field") -> "Field":
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        return Field(self.grid, self.values - other.values)

    def __mul__(self, factor: float) -> "Field":
        return Field(self.grid, self.values * factor)

    __rmul__ = __mul__


# Array-level kernels; axis -1 is space so a (levels, N) block works as well.

def centered_derivative(values: np.ndarray, dx: float) -> np.ndarray:
    return np.gradient(values, dx, axis=-1, edge_order=2)


def forward_difference(values: np.ndarray, dx: float) -> np.ndarray:
    """Differences at the N-1 half nodes x_{j+1/2}."""
    return np.diff(values, axis=-1) / dx


def flux_divergence(half_values: np.ndarray, dx: float) -> np.ndarray:
    """Nodal divergence of half-node fluxes; zero on the two boundary nodes."""
    shape = half_values.shape[:-1] + (half_values.shape[-1] + 1,)
    out = np.zeros(shape)
    out[..., 1:-1] = np.diff(half_values, axis=-1) / dx
    return out


def sobolev_norm_values(values: np.ndarray, grid: GridSpec, s: float) -> np.ndarray:
    coeffs = scipy.fft.fft(values, axis=-1) / grid.points
    weights = (1.0 + grid.frequencies ** 2) ** s
    energy = np.sum(weights * np.abs(coeffs) ** 2, axis=-1)
    return np.sqrt(2.0 * grid.half_length * energy)


def integral_values(values: np.ndarray, dx: float) -> np.ndarray:
    return trapezoid(values, dx=dx, axis=-1)


# Field operations

def derivative(f: Field) -> Field:
    return Field(f.grid, centered_derivative(f.values, f.grid.dx))


def trapezoidal_mean(f: Field) -> float:
    return float(trapezoid(f.values, dx=f.grid.dx)) / f.grid.span


def antiderivative(f: Field, mean_zero_tol: Optional[float] = None) -> Field:
    """Cumulative trapezoid from x_0 = -L; refuses fields with nonzero mean."""
    scale = linf_norm(f)
    tol = MEAN_ZERO_RELATIVE_TOL * scale if mean_zero_tol is None else mean_zero_tol
    mean = trapezoidal_mean(f)
    if abs(mean) > tol:
        raise MeanZeroViolation(
            f"field mean {mean:.3e} exceeds tolerance {tol:.3e}; "
            f"its antiderivative cannot vanish at both ends"
        )
    return Field(f.grid, cumulative_trapezoid(f.values, dx=f.grid.dx, initial=0.0))


def sobolev_norm(f: Field, s: float) -> float:
    return float(sobolev_norm_values(f.values, f.grid, s))


def linf_norm(f: Field) -> float:
    return float(np.max(np.abs(f.values)))


def integral(f: Field) -> float:
    return float(integral_values(f.values, f.grid.dx))


def l2_norm(f: Field) -> float:
    return math.sqrt(float(trapezoid(f.values ** 2, dx=f.grid.dx)))


def embedding_constant(order: float) -> float:
    """C with ||f||_inf <= C ||f||_{H^order}; needs order > 1/2."""
    if order <= 0.5:
        raise ValueError(f"H^{order} does not embed in L-infinity")
    integral_weight = math.sqrt(math.pi) * gamma(order - 0.5) / gamma(order)
    return math.sqrt(integral_weight / (2.0 * math.pi))


def check_decay(f: Field, label: str = "field", tol: float = DECAY_TOLERANCE, band: float = DECAY_BAND) -> None:
    outer = np.abs(f.grid.nodes) >= f.grid.half_length - band
    peak = float(np.max(np.abs(f.values[outer]))) if np.any(outer) else 0.0
    if peak > tol:
        raise DecayViolation(
            f"{label} is {peak:.3e} within {band} of the boundary (limit {tol:.1e}); "
            f"enlarge L or localize the data"
        )
    logger.debug(f"Decay check passed for {label}: boundary band peak {peak:.3e}")
