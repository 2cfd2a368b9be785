"""
Discrete A(t) phi = -nu (a(x,t) phi_x)_x + phi and its time stepping.

Flux form with midpoint-averaged coefficients a_{j+1/2} = (a_j + a_{j+1}) / 2.
The two boundary rows are identity rows decoupled from the interior
(homogeneous Dirichlet coupling), so the matrix stays symmetric positive
definite with coercivity >= 1 from the identity part.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from numerics.grid import Field, GridSpec
from utils.errors import EllipticityError, SingularSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EllipticOperator:
    coefficient: Field
    nu: float
    theta: float
    diagonal: np.ndarray
    # upper[j] = A[j, j+1] = A[j+1, j]
    upper: np.ndarray

    @property
    def grid(self) -> GridSpec:
        return self.coefficient.grid


def _banded(diagonal: np.ndarray, upper: np.ndarray) -> np.ndarray:
    ab = np.zeros((3, diagonal.size))
    ab[0, 1:] = upper
    ab[1] = diagonal
    ab[2, :-1] = upper
    return ab


def _solve_tridiagonal(diagonal: np.ndarray, upper: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        x = solve_banded((1, 1), _banded(diagonal, upper), rhs, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise SingularSystem("tridiagonal system is singular", original_error=e)
    if not np.all(np.isfinite(x)):
        raise SingularSystem("tridiagonal solve produced non-finite values")
    return x


def assemble(a: Field, nu: float, theta_floor: float) -> EllipticOperator:
    if not nu > 0:
        raise ValueError(f"viscosity must be positive, got {nu}")
    theta = float(np.min(a.values))
    if theta < theta_floor:
        node = int(np.argmin(a.values))
        raise EllipticityError(
            f"coefficient minimum {theta:.6g} at node {node} is below the "
            f"ellipticity floor {theta_floor:.6g}",
            minimum=theta,
        )

    dx = a.grid.dx
    ratio = nu / dx ** 2
    half = 0.5 * (a.values[:-1] + a.values[1:])

    diagonal = np.ones(a.grid.points)
    diagonal[1:-1] += ratio * (half[1:] + half[:-1])
    upper = -ratio * half
    upper[0] = 0.0
    upper[-1] = 0.0
    return EllipticOperator(coefficient=a, nu=nu, theta=theta, diagonal=diagonal, upper=upper)


def _matvec(op: EllipticOperator, phi: np.ndarray) -> np.ndarray:
    y = op.diagonal * phi
    y[:-1] += op.upper * phi[1:]
    y[1:] += op.upper * phi[:-1]
    return y


def apply(op: EllipticOperator, phi: Field) -> Field:
    return Field(op.grid, _matvec(op, phi.values))


def solve(op: EllipticOperator, rhs: Field) -> Field:
    return Field(op.grid, _solve_tridiagonal(op.diagonal, op.upper, rhs.values))


def step(op_mid: EllipticOperator, phi: Field, f_old: Field, f_new: Field, dt: float) -> Field:
    """Crank-Nicolson: (I + dt/2 A) phi_new = (I - dt/2 A) phi + dt/2 (f_old + f_new)."""
    if not dt > 0:
        raise ValueError(f"time step must be positive, got {dt}")
    half_dt = 0.5 * dt
    rhs = phi.values - half_dt * _matvec(op_mid, phi.values) + half_dt * (f_old.values + f_new.values)
    shifted_diagonal = 1.0 + half_dt * op_mid.diagonal
    shifted_upper = half_dt * op_mid.upper
    return Field(op_mid.grid, _solve_tridiagonal(shifted_diagonal, shifted_upper, rhs))


def inner(f: Field, g: Field) -> float:
    """Discrete inner product dx * sum(f g), the one A is symmetric under."""
    return float(f.grid.dx * np.dot(f.values, g.values))
