"""
Independent solver for omega_tt = g(omega)_xx + nu g(omega)_xxt.

The state is (omega, zeta = omega_t). Each step is a Heun predictor-corrector:
the elastic term g(omega)_xx is explicit, the stiff dissipative term
nu (g'(omega) zeta)_xx is implicit (trapezoidal in zeta) with the coefficient
frozen at the current level in the predictor and at the predicted midpoint in
the corrector. omega is advanced by the trapezoidal rule on zeta.

Shares no stepping code with the Picard solver: different unknowns, a plain
second difference instead of the flux-form operator, and a non-symmetric
banded system.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import solve_banded

from config import MEAN_ZERO_RELATIVE_TOL
from models import ConstitutiveModel
from numerics.grid import Field, linf_norm, trapezoidal_mean
from solvers.fixed_point import step_count
from solvers.trajectory import FieldSeries
from utils.errors import CourantViolation, MeanZeroViolation, SingularSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OracleState:
    omega: Field
    zeta: Field
    t: float = 0.0


@dataclass(frozen=True, eq=False)
class OracleResult:
    omega: FieldSeries
    zeta: FieldSeries

    @property
    def final(self) -> OracleState:
        return OracleState(self.omega.final(), self.zeta.final(), self.omega.steps * self.omega.dt)


def second_difference(values: np.ndarray, dx: float) -> np.ndarray:
    out = np.zeros_like(values)
    out[1:-1] = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / dx ** 2
    return out


def courant_limit(model: ConstitutiveModel, omega: Field) -> float:
    wave_speed = np.sqrt(np.max(np.asarray(model.g_prime(omega.values))))
    return omega.grid.dx / wave_speed


def _implicit_zeta(zeta: np.ndarray, elastic: np.ndarray, coeff: np.ndarray, nu: float, dt: float, dx: float) -> np.ndarray:
    """Solve (I - c L B) z_new = (I + c L B) z + dt * elastic, c = nu dt / 2, B = diag(coeff)."""
    n = zeta.size
    c = 0.5 * nu * dt / dx ** 2
    ab = np.zeros((3, n))
    ab[1] = 1.0
    ab[1, 1:-1] += 2.0 * c * coeff[1:-1]
    ab[0, 2:] = -c * coeff[2:]          # row j, column j+1 for interior j
    ab[2, :-2] = -c * coeff[:-2]        # row j, column j-1 for interior j
    rhs = zeta + 0.5 * nu * dt * second_difference(coeff * zeta, dx) + dt * elastic
    try:
        z_new = solve_banded((1, 1), ab, rhs, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise SingularSystem("oracle implicit system is singular", original_error=e)
    return z_new


def oracle_step(state: OracleState, model: ConstitutiveModel, nu: float, dt: float) -> OracleState:
    if not dt > 0:
        raise ValueError(f"time step must be positive, got {dt}")
    grid, dx = state.omega.grid, state.omega.grid.dx
    w, z = state.omega.values, state.zeta.values

    limit = courant_limit(model, state.omega)
    if dt > limit:
        raise CourantViolation(f"dt={dt:.3e} exceeds the Courant limit {limit:.3e} at t={state.t:.4g}")

    coeff = np.asarray(model.g_prime(w))
    elastic_old = second_difference(np.asarray(model.g(w)), dx)
    z_pred = _implicit_zeta(z, elastic_old, coeff, nu, dt, dx)
    w_pred = w + 0.5 * dt * (z + z_pred)

    coeff_mid = np.asarray(model.g_prime(0.5 * (w + w_pred)))
    elastic_new = second_difference(np.asarray(model.g(w_pred)), dx)
    z_new = _implicit_zeta(z, 0.5 * (elastic_old + elastic_new), coeff_mid, nu, dt, dx)
    w_new = w + 0.5 * dt * (z + z_new)

    model.check_admissible(w_new)
    if not (np.all(np.isfinite(z_new)) and np.all(np.isfinite(w_new))):
        raise SingularSystem(f"oracle produced non-finite values at t={state.t + dt:.4g}")
    return OracleState(Field(grid, w_new), Field(grid, z_new), state.t + dt)


def _require_mean_zero(f: Field, label: str, tol: Optional[float]) -> None:
    limit = MEAN_ZERO_RELATIVE_TOL * linf_norm(f) if tol is None else tol
    mean = trapezoidal_mean(f)
    if abs(mean) > limit:
        raise MeanZeroViolation(f"{label} has mean {mean:.3e} (tolerance {limit:.3e})")


def oracle_run(
    omega0: Field,
    omega1: Field,
    model: ConstitutiveModel,
    nu: float,
    dt: float,
    T: float,
    mean_zero_tol: Optional[float] = None,
) -> OracleResult:
    _require_mean_zero(omega0, "omega0", mean_zero_tol)
    _require_mean_zero(omega1, "omega1", mean_zero_tol)
    steps = step_count(T, dt)
    grid = omega0.grid

    omega = np.empty((steps + 1, grid.points))
    zeta = np.empty((steps + 1, grid.points))
    omega[0], zeta[0] = omega0.values, omega1.values
    state = OracleState(omega0, omega1, 0.0)
    logger.info(f"Oracle run: {model.kind.value}, T={steps * dt:.4g}, steps={steps}, N={grid.points}")
    for n in range(steps):
        state = oracle_step(state, model, nu, dt)
        omega[n + 1], zeta[n + 1] = state.omega.values, state.zeta.values
    return OracleResult(FieldSeries(grid, dt, omega, name="omega"), FieldSeries(grid, dt, zeta, name="omega_t"))


def linear_energy(state: OracleState) -> float:
    """1/2 (<zeta, (-L)^-1 zeta> + <omega, omega>) on the interior nodes.

    Non-increasing for g = id and nu > 0: its rate is -nu ||zeta||^2.
    """
    dx = state.omega.grid.dx
    z = state.zeta.values[1:-1]
    w = state.omega.values[1:-1]
    m = z.size
    ab = np.zeros((3, m))
    ab[0, 1:] = -1.0 / dx ** 2
    ab[1] = 2.0 / dx ** 2
    ab[2, :-1] = -1.0 / dx ** 2
    potential = solve_banded((1, 1), ab, z)
    return 0.5 * dx * (float(np.dot(z, potential)) + float(np.dot(w, w)))
