"""
Stress S, strain-sum omega = eps + nu eps_t, potential eta (eta_x = omega)
and displacement u (eta = u + nu u_t).

    omega0 = h(S0),  omega1 = h'(S0) S1,  S = g(omega),
    sigma = g(omega) + nu g(omega)_t,
    u(t) = u(0) e^{-t/nu} + (1/nu) int_0^t e^{-(t-tau)/nu} eta(tau) dtau.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from models import ConstitutiveModel
from numerics.grid import Field, antiderivative, centered_derivative, derivative
from solvers.trajectory import FieldSeries, Trajectory

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ScenarioData:
    S0: Field
    S1: Field
    omega0: Field
    omega1: Field
    eta0: Field
    eta1: Field
    u0: Field

    @classmethod
    def from_stress(cls, S0: Field, S1: Field, model: ConstitutiveModel,
                    u0: Optional[Field] = None, mean_zero_tol: Optional[float] = None) -> "ScenarioData":
        omega0, omega1 = stress_to_omega(S0, S1, model)
        return cls(
            S0, S1, omega0, omega1,
            omega_to_eta(omega0, mean_zero_tol), omega_to_eta(omega1, mean_zero_tol),
            u0 if u0 is not None else S0.grid.zeros(),
        )

    @classmethod
    def from_strain_sum(cls, omega0: Field, omega1: Field, model: ConstitutiveModel,
                        u0: Optional[Field] = None, mean_zero_tol: Optional[float] = None) -> "ScenarioData":
        S0 = omega_to_stress(omega0, model)
        S1 = Field(omega0.grid, np.asarray(model.g_prime(omega0.values)) * omega1.values)
        return cls(
            S0, S1, omega0, omega1,
            omega_to_eta(omega0, mean_zero_tol), omega_to_eta(omega1, mean_zero_tol),
            u0 if u0 is not None else omega0.grid.zeros(),
        )

    @classmethod
    def from_potential(cls, eta0: Field, eta1: Field, model: ConstitutiveModel,
                       u0: Optional[Field] = None) -> "ScenarioData":
        """eta given directly; omega = eta_x has zero mean whenever eta decays at both ends."""
        omega0, omega1 = derivative(eta0), derivative(eta1)
        S0 = omega_to_stress(omega0, model)
        S1 = Field(eta0.grid, np.asarray(model.g_prime(omega0.values)) * omega1.values)
        return cls(S0, S1, omega0, omega1, eta0, eta1, u0 if u0 is not None else eta0.grid.zeros())

    @property
    def ux0(self) -> Field:
        return derivative(self.u0)


def stress_to_omega(S0: Field, S1: Field, model: ConstitutiveModel) -> Tuple[Field, Field]:
    omega0 = np.asarray(model.h(S0.values))
    omega1 = np.asarray(model.h_prime(S0.values)) * S1.values
    return Field(S0.grid, omega0), Field(S1.grid, omega1)


def omega_to_eta(omega: Field, mean_zero_tol: Optional[float] = None) -> Field:
    return antiderivative(omega, mean_zero_tol)


def omega_to_stress(omega: Field, model: ConstitutiveModel) -> Field:
    return Field(omega.grid, np.asarray(model.g(omega.values)))


def sigma_field(omega: Field, omega_t: Field, model: ConstitutiveModel, nu: float) -> Field:
    stress = np.asarray(model.g(omega.values))
    rate = np.asarray(model.g_prime(omega.values)) * omega_t.values
    return Field(omega.grid, stress + nu * rate)


def _kernel_weights(dt: float, nu: float) -> Tuple[float, float, float]:
    """Exact weights of e^{-(t-tau)/nu}/nu against the linear interpolant on one step."""
    r = dt / nu
    one_minus_decay = -np.expm1(-r)
    decay = 1.0 - one_minus_decay
    w_new = 1.0 - one_minus_decay / r
    w_old = one_minus_decay / r - decay
    return decay, w_old, w_new


def _relax(forcing: np.ndarray, start: np.ndarray, dt: float, nu: float) -> np.ndarray:
    if not nu > 0:
        raise ValueError(f"viscosity must be positive, got {nu}")
    decay, w_old, w_new = _kernel_weights(dt, nu)
    out = np.empty_like(forcing)
    out[0] = start
    for n in range(forcing.shape[0] - 1):
        out[n + 1] = decay * out[n] + w_old * forcing[n] + w_new * forcing[n + 1]
    return out


def _levels(traj: Union[Trajectory, FieldSeries]) -> np.ndarray:
    return traj.eta if isinstance(traj, Trajectory) else traj.values


def eta_to_displacement(eta_traj: Union[Trajectory, FieldSeries], u0: Field, nu: float) -> FieldSeries:
    u = _relax(_levels(eta_traj), u0.values, eta_traj.dt, nu)
    return FieldSeries(eta_traj.grid, eta_traj.dt, u, name="u")


def strain_recovery(omega_traj: FieldSeries, ux0: Field, nu: float) -> FieldSeries:
    ux = _relax(omega_traj.values, ux0.values, omega_traj.dt, nu)
    return FieldSeries(omega_traj.grid, omega_traj.dt, ux, name="u_x")


def relaxation_residual(forcing: Union[Trajectory, FieldSeries], response: FieldSeries, nu: float) -> float:
    """max |forcing - (response + nu response_t)|, response_t by differences in time."""
    rate = response.time_derivative().values
    return float(np.max(np.abs(_levels(forcing) - response.values - nu * rate)))


def omega_history(traj: Trajectory) -> FieldSeries:
    return FieldSeries(traj.grid, traj.dt, centered_derivative(traj.eta, traj.grid.dx), name="omega")


def omega_rate_history(traj: Trajectory) -> FieldSeries:
    return FieldSeries(traj.grid, traj.dt, centered_derivative(traj.eta_t, traj.grid.dx), name="omega_t")



def stress_history(omega: FieldSeries, model: ConstitutiveModel) -> FieldSeries:
    return FieldSeries(omega.grid, omega.dt, np.asarray(model.g(omega.values)), name="S")


def sigma_history(omega: FieldSeries, model: ConstitutiveModel, nu: float,
                  omega_t: Optional[FieldSeries] = None) -> FieldSeries:
    rate = omega_t if omega_t is not None else omega.time_derivative()
    values = np.asarray(model.g(omega.values)) + nu * np.asarray(model.g_prime(omega.values)) * rate.values
    return FieldSeries(omega.grid, omega.dt, values, name="sigma")
