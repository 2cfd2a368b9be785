"""
Exact single-mode solutions for the linear law g(w) = w.

With g = id the problem reduces to eta_tt = eta_xx + nu eta_xxt. The shape
sin(xi (x - x_0)), xi = k pi / (x_{N-1} - x_0), vanishes at both boundary
nodes, and its amplitude obeys A'' + nu xi^2 A' + xi^2 A = 0, whose roots
lambda^2 + nu xi^2 lambda + xi^2 = 0 may be complex or real.
"""

from typing import Tuple

import numpy as np

from numerics.grid import Field, GridSpec
from solvers.trajectory import FieldSeries, Trajectory


def mode_wavenumber(grid: GridSpec, k: int) -> float:
    return k * np.pi / grid.span


def mode_shape(grid: GridSpec, k: int) -> Field:
    xi = mode_wavenumber(grid, k)
    return grid.sample(lambda x: np.sin(xi * (x - x[0])))


def damped_mode_amplitude(t, xi: float, nu: float, a0: float = 1.0, a1: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """A(t) and A'(t) with A(0) = a0, A'(0) = a1."""
    t = np.asarray(t, dtype=float)
    damping = nu * xi ** 2
    root = np.sqrt(complex(damping ** 2 - 4.0 * xi ** 2))
    lam_p = 0.5 * (-damping + root)
    lam_m = 0.5 * (-damping - root)

    if abs(lam_p - lam_m) <= 1e-12 * max(1.0, abs(lam_p)):
        lam = lam_p.real
        c = a1 - lam * a0
        amp = (a0 + c * t) * np.exp(lam * t)
        rate = (c + lam * (a0 + c * t)) * np.exp(lam * t)
        return amp, rate

    c_p = (a1 - lam_m * a0) / (lam_p - lam_m)
    c_m = a0 - c_p
    amp = c_p * np.exp(lam_p * t) + c_m * np.exp(lam_m * t)
    rate = c_p * lam_p * np.exp(lam_p * t) + c_m * lam_m * np.exp(lam_m * t)
    return amp.real, rate.real


def exact_mode_trajectory(grid: GridSpec, k: int, amplitude: float, nu: float, dt: float, steps: int) -> Trajectory:
    xi = mode_wavenumber(grid, k)
    shape = mode_shape(grid, k).values
    amp, rate = damped_mode_amplitude(dt * np.arange(steps + 1), xi, nu, a0=amplitude)
    return Trajectory(grid, dt, amp[:, None] * shape[None, :], rate[:, None] * shape[None, :])


def exact_mode_series(grid: GridSpec, k: int, amplitude: float, nu: float, dt: float, steps: int) -> FieldSeries:
    """Same mode read as a strain-sum profile: omega solves the identical equation."""
    xi = mode_wavenumber(grid, k)
    shape = mode_shape(grid, k).values
    amp, _ = damped_mode_amplitude(dt * np.arange(steps + 1), xi, nu, a0=amplitude)
    return FieldSeries(grid, dt, amp[:, None] * shape[None, :], name="omega")
