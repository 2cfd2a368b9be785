"""
Picard iteration for eta_tt = g(eta_x)_x + nu g(eta_x)_xt.

Around a given trajectory v the equation is linearized to

    phi_t + A_v(t) phi = G_v(t) + F_v(t),    eta_t = phi,
    A_v = 1 - nu D_x(g'(v_x) D_x),  G_v = g(v_x)_x,  F_v = v_t,

which is a variable-coefficient heat equation for phi. The map K: v -> eta
acts on the whole window [0, T]; its fixed point solves the nonlinear problem.
Distances are measured in the X^s norm sup_t(||z||_{H^s} + ||z_t||_{H^s}).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from models import ConstitutiveModel
from numerics.grid import (
    Field,
    centered_derivative,
    embedding_constant,
    flux_divergence,
    forward_difference,
    linf_norm,
    derivative,
    sobolev_norm,
    sobolev_norm_values,
)
from numerics.parabolic import apply, assemble, step
from solvers.settings import SolverConfig
from solvers.trajectory import Trajectory
from utils.errors import (
    DegenerateInput,
    DomainError,
    EllipticityError,
    GridMismatch,
    IterationLimitError,
    NoContraction,
    ScenarioError,
    SingularSystem,
    StrainBoundError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    measured_norm: float
    threshold: float
    margin: float
    k1: float
    initial_strain: float
    embedding_constant: float
    derived_strain_bound: float
    strict: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class ContractionHistory:
    distances: List[float] = field(default_factory=list)
    converged: bool = False

    @property
    def iterations(self) -> int:
        return len(self.distances)

    @property
    def ratios(self) -> List[float]:
        out = [math.nan]
        for prev, cur in zip(self.distances, self.distances[1:]):
            out.append(cur / prev if prev > 0 else math.nan)
        return out

    def rows(self) -> List[Tuple[int, float, float]]:
        return [(k + 1, d, r) for k, (d, r) in enumerate(zip(self.distances, self.ratios))]

    def max_ratio(self) -> float:
        finite = [r for r in self.ratios if math.isfinite(r)]
        return max(finite) if finite else math.nan


def step_count(T: float, dt: float) -> int:
    steps = max(1, int(round(T / dt)))
    if abs(steps * dt - T) > 1e-9 * max(T, dt):
        logger.warning(f"T={T} is not a multiple of dt={dt}; using T={steps * dt}")
    return steps


def xs_distance(a: Trajectory, b: Trajectory, s: float) -> float:
    if not a.compatible_with(b):
        raise GridMismatch("trajectories differ in grid, dt or number of steps")
    d_eta = sobolev_norm_values(a.eta - b.eta, a.grid, s)
    d_eta_t = sobolev_norm_values(a.eta_t - b.eta_t, a.grid, s)
    return float(np.max(d_eta + d_eta_t))


def xs_norm(traj: Trajectory, s: float) -> float:
    norms = sobolev_norm_values(traj.eta, traj.grid, s) + sobolev_norm_values(traj.eta_t, traj.grid, s)
    return float(np.max(norms))


def _ramp_reach(w0: np.ndarray, w1: np.ndarray, delta: float) -> float:
    """Largest r >= 0 with ||w0 + r w1||_inf <= delta."""
    moving = w1 != 0.0
    if not np.any(moving):
        return math.inf
    limits = (delta - np.sign(w1[moving]) * w0[moving]) / np.abs(w1[moving])
    return max(float(np.min(limits)), 0.0)


def _saturation_scale(horizon: float, reach: float) -> float:
    """tau with tau (1 - exp(-horizon / tau)) = reach, for 0 < reach < horizon."""
    def excess(tau: float) -> float:
        return -tau * math.expm1(-horizon / tau) - reach

    return brentq(excess, reach, horizon ** 2 / (horizon - reach), xtol=1e-14, maxiter=200)


def initial_guess(eta0: Field, eta1: Field, cfg: SolverConfig, steps: int, kind: Optional[str] = None) -> Trajectory:
    """v^0 with v(0) = eta0, v_t(0) = eta1.

    "ramp": v(t) = eta0 + t eta1. When the strain of the straight ramp would
    leave [-delta, delta] before the horizon, t is replaced by the saturating
    profile tau (1 - exp(-t / tau)), so v_t = exp(-t / tau) eta1 stays smooth
    and the strain reaches at most delta. "constant": v(t) = eta0, v_t = 0
    after t = 0.
    """
    kind = kind or cfg.initial_guess
    grid, dt = eta0.grid, cfg.dt
    w0 = centered_derivative(eta0.values, grid.dx)
    if np.max(np.abs(w0)) > cfg.delta:
        raise StrainBoundError(
            f"initial strain ||eta0_x||_inf = {np.max(np.abs(w0)):.6g} exceeds delta = {cfg.delta}"
        )

    times = dt * np.arange(steps + 1)
    eta_t = np.zeros((steps + 1, grid.points))
    eta_t[0] = eta1.values
    if kind == "constant":
        eta = np.tile(eta0.values, (steps + 1, 1))
        return Trajectory(grid, dt, eta, eta_t)

    horizon = float(times[-1])
    reach = _ramp_reach(w0, centered_derivative(eta1.values, grid.dx), cfg.delta) * (1.0 - 1e-9)
    if reach >= horizon:
        profile, rate = times, np.ones_like(times)
    elif reach == 0.0:
        logger.info(f"Initial strain already at delta = {cfg.delta}, falling back to the constant guess")
        return initial_guess(eta0, eta1, cfg, steps, "constant")
    else:
        tau = _saturation_scale(horizon, reach)
        logger.info(f"Initial guess ramp saturates with tau={tau:.4g} to keep strain <= {cfg.delta}")
        profile, rate = -tau * np.expm1(-times / tau), np.exp(-times / tau)
    eta = eta0.values[None, :] + profile[:, None] * eta1.values[None, :]
    eta_t = rate[:, None] * eta1.values[None, :]
    return Trajectory(grid, dt, eta, eta_t)


def _linearization(v: Trajectory, model: ConstitutiveModel, cfg: SolverConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Forcing G_v + F_v at every level and g'(v_x) at every half step."""
    dx = v.grid.dx
    strain = centered_derivative(v.eta, dx)
    peak = float(np.max(np.abs(strain)))
    if peak > cfg.delta:
        level = int(np.argmax(np.max(np.abs(strain), axis=1)))
        raise StrainBoundError(
            f"||v_x||_inf = {peak:.6g} at t={level * v.dt:.4g} exceeds delta = {cfg.delta}"
        )
    stress_flux = np.asarray(model.g(forward_difference(v.eta, dx)))
    forcing = flux_divergence(stress_flux, dx) + v.eta_t
    coefficient = np.asarray(model.g_prime(0.5 * (strain[:-1] + strain[1:])))
    return forcing, coefficient


def linearized_solve(v: Trajectory, eta0: Field, eta1: Field, model: ConstitutiveModel, cfg: SolverConfig) -> Trajectory:
    if not (np.array_equal(v.eta[0], eta0.values) and np.array_equal(v.eta_t[0], eta1.values)):
        raise ValueError("linearization trajectory must start from (eta0, eta1)")
    grid, dt = v.grid, v.dt
    forcing, coefficient = _linearization(v, model, cfg)

    eta = np.empty_like(v.eta)
    phi = np.empty_like(v.eta)
    eta[0] = eta0.values
    phi[0] = eta1.values
    for n in range(v.steps):
        op = assemble(Field(grid, coefficient[n]), cfg.nu, cfg.theta_floor)
        phi_new = step(op, Field(grid, phi[n]), Field(grid, forcing[n]), Field(grid, forcing[n + 1]), dt).values
        phi[n + 1] = phi_new
        eta[n + 1] = eta[n] + 0.5 * dt * (phi[n] + phi_new)
    return Trajectory(grid, dt, eta, phi)


def smallness_check(eta0: Field, cfg: SolverConfig, model: Optional[ConstitutiveModel] = None) -> CheckReport:
    """||eta0||_{H^s} <= delta_bar / (2 (1 + T0 K1)); advisory unless strict."""
    if cfg.K1_bound is None and model is None:
        raise ValueError("a model is needed to derive K1 when K1_bound is not configured")
    k1 = cfg.K1_bound if cfg.K1_bound is not None else cfg.k1(model)
    threshold = cfg.delta_bar / (2.0 * (1.0 + cfg.T0 * k1))
    measured = sobolev_norm(eta0, cfg.s)
    c_bar = embedding_constant(cfg.s - 1.0)
    return CheckReport(
        passed=measured <= threshold,
        measured_norm=measured,
        threshold=threshold,
        margin=threshold - measured,
        k1=k1,
        initial_strain=linf_norm(derivative(eta0)),
        embedding_constant=c_bar,
        derived_strain_bound=c_bar * cfg.delta_bar,
        strict=cfg.strict_smallness,
    )


def contraction_estimate(v: Trajectory, v_bar: Trajectory, Kv: Trajectory, Kv_bar: Trajectory, s: float = 3.0) -> float:
    for other in (v_bar, Kv, Kv_bar):
        if not v.compatible_with(other):
            raise GridMismatch("contraction estimate needs trajectories on one grid and time axis")
    denominator = xs_distance(v, v_bar, s)
    if denominator == 0.0:
        raise DegenerateInput("v and v_bar coincide; the contraction ratio is undefined")
    return xs_distance(Kv, Kv_bar, s) / denominator


def picard_iterate(
    eta0: Field,
    eta1: Field,
    model: ConstitutiveModel,
    cfg: SolverConfig,
    T: float,
    initial: Optional[Trajectory] = None,
) -> Tuple[Trajectory, ContractionHistory]:
    cfg.check_against(model)
    steps = step_count(T, cfg.dt)

    report = smallness_check(eta0, cfg, model)
    if not report.passed:
        message = (
            f"smallness condition fails: ||eta0||_H^{cfg.s:g} = {report.measured_norm:.6g} "
            f"> {report.threshold:.6g}"
        )
        if cfg.strict_smallness:
            raise ScenarioError(message)
        logger.warning(f"{message} (advisory)")
    if report.measured_norm > cfg.delta_bar:
        raise StrainBoundError(
            f"||eta0||_H^{cfg.s:g} = {report.measured_norm:.6g} lies outside the ball of radius {cfg.delta_bar}"
        )

    v = initial if initial is not None else initial_guess(eta0, eta1, cfg, steps)
    history = ContractionHistory()
    stalls = 0
    logger.info(
        f"Picard run: {model.kind.value}, T={steps * cfg.dt:.4g}, steps={steps}, "
        f"N={eta0.grid.points}, tol={cfg.fp_tol:.1e}"
    )

    for k in range(1, cfg.max_picard_iters + 1):
        try:
            Kv = linearized_solve(v, eta0, eta1, model, cfg)
        except (StrainBoundError, DomainError, EllipticityError, SingularSystem) as e:
            if k == 1:
                raise
            raise NoContraction(
                f"iterate {k} left the admissible set after {k - 1} iterations: {e.user_message}",
                distances=history.distances,
                original_error=e,
            )
        distance = xs_distance(Kv, v, cfg.s)
        history.distances.append(distance)
        logger.debug(f"Picard iteration {k}: X^s distance {distance:.3e}")
        v = Kv

        if distance <= cfg.fp_tol:
            history.converged = True
            logger.info(
                f"Picard converged in {k} iterations, max contraction ratio {history.max_ratio():.3g}"
            )
            return v, history

        if k >= 2 and distance >= history.distances[-2]:
            stalls += 1
            if stalls >= cfg.no_contraction_patience:
                raise NoContraction(
                    f"X^s distances failed to decrease for {stalls} consecutive iterations "
                    f"(last {distance:.3e}); shorten T",
                    distances=history.distances,
                )
        else:
            stalls = 0

    raise IterationLimitError(
        f"no convergence within {cfg.max_picard_iters} iterations "
        f"(last distance {history.distances[-1]:.3e} > {cfg.fp_tol:.1e})",
        distances=history.distances,
    )


def picard_slabs(
    eta0: Field,
    eta1: Field,
    model: ConstitutiveModel,
    cfg: SolverConfig,
    T: float,
    slab: float,
) -> Tuple[Trajectory, List[ContractionHistory]]:
    """March [0, T] in windows of length slab, restarting from each window's end state."""
    total = step_count(T, cfg.dt)
    per_slab = step_count(slab, cfg.dt)
    eta_blocks, eta_t_blocks, histories = [eta0.values[None, :]], [eta1.values[None, :]], []
    start0, start1 = eta0, eta1
    done = 0
    while done < total:
        count = min(per_slab, total - done)
        traj, history = picard_iterate(start0, start1, model, cfg, count * cfg.dt)
        eta_blocks.append(traj.eta[1:])
        eta_t_blocks.append(traj.eta_t[1:])
        histories.append(history)
        start0, start1 = traj.eta_at(-1), traj.eta_t_at(-1)
        done += count
        logger.info(f"Slab {len(histories)} done: t={done * cfg.dt:.4g} of {total * cfg.dt:.4g}")
    merged = Trajectory(eta0.grid, cfg.dt, np.vstack(eta_blocks), np.vstack(eta_t_blocks))
    return merged, histories


def discover_horizon(
    eta0: Field,
    eta1: Field,
    model: ConstitutiveModel,
    cfg: SolverConfig,
    T: float,
    max_halvings: int = 6,
) -> Tuple[Trajectory, ContractionHistory, float]:
    """Halve T on NoContraction until the iteration contracts; returns the achieved T."""
    horizon = T
    for attempt in range(max_halvings + 1):
        try:
            traj, history = picard_iterate(eta0, eta1, model, cfg, horizon)
            return traj, history, traj.horizon
        except NoContraction as e:
            if attempt == max_halvings or horizon / 2 < cfg.dt:
                raise
            logger.info(f"No contraction at T={horizon:.4g} ({e.user_message}); halving")
            horizon /= 2
    raise NoContraction(f"no contracting horizon found below T={T}")


def fixed_point_residual(traj: Trajectory, model: ConstitutiveModel, cfg: SolverConfig) -> float:
    """Max-norm residual of the discrete update equations with v = eta."""
    grid, dt = traj.grid, traj.dt
    forcing, coefficient = _linearization(traj, model, cfg)
    worst = 0.0
    for n in range(traj.steps):
        op = assemble(Field(grid, coefficient[n]), cfg.nu, cfg.theta_floor)
        phi_old, phi_new = traj.eta_t[n], traj.eta_t[n + 1]
        advanced = step(op, Field(grid, phi_old), Field(grid, forcing[n]), Field(grid, forcing[n + 1]), dt).values
        # shifted-system scale: (I + dt/2 A)(phi_new - advanced)
        gap = phi_new - advanced
        scaled = gap + 0.5 * dt * apply(op, Field(grid, gap)).values
        eta_gap = traj.eta[n + 1] - traj.eta[n] - 0.5 * dt * (phi_old + phi_new)
        worst = max(worst, float(np.max(np.abs(scaled))), float(np.max(np.abs(eta_gap))))
    return worst
