import math

import numpy as np
import pytest

from analysis.convergence import refinement_study
from numerics.grid import GridSpec, sobolev_norm
from solvers.exact import exact_mode_trajectory, mode_shape
from solvers.fixed_point import (
    _ramp_reach,
    contraction_estimate,
    discover_horizon,
    fixed_point_residual,
    initial_guess,
    linearized_solve,
    picard_iterate,
    picard_slabs,
    smallness_check,
    step_count,
    xs_distance,
    xs_norm,
)
from solvers.settings import SolverConfig
from solvers.trajectory import Trajectory
from utils.errors import (
    DegenerateInput,
    GridMismatch,
    NoContraction,
    ScenarioError,
    StrainBoundError,
)


@pytest.fixture(scope="module")
def mode_grid():
    return GridSpec(20.0, 256)


@pytest.fixture(scope="module")
def linear_cfg():
    return SolverConfig(dt=1e-3, fp_tol=1e-10)


def test_config_validation(rational):
    with pytest.raises(ValueError):
        SolverConfig(s=2.5)
    with pytest.raises(ValueError):
        SolverConfig(nu=0.0)
    with pytest.raises(ScenarioError):
        SolverConfig(delta=1.0).check_against(rational)
    assert SolverConfig().k1(rational) == pytest.approx(0.75 ** -1.5, rel=1e-10)
    assert SolverConfig(K1_bound=3.0).k1(rational) == 3.0


def test_zero_data_is_zero_fixed_point(small_grid, rational):
    cfg = SolverConfig(dt=0.01)
    zero = small_grid.zeros()
    traj, history = picard_iterate(zero, zero, rational, cfg, 0.2)
    assert history.converged and history.iterations == 1
    assert np.all(traj.eta == 0.0) and np.all(traj.eta_t == 0.0)


def test_initial_conditions_preserved(small_grid, rational):
    cfg = SolverConfig(dt=0.01)
    eta0 = small_grid.sample(lambda x: 0.05 * np.exp(-x ** 2))
    eta1 = small_grid.sample(lambda x: 0.02 * x * np.exp(-x ** 2))
    v = initial_guess(eta0, eta1, cfg, 20)
    out = linearized_solve(v, eta0, eta1, rational, cfg)
    np.testing.assert_array_equal(out.eta[0], eta0.values)
    np.testing.assert_array_equal(out.eta_t[0], eta1.values)
    np.testing.assert_array_equal(v.eta_t[-1], eta1.values)


def test_initial_guess_saturates_ramp_within_strain_bound(small_grid):
    cfg = SolverConfig(dt=0.01, delta=0.5)
    eta0 = small_grid.zeros()
    eta1 = small_grid.sample(lambda x: np.exp(-x ** 2))
    v = initial_guess(eta0, eta1, cfg, 100)
    strain = np.max(np.abs(np.gradient(v.eta, small_grid.dx, axis=1, edge_order=2)), axis=1)
    assert np.all(strain <= 0.5)
    assert strain[-1] >= 0.49
    np.testing.assert_array_equal(v.eta_t[0], eta1.values)
    peak = v.eta_t[:, small_grid.points // 2]
    assert np.all(np.diff(peak) < 0) and peak[-1] > 0
    assert np.max(np.abs(np.diff(v.eta_t, axis=0))) <= 0.05
    velocity = np.gradient(v.eta, cfg.dt, axis=0, edge_order=2)
    assert np.max(np.abs(velocity - v.eta_t)) <= 1e-3


def test_ramp_reach():
    w0 = np.array([0.2, -0.1, 0.0])
    w1 = np.array([1.0, -2.0, 0.0])
    assert _ramp_reach(w0, w1, 0.5) == pytest.approx(0.2)
    assert _ramp_reach(w0, np.zeros(3), 0.5) == math.inf
    assert _ramp_reach(np.array([0.5]), np.array([1.0]), 0.5) == 0.0


def test_linearized_solve_rejects_large_strain(small_grid, rational):
    cfg = SolverConfig(dt=0.01, delta=0.1)
    eta0 = small_grid.sample(lambda x: 0.3 * np.exp(-x ** 2))
    steps = 5
    v = Trajectory(small_grid, cfg.dt, np.tile(eta0.values, (steps + 1, 1)), np.zeros((steps + 1, small_grid.points)))
    with pytest.raises(StrainBoundError):
        linearized_solve(v, eta0, small_grid.zeros(), rational, cfg)


def test_linearized_solve_around_exact_mode(mode_grid, linear, linear_cfg):
    exact = exact_mode_trajectory(mode_grid, 1, 0.1, 1.0, linear_cfg.dt, 1000)
    out = linearized_solve(exact, exact.eta_at(0), exact.eta_t_at(0), linear, linear_cfg)
    scale = np.max(np.abs(exact.eta[-1]))
    assert np.max(np.abs(out.eta[-1] - exact.eta[-1])) <= 1e-4 * scale


def test_picard_matches_exact_mode(mode_grid, linear, linear_cfg):
    exact = exact_mode_trajectory(mode_grid, 1, 0.1, 1.0, linear_cfg.dt, 1000)
    traj, history = picard_iterate(exact.eta_at(0), exact.eta_t_at(0), linear, linear_cfg, 1.0)
    assert history.converged
    assert history.max_ratio() < 1.0
    scale = np.max(np.abs(exact.eta[-1]))
    assert np.max(np.abs(traj.eta[-1] - exact.eta[-1])) <= 1e-4 * scale
    assert fixed_point_residual(traj, linear, linear_cfg) <= 10 * linear_cfg.fp_tol


def test_initial_guess_independence(small_grid, rational):
    cfg = SolverConfig(dt=0.01, fp_tol=1e-11)
    eta0 = small_grid.sample(lambda x: 0.05 * np.exp(-x ** 2))
    eta1 = small_grid.sample(lambda x: 0.02 * x * np.exp(-x ** 2))
    ramp, _ = picard_iterate(eta0, eta1, rational, cfg, 0.5)
    flat, _ = picard_iterate(eta0, eta1, rational, cfg.model_copy(update={"initial_guess": "constant"}), 0.5)
    assert xs_distance(ramp, flat, cfg.s) <= 2 * 10 * cfg.fp_tol


def test_geometric_tail(small_grid, rational):
    cfg = SolverConfig(dt=0.01, fp_tol=1e-11)
    eta0 = small_grid.sample(lambda x: 0.05 * np.exp(-x ** 2))
    _, history = picard_iterate(eta0, small_grid.zeros(), rational, cfg, 0.5)
    tail = [d for d in history.distances if d <= 10 * cfg.fp_tol]
    assert all(b < a for a, b in zip(tail, tail[1:]))


def test_smallness_check_arithmetic(small_grid):
    cfg = SolverConfig(delta_bar=1.0, T0=1.0, K1_bound=1.0)
    zero = smallness_check(small_grid.zeros(), cfg)
    assert zero.passed and zero.measured_norm == 0.0 and zero.threshold == 0.25

    profile = small_grid.sample(lambda x: np.exp(-x ** 2))
    f = profile * (0.3 / sobolev_norm(profile, 3.0))
    report = smallness_check(f, cfg)
    assert not report.passed
    assert report.margin == pytest.approx(-0.05, abs=1e-12)
    assert report.embedding_constant == pytest.approx(0.5)


def test_strict_smallness_raises(small_grid, rational):
    cfg = SolverConfig(dt=0.01, delta_bar=0.1, strict_smallness=True)
    eta0 = small_grid.sample(lambda x: 0.05 * np.exp(-x ** 2))
    with pytest.raises(ScenarioError):
        picard_iterate(eta0, small_grid.zeros(), rational, cfg, 0.1)


def test_contraction_estimate_edge_cases(small_grid):
    steps = 4
    a = Trajectory(small_grid, 0.1, np.zeros((steps + 1, 64)), np.zeros((steps + 1, 64)))
    b = Trajectory(small_grid, 0.1, np.ones((steps + 1, 64)) * 1e-3, np.zeros((steps + 1, 64)))
    with pytest.raises(DegenerateInput):
        contraction_estimate(a, a, a, a)
    assert contraction_estimate(a, b, a, a) == 0.0
    other = Trajectory(small_grid, 0.1, np.zeros((3, 64)), np.zeros((3, 64)))
    with pytest.raises(GridMismatch):
        contraction_estimate(a, b, other, a)


def test_contraction_ratio_grows_with_horizon(mode_grid, linear):
    cfg = SolverConfig(dt=0.01)
    shape = mode_shape(mode_grid, 3).values

    def pair(T):
        steps = step_count(T, cfg.dt)
        t = cfg.dt * np.arange(steps + 1)
        base = 0.05 * np.outer(np.ones_like(t), shape)
        v = Trajectory(mode_grid, cfg.dt, base, np.zeros_like(base))
        bump = 0.01 * np.outer(t ** 2, shape)
        v_bar = Trajectory(mode_grid, cfg.dt, base + bump, 0.02 * np.outer(t, shape))
        eta0, eta1 = v.eta_at(0), v.eta_t_at(0)
        Kv = linearized_solve(v, eta0, eta1, linear, cfg)
        Kv_bar = linearized_solve(v_bar, eta0, eta1, linear, cfg)
        return contraction_estimate(v, v_bar, Kv, Kv_bar, cfg.s)

    short, long = pair(0.2), pair(4.0)
    assert short < 1.0
    assert long > short


def test_long_horizon_does_not_contract(rational):
    grid = GridSpec(20.0, 256)
    cfg = SolverConfig(dt=5e-3, max_picard_iters=40)
    eta0 = grid.sample(lambda x: 0.05 * np.exp(-x ** 2))
    with pytest.raises(NoContraction) as info:
        picard_iterate(eta0, grid.zeros(), rational, cfg, 10.0)
    assert len(info.value.distances) >= 1


def test_xs_norm_of_static_trajectory(small_grid):
    eta0 = small_grid.sample(lambda x: np.exp(-x ** 2))
    traj = Trajectory(small_grid, 0.1, np.tile(eta0.values, (3, 1)), np.zeros((3, 64)))
    assert xs_norm(traj, 3.0) == pytest.approx(sobolev_norm(eta0, 3.0), rel=1e-12)


def test_slabs_match_single_window(small_grid, rational):
    cfg = SolverConfig(dt=0.01, fp_tol=1e-12)
    eta0 = small_grid.sample(lambda x: 0.05 * np.exp(-x ** 2))
    whole, _ = picard_iterate(eta0, small_grid.zeros(), rational, cfg, 0.4)
    slabs, histories = picard_slabs(eta0, small_grid.zeros(), rational, cfg, 0.4, 0.2)
    assert len(histories) == 2 and slabs.steps == whole.steps
    np.testing.assert_allclose(slabs.eta, whole.eta, atol=1e-10)


def test_discover_horizon_halves(rational):
    grid = GridSpec(20.0, 128)
    cfg = SolverConfig(dt=0.02, max_picard_iters=30)
    eta0 = grid.sample(lambda x: 0.05 * np.exp(-x ** 2))
    traj, history, achieved = discover_horizon(eta0, grid.zeros(), rational, cfg, 16.0)
    assert history.converged
    assert achieved < 16.0
    assert math.isclose(achieved, traj.horizon)


def test_picard_self_convergence_is_second_order(mode_grid, linear):
    eta0 = mode_shape(mode_grid, 2) * 0.1
    eta1 = mode_grid.zeros()

    def solve(dt):
        cfg = SolverConfig(dt=dt, delta_bar=20.0, M=50.0)
        traj, history = picard_iterate(eta0, eta1, linear, cfg, 1.0)
        assert history.converged
        return traj.eta_at(-1)

    study = refinement_study(solve, 0.1, 4)
    assert study.steps == pytest.approx([0.1, 0.05, 0.025, 0.0125])
    assert study.orders == pytest.approx([2.0, 2.0, 2.0], abs=0.2)
