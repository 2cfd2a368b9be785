import numpy as np
import pytest

from analysis.convergence import refinement_study
from numerics.grid import Field, GridSpec, derivative, integral, linf_norm
from solvers.exact import damped_mode_amplitude, exact_mode_series, mode_shape, mode_wavenumber
from solvers.oracle import OracleState, courant_limit, linear_energy, oracle_run, oracle_step
from utils.errors import CourantViolation, DomainError, MeanZeroViolation


@pytest.fixture(scope="module")
def oracle_grid():
    return GridSpec(20.0, 128)


def gaussian_strain(grid, amplitude=0.05):
    return derivative(grid.sample(lambda x: amplitude * np.exp(-x ** 2)))


def test_zero_state_is_stationary(small_grid, rational):
    state = OracleState(small_grid.zeros(), small_grid.zeros())
    nxt = oracle_step(state, rational, 1.0, 0.01)
    assert linf_norm(nxt.omega) == 0.0 and linf_norm(nxt.zeta) == 0.0
    assert nxt.t == pytest.approx(0.01)


def test_zero_data_gives_zero_run(small_grid, rational):
    result = oracle_run(small_grid.zeros(), small_grid.zeros(), rational, 1.0, 0.01, 0.1)
    assert result.omega.steps == 10
    assert np.all(result.omega.values == 0.0) and np.all(result.zeta.values == 0.0)


def test_courant_violation(small_grid, linear):
    state = OracleState(gaussian_strain(small_grid), small_grid.zeros())
    assert courant_limit(linear, state.omega) == pytest.approx(small_grid.dx)
    with pytest.raises(CourantViolation):
        oracle_step(state, linear, 1.0, 1.5 * small_grid.dx)


def test_strain_limit_is_domain_error(small_grid, rational):
    omega = Field(small_grid, np.where(np.abs(small_grid.nodes) < 1.0, 1.2, 0.0))
    with pytest.raises(DomainError):
        oracle_step(OracleState(omega, small_grid.zeros()), rational, 1.0, 0.01)


def test_mean_zero_gate(small_grid, rational):
    bump = small_grid.sample(lambda x: 0.05 * np.exp(-x ** 2))
    with pytest.raises(MeanZeroViolation):
        oracle_run(bump, small_grid.zeros(), rational, 1.0, 0.01, 0.1)


def test_damped_mode_amplitude_solves_ode():
    xi, nu = 0.8, 1.0
    t = np.linspace(0.0, 3.0, 3001)
    amp, rate = damped_mode_amplitude(t, xi, nu, a0=1.0, a1=0.3)
    assert amp[0] == pytest.approx(1.0) and rate[0] == pytest.approx(0.3)
    accel = np.gradient(rate, t, edge_order=2)
    residual = accel + nu * xi ** 2 * rate + xi ** 2 * amp
    assert np.max(np.abs(residual[1:-1])) <= 1e-5
    # strongly damped branch: real roots
    amp_over, _ = damped_mode_amplitude(t, 3.0, 1.0)
    assert np.all(np.diff(amp_over) < 0) and np.all(amp_over > 0)


def test_linear_mode_tracks_exact_solution(coarse_grid, linear):
    dt, T, amplitude = 1e-4, 1.0, 0.1
    omega0 = mode_shape(coarse_grid, 2) * amplitude
    result = oracle_run(omega0, coarse_grid.zeros(), linear, 1.0, dt, T)
    exact = exact_mode_series(coarse_grid, 2, amplitude, 1.0, dt, result.omega.steps).final()
    error = linf_norm(result.omega.final() - exact)
    assert error <= 1e-3 * linf_norm(exact)
    assert mode_wavenumber(coarse_grid, 2) == pytest.approx(2 * np.pi / coarse_grid.span)


def test_second_order_in_time(oracle_grid, rational):
    omega0 = gaussian_strain(oracle_grid)
    zero = oracle_grid.zeros()

    def final(dt):
        return oracle_run(omega0, zero, rational, 1.0, dt, 0.5).omega.final()

    steps = [0.02, 0.01, 0.005]
    reference = final(steps[-1] / 8)
    errors = [linf_norm(final(dt) - reference) for dt in steps]
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert np.all(np.abs(orders - 2.0) <= 0.2)


def test_conserved_integrals(oracle_grid, rational):
    omega0 = gaussian_strain(oracle_grid)
    zeta0 = gaussian_strain(oracle_grid, 0.02)
    result = oracle_run(omega0, zeta0, rational, 1.0, 0.01, 1.0)
    for series, start in ((result.omega, omega0), (result.zeta, zeta0)):
        drift = max(abs(integral(series.level(n))) for n in range(series.steps + 1))
        assert drift <= 1e-8 * (1 + linf_norm(start))


def test_linear_energy_is_dissipated(small_grid, linear):
    state = OracleState(gaussian_strain(small_grid, 0.1), small_grid.zeros())
    energies = [linear_energy(state)]
    for _ in range(60):
        state = oracle_step(state, linear, 1.0, 0.05)
        energies.append(linear_energy(state))
    energies = np.array(energies)
    assert np.all(np.diff(energies) <= 1e-14 * energies[0])
    assert energies[-1] < energies[0]


def test_oracle_self_convergence_on_linear_mode(linear):
    grid = GridSpec(20.0, 256)
    omega0 = mode_shape(grid, 2) * 0.1
    zero = grid.zeros()

    def solve(dt):
        return oracle_run(omega0, zero, linear, 1.0, dt, 1.0).omega.final()

    study = refinement_study(solve, 0.1, 4)
    assert study.orders == pytest.approx([2.0, 2.0, 2.0], abs=0.2)
