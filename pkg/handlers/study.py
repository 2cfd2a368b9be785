# study.py - Trajectory comparison and time-step refinement

import logging
import os
from typing import Optional

from analysis.convergence import refinement_study
from handlers.handlers import write_manifest
from handlers.scenario import build_scenario, load_scenario
from numerics.grid import Field
from solvers.fixed_point import picard_iterate
from solvers.oracle import oracle_run
from utils.common_utils import EXIT_DIAGNOSTICS_FAILED, EXIT_OK, handle_errors
from utils.trajectory_io import compare_series, ensure_directory, read_trajectory, write_json, write_rows_csv

logger = logging.getLogger(__name__)

DEFAULT_COMPARE_TOL = 1e-4


@handle_errors
def cmd_compare(first_path: str, second_path: str, out_dir: Optional[str] = None,
                tol: float = DEFAULT_COMPARE_TOL, s: float = 3.0) -> int:
    a, b = read_trajectory(first_path), read_trajectory(second_path)
    result = compare_series(a, b, s)
    result.update({"first": first_path, "second": second_path, "tolerance": tol, "within_tolerance": result["max_norm"] <= tol})
    print(f"max-norm {result['max_norm']:.6e}  H^{s:g} {result['sobolev_norm']:.6e}  tolerance {tol:.1e}")
    if out_dir:
        write_json(os.path.join(ensure_directory(out_dir), "compare.json"), result)
    if not result["within_tolerance"]:
        logger.warning(f"Trajectories differ by {result['max_norm']:.3e} > {tol:.1e}")
        return EXIT_DIAGNOSTICS_FAILED
    return EXIT_OK


@handle_errors
def cmd_convergence(scenario_path: str, out_dir: str, levels: int = 3, solver: str = "picard") -> int:
    scenario = load_scenario(scenario_path)
    model, _, data, cfg = build_scenario(scenario, os.path.dirname(scenario_path))
    ensure_directory(out_dir)
    T = scenario.time.T

    def solve_picard(dt: float) -> Field:
        traj, _ = picard_iterate(data.eta0, data.eta1, model, cfg.model_copy(update={"dt": dt}), T)
        return traj.eta_at(-1)

    def solve_oracle(dt: float) -> Field:
        return oracle_run(data.omega0, data.omega1, model, cfg.nu, dt, T, cfg.mean_zero_tol).omega.final()

    study = refinement_study(solve_oracle if solver == "oracle" else solve_picard, cfg.dt, levels)
    for dt, err, order in study.rows():
        print(f"dt={dt:.4e}  error={err:.6e}  order={order:.3f}")
    print(f"fitted order {study.fitted:.3f}")

    outputs = [
        write_rows_csv(os.path.join(out_dir, "convergence.csv"), ("dt", "error", "order"), study.rows()),
        write_json(os.path.join(out_dir, "convergence.json"), {"solver": solver, **study.to_dict()}),
    ]
    write_manifest(out_dir, "convergence", scenario, outputs, solver=solver, levels=levels, fitted_order=study.fitted)
    return EXIT_OK


def register_study_handlers(subparsers) -> None:
    parser = subparsers.add_parser("compare", help="discrepancy between two trajectory files")
    parser.add_argument("first", help="trajectory file (.slvt)")
    parser.add_argument("second", help="trajectory file (.slvt)")
    parser.add_argument("--tol", type=float, default=DEFAULT_COMPARE_TOL, help="max-norm tolerance")
    parser.set_defaults(handler=cmd_compare, batch=False)

    parser = subparsers.add_parser("convergence", help="time-step refinement study")
    parser.add_argument("--scenario", nargs="+", required=True, help="scenario JSON file(s)")
    parser.add_argument("--levels", type=int, default=3, help="refinement levels, at least 3")
    parser.add_argument("--solver", choices=("picard", "oracle"), default="picard")
    parser.set_defaults(handler=cmd_convergence, batch=True)
