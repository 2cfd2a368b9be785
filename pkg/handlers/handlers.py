# handlers.py - Solver commands: Picard run and oracle run

import logging
import os
from typing import List

import numpy as np
import pydantic
import scipy

from config import VERSION
from analysis.diagnostics import DiagnosticsReport, oracle_diagnostics, run_diagnostics
from analysis.transforms import (
    eta_to_displacement,
    omega_history,
    omega_rate_history,
    relaxation_residual,
    sigma_history,
    stress_history,
    strain_recovery,
)
from handlers.scenario import Scenario, build_scenario, load_scenario
from solvers.fixed_point import (
    ContractionHistory,
    discover_horizon,
    fixed_point_residual,
    picard_iterate,
    picard_slabs,
    smallness_check,
)
from solvers.oracle import oracle_run
from solvers.trajectory import FieldSeries
from utils.common_utils import EXIT_DIAGNOSTICS_FAILED, EXIT_OK, handle_errors
from utils.trajectory_io import (
    ensure_directory,
    write_json,
    write_rows_csv,
    write_series_csv,
    write_trajectory,
)

logger = logging.getLogger(__name__)


def versions() -> dict:
    return {
        "workbench": VERSION,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pydantic": pydantic.VERSION,
    }


def write_manifest(out_dir: str, command: str, scenario: Scenario, outputs: List[str], **extra) -> str:
    payload = {
        "command": command,
        "scenario": scenario.model_dump(mode="json"),
        "versions": versions(),
        "outputs": sorted(os.path.basename(p) for p in outputs),
    }
    payload.update(extra)
    return write_json(os.path.join(out_dir, "manifest.json"), payload)


def _write_fields(out_dir: str, series: List[FieldSeries], stride: int) -> List[str]:
    written = []
    for item in series:
        written.append(write_series_csv(os.path.join(out_dir, f"{item.name}.csv"), item, stride))
    return written


def _write_report(out_dir: str, report: DiagnosticsReport) -> List[str]:
    return [
        write_json(os.path.join(out_dir, "diagnostics.json"), report.to_dict()),
        write_rows_csv(os.path.join(out_dir, "diagnostics.csv"), ("t", "quantity", "value"), report.rows()),
    ]


def _merge_histories(histories: List[ContractionHistory]) -> ContractionHistory:
    merged = ContractionHistory(converged=all(h.converged for h in histories))
    for h in histories:
        merged.distances.extend(h.distances)
    return merged


@handle_errors
def cmd_run(scenario_path: str, out_dir: str, strict_smallness: bool = False) -> int:
    scenario = load_scenario(scenario_path)
    model, _, data, cfg = build_scenario(scenario, os.path.dirname(scenario_path), strict_smallness)
    ensure_directory(out_dir)
    nu = cfg.nu

    check = smallness_check(data.eta0, cfg, model)
    contraction_rows = []
    if scenario.time.slab:
        traj, histories = picard_slabs(data.eta0, data.eta1, model, cfg, scenario.time.T, scenario.time.slab)
        history = _merge_histories(histories)
        for index, h in enumerate(histories, start=1):
            contraction_rows.extend((index, k, d, r) for k, d, r in h.rows())
    else:
        if scenario.time.discover:
            traj, history, _ = discover_horizon(data.eta0, data.eta1, model, cfg, scenario.time.T)
        else:
            traj, history = picard_iterate(data.eta0, data.eta1, model, cfg, scenario.time.T)
        contraction_rows.extend((1, k, d, r) for k, d, r in history.rows())
    achieved = traj.horizon

    report = run_diagnostics(traj, model, cfg, history)
    omega = omega_history(traj)
    omega_t = omega_rate_history(traj)
    u = eta_to_displacement(traj, data.u0, nu)
    ux = strain_recovery(omega, data.ux0, nu)
    residual = fixed_point_residual(traj, model, cfg)

    stride = scenario.output.csv_stride
    outputs = [
        write_trajectory(os.path.join(out_dir, "omega.slvt"), omega),
        write_trajectory(os.path.join(out_dir, "eta.slvt"), traj.as_series()),
    ]
    outputs += _write_fields(
        out_dir,
        [traj.as_series(), omega, stress_history(omega, model), sigma_history(omega, model, nu, omega_t), u, ux],
        stride,
    )
    outputs += _write_report(out_dir, report)
    outputs.append(write_rows_csv(
        os.path.join(out_dir, "contraction.csv"), ("slab", "iteration", "distance", "ratio"), contraction_rows
    ))
    outputs.append(write_manifest(
        out_dir,
        "run",
        scenario,
        outputs,
        smallness=check.to_dict(),
        achieved_T=achieved,
        iterations=history.iterations,
        fixed_point_residual=residual,
        displacement_residual=relaxation_residual(traj, u, nu),
        verdicts=report.to_dict()["verdicts"],
    ))
    logger.info(f"Run '{scenario.name}' finished: T={achieved:.4g}, outputs in {out_dir}")
    return EXIT_OK if report.passed else EXIT_DIAGNOSTICS_FAILED


@handle_errors
def cmd_oracle(scenario_path: str, out_dir: str, strict_smallness: bool = False) -> int:
    scenario = load_scenario(scenario_path)
    model, _, data, cfg = build_scenario(scenario, os.path.dirname(scenario_path), strict_smallness)
    ensure_directory(out_dir)

    result = oracle_run(data.omega0, data.omega1, model, cfg.nu, cfg.dt, scenario.time.T, cfg.mean_zero_tol)
    report = oracle_diagnostics(result.omega, result.zeta, model, cfg)

    stride = scenario.output.csv_stride
    outputs = [write_trajectory(os.path.join(out_dir, "omega.slvt"), result.omega)]
    outputs += _write_fields(
        out_dir,
        [result.omega, result.zeta, stress_history(result.omega, model),
         sigma_history(result.omega, model, cfg.nu, result.zeta)],
        stride,
    )
    outputs += _write_report(out_dir, report)
    outputs.append(write_manifest(
        out_dir,
        "oracle",
        scenario,
        outputs,
        achieved_T=result.omega.steps * result.omega.dt,
        verdicts=report.to_dict()["verdicts"],
    ))
    logger.info(f"Oracle run '{scenario.name}' finished, outputs in {out_dir}")
    return EXIT_OK if report.passed else EXIT_DIAGNOSTICS_FAILED


def register_handlers(subparsers) -> None:
    for name, func, text in (
        ("run", cmd_run, "Picard fixed-point solve with diagnostics and displacement recovery"),
        ("oracle", cmd_oracle, "independent direct solve of the strain-sum equation"),
    ):
        parser = subparsers.add_parser(name, help=text)
        parser.add_argument("--scenario", nargs="+", required=True, help="scenario JSON file(s)")
        parser.set_defaults(handler=func, batch=True)
    logger.debug("Solver handlers registered")


__all__ = ["cmd_run", "cmd_oracle", "register_handlers", "write_manifest", "versions"]
