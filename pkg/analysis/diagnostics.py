"""
Per-level monitors of a computed trajectory.

Every monitored quantity is a time series with one sample per level; a check
passes only when every sample meets its bound. Nothing here raises on a failed
check: failures are recorded as verdicts and logged.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import CONSERVATION_TOL
from models import ConstitutiveModel, g_prime_range
from numerics.grid import centered_derivative, integral_values, sobolev_norm_values
from solvers.fixed_point import ContractionHistory
from solvers.settings import SolverConfig
from solvers.trajectory import FieldSeries, Trajectory
from utils.errors import DomainError

logger = logging.getLogger(__name__)

SERIES = (
    "conserved_omega",
    "conserved_omega_t",
    "conserved_phi",
    "ellipticity_floor",
    "strain_linf",
    "sobolev_eta",
    "sobolev_eta_t",
)


@dataclass
class DiagnosticsReport:
    times: np.ndarray
    series: Dict[str, np.ndarray]
    bounds: Dict[str, float]
    verdicts: Dict[str, bool]
    contraction_ratios: List[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def failures(self) -> List[str]:
        return [name for name, ok in self.verdicts.items() if not ok]

    def extrema(self) -> Dict[str, Tuple[float, float]]:
        return {name: (float(np.nanmin(v)), float(np.nanmax(v))) for name, v in self.series.items()}

    def drift(self) -> Dict[str, float]:
        out = {}
        for name in ("conserved_omega", "conserved_omega_t"):
            if name in self.series:
                out[name] = float(np.max(np.abs(self.series[name])))
        if "conserved_phi" in self.series:
            phi = self.series["conserved_phi"]
            out["conserved_phi"] = float(np.max(np.abs(phi - phi[0])))
        return out

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "verdicts": {k: ("PASS" if v else "FAIL") for k, v in self.verdicts.items()},
            "bounds": self.bounds,
            "extrema": {k: {"min": lo, "max": hi} for k, (lo, hi) in self.extrema().items()},
            "drift": self.drift(),
            "contraction_ratios": [None if not np.isfinite(r) else r for r in self.contraction_ratios],
        }

    def rows(self) -> List[Tuple[float, str, float]]:
        """Long-format (t, quantity, value) rows for CSV export."""
        out = []
        for name in (n for n in SERIES if n in self.series):
            for t, value in zip(self.times, self.series[name]):
                out.append((float(t), name, float(value)))
        return out


def _ellipticity_series(strain: np.ndarray, model: ConstitutiveModel) -> np.ndarray:
    floors = np.empty(strain.shape[0])
    for n, level in enumerate(strain):
        try:
            floors[n] = float(np.min(np.asarray(model.g_prime(level))))
        except DomainError as e:
            logger.warning(f"Level {n} is outside the admissible strain-sum interval: {e.user_message}")
            floors[n] = np.nan
    return floors


def run_diagnostics(
    traj: Trajectory,
    model: ConstitutiveModel,
    cfg: SolverConfig,
    history: Optional[ContractionHistory] = None,
) -> DiagnosticsReport:
    grid, dx = traj.grid, traj.grid.dx
    omega = centered_derivative(traj.eta, dx)
    omega_t = centered_derivative(traj.eta_t, dx)
    strain = np.max(np.abs(omega), axis=1)

    series = {
        "conserved_omega": integral_values(omega, dx),
        "conserved_omega_t": integral_values(omega_t, dx),
        "conserved_phi": integral_values(traj.eta_t, dx),
        "ellipticity_floor": _ellipticity_series(omega, model),
        "strain_linf": strain,
        "sobolev_eta": sobolev_norm_values(traj.eta, grid, cfg.s),
        "sobolev_eta_t": sobolev_norm_values(traj.eta_t, grid, cfg.s),
    }

    omega_tol = CONSERVATION_TOL * (1.0 + float(np.max(np.abs(omega[0]))))
    omega_t_tol = CONSERVATION_TOL * (1.0 + float(np.max(np.abs(omega_t[0]))))
    phi_tol = CONSERVATION_TOL * (1.0 + float(np.max(np.abs(traj.eta_t[0]))))
    floor_bound = g_prime_range(model, cfg.delta)[0]

    bounds = {
        "conserved_omega": omega_tol,
        "conserved_omega_t": omega_t_tol,
        "conserved_phi": phi_tol,
        "ellipticity_floor": cfg.theta_floor,
        "strain_linf": cfg.delta,
        "sobolev_eta": cfg.delta_bar,
        "sobolev_eta_t": cfg.M,
        "cascade_floor": floor_bound,
    }

    floors = series["ellipticity_floor"]
    strain_ok = bool(np.all(strain <= cfg.delta))
    verdicts = {
        "conserved_omega": bool(np.all(np.abs(series["conserved_omega"]) <= omega_tol)),
        "conserved_omega_t": bool(np.all(np.abs(series["conserved_omega_t"]) <= omega_t_tol)),
        "conserved_phi": bool(np.all(np.abs(series["conserved_phi"] - series["conserved_phi"][0]) <= phi_tol)),
        "ellipticity_floor": bool(np.all(floors >= cfg.theta_floor)),
        "strain_linf": strain_ok,
        "sobolev_eta": bool(np.all(series["sobolev_eta"] <= cfg.delta_bar)),
        "sobolev_eta_t": bool(np.all(series["sobolev_eta_t"] <= cfg.M)),
        # strain within delta forces g' >= its minimum over [-delta, delta]
        "cascade": (not strain_ok) or bool(np.all(floors >= floor_bound * (1.0 - 1e-9))),
    }

    ratios = []
    if history is not None:
        ratios = history.ratios
        verdicts["contraction"] = history.converged

    report = DiagnosticsReport(traj.times, series, bounds, verdicts, ratios)
    if report.passed:
        logger.info(f"Diagnostics PASS on {traj.steps + 1} levels")
    else:
        logger.warning(f"Diagnostics FAIL: {', '.join(report.failures())}")
    return report


def oracle_diagnostics(omega: FieldSeries, zeta: FieldSeries, model: ConstitutiveModel, cfg: SolverConfig) -> DiagnosticsReport:
    """Conserved integrals and strain monitors for a run that evolves omega directly."""
    dx = omega.grid.dx
    strain = np.max(np.abs(omega.values), axis=1)
    series = {
        "conserved_omega": integral_values(omega.values, dx),
        "conserved_omega_t": integral_values(zeta.values, dx),
        "ellipticity_floor": _ellipticity_series(omega.values, model),
        "strain_linf": strain,
    }
    omega_tol = CONSERVATION_TOL * (1.0 + float(np.max(np.abs(omega.values[0]))))
    zeta_tol = CONSERVATION_TOL * (1.0 + float(np.max(np.abs(zeta.values[0]))))
    bounds = {
        "conserved_omega": omega_tol,
        "conserved_omega_t": zeta_tol,
        "ellipticity_floor": cfg.theta_floor,
        "strain_linf": cfg.delta,
    }
    verdicts = {
        "conserved_omega": bool(np.all(np.abs(series["conserved_omega"]) <= omega_tol)),
        "conserved_omega_t": bool(np.all(np.abs(series["conserved_omega_t"]) <= zeta_tol)),
        "ellipticity_floor": bool(np.all(series["ellipticity_floor"] >= cfg.theta_floor)),
        "strain_linf": bool(np.all(strain <= cfg.delta)),
    }
    report = DiagnosticsReport(omega.times, series, bounds, verdicts)
    if not report.passed:
        logger.warning(f"Oracle diagnostics FAIL: {', '.join(report.failures())}")
    return report
