"""
JSON scenario files.

A scenario names a constitutive model, an initial-data pair given as stress
(S0, S1), strain-sum (omega0, omega1) or potential (eta0, eta1), the grid, the
time window and every solver bound. `python workbench.py schema` prints the
JSON schema of this format.
"""

import logging
import os
from typing import Annotated, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from config import DEFAULT_HALF_LENGTH, DEFAULT_POINTS, MODEL_IDENTIFIERS
from models import ConstitutiveModel, get_model
from numerics.grid import Field as GridField
from numerics.grid import GridSpec, check_decay
from analysis.transforms import ScenarioData
from solvers.settings import SolverConfig
from utils.errors import ScenarioError

logger = logging.getLogger(__name__)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GaussianData(_Strict):
    family: Literal["gaussian"]
    amplitude: float
    width: float = Field(1.0, gt=0)
    center: float = 0.0

    def sample(self, x: np.ndarray) -> np.ndarray:
        return self.amplitude * np.exp(-(((x - self.center) / self.width) ** 2))


class DGaussianData(_Strict):
    """x-derivative of a Gaussian; has zero mean."""

    family: Literal["dgaussian"]
    amplitude: float
    width: float = Field(1.0, gt=0)
    center: float = 0.0

    def sample(self, x: np.ndarray) -> np.ndarray:
        r = (x - self.center) / self.width
        return -2.0 * self.amplitude * r / self.width * np.exp(-r ** 2)


class ModeData(_Strict):
    """sin(k pi (x - x_0) / (x_{N-1} - x_0)); zero at both boundary nodes."""

    family: Literal["mode"]
    k: int = Field(1, ge=1)
    amplitude: float = 1.0

    def sample(self, x: np.ndarray) -> np.ndarray:
        span = x[-1] - x[0]
        return self.amplitude * np.sin(self.k * np.pi * (x - x[0]) / span)


class RandomData(_Strict):
    """Gaussian envelope times a trigonometric polynomial with seeded coefficients."""

    family: Literal["random"]
    amplitude: float
    width: float = Field(1.0, gt=0)
    terms: int = Field(4, ge=1)

    def sample(self, x: np.ndarray, seed: int = 0) -> np.ndarray:
        rng = np.random.default_rng(seed)
        coeffs = rng.standard_normal((self.terms, 2)) / np.arange(1, self.terms + 1)[:, None] ** 2
        r = x / self.width
        poly = sum(a * np.cos(k * r) + b * np.sin(k * r) for k, (a, b) in enumerate(coeffs))
        profile = np.exp(-r ** 2) * poly
        peak = np.max(np.abs(profile))
        return self.amplitude * profile / peak if peak > 0 else profile


class ZeroData(_Strict):
    family: Literal["zero"]

    def sample(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(x)


class FileData(_Strict):
    """Two-column CSV (x, value), '#' comments; linearly interpolated, zero outside."""

    family: Literal["from_file"]
    path: str

    def sample(self, x: np.ndarray, base_dir: str = ".") -> np.ndarray:
        path = self.path if os.path.isabs(self.path) else os.path.join(base_dir, self.path)
        if not os.path.isfile(path):
            raise ScenarioError(f"data file not found: {path}")
        try:
            table = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
        except ValueError as e:
            raise ScenarioError(f"cannot parse {path}", original_error=e)
        if table.shape[1] < 2 or table.shape[0] < 2:
            raise ScenarioError(f"{path}: need at least two rows of x,value")
        order = np.argsort(table[:, 0])
        return np.interp(x, table[order, 0], table[order, 1], left=0.0, right=0.0)


DataSpec = Annotated[
    Union[GaussianData, DGaussianData, ModeData, RandomData, ZeroData, FileData],
    Field(discriminator="family"),
]


class InitialData(_Strict):
    variable: Literal["stress", "strain_sum", "potential"] = "potential"
    first: DataSpec
    second: DataSpec = ZeroData(family="zero")
    u0: DataSpec = ZeroData(family="zero")


class GridSection(_Strict):
    L: float = Field(DEFAULT_HALF_LENGTH, gt=0)
    N: int = Field(DEFAULT_POINTS, ge=16)


class TimeSection(_Strict):
    dt: float = Field(5e-4, gt=0)
    T: float = Field(0.5, gt=0)
    T0: float = Field(1.0, gt=0)
    slab: Optional[float] = Field(None, gt=0, description="march in windows of this length")
    discover: bool = Field(False, description="halve T until the iteration contracts")


class PhysicsSection(_Strict):
    nu: float = Field(1.0, gt=0)


class BoundsSection(_Strict):
    s: float = 3.0
    delta: float = 0.5
    delta_bar: float = 2.0
    M: float = 5.0
    theta_floor: float = 0.1
    K1_bound: Optional[float] = None


class ToleranceSection(_Strict):
    fp_tol: float = 1e-10
    mean_zero_tol: Optional[float] = None
    max_picard_iters: int = 60
    no_contraction_patience: int = 3
    initial_guess: Literal["ramp", "constant"] = "ramp"


class OutputSection(_Strict):
    csv_stride: int = Field(10, ge=1, description="write every n-th level to the field CSVs")


class Scenario(_Strict):
    name: str = Field(..., min_length=1)
    model: str
    data: InitialData
    grid: GridSection = GridSection()
    time: TimeSection = TimeSection()
    physics: PhysicsSection = PhysicsSection()
    bounds: BoundsSection = BoundsSection()
    tolerances: ToleranceSection = ToleranceSection()
    output: OutputSection = OutputSection()
    seed: int = 0

    def constitutive_model(self) -> ConstitutiveModel:
        model = get_model(self.model)
        if model is None:
            known = ", ".join(sorted(MODEL_IDENTIFIERS))
            raise ScenarioError(f"unknown model '{self.model}' (known: {known})")
        return model

    def grid_spec(self) -> GridSpec:
        try:
            return GridSpec(self.grid.L, self.grid.N)
        except ValueError as e:
            raise ScenarioError(f"invalid grid: {e}", original_error=e)

    def solver_config(self, strict_smallness: bool = False) -> SolverConfig:
        try:
            return SolverConfig(
                nu=self.physics.nu,
                dt=self.time.dt,
                T0=self.time.T0,
                strict_smallness=strict_smallness,
                **self.bounds.model_dump(),
                **self.tolerances.model_dump(),
            )
        except ValidationError as e:
            raise ScenarioError(f"invalid solver settings: {e}", original_error=e)


def _sample(spec, grid: GridSpec, base_dir: str, seed: int) -> GridField:
    x = grid.nodes
    if isinstance(spec, FileData):
        return GridField(grid, spec.sample(x, base_dir))
    if isinstance(spec, RandomData):
        return GridField(grid, spec.sample(x, seed))
    return GridField(grid, spec.sample(x))


def load_scenario(path: str) -> Scenario:
    if not os.path.isfile(path):
        raise ScenarioError(f"scenario file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        scenario = Scenario.model_validate_json(text)
    except ValidationError as e:
        raise ScenarioError(f"{os.path.basename(path)}: {e}", original_error=e)
    logger.info(f"Loaded scenario '{scenario.name}' from {path}")
    return scenario


def build_scenario(
    scenario: Scenario,
    base_dir: str = ".",
    strict_smallness: bool = False,
) -> Tuple[ConstitutiveModel, GridSpec, ScenarioData, SolverConfig]:
    model = scenario.constitutive_model()
    grid = scenario.grid_spec()
    cfg = scenario.solver_config(strict_smallness)
    cfg.check_against(model)

    data = scenario.data
    labels = {
        "stress": ("S0", "S1"),
        "strain_sum": ("omega0", "omega1"),
        "potential": ("eta0", "eta1"),
    }[data.variable]
    first = _sample(data.first, grid, base_dir, scenario.seed)
    second = _sample(data.second, grid, base_dir, scenario.seed + 1)
    u0 = _sample(data.u0, grid, base_dir, scenario.seed + 2)
    for spec, f, label in ((data.first, first, labels[0]), (data.second, second, labels[1]), (data.u0, u0, "u0")):
        if not isinstance(spec, ModeData):
            check_decay(f, label)

    if data.variable == "stress":
        built = ScenarioData.from_stress(first, second, model, u0, cfg.mean_zero_tol)
    elif data.variable == "strain_sum":
        built = ScenarioData.from_strain_sum(first, second, model, u0, cfg.mean_zero_tol)
    else:
        built = ScenarioData.from_potential(first, second, model, u0)
    return model, grid, built, cfg


def scenario_schema() -> dict:
    return Scenario.model_json_schema()
