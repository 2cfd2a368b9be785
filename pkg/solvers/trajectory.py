"""Time-indexed containers: (eta, eta_t) trajectories and plain field series."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from numerics.grid import Field, GridSpec


def _frozen_block(values, points: int, label: str) -> np.ndarray:
    block = np.array(values, dtype=float)
    if block.ndim != 2 or block.shape[1] != points:
        raise ValueError(f"{label}: expected shape (levels, {points}), got {block.shape}")
    if not np.all(np.isfinite(block)):
        raise ValueError(f"{label}: non-finite values")
    block.setflags(write=False)
    return block


@dataclass(frozen=True, eq=False)
class FieldSeries:
    """Uniformly spaced time levels of one quantity (u, u_x, omega, S, ...)."""

    grid: GridSpec
    dt: float
    values: np.ndarray
    name: str = "value"

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        object.__setattr__(self, "values", _frozen_block(self.values, self.grid.points, self.name))

    @property
    def steps(self) -> int:
        return self.values.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.steps + 1)

    def level(self, n: int) -> Field:
        return Field(self.grid, self.values[n])

    def final(self) -> Field:
        return self.level(-1)

    def time_derivative(self) -> "FieldSeries":
        edge = 2 if self.steps >= 2 else 1
        rate = np.gradient(self.values, self.dt, axis=0, edge_order=edge)
        return FieldSeries(self.grid, self.dt, rate, name=f"{self.name}_t")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Element of X^s([0, T]) sampled at t_n = n dt: eta and eta_t = phi per level."""

    grid: GridSpec
    dt: float
    eta: np.ndarray
    eta_t: np.ndarray

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        eta = _frozen_block(self.eta, self.grid.points, "eta")
        eta_t = _frozen_block(self.eta_t, self.grid.points, "eta_t")
        if eta.shape != eta_t.shape:
            raise ValueError(f"eta {eta.shape} and eta_t {eta_t.shape} disagree")
        if eta.shape[0] < 2:
            raise ValueError("a trajectory needs at least one step")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "eta_t", eta_t)

    @classmethod
    def from_levels(cls, grid: GridSpec, dt: float, eta_levels, eta_t0: Optional[Field] = None) -> "Trajectory":
        """Build from eta alone; eta_t by centered differences in time, one-sided at the ends."""
        eta = np.asarray(eta_levels, dtype=float)
        edge = 2 if eta.shape[0] >= 3 else 1
        eta_t = np.gradient(eta, dt, axis=0, edge_order=edge)
        if eta_t0 is not None:
            eta_t[0] = eta_t0.values
        return cls(grid, dt, eta, eta_t)

    @property
    def steps(self) -> int:
        return self.eta.shape[0] - 1

    @property
    def horizon(self) -> float:
        return self.steps * self.dt

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.steps + 1)

    def eta_at(self, n: int) -> Field:
        return Field(self.grid, self.eta[n])

    def eta_t_at(self, n: int) -> Field:
        return Field(self.grid, self.eta_t[n])

    def compatible_with(self, other: "Trajectory") -> bool:
        return (
            self.grid == other.grid
            and self.steps == other.steps
            and abs(self.dt - other.dt) <= 1e-15 * max(self.dt, other.dt)
        )

    def as_series(self) -> FieldSeries:
        return FieldSeries(self.grid, self.dt, self.eta, name="eta")
