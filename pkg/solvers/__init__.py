from .settings import SolverConfig
from .trajectory import FieldSeries, Trajectory

__all__ = ["SolverConfig", "FieldSeries", "Trajectory"]
