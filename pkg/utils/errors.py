# errors.py - Exception hierarchy shared by every solver stage

from typing import Optional


class WorkbenchError(Exception):
    """Base error with a short human-readable message for reports."""
    def __init__(self, user_message: str, original_error: Exception = None):
        self.user_message = user_message
        self.original_error = original_error
        super().__init__(user_message)


class DomainError(WorkbenchError):
    """Strain-sum left the open interval where g = h^-1 exists."""
    def __init__(self, user_message: str, index: Optional[int] = None, value: Optional[float] = None):
        self.index = index
        self.value = value
        super().__init__(user_message)


class MeanZeroViolation(WorkbenchError):
    """Field has nonzero integral, so its antiderivative cannot vanish at both ends."""


class DecayViolation(WorkbenchError):
    """Initial data does not decay before the truncated boundary."""


class EllipticityError(WorkbenchError):
    """Diffusion coefficient fell below the ellipticity floor."""
    def __init__(self, user_message: str, minimum: Optional[float] = None):
        self.minimum = minimum
        super().__init__(user_message)


class SingularSystem(WorkbenchError):
    pass


class StrainBoundError(DomainError):
    """sup_t ||v_x||_inf exceeded the configured strain bound delta."""


class NoContraction(WorkbenchError):
    """Picard distances stopped decreasing; the horizon is too long."""
    def __init__(self, user_message: str, distances: Optional[list] = None, original_error: Exception = None):
        self.distances = list(distances or [])
        super().__init__(user_message, original_error)


class IterationLimitError(NoContraction):
    pass


class DegenerateInput(WorkbenchError):
    pass


class CourantViolation(WorkbenchError):
    pass


class GridMismatch(WorkbenchError):
    pass


class ScenarioError(WorkbenchError):
    pass
