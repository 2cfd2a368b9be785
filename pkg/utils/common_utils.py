# common_utils.py - Common utilities and decorators

import inspect
import logging
import os
from functools import wraps
from typing import Callable

from utils.errors import (
    CourantViolation,
    DecayViolation,
    DegenerateInput,
    DomainError,
    EllipticityError,
    GridMismatch,
    IterationLimitError,
    MeanZeroViolation,
    NoContraction,
    ScenarioError,
    SingularSystem,
    StrainBoundError,
    WorkbenchError,
)
from utils.trajectory_io import ensure_directory, write_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DIAGNOSTICS_FAILED = 2

# Most specific first
_ERROR_CODES = (
    (StrainBoundError, "strain_bound"),
    (DomainError, "domain"),
    (MeanZeroViolation, "mean_zero"),
    (DecayViolation, "decay"),
    (EllipticityError, "ellipticity"),
    (SingularSystem, "singular_system"),
    (IterationLimitError, "iteration_limit"),
    (NoContraction, "no_contraction"),
    (DegenerateInput, "degenerate_input"),
    (CourantViolation, "courant"),
    (GridMismatch, "grid_mismatch"),
    (ScenarioError, "scenario"),
    (WorkbenchError, "workbench"),
)


def classify_error(error: BaseException) -> str:
    """Stable code for the error record."""
    for cls, code in _ERROR_CODES:
        if isinstance(error, cls):
            return code
    return "internal"


def error_record(error: BaseException, command: str) -> dict:
    record = {
        "command": command,
        "code": classify_error(error),
        "type": error.__class__.__name__,
        "message": getattr(error, "user_message", str(error)),
    }
    original = getattr(error, "original_error", None)
    if original is not None:
        record["cause"] = f"{original.__class__.__name__}: {getattr(original, 'user_message', original)}"
    for attr in ("index", "value", "minimum", "distances"):
        value = getattr(error, attr, None)
        if value is not None:
            record[attr] = value
    return record


def handle_errors(func: Callable[..., int]) -> Callable[..., int]:
    """Map exceptions from a command to exit code 1 and an error.json in its out_dir."""
    signature = inspect.signature(func)

    @wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)
        except WorkbenchError as e:
            logger.warning(f"{func.__name__} failed: {e.user_message}")
            if e.original_error:
                logger.error(f"Original error: {e.original_error}")
            error = e
        except Exception as e:
            logger.error(f"Error in {func.__name__}: {e}", exc_info=True)
            error = e

        out_dir = signature.bind_partial(*args, **kwargs).arguments.get("out_dir")
        if out_dir:
            path = os.path.join(ensure_directory(out_dir), "error.json")
            write_json(path, error_record(error, func.__name__))
            logger.info(f"Error record written to {path}")
        return EXIT_ERROR

    return wrapper
