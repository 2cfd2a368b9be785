# model_check.py - Constitutive law checks and scenario schema

import json
import logging
import math
import os
from typing import Optional

import numpy as np

from config import MODEL_IDENTIFIERS
from handlers.scenario import scenario_schema
from models import ConstitutiveModel, get_model
from utils.common_utils import EXIT_DIAGNOSTICS_FAILED, EXIT_OK, handle_errors
from utils.errors import DomainError, ScenarioError
from utils.trajectory_io import ensure_directory, write_json

logger = logging.getLogger(__name__)

ROUND_TRIP_TOL = 1e-9
INVERSE_TOL = 1e-10
SLOPE_TOL = 1e-6
SLOPE_STEP = 1e-5


def model_checks(model: ConstitutiveModel, samples: int = 10_001) -> dict:
    lo, hi = model.admissible_bounds()
    reach = min(hi, -lo, 10.0) * (1.0 - 1e-6)
    w = np.linspace(-reach, reach, samples)
    s = np.linspace(-50.0, 50.0, samples)

    g_w = np.asarray(model.g(w))
    forward = float(np.max(np.abs(np.asarray(model.h(g_w)) - w) / np.maximum(1.0, np.abs(w))))
    h_s = np.asarray(model.h(s))
    inside = (h_s > lo) & (h_s < hi)
    backward = float(np.max(np.abs(np.asarray(model.g(h_s[inside])) - s[inside]) / (1.0 + np.abs(s[inside]))))
    slopes = np.asarray(model.h_prime(s))
    reciprocity = float(np.max(np.abs(np.asarray(model.g_prime(w)) * np.asarray(model.h_prime(g_w)) - 1.0)))
    near = np.linspace(-10.0, 10.0, samples)
    central = (np.asarray(model.h(near + SLOPE_STEP)) - np.asarray(model.h(near - SLOPE_STEP))) / (2 * SLOPE_STEP)
    slope_error = float(np.max(np.abs(np.asarray(model.h_prime(near)) - central)))

    try:
        model.g(np.array([hi + 1e-3 if math.isfinite(hi) else np.inf]))
        gate = False
    except DomainError:
        gate = True

    checks = {
        "round_trip_h_of_g": forward <= ROUND_TRIP_TOL,
        "round_trip_g_of_h": backward <= INVERSE_TOL,
        "h_increasing": bool(np.all(np.diff(h_s) > 0) and np.all(slopes > 0)),
        "g_increasing": bool(np.all(np.diff(g_w) > 0)),
        "odd_symmetry": bool(np.allclose(np.asarray(model.h(-s)), -h_s, rtol=0, atol=1e-15)),
        "inverse_derivative": reciprocity <= ROUND_TRIP_TOL,
        "h_prime_consistent": slope_error <= SLOPE_TOL,
        "domain_gate": gate,
        "zero_fixed": model.g(0.0) == 0.0 and model.h(0.0) == 0.0,
    }
    return {
        "model": model.kind.value,
        "delta_max": model.delta_max,
        "errors": {"h_of_g": forward, "g_of_h": backward, "inverse_derivative": reciprocity, "h_prime": slope_error},
        "checks": {k: ("PASS" if v else "FAIL") for k, v in checks.items()},
        "passed": all(checks.values()),
    }


@handle_errors
def cmd_model_check(model_name: str, out_dir: Optional[str] = None) -> int:
    model = get_model(model_name)
    if model is None:
        known = ", ".join(sorted(MODEL_IDENTIFIERS))
        raise ScenarioError(f"unknown model '{model_name}' (known: {known})")
    summary = model_checks(model)
    print(f"{summary['model']}: delta_max = {summary['delta_max']}")
    for name, verdict in summary["checks"].items():
        print(f"  {name:<20} {verdict}")
    if out_dir:
        write_json(os.path.join(ensure_directory(out_dir), f"model_check_{model.name}.json"), summary)
    return EXIT_OK if summary["passed"] else EXIT_DIAGNOSTICS_FAILED


def cmd_schema(out_dir: Optional[str] = None) -> int:
    schema = scenario_schema()
    print(json.dumps(schema, indent=2, sort_keys=True))
    if out_dir:
        write_json(os.path.join(ensure_directory(out_dir), "scenario.schema.json"), schema)
    return EXIT_OK


def register_check_handlers(subparsers) -> None:
    parser = subparsers.add_parser("model-check", help="constitutive round-trip and monotonicity checks")
    parser.add_argument("model_name", metavar="model", help=", ".join(sorted(MODEL_IDENTIFIERS)))
    parser.set_defaults(handler=cmd_model_check, batch=False)

    parser = subparsers.add_parser("schema", help="print the scenario JSON schema")
    parser.set_defaults(handler=cmd_schema, batch=False)
