# config.py

import os

from dotenv import load_dotenv

load_dotenv()

# Base project directory
BASE_DIR = os.path.dirname(os.path.abspath(__file__))

# Where runs write their CSV / JSON / SLVT artifacts
OUT_DIRECTORY = os.getenv("SLV_OUT_DIR", os.path.join(BASE_DIR, "out"))

LOG_LEVEL = os.getenv("SLV_LOG_LEVEL", "INFO").strip().upper()

# Parallel scenario runs (--jobs overrides)
DEFAULT_JOBS = int(os.getenv("SLV_JOBS", "1"))

# Truncated domain [-L, L] standing in for the real line
DEFAULT_HALF_LENGTH = 20.0
DEFAULT_POINTS = 512

# Initial data must be below DECAY_TOLERANCE on |x| >= L - DECAY_BAND
DECAY_TOLERANCE = 1e-12
DECAY_BAND = 2.0

# Constitutive inversion
INVERSION_MARGIN = 1e-9
INVERSION_TOLERANCE = 1e-14
INVERSION_MAX_ITER = 60

# Relative to max|f|
MEAN_ZERO_RELATIVE_TOL = 1e-10

# Scale-relative drift allowed for conserved integrals
CONSERVATION_TOL = 1e-8

# Binary trajectory format
TRAJECTORY_MAGIC = b"SLVT"
TRAJECTORY_VERSION = 1

# Name used in scenario files -> model kind
MODEL_IDENTIFIERS = {
    "rational_sqrt": "RationalSquareRoot",
    "arctan": "Arctangent",
    "cubic": "Cubic",
    "linear": "Linear",
}

VERSION = "0.3.0"
