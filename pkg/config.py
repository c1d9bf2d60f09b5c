#!/usr/bin/env python3
"""
Shared configuration for the segment-spectra tools.
Values come from the environment (or a local .env file) with sane defaults.
"""

import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Worker count for the parallel verification / quadrature kernels
SEGSPEC_THREADS = max(1, int(os.getenv("SEGSPEC_THREADS", "4")))

# Payload schema tag written into every JSON document
SCHEMA = "segment-spectra/1"

# Tolerances
DEFAULT_TOL = 1e-10
BESSEL_TOL = 1e-9
NUMERIC_INTEGER_TOL = 1e-9
TILING_TAIL_TOL = 1e-6

# Orthogonality radius used when only a completeness radius is given
DEFAULT_ORTHO_RADIUS = 50.0

# Monte-Carlo probes
DEFAULT_SEED = 0

# CSV output: 17 significant digits round-trips a double
FLOAT_FORMAT = "%.17g"
