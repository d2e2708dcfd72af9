"""Central knobs."""
from __future__ import annotations

import os

QMAX = int(os.getenv("ORTHOFORMS_QMAX", "4"))
XIMAX = int(os.getenv("ORTHOFORMS_XIMAX", "3"))
HILBERT_ORDER = int(os.getenv("ORTHOFORMS_HILBERT_ORDER", "40"))
TMAX = int(os.getenv("ORTHOFORMS_TMAX", "12"))
QSERIES_ORDER = int(os.getenv("ORTHOFORMS_QSERIES_ORDER", "8"))
MAX_CONCURRENT_ENTRIES = int(os.getenv("ORTHOFORMS_MAX_CONCURRENT_ENTRIES", "5"))
CLIQUE_LIMIT = int(os.getenv("ORTHOFORMS_CLIQUE_LIMIT", "64"))
LOG_LEVEL = os.getenv("ORTHOFORMS_LOG_LEVEL", "WARNING")

# q-exponents are stored as integers scaled by this factor.
Q_SCALE = 24
