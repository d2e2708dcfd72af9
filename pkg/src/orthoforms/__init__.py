"""Exact Fourier–Jacobi expansions, theta-block lifts and free-algebra tables."""
from __future__ import annotations

import logging

from dotenv import load_dotenv

# constants read the environment at import time
load_dotenv()

from .arrangements import build_arrangement, codimension_bound, looijenga_check  # noqa: E402
from .families import enumerate_families  # noqa: E402
from .hilbert import dim_bound, hilbert_series, minimal_generators  # noqa: E402
from .jacobi import ThetaBlockSpec, classify, hecke, theta_block  # noqa: E402
from .lattice import build, component_invariants, delta_value, discriminant_classes, short_vectors  # noqa: E402
from .lifts import borch, grit, psi_input, verify_theta_identity  # noqa: E402
from .tables import generator_weights, jacobian_weight, norm2_classification, principal_part  # noqa: E402

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "ThetaBlockSpec",
    "borch",
    "build",
    "build_arrangement",
    "classify",
    "codimension_bound",
    "component_invariants",
    "delta_value",
    "dim_bound",
    "discriminant_classes",
    "enumerate_families",
    "generator_weights",
    "grit",
    "hecke",
    "hilbert_series",
    "jacobian_weight",
    "looijenga_check",
    "minimal_generators",
    "norm2_classification",
    "principal_part",
    "psi_input",
    "short_vectors",
    "theta_block",
    "verify_theta_identity",
]
