"""Lyapunov exponents of Schrodinger cocycles over hyperbolic toral automorphisms."""
from . import angle, cocycle, config, kernels, leaves, lyapunov, potential, torus, verify
from .cocycle import CocycleParams, SL2, Transfer, transfer
from .errors import (CatlyapError, ConfigError, DegenerateRotation, NotHyperbolic, NotMonotoneAlongUnstable,
                     NotUnimodular, OutOfRange, ResolutionExhausted, StraddlesDiscontinuity)
from .lyapunov import LyapunovEstimate, estimate_leaf, estimate_torus
from .torus import HyperbolicToralMap, TorusPoint, cat_map, make_map
from .verify import VerificationReport

__version__ = "0.1.0"

__all__ = [
    "angle", "cocycle", "config", "kernels", "leaves", "lyapunov", "potential", "torus", "verify",
    "CocycleParams", "SL2", "Transfer", "transfer", "LyapunovEstimate", "estimate_leaf", "estimate_torus",
    "HyperbolicToralMap", "TorusPoint", "cat_map", "make_map", "VerificationReport",
    "CatlyapError", "ConfigError", "DegenerateRotation", "NotHyperbolic", "NotMonotoneAlongUnstable",
    "NotUnimodular", "OutOfRange", "ResolutionExhausted", "StraddlesDiscontinuity", "__version__",
]
