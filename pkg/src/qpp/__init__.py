"""Quasi-projection pairs: a projection P and an idempotent Q with Q* = (2P - I) Q (2P - I)."""
from .numlin import DEFAULT_TOL, InputError, NotPSDError, NumericalError, Subspace, Tolerances
from .qppcore import PairRejected, QuasiPair, build_from_A, build_krein, matched_projection, verify_pair

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL", "InputError", "NotPSDError", "NumericalError", "Subspace", "Tolerances",
    "PairRejected", "QuasiPair", "build_from_A", "build_krein", "matched_projection", "verify_pair",
]
