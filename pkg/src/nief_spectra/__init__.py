"""Nonlinear interference effects in resonant multi-field spectroscopy.

Closed-form dressed probe response of a four-level double-Lambda/ladder loop,
probe spectra with sum-rule and window diagnostics, Maxwell velocity
averaging, dressed sum-frequency mixing, continuum-structure ratios and
relaxation-induced interference, plus brute-force oracles for checking them.
"""
from .errors import NiefError, NumericalError, ValidationError
from .model import FieldSpec, Populations, RelaxationSpec, unsaturated_populations

__version__ = "0.1.0"

__all__ = [
    "FieldSpec",
    "NiefError",
    "NumericalError",
    "Populations",
    "RelaxationSpec",
    "ValidationError",
    "unsaturated_populations",
    "__version__",
]
