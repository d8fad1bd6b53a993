"""Quantum correlations of two-qubit states: discord, concurrence, PPT entanglement."""

from qcorr.errors import InvalidArgument, NotPositiveSemidefinite, NumericFailure

__version__ = "0.1.0"

__all__ = ["InvalidArgument", "NotPositiveSemidefinite", "NumericFailure", "__version__"]
