"""Exact evaluation of network-nonlocality functionals for star and chain networks.

Quantum, local, no-signaling-box and hybrid (pLNL) behaviour models share one
correlator interface, so every functional is computed by the same evaluator.
"""
from .bounds import BoundsReport, plnl_threshold
from .errors import DegenerateError, DimensionError, GuardError, NetNLError
from .functionals import FAMILIES, FunctionalSpec, FunctionalValue, evaluate
from .oracle import SearchResult, brute_hybrid_max, brute_local_max
from .soscert import CertificateReport, sos_residuals

__all__ = [
    "FAMILIES",
    "BoundsReport",
    "CertificateReport",
    "DegenerateError",
    "DimensionError",
    "FunctionalSpec",
    "FunctionalValue",
    "GuardError",
    "NetNLError",
    "SearchResult",
    "brute_hybrid_max",
    "brute_local_max",
    "evaluate",
    "plnl_threshold",
    "sos_residuals",
]
