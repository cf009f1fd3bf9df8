"""Community detection by constrained NMF, with the block-model likelihoods it is equivalent to."""

from .graph import Graph, load_edge_list, read_labels, write_labels
from .metrics import nmi
from .models import DCFactors, DirectedFactors, Factors, SignedFactors, TypeMask
from .solvers import FitResult, SolverConfig, fit

__all__ = [
    "DCFactors",
    "DirectedFactors",
    "Factors",
    "FitResult",
    "Graph",
    "SignedFactors",
    "SolverConfig",
    "TypeMask",
    "fit",
    "load_edge_list",
    "nmi",
    "read_labels",
    "write_labels",
]

__version__ = "0.1.0"
