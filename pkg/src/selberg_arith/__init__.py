"""Arithmetic data for the logarithmic derivative of Selberg zeta functions of
SL2(Z), Gamma0(N), Gamma1(N) and Gamma(N): Pell units, narrow class numbers,
multiplicity factors, and the series and counting functions built from them."""

from .errors import CacheCorruptError, DomainError, InconsistencyError, ResourceLimitError
from .forms import MatrixClass, QuadraticForm, class_number, class_numbers
from .multiplicity import CongruenceGroup, Family, L0, L1, M, index
from .pell import PellSolution, fundamental_solution, nth_solution, solution_index, trace_fiber

__version__ = "0.1.0"

__all__ = [
    "CacheCorruptError", "DomainError", "InconsistencyError", "ResourceLimitError",
    "MatrixClass", "QuadraticForm", "class_number", "class_numbers",
    "CongruenceGroup", "Family", "L0", "L1", "M", "index",
    "PellSolution", "fundamental_solution", "nth_solution", "solution_index", "trace_fiber",
]
