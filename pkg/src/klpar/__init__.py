"""
klpar: exact Kazhdan-Lusztig theory for small finite Coxeter groups.

Modules
-------
coxeter     tabulated Coxeter systems (A, B, D, I2), Bruhat / weak order, parabolics
laurent     sparse Laurent polynomials in v (q = v^-2)
hecke       Hecke algebra, canonical basis, R / KL tables, f-bases, J-relative R
decomp      q-derived KL polynomials and the I/Q and parabolic decompositions
hypercube   S_n hypercube formulas for J = {s_1, ..., s_{n-2}}
invariance  Bruhat interval graphs and relative / filtered invariance checks
verify      invariant suites shared by the CLI and the tests
cli         command-line front end
"""

from .coxeter import CoxeterSystem, Filtration, build_system
from .errors import (ConfigurationError, InternalConsistencyError, KLError, MalformedInputError,
                     NotAQPolynomialError, PreconditionError, UnsupportedOperationError)
from .hecke import HeckeAlgebra, algebra, compute_kl_table, compute_r_table
from .laurent import ALPHA, ONE, Q, V, ZERO, LaurentPoly, format_q

__version__ = "0.1.0"

__all__ = [
    "CoxeterSystem", "Filtration", "build_system", "HeckeAlgebra", "algebra",
    "compute_kl_table", "compute_r_table", "LaurentPoly", "ALPHA", "ONE", "Q", "V",
    "ZERO", "format_q", "KLError", "ConfigurationError", "PreconditionError",
    "MalformedInputError", "NotAQPolynomialError", "UnsupportedOperationError",
    "InternalConsistencyError",
]
