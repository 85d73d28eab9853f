"""Exact solvers for linear equations over ordered data vectors."""

from .datavec import DataVector, Instance, MatrixInstance
from .solvers import DOMAINS, SOLVABLE, UNKNOWN, UNSOLVABLE, Term, Verdict, solve, verify_witness

__all__ = [
    "DOMAINS", "SOLVABLE", "UNKNOWN", "UNSOLVABLE",
    "DataVector", "Instance", "MatrixInstance", "Term", "Verdict", "solve", "verify_witness",
]
