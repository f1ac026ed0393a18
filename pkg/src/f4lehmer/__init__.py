"""Exact Coxeter group tables, Bruhat posets and Lehmer-code searches for F4."""

from .cache import get_table
from .coxeter import GroupTable, build_group, coxeter_matrix, psi
from .embedding import prove_no_lehmer_code, search_full_lehmer_code, verify_certificate
from .posets import FinitePoset, box, is_m_sequence, is_multicomplex
from .qpoly import QPoly, poincare_polynomial, q_analog
from .weak import build_pal_lattice, build_weak_code, multicomplex_for_interval, verify_weak_code

__version__ = "0.1.0"

__all__ = [
    "GroupTable", "build_group", "coxeter_matrix", "psi", "get_table",
    "prove_no_lehmer_code", "search_full_lehmer_code", "verify_certificate",
    "FinitePoset", "box", "is_m_sequence", "is_multicomplex",
    "QPoly", "poincare_polynomial", "q_analog",
    "build_pal_lattice", "build_weak_code", "multicomplex_for_interval", "verify_weak_code",
]
