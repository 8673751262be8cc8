"""Exact algebra for Gauss-Manin connections of tame polynomials and the
modular vector fields of the Clingher-Doran K3 family."""
from .algebra import (
    MonomialOrder,
    MultiPoly,
    NEG_INF,
    RationalFunction,
    VarTable,
    divide_track,
    parse_poly,
    poly_gcd,
)
from .kernels import BACKEND
from .tame import TamePolynomial, clingher_doran, elliptic
from .gauss_manin import GaussManin, gm_connection
from .moduli import s_complete, vf_solve
from .period import pi_membership, t_map

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GaussManin",
    "MonomialOrder",
    "MultiPoly",
    "NEG_INF",
    "RationalFunction",
    "TamePolynomial",
    "VarTable",
    "clingher_doran",
    "divide_track",
    "elliptic",
    "gm_connection",
    "parse_poly",
    "pi_membership",
    "poly_gcd",
    "s_complete",
    "t_map",
    "vf_solve",
]
