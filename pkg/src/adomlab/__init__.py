"""Taylor/Adomian series laboratory for ``u_t = alpha*u_xx + beta*|u|^2*u_x``."""

from .adm import (
    ModelParams,
    TaylorSeries,
    TPolynomial,
    adomian_polynomial,
    build_series,
    evaluate,
    monomial_check,
)
from .field import ComplexField, GridSpec, RealField, diff, l2_norm, make_grid, sup_norm

__all__ = [
    "ComplexField",
    "GridSpec",
    "ModelParams",
    "RealField",
    "TPolynomial",
    "TaylorSeries",
    "adomian_polynomial",
    "build_series",
    "diff",
    "evaluate",
    "l2_norm",
    "make_grid",
    "monomial_check",
    "sup_norm",
]
