"""Exact computer-algebra substrate: rationals, polynomials, rational
functions, truncated Laurent series and hbar-series."""

from fractions import Fraction as ExactScalar

from .poly import Poly, QQ, poly_gcd, poly_lcm, exact_divide, register_variable
from .ratfun import RationalFunction, normalize
from .series import (INF, LaurentSeries, series_residue, expand_at,
                     rational_reconstruct, eval_poly_at_series,
                     eval_ratfun_at_series, eval_ratfun_at_series2)
from .hbar import HbarSeries

MultiPoly = Poly

__all__ = [
    "ExactScalar", "QQ", "Poly", "MultiPoly", "poly_gcd", "poly_lcm",
    "exact_divide", "register_variable", "RationalFunction", "normalize",
    "INF", "LaurentSeries", "series_residue", "expand_at",
    "rational_reconstruct", "eval_poly_at_series", "eval_ratfun_at_series",
    "eval_ratfun_at_series2", "HbarSeries",
]
