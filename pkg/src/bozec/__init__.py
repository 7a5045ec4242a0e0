"""Exact symbolic engine for quantum Borcherds-Bozec algebras."""

from .scalars import Scalar, LaurentSeries, normalize, expand_series, parse_scalar, q_int, q_fact, q_binom

__all__ = [
    "Scalar",
    "LaurentSeries",
    "normalize",
    "expand_series",
    "parse_scalar",
    "q_int",
    "q_fact",
    "q_binom",
]
