from .poly import Poly, poly_divide_exact
from .powersum import NotNormalizable, PowerSum, is_zero
from .parser import ParseError, eval_expr, parse
from .space import base_P, nvars, var_names

__all__ = [
    "Poly",
    "PowerSum",
    "NotNormalizable",
    "ParseError",
    "base_P",
    "eval_expr",
    "is_zero",
    "nvars",
    "parse",
    "poly_divide_exact",
    "var_names",
]
