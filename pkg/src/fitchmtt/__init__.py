"""Type checker for a dependent modal type theory with locks, and a presheaf model to test it against."""

from .conversion import DEFAULT_FUEL, Fuel, FuelExhausted, conv_term, conv_type, normalize, whnf
from .kernel import Kernel, TypeCheckError, check, check_ctx, check_type, infer
from .surface import Decl, ParseError, SourceFile, elaborate, parse, parse_expr, pretty
from .syntax import Context, ctx, alpha_eq, split_at_last_lock, subst

__all__ = [
    "DEFAULT_FUEL",
    "Context",
    "Decl",
    "Fuel",
    "FuelExhausted",
    "Kernel",
    "ParseError",
    "SourceFile",
    "TypeCheckError",
    "alpha_eq",
    "check",
    "check_ctx",
    "check_type",
    "conv_term",
    "conv_type",
    "ctx",
    "elaborate",
    "infer",
    "normalize",
    "parse",
    "parse_expr",
    "pretty",
    "split_at_last_lock",
    "subst",
    "whnf",
]
