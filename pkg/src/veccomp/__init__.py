"""Exact combinatorics of weighted vector compositions."""
from .model import MultiIndex, WeightFunction, parse_weight_function, preset, support_within
from .counting import binom, c_f

__all__ = ["MultiIndex", "WeightFunction", "parse_weight_function", "preset", "support_within", "binom", "c_f"]
__version__ = "0.1.0"
