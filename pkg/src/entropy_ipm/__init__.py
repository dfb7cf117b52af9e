"""Primal-dual interior-point LP solver built on entropy-based search directions."""
from .hsd import Status, embed, extract
from .mps import load_lp, parse_mps, read_mps, to_standard_form
from .solver import RunConfig, netlib_path, solve

__all__ = ["Status", "embed", "extract", "load_lp", "parse_mps", "read_mps",
           "to_standard_form", "RunConfig", "netlib_path", "solve"]
__version__ = "0.1.0"
