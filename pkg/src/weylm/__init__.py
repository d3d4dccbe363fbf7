"""Rigorous enclosures of the Titchmarsh-Weyl m-function for -y'' + q y = lam y
on [0, inf) with q = +-x**alpha."""

from .asymptotic import ProblemSpec, initial_data
from .bridge import BridgeInput, BridgeOutput, bridge
from .errors import EnclosureError, EnclosureFailure
from .formatting import format_enclosure, format_interval, parse_enclosure, parse_interval
from .interval import ComplexBox, RealInterval, csqrt, rpow
from .ivp import CoeffGenerator, EnclosureState, StepPlan, integrate, step
from .pipeline import MEnclosure, compute_m, conjugate_check
from .refdata import ReferenceRow, load_rows, table_meta

__version__ = "0.1.0"

__all__ = [
    "ProblemSpec",
    "initial_data",
    "BridgeInput",
    "BridgeOutput",
    "bridge",
    "EnclosureError",
    "EnclosureFailure",
    "format_enclosure",
    "format_interval",
    "parse_enclosure",
    "parse_interval",
    "ComplexBox",
    "RealInterval",
    "csqrt",
    "rpow",
    "CoeffGenerator",
    "EnclosureState",
    "StepPlan",
    "integrate",
    "step",
    "MEnclosure",
    "compute_m",
    "conjugate_check",
    "ReferenceRow",
    "load_rows",
    "table_meta",
]
