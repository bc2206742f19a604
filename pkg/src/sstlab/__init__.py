"""Copyless streaming string transducers: normalization, approximants and equivalence tools."""
from .core import (
    MARKER, Reg, Run, Sst, Transition, Update, capacity, compose_updates, evaluate,
    flow_of, runs, trim, validate,
)
from .textio import parse_sst, serialize_sst

__version__ = "0.1.0"
