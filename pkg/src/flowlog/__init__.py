"""Datalog compiler and batch fixpoint engine with plan optimization."""

from .errors import FlowlogError
from .frontend import parse_program
from .pipeline import RunConfig, RunResult, compile_program, run_program

__version__ = "0.1.0"

__all__ = ["FlowlogError", "RunConfig", "RunResult", "compile_program", "parse_program", "run_program"]
