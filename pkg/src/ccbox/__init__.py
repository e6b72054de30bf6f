"""Reference implementation of the box calculus: capture sets, boxes and an
abstract machine, with a property harness standing in for mechanized proofs."""

from .syntax import (
    Abs, App, Arrow, Atom, Box, BoxVal, Capt, CaptureSet, EMPTY, Kind, Let,
    TAbs, TAll, TApp, TermExpr, Top, TOP, TVarBound, TVarFree, TypeExpr, UNIVERSAL,
    Unbox, VarBound, VarFree, check_pure, check_type, free_atoms, is_value,
)
from .wellformed import Env, wf_env, wf_type
from .subtyping import subcapture, subtype
from .typecheck import ErrorKind, TypingError, check_against, cv, infer_type
from .machine import AtomSupply, MachineState, run, step, type_state

__version__ = "0.1.0"
