"""A gradually typed object calculus compiled to an untyped target.

The typed source language translates into an untyped target language
by inserting shallow runtime checks at the boundaries the types
promise. The package bundles the typechecking translator, a small-step
interpreter for the target, a tag-level verifier for translated code,
and a fuzzing harness that embeds translated programs into arbitrary
untyped contexts and watches for errors blamed on translated code.
"""

from .contexts import plug, type_context, validate_context
from .core import (
    CLOSED,
    DYN,
    INT,
    OPEN,
    AttrTypes,
    Class,
    ClassDecl,
    Dyn,
    Function,
    Int,
    Object,
    consistent,
    instance_type,
    instantiate,
    mems,
    queryable,
    subtype_consistent,
    tag_of,
)
from .harness import FuzzReport, TrialConfig, TrialReport, run_trials, \
    soundness_trial
from .parser import (
    ParseError,
    parse_anthill,
    parse_anthill_type,
    parse_tag,
    parse_upython,
)
from .printer import (
    print_anthill_term,
    print_anthill_type,
    print_tag,
    print_upython,
)
from .runtime import CastError, Heap, PyError, Timeout, Value, run
from .translate import StaticTypeError, translate_program, translate_term
from .upython import INT_TAG, NATIVE, PYOBJ, TRANSLATED, ClassTag, FunTag, \
    Label, ObjTag, Pyobj
from .verify import heap_ok, infer, principal_heap_type, tag_subtype, verifies

__version__ = "0.1.0"

__all__ = [
    "AttrTypes", "CastError", "Class", "ClassDecl", "ClassTag", "Dyn",
    "FunTag", "Function", "FuzzReport", "Heap", "Int", "Label", "Object",
    "ObjTag", "ParseError", "PyError", "Pyobj", "StaticTypeError",
    "Timeout", "TrialConfig", "TrialReport", "Value",
    "CLOSED", "DYN", "INT", "INT_TAG", "NATIVE", "OPEN", "PYOBJ",
    "TRANSLATED",
    "consistent", "heap_ok", "infer", "instance_type", "instantiate",
    "mems", "parse_anthill", "parse_anthill_type", "parse_tag",
    "parse_upython", "plug", "principal_heap_type", "print_anthill_term",
    "print_anthill_type", "print_tag", "print_upython", "queryable", "run",
    "run_trials", "soundness_trial", "subtype_consistent", "tag_of",
    "tag_subtype", "translate_program", "translate_term", "type_context",
    "validate_context", "verifies",
]
