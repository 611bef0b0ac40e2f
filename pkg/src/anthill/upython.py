"""Syntax of the untyped target language.

Expressions carry origin labels on the four forms that can raise a
dynamic object error (call, attribute read, attribute write, class
creation): NATIVE for code that was written directly in the target
language, TRANSLATED for code emitted by the typed-to-untyped
translation. Errors blame the label of the expression that raised them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class Label(enum.Enum):
    NATIVE = "native"
    TRANSLATED = "translated"

    def __repr__(self) -> str:
        return self.name


NATIVE = Label.NATIVE
TRANSLATED = Label.TRANSLATED


# ---------------------------------------------------------------------------
# runtime tags


class Tag:
    """Shallow runtime tag. Checked by `check`, tracked by the verifier."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Pyobj(Tag):
    pass


@dataclass(frozen=True, slots=True)
class IntTag(Tag):
    pass


@dataclass(frozen=True, slots=True)
class FunTag(Tag):
    arity: int


@dataclass(frozen=True, slots=True)
class ObjTag(Tag):
    labels: frozenset[str]

    def __init__(self, labels) -> None:
        object.__setattr__(self, "labels", frozenset(labels))


@dataclass(frozen=True, slots=True)
class ClassTag(Tag):
    """Class tag. arity None means unconstrained constructor."""

    labels: frozenset[str]
    arity: int | None

    def __init__(self, labels, arity: int | None) -> None:
        object.__setattr__(self, "labels", frozenset(labels))
        object.__setattr__(self, "arity", arity)


PYOBJ = Pyobj()
INT_TAG = IntTag()


# ---------------------------------------------------------------------------
# expressions


class UPyExpr:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class UVar(UPyExpr):
    name: str


@dataclass(frozen=True, slots=True)
class UInt(UPyExpr):
    value: int


@dataclass(frozen=True, slots=True)
class UAddr(UPyExpr):
    addr: int


@dataclass(frozen=True, slots=True)
class ULam(UPyExpr):
    params: tuple[str, ...]
    body: UPyExpr


@dataclass(frozen=True, slots=True)
class UApp(UPyExpr):
    fn: UPyExpr
    args: tuple[UPyExpr, ...]
    label: Label = NATIVE


@dataclass(frozen=True, slots=True)
class UGet(UPyExpr):
    subject: UPyExpr
    attr: str
    label: Label = NATIVE


@dataclass(frozen=True, slots=True)
class USet(UPyExpr):
    subject: UPyExpr
    attr: str
    value: UPyExpr
    label: Label = NATIVE


@dataclass(frozen=True, slots=True)
class ULet(UPyExpr):
    name: str
    bound: UPyExpr
    body: UPyExpr


@dataclass(frozen=True, slots=True)
class UClass(UPyExpr):
    """Class literal. `members` maps labels to initializing expressions;
    duplicate labels are rejected. The name is documentation only."""

    name: str
    supers: tuple[UPyExpr, ...]
    members: tuple[tuple[str, UPyExpr], ...]
    ctor: UPyExpr
    label: Label = NATIVE

    def __post_init__(self) -> None:
        seen = set()
        for lbl, _ in self.members:
            if lbl in seen:
                raise ValueError(f"duplicate member label {lbl!r}")
            seen.add(lbl)


@dataclass(frozen=True, slots=True)
class UCheck(UPyExpr):
    subject: UPyExpr
    tag: Tag


@dataclass(frozen=True, slots=True)
class UHole(UPyExpr):
    """Context hole. Never evaluated; plugging replaces it."""


def is_value(e: UPyExpr) -> bool:
    return isinstance(e, (UInt, ULam, UAddr))


def free_vars(e: UPyExpr) -> frozenset[str]:
    if isinstance(e, UVar):
        return frozenset((e.name,))
    if isinstance(e, (UInt, UAddr, UHole)):
        return frozenset()
    if isinstance(e, ULam):
        return free_vars(e.body) - frozenset(e.params)
    if isinstance(e, UApp):
        out = free_vars(e.fn)
        for a in e.args:
            out |= free_vars(a)
        return out
    if isinstance(e, UGet):
        return free_vars(e.subject)
    if isinstance(e, USet):
        return free_vars(e.subject) | free_vars(e.value)
    if isinstance(e, ULet):
        return free_vars(e.bound) | (free_vars(e.body) - frozenset((e.name,)))
    if isinstance(e, UClass):
        out = free_vars(e.ctor)
        for s in e.supers:
            out |= free_vars(s)
        for _, m in e.members:
            out |= free_vars(m)
        return out
    if isinstance(e, UCheck):
        return free_vars(e.subject)
    raise TypeError(f"not an expression: {e!r}")
