"""Small-step interpreter for the untyped target language.

The heap maps addresses to class and object records. Evaluation is
deterministic: the redex is selected by structural recursion that walks
subexpressions left to right (callee before arguments, subject before
value, supers then constructor then members). Runtime checks fail to a
cast error; every other dynamic type confusion fails to a pyerror
carrying the origin label of the offending elimination form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .upython import (
    ClassTag,
    FunTag,
    IntTag,
    Label,
    ObjTag,
    Pyobj,
    Tag,
    UAddr,
    UApp,
    UCheck,
    UClass,
    UGet,
    UInt,
    ULam,
    ULet,
    UPyExpr,
    USet,
    UVar,
    is_value,
)


class OpenTermError(Exception):
    """A free variable reached the redex position; the program was not
    closed."""


@dataclass(slots=True)
class ObjH:
    cls: int
    members: dict[str, UPyExpr] = field(default_factory=dict)


@dataclass(slots=True)
class ClassH:
    supers: tuple[int, ...]
    members: dict[str, UPyExpr]
    ctor: UPyExpr


HeapValue = ObjH | ClassH


class Heap:
    """Address -> heap value store with a monotone allocation counter.
    Addresses are never reused; member maps are updated in place."""

    __slots__ = ("_store", "_next")

    def __init__(self) -> None:
        self._store: dict[int, HeapValue] = {}
        self._next = 0

    def alloc(self, h: HeapValue) -> int:
        a = self._next
        self._next += 1
        self._store[a] = h
        return a

    def __getitem__(self, addr: int) -> HeapValue:
        return self._store[addr]

    def __contains__(self, addr: int) -> bool:
        return addr in self._store

    def __len__(self) -> int:
        return len(self._store)

    def __iter__(self):
        return iter(self._store)

    def items(self):
        return self._store.items()

    def copy(self) -> "Heap":
        new = Heap()
        new._next = self._next
        for a, h in self._store.items():
            if isinstance(h, ObjH):
                new._store[a] = ObjH(h.cls, dict(h.members))
            else:
                new._store[a] = ClassH(h.supers, dict(h.members), h.ctor)
        return new

    def __repr__(self) -> str:
        return f"Heap({self._store!r})"


# ---------------------------------------------------------------------------
# outcomes


@dataclass(frozen=True, slots=True)
class Value:
    value: UPyExpr
    heap: Heap
    steps: int


@dataclass(frozen=True, slots=True)
class CastError:
    steps: int


@dataclass(frozen=True, slots=True)
class PyError:
    label: Label
    steps: int


@dataclass(frozen=True, slots=True)
class Timeout:
    steps: int


Outcome = Value | CastError | PyError | Timeout


# ---------------------------------------------------------------------------
# metafunctions


def getattr_(addr: int, label: str, heap: Heap) -> UPyExpr | None:
    """Attribute search: own member map first; objects delegate to their
    class; classes search superclasses depth-first, left to right, first
    definition winning. None when absent everywhere."""
    h = heap[addr]
    if label in h.members:
        return h.members[label]
    if isinstance(h, ObjH):
        return getattr_(h.cls, label, heap)
    for s in h.supers:
        found = getattr_(s, label, heap)
        if found is not None:
            return found
    return None


def hasattrs(addr: int, names, heap: Heap) -> bool:
    return all(getattr_(addr, x, heap) is not None for x in names)


def param_match(v: UPyExpr, heap: Heap, c: int | None) -> bool:
    """Can v be called with c arguments (None meaning any number)?
    Class addresses defer to their constructor with one extra slot for
    the receiver."""
    if isinstance(v, ULam):
        return c is None or len(v.params) == c
    if isinstance(v, UAddr) and v.addr in heap:
        h = heap[v.addr]
        if isinstance(h, ClassH):
            if c is None:
                return True
            return param_match(h.ctor, heap, c + 1)
    return False


def check(v: UPyExpr, heap: Heap, tag: Tag) -> bool:
    """Shallow tag test on a value."""
    if isinstance(tag, Pyobj):
        return True
    if isinstance(tag, IntTag):
        return isinstance(v, UInt)
    if isinstance(tag, FunTag):
        return param_match(v, heap, tag.arity)
    if isinstance(tag, ObjTag):
        return (isinstance(v, UAddr) and v.addr in heap
                and hasattrs(v.addr, tag.labels, heap))
    if isinstance(tag, ClassTag):
        return (isinstance(v, UAddr) and v.addr in heap
                and isinstance(heap[v.addr], ClassH)
                and hasattrs(v.addr, tag.labels, heap)
                and param_match(v, heap, tag.arity))
    raise TypeError(f"not a tag: {tag!r}")


@dataclass(frozen=True, slots=True)
class Found:
    value: UPyExpr


class _NotFound:
    def __repr__(self) -> str:
        return "NOT_FOUND"


class _NullaryMethod:
    def __repr__(self) -> str:
        return "NULLARY_METHOD"


NOT_FOUND = _NotFound()
NULLARY_METHOD = _NullaryMethod()

_fresh_counter = itertools.count()


def _fresh(prefix: str) -> str:
    # the $ namespace is unutterable in surface syntax, so these names
    # can never collide with program variables
    return f"${prefix}{next(_fresh_counter)}"


def lookup(addr: int, h: HeapValue, label: str, heap: Heap, p: Label):
    """Member read on a heap value. Object-local members win and are
    returned raw. A method found through the class chain is curried over
    the receiver; a nullary one cannot take the receiver at all and
    signals the cast error the caller turns into one. Class receivers
    delegate straight to attribute search."""
    if isinstance(h, ObjH):
        if label in h.members:
            return Found(h.members[label])
        found = getattr_(h.cls, label, heap)
        if found is None:
            return NOT_FOUND
        if isinstance(found, ULam):
            if len(found.params) == 0:
                return NULLARY_METHOD
            rest = tuple(_fresh("r") for _ in found.params[1:])
            return Found(ULam(rest, UApp(found,
                                         (UAddr(addr),) + tuple(UVar(y) for y in rest),
                                         p)))
        return Found(found)
    found = getattr_(addr, label, heap)
    return Found(found) if found is not None else NOT_FOUND


def substitute(e: UPyExpr, bindings: dict[str, UPyExpr]) -> UPyExpr:
    """Simultaneous name-based substitution, stopping at shadowing
    binders. The substituted values are closed, so capture is moot."""
    if not bindings:
        return e
    if isinstance(e, UVar):
        return bindings.get(e.name, e)
    if isinstance(e, (UInt, UAddr)):
        return e
    if isinstance(e, ULam):
        inner = {x: v for x, v in bindings.items() if x not in e.params}
        return ULam(e.params, substitute(e.body, inner)) if inner else e
    if isinstance(e, UApp):
        return UApp(substitute(e.fn, bindings),
                    tuple(substitute(a, bindings) for a in e.args), e.label)
    if isinstance(e, UGet):
        return UGet(substitute(e.subject, bindings), e.attr, e.label)
    if isinstance(e, USet):
        return USet(substitute(e.subject, bindings), e.attr,
                    substitute(e.value, bindings), e.label)
    if isinstance(e, ULet):
        bound = substitute(e.bound, bindings)
        inner = {x: v for x, v in bindings.items() if x != e.name}
        return ULet(e.name, bound, substitute(e.body, inner))
    if isinstance(e, UClass):
        return UClass(e.name,
                      tuple(substitute(s, bindings) for s in e.supers),
                      tuple((l, substitute(m, bindings)) for l, m in e.members),
                      substitute(e.ctor, bindings), e.label)
    if isinstance(e, UCheck):
        return UCheck(substitute(e.subject, bindings), e.tag)
    raise TypeError(f"cannot substitute into {e!r}")


# ---------------------------------------------------------------------------
# stepping


@dataclass(frozen=True, slots=True)
class Stepped:
    expr: UPyExpr
    rule: str


@dataclass(frozen=True, slots=True)
class StepCastError:
    rule: str


@dataclass(frozen=True, slots=True)
class StepPyError:
    label: Label
    rule: str


StepResult = Stepped | StepCastError | StepPyError


def step(e: UPyExpr, heap: Heap) -> StepResult:
    """One reduction. The heap is updated in place (allocation, member
    update); errors discard the surrounding context."""
    if isinstance(e, UVar):
        raise OpenTermError(f"free variable {e.name!r} reached evaluation")

    if isinstance(e, UCheck):
        if is_value(e.subject):
            if check(e.subject, heap, e.tag):
                return Stepped(e.subject, "ECheck1")
            return StepCastError("ECheck2")
        inner = step(e.subject, heap)
        if isinstance(inner, Stepped):
            return Stepped(UCheck(inner.expr, e.tag), inner.rule)
        return inner

    if isinstance(e, ULet):
        if is_value(e.bound):
            return Stepped(substitute(e.body, {e.name: e.bound}), "ELet")
        inner = step(e.bound, heap)
        if isinstance(inner, Stepped):
            return Stepped(ULet(e.name, inner.expr, e.body), inner.rule)
        return inner

    if isinstance(e, UApp):
        if not is_value(e.fn):
            inner = step(e.fn, heap)
            if isinstance(inner, Stepped):
                return Stepped(UApp(inner.expr, e.args, e.label), inner.rule)
            return inner
        for i, a in enumerate(e.args):
            if not is_value(a):
                inner = step(a, heap)
                if isinstance(inner, Stepped):
                    args = e.args[:i] + (inner.expr,) + e.args[i + 1:]
                    return Stepped(UApp(e.fn, args, e.label), inner.rule)
                return inner
        if isinstance(e.fn, ULam):
            if len(e.fn.params) != len(e.args):
                return StepPyError(e.label, "EApp3")
            return Stepped(
                substitute(e.fn.body, dict(zip(e.fn.params, e.args))),
                "EApp1")
        if isinstance(e.fn, UAddr) and e.fn.addr in heap:
            h = heap[e.fn.addr]
            if isinstance(h, ClassH):
                a2 = heap.alloc(ObjH(e.fn.addr, {}))
                ctor_call = UApp(h.ctor, (UAddr(a2),) + e.args, e.label)
                return Stepped(ULet("_", ctor_call, UAddr(a2)), "EApp2")
        return StepPyError(e.label, "EApp3")

    if isinstance(e, UGet):
        if not is_value(e.subject):
            inner = step(e.subject, heap)
            if isinstance(inner, Stepped):
                return Stepped(UGet(inner.expr, e.attr, e.label), inner.rule)
            return inner
        if isinstance(e.subject, UAddr) and e.subject.addr in heap:
            r = lookup(e.subject.addr, heap[e.subject.addr], e.attr, heap,
                       e.label)
            if isinstance(r, Found):
                return Stepped(r.value, "EGet1")
            if r is NULLARY_METHOD:
                return StepCastError("EGet2")
        return StepPyError(e.label, "EGet3")

    if isinstance(e, USet):
        if not is_value(e.subject):
            inner = step(e.subject, heap)
            if isinstance(inner, Stepped):
                return Stepped(USet(inner.expr, e.attr, e.value, e.label),
                               inner.rule)
            return inner
        if not is_value(e.value):
            inner = step(e.value, heap)
            if isinstance(inner, Stepped):
                return Stepped(USet(e.subject, e.attr, inner.expr, e.label),
                               inner.rule)
            return inner
        if isinstance(e.subject, UAddr) and e.subject.addr in heap:
            heap[e.subject.addr].members[e.attr] = e.value
            return Stepped(UInt(0), "ESet")
        return StepPyError(e.label, "ESet4")

    if isinstance(e, UClass):
        for i, s in enumerate(e.supers):
            if not is_value(s):
                inner = step(s, heap)
                if isinstance(inner, Stepped):
                    supers = e.supers[:i] + (inner.expr,) + e.supers[i + 1:]
                    return Stepped(
                        UClass(e.name, supers, e.members, e.ctor, e.label),
                        inner.rule)
                return inner
        if not is_value(e.ctor):
            inner = step(e.ctor, heap)
            if isinstance(inner, Stepped):
                return Stepped(
                    UClass(e.name, e.supers, e.members, inner.expr, e.label),
                    inner.rule)
            return inner
        for i, (l, m) in enumerate(e.members):
            if not is_value(m):
                inner = step(m, heap)
                if isinstance(inner, Stepped):
                    members = (e.members[:i] + ((l, inner.expr),)
                               + e.members[i + 1:])
                    return Stepped(
                        UClass(e.name, e.supers, members, e.ctor, e.label),
                        inner.rule)
                return inner
        super_addrs = []
        for s in e.supers:
            if not (isinstance(s, UAddr) and s.addr in heap
                    and isinstance(heap[s.addr], ClassH)):
                return StepPyError(e.label, "EClass3")
            super_addrs.append(s.addr)
        if not param_match(e.ctor, heap, None):
            return StepPyError(e.label, "EClass3")
        a = heap.alloc(ClassH(tuple(super_addrs), dict(e.members), e.ctor))
        return Stepped(UAddr(a), "EClass")

    raise TypeError(f"cannot step {e!r}")


def run(e: UPyExpr, heap: Heap | None = None, budget: int = 10 ** 6,
        on_step=None) -> Outcome:
    """Iterate step until a value or an error, giving up after budget
    steps. on_step, if given, is called with (step index, rule name,
    heap size) after each successful step."""
    if heap is None:
        heap = Heap()
    steps = 0
    while not is_value(e):
        if steps >= budget:
            return Timeout(steps)
        r = step(e, heap)
        steps += 1
        if isinstance(r, Stepped):
            e = r.expr
            if on_step is not None:
                on_step(steps, r.rule, len(heap))
        elif isinstance(r, StepCastError):
            return CastError(steps)
        else:
            return PyError(r.label, steps)
    return Value(e, heap, steps)
