"""Type-directed translation from the source calculus to the untyped
target language.

The translation is syntax-directed and total on well-typed terms: each
term form has at most one applicable rule given the computed types of
its subterms. Every elimination or creation form the translator emits
carries the translated origin label, and every inserted runtime check
tests the tag image of a static type.
"""

from __future__ import annotations

from .core import (
    OPEN,
    AnthillTerm,
    AnthillType,
    App,
    Class,
    ClassDecl,
    Constructor,
    Dyn,
    Function,
    Get,
    Int,
    IntLit,
    Let,
    Fun,
    Method,
    MemsUndefined,
    Object,
    Set,
    Var,
    DYN,
    INT,
    instance_type,
    mems,
    queryable,
    subtype_consistent,
    tag_of,
)
from .upython import (
    TRANSLATED,
    ClassTag,
    FunTag,
    ObjTag,
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
)

TypeEnv = dict[str, AnthillType]


class StaticTypeError(Exception):
    """No translation rule applies. Carries the rule family that gave up,
    a human-readable reason, and the offending subterm."""

    def __init__(self, rule: str, detail: str, subterm=None) -> None:
        self.rule = rule
        self.detail = detail
        self.subterm = subterm
        super().__init__(f"{rule}: {detail}")


def _check_params(params) -> None:
    seen = set()
    for name, _ in params:
        if name != "_" and name in seen:
            raise StaticTypeError("params", f"duplicate parameter {name!r}")
        seen.add(name)


def _param_check_lets(params, body: UPyExpr) -> UPyExpr:
    # entry checks, one let per parameter, outermost first; the wildcard
    # binder can never be referenced so it gets no rebinding
    for name, ty in reversed(params):
        if name == "_":
            continue
        body = ULet(name, UCheck(UVar(name), tag_of(ty)), body)
    return body


def translate_program(term: AnthillTerm) -> tuple[UPyExpr, AnthillType]:
    """Translate a closed term."""
    return translate_term({}, term)


def translate_term(env: TypeEnv, t: AnthillTerm) -> tuple[UPyExpr, AnthillType]:
    if isinstance(t, Var):
        if t.name not in env:
            raise StaticTypeError("var", f"unbound variable {t.name!r}", t)
        return UVar(t.name), env[t.name]

    if isinstance(t, IntLit):
        return UInt(t.value), INT

    if isinstance(t, Let):
        bound, bound_ty = translate_term(env, t.bound)
        body, body_ty = translate_term({**env, t.name: bound_ty}, t.body)
        return ULet(t.name, bound, body), body_ty

    if isinstance(t, Get):
        subject, subj_ty = translate_term(env, t.subject)
        members = _mems_or_error("get", subj_ty, t)
        if t.attr in members:
            attr_ty = members[t.attr]
            return UCheck(UGet(subject, t.attr, TRANSLATED), tag_of(attr_ty)), attr_ty
        if queryable(subj_ty) is OPEN:
            return UGet(UCheck(subject, ObjTag((t.attr,))), t.attr, TRANSLATED), DYN
        raise StaticTypeError(
            "get", f"no member {t.attr!r} on closed type {subj_ty!r}", t)

    if isinstance(t, Set):
        subject, subj_ty = translate_term(env, t.subject)
        members = _mems_or_error("set", subj_ty, t)
        if t.attr in members:
            attr_ty = members[t.attr]
            value, value_ty = translate_term(env, t.value)
            if not subtype_consistent(value_ty, attr_ty):
                raise StaticTypeError(
                    "set",
                    f"value type {value_ty!r} does not flow into member "
                    f"{t.attr!r} of type {attr_ty!r}", t)
            return USet(subject, t.attr, UCheck(value, tag_of(attr_ty)),
                        TRANSLATED), INT
        if queryable(subj_ty) is OPEN:
            value, _ = translate_term(env, t.value)
            return USet(UCheck(subject, ObjTag(())), t.attr, value,
                        TRANSLATED), INT
        raise StaticTypeError(
            "set", f"no member {t.attr!r} on closed type {subj_ty!r}", t)

    if isinstance(t, Fun):
        _check_params(t.params)
        inner = {**env, **{n: ty for n, ty in t.params if n != "_"}}
        body, body_ty = translate_term(inner, t.body)
        if not subtype_consistent(body_ty, t.ret):
            raise StaticTypeError(
                "fun",
                f"body type {body_ty!r} does not flow into declared "
                f"return type {t.ret!r}", t)
        body = _param_check_lets(t.params, body)
        return (ULam(tuple(n for n, _ in t.params), body),
                Function(tuple(ty for _, ty in t.params), t.ret))

    if isinstance(t, App):
        fn, fn_ty = translate_term(env, t.fn)
        arg_pairs = [translate_term(env, a) for a in t.args]
        args = tuple(e for e, _ in arg_pairs)

        if isinstance(fn_ty, Dyn):
            return (UApp(UCheck(fn, FunTag(len(args))), args, TRANSLATED),
                    DYN)

        if isinstance(fn_ty, (Function, Class)):
            param_tys = (fn_ty.params if isinstance(fn_ty, Function)
                         else fn_ty.ctor_params)
            if len(param_tys) != len(args):
                raise StaticTypeError(
                    "app",
                    f"arity mismatch: callee takes {len(param_tys)} "
                    f"argument(s), got {len(args)}", t)
            for (_, arg_ty), param_ty in zip(arg_pairs, param_tys):
                if not subtype_consistent(arg_ty, param_ty):
                    raise StaticTypeError(
                        "app",
                        f"argument type {arg_ty!r} does not flow into "
                        f"parameter type {param_ty!r}", t)
            result_ty = (fn_ty.ret if isinstance(fn_ty, Function)
                         else instance_type(fn_ty))
            return (UCheck(UApp(fn, args, TRANSLATED), tag_of(result_ty)),
                    result_ty)

        raise StaticTypeError("app", f"call of non-function type {fn_ty!r}", t)

    if isinstance(t, ClassDecl):
        return _translate_class(env, t)

    raise StaticTypeError("term", f"not a term: {t!r}", t)


def _mems_or_error(rule, ty, subterm):
    try:
        return mems(ty)
    except MemsUndefined:
        raise StaticTypeError(
            rule, f"type {ty!r} has no attributes", subterm) from None


def _translate_class(env: TypeEnv, t: ClassDecl) -> tuple[UPyExpr, AnthillType]:
    declared = t.declared_type()

    super_exprs = []
    super_mems = []
    for s in t.supers:
        se, sty = translate_term(env, s)
        sm = _mems_or_error("class", sty, s)
        super_exprs.append(UCheck(se, ClassTag(sm.names(), None)))
        super_mems.append(sm)

    ctor_expr, _ = translate_constructor(env, t.ctor)

    local_types: dict[str, AnthillType] = {}
    method_members = []
    for m in t.methods:
        me, mty = translate_method(env, declared, m)
        method_members.append((m.name, me))
        local_types[m.name] = mty
    field_members = []
    for name, fe in t.fields:
        fe2, fty = translate_term(env, fe)
        field_members.append((name, fe2))
        local_types[name] = fty

    # every declared class attribute must be provided, by a local member
    # or a superclass, at a type that flows into the declaration; local
    # members shadow supers, earlier supers shadow later ones
    for name, declared_ty in declared.class_attrs.items():
        provided = local_types.get(name)
        if provided is None:
            for sm in super_mems:
                if name in sm:
                    provided = sm[name]
                    break
        if provided is None:
            raise StaticTypeError(
                "class",
                f"declared class attribute {name!r} has no definition", t)
        if not subtype_consistent(provided, declared_ty):
            raise StaticTypeError(
                "class",
                f"definition of {name!r} has type {provided!r}, which does "
                f"not flow into declared {declared_ty!r}", t)

    return (UClass(t.name, tuple(super_exprs),
                   tuple(method_members + field_members),
                   ctor_expr, TRANSLATED),
            declared)


def translate_constructor(env: TypeEnv, c: Constructor) -> tuple[UPyExpr, tuple[AnthillType, ...]]:
    """Translate a constructor to a lambda taking the receiver first.
    The receiver is dynamically typed in the body and gets no entry
    check; parameters are rebound through checks as in functions."""
    _check_params(((c.receiver, DYN),) + c.params)
    inner = dict(env)
    if c.receiver != "_":
        inner[c.receiver] = DYN
    inner.update({n: ty for n, ty in c.params if n != "_"})
    body, _ = translate_term(inner, c.body)
    body = _param_check_lets(c.params, body)
    return (ULam((c.receiver,) + tuple(n for n, _ in c.params), body),
            tuple(ty for _, ty in c.params))


def translate_method(env: TypeEnv, cls: Class, m: Method) -> tuple[UPyExpr, AnthillType]:
    """Translate a method of the given class. The receiver is typed at
    the class's instance type in the body, rebound through a check
    against that type's tag before the parameter checks. The returned
    member type includes the receiver slot, at the dynamic type, so it
    lines up with the class-attribute declarations and with the arity of
    the emitted lambda."""
    _check_params(((m.receiver, DYN),) + m.params)
    recv_ty = instance_type(cls)
    inner = dict(env)
    if m.receiver != "_":
        inner[m.receiver] = recv_ty
    inner.update({n: ty for n, ty in m.params if n != "_"})
    body, body_ty = translate_term(inner, m.body)
    if not subtype_consistent(body_ty, m.ret):
        raise StaticTypeError(
            "method",
            f"body type {body_ty!r} does not flow into declared return "
            f"type {m.ret!r}", m)
    body = _param_check_lets(m.params, body)
    if m.receiver != "_":
        body = ULet(m.receiver, UCheck(UVar(m.receiver), tag_of(recv_ty)),
                    body)
    return (ULam((m.receiver,) + tuple(n for n, _ in m.params), body),
            Function((DYN,) + tuple(ty for _, ty in m.params), m.ret))
