"""Random program generators.

Three generators share one RNG discipline: every function takes an
explicit random.Random so runs are reproducible from a seed.

* gen_typed_term builds source terms that inhabit a requested type
  exactly, so the translator accepts everything it produces. Exactness
  (rather than producing some subtype) keeps the search total: each
  production reduces the goal to sub-goals it can always meet, with a
  closed-form leaf for every type at depth zero.
* gen_untyped_context builds one-hole target-language contexts in
  which every elimination and creation form carries the native label.
  It reports the lexical binders in scope at the hole.
* gen_native_expr builds arbitrary untyped code for the context's
  side positions, including nonsense like calling an integer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import (
    OPEN,
    CLOSED,
    AnthillTerm,
    AnthillType,
    App,
    AttrTypes,
    Class,
    ClassDecl,
    Constructor,
    Dyn,
    Fun,
    Function,
    Get,
    IntLit,
    Let,
    Method,
    Object,
    Set,
    Var,
    DYN,
    INT,
    instance_type,
)
from .upython import (
    NATIVE,
    ClassTag,
    FunTag,
    ObjTag,
    Tag,
    UApp,
    UCheck,
    UClass,
    UGet,
    UHole,
    UInt,
    ULam,
    ULet,
    UPyExpr,
    USet,
    UVar,
    INT_TAG,
    PYOBJ,
)

BINDER_POOL = ("x", "y", "z", "w", "f", "g", "t", "u")
LABEL_POOL = ("a", "b", "c", "m", "n")
TYPE_NAME_POOL = ("P", "Q", "R", "V")


@dataclass(frozen=True)
class TermGenConfig:
    max_args: int = 2
    max_attrs: int = 2
    int_lo: int = 0
    int_hi: int = 9


DEFAULT_TERM_CONFIG = TermGenConfig()


def _openness(rng: random.Random):
    return OPEN if rng.random() < 0.5 else CLOSED


def _labels(rng: random.Random, count: int) -> list[str]:
    return rng.sample(LABEL_POOL, count)


def gen_type(rng: random.Random, depth: int,
             cfg: TermGenConfig = DEFAULT_TERM_CONFIG) -> AnthillType:
    if depth <= 0:
        return INT if rng.random() < 0.6 else DYN
    kind = rng.choices(("dyn", "int", "fun", "obj", "class"),
                       weights=(2, 3, 2, 2, 1))[0]
    if kind == "dyn":
        return DYN
    if kind == "int":
        return INT
    if kind == "fun":
        params = tuple(gen_type(rng, depth - 1, cfg)
                       for _ in range(rng.randint(0, cfg.max_args)))
        return Function(params, gen_type(rng, depth - 1, cfg))
    if kind == "obj":
        labels = _labels(rng, rng.randint(0, cfg.max_attrs))
        entries = [(l, gen_type(rng, depth - 1, cfg)) for l in labels]
        return Object(rng.choice(TYPE_NAME_POOL), _openness(rng),
                      AttrTypes(entries))
    # class: keep declared class members and instance members disjoint so
    # constructed objects carry the values their declared types promise
    total = _labels(rng, rng.randint(0, min(len(LABEL_POOL),
                                            2 * cfg.max_attrs)))
    split = rng.randint(0, len(total))
    class_entries = [(l, gen_type(rng, depth - 1, cfg)) for l in total[:split]]
    inst_entries = [(l, gen_type(rng, depth - 1, cfg)) for l in total[split:]]
    ctor_params = tuple(gen_type(rng, depth - 1, cfg)
                        for _ in range(rng.randint(0, cfg.max_args)))
    return Class(rng.choice(TYPE_NAME_POOL), _openness(rng),
                 AttrTypes(class_entries), AttrTypes(inst_entries),
                 ctor_params)


# ---------------------------------------------------------------------------
# typed terms


def _lift(ty: Function) -> Function:
    # receiver-inclusive version of a member function type
    return Function((DYN,) + tuple(ty.params), ty.ret)


def _assign_chain(receiver: str, assigns, result: AnthillTerm) -> AnthillTerm:
    body = result
    for label, value in reversed(assigns):
        body = Let("_", Set(Var(receiver), label, value), body)
    return body


def _leaf_object(goal: Object, rng: random.Random,
                 cfg: TermGenConfig) -> AnthillTerm:
    # a nullary class whose constructor installs every declared attribute
    params = tuple((f"v{i}", ty) for i, (_, ty) in enumerate(goal.attrs.items()))
    assigns = [(label, Var(f"v{i}"))
               for i, (label, _) in enumerate(goal.attrs.items())]
    ctor = Constructor("self", params, _assign_chain("self", assigns, IntLit(0)))
    cls = ClassDecl(goal.name, goal.openness, AttrTypes(()), goal.attrs,
                    (), (), (), ctor)
    args = tuple(leaf_term(rng, ty, cfg) for _, ty in goal.attrs.items())
    return App(cls, args)


def _leaf_class(goal: Class, rng: random.Random,
                cfg: TermGenConfig) -> AnthillTerm:
    methods = []
    fields = []
    for label, ty in goal.class_attrs.items():
        if isinstance(ty, Function) and len(ty.params) >= 1:
            mparams = tuple((f"v{i}", p)
                            for i, p in enumerate(ty.params[1:]))
            methods.append(Method(label, "self", mparams, ty.ret,
                                  leaf_term(rng, ty.ret, cfg)))
        else:
            fields.append((label, leaf_term(rng, ty, cfg)))
    cparams = tuple((f"a{i}", ty) for i, ty in enumerate(goal.ctor_params))
    assigns = []
    for label, ty in goal.instance_attrs.items():
        source = next((Var(f"a{i}") for i, pty in enumerate(goal.ctor_params)
                       if pty == ty), None)
        assigns.append((label, source if source is not None
                        else leaf_term(rng, ty, cfg)))
    ctor = Constructor("self", cparams,
                       _assign_chain("self", assigns, IntLit(0)))
    return ClassDecl(goal.name, goal.openness, goal.class_attrs,
                     goal.instance_attrs, (), tuple(methods), tuple(fields),
                     ctor)


def leaf_term(rng: random.Random, goal: AnthillType,
              cfg: TermGenConfig = DEFAULT_TERM_CONFIG) -> AnthillTerm:
    """A closed term of exactly the goal type, with no further recursion."""
    if isinstance(goal, Dyn):
        return App(Fun((("z", DYN),), DYN, Var("z")),
                   (IntLit(rng.randint(cfg.int_lo, cfg.int_hi)),))
    if isinstance(goal, Function):
        params = tuple((f"v{i}", ty) for i, ty in enumerate(goal.params))
        return Fun(params, goal.ret, leaf_term(rng, goal.ret, cfg))
    if isinstance(goal, Object):
        return _leaf_object(goal, rng, cfg)
    if isinstance(goal, Class):
        return _leaf_class(goal, rng, cfg)
    return IntLit(rng.randint(cfg.int_lo, cfg.int_hi))


TypeEnv = dict[str, AnthillType]


def gen_typed_term(rng: random.Random, env: TypeEnv, goal: AnthillType,
                   depth: int,
                   cfg: TermGenConfig = DEFAULT_TERM_CONFIG) -> AnthillTerm:
    """A term of exactly the goal type under env, recursion-bounded."""
    candidates = [name for name, ty in env.items() if ty == goal]
    if depth <= 0:
        if candidates and rng.random() < 0.5:
            return Var(rng.choice(candidates))
        return leaf_term(rng, goal, cfg)

    menu: list[tuple[str, int]] = [("leaf", 1), ("let", 2), ("app_fun", 2),
                                   ("get", 1)]
    if candidates:
        menu.append(("var", 3))
    if isinstance(goal, Dyn):
        menu.extend([("app_dyn", 2), ("get_check", 1)])
    if goal == INT:
        menu.extend([("set", 1), ("set_check", 1)])
    if isinstance(goal, Function):
        menu.append(("fun", 4))
    if isinstance(goal, Object):
        menu.append(("construct", 4))
    if isinstance(goal, Class):
        menu.append(("class_decl", 4))

    kind = rng.choices([k for k, _ in menu], weights=[w for _, w in menu])[0]

    if kind == "var":
        return Var(rng.choice(candidates))
    if kind == "leaf":
        return leaf_term(rng, goal, cfg)
    if kind == "let":
        bound_ty = gen_type(rng, depth - 1, cfg)
        name = rng.choice(BINDER_POOL)
        bound = gen_typed_term(rng, env, bound_ty, depth - 1, cfg)
        body = gen_typed_term(rng, {**env, name: bound_ty}, goal,
                              depth - 1, cfg)
        return Let(name, bound, body)
    if kind == "app_fun":
        arg_tys = tuple(gen_type(rng, depth - 1, cfg)
                        for _ in range(rng.randint(0, cfg.max_args)))
        fn = gen_typed_term(rng, env, Function(arg_tys, goal), depth - 1, cfg)
        args = tuple(gen_typed_term(rng, env, ty, depth - 1, cfg)
                     for ty in arg_tys)
        return App(fn, args)
    if kind == "app_dyn":
        fn = gen_typed_term(rng, env, DYN, depth - 1, cfg)
        args = tuple(gen_typed_term(rng, env, gen_type(rng, depth - 1, cfg),
                                    depth - 1, cfg)
                     for _ in range(rng.randint(0, cfg.max_args)))
        return App(fn, args)
    if kind == "get":
        label = rng.choice(LABEL_POOL)
        entries = [(label, goal)]
        extra = rng.choice([l for l in LABEL_POOL if l != label])
        if rng.random() < 0.4:
            entries.append((extra, gen_type(rng, depth - 1, cfg)))
        subject_ty = Object(rng.choice(TYPE_NAME_POOL), _openness(rng),
                            AttrTypes(entries))
        subject = gen_typed_term(rng, env, subject_ty, depth - 1, cfg)
        return Get(subject, label)
    if kind == "get_check":
        subject = gen_typed_term(rng, env, DYN, depth - 1, cfg)
        return Get(subject, rng.choice(LABEL_POOL))
    if kind == "set":
        label = rng.choice(LABEL_POOL)
        value_ty = gen_type(rng, depth - 1, cfg)
        subject_ty = Object(rng.choice(TYPE_NAME_POOL), _openness(rng),
                            AttrTypes([(label, value_ty)]))
        subject = gen_typed_term(rng, env, subject_ty, depth - 1, cfg)
        value = gen_typed_term(rng, env, value_ty, depth - 1, cfg)
        return Set(subject, label, value)
    if kind == "set_check":
        subject = gen_typed_term(rng, env, DYN, depth - 1, cfg)
        value = gen_typed_term(rng, env, gen_type(rng, depth - 1, cfg),
                               depth - 1, cfg)
        return Set(subject, rng.choice(LABEL_POOL), value)
    if kind == "fun":
        names = rng.sample(BINDER_POOL, len(goal.params)) \
            if len(goal.params) <= len(BINDER_POOL) \
            else [f"v{i}" for i in range(len(goal.params))]
        params = tuple(zip(names, goal.params))
        inner = {**env, **dict(params)}
        return Fun(params, goal.ret,
                   gen_typed_term(rng, inner, goal.ret, depth - 1, cfg))
    if kind == "construct":
        return _gen_construct(rng, env, goal, depth, cfg)
    if kind == "class_decl":
        return _gen_class_decl(rng, env, goal, depth, cfg)
    raise AssertionError(kind)


def _gen_construct(rng: random.Random, env: TypeEnv, goal: Object,
                   depth: int, cfg: TermGenConfig) -> AnthillTerm:
    """Object goal met by calling an inline class declaration.

    Each goal attribute is realized either as an instance attribute the
    constructor installs, or as a class member (a method for function
    types with a receiver slot, verbatim otherwise, both of which
    instantiate back to the same attribute type).
    """
    class_entries: list[tuple[str, AnthillType]] = []
    methods: list[Method] = []
    fields_plan: list[tuple[str, AnthillType]] = []
    inst_entries: list[tuple[str, AnthillType]] = []
    for label, ty in goal.attrs.items():
        if rng.random() < 0.5:
            inst_entries.append((label, ty))
        elif isinstance(ty, Function) and len(ty.params) >= 1:
            class_entries.append((label, _lift(ty)))
            methods.append((label, ty))  # realized below
        else:
            class_entries.append((label, ty))
            fields_plan.append((label, ty))
    cls_ty = Class(goal.name, goal.openness, AttrTypes(class_entries),
                   AttrTypes(inst_entries),
                   tuple(ty for _, ty in inst_entries))
    inst = instance_type(cls_ty)

    built_methods = []
    for label, ty in methods:
        names = [f"v{i}" for i in range(len(ty.params))]
        mparams = tuple(zip(names, ty.params))
        inner = {**env, "self": inst, **dict(mparams)}
        built_methods.append(Method(label, "self", mparams, ty.ret,
                                    gen_typed_term(rng, inner, ty.ret,
                                                   depth - 1, cfg)))
    built_fields = [(label, gen_typed_term(rng, env, ty, depth - 1, cfg))
                    for label, ty in fields_plan]

    cparams = tuple((f"a{i}", ty) for i, (_, ty) in enumerate(inst_entries))
    assigns = [(label, Var(f"a{i}"))
               for i, (label, _) in enumerate(inst_entries)]
    ctor = Constructor("self", cparams,
                       _assign_chain("self", assigns, IntLit(0)))

    cls = ClassDecl(goal.name, goal.openness, AttrTypes(class_entries),
                    AttrTypes(inst_entries), (), tuple(built_methods),
                    tuple(built_fields), ctor)
    args = tuple(gen_typed_term(rng, env, ty, depth - 1, cfg)
                 for _, ty in inst_entries)
    return App(cls, args)


def _gen_class_decl(rng: random.Random, env: TypeEnv, goal: Class,
                    depth: int, cfg: TermGenConfig) -> AnthillTerm:
    inst = instance_type(goal)

    # optionally inherit a subset of the declared class members
    supers: list[AnthillTerm] = []
    inherited: set[str] = set()
    if depth >= 2 and goal.class_attrs.names() and rng.random() < 0.35:
        picked = [e for e in goal.class_attrs.items() if rng.random() < 0.5]
        if picked:
            super_ty = Class(rng.choice(TYPE_NAME_POOL), _openness(rng),
                             AttrTypes(picked), AttrTypes(()), ())
            supers.append(gen_typed_term(rng, env, super_ty, depth - 1, cfg))
            inherited = {label for label, _ in picked}
    if depth >= 2 and rng.random() < 0.05:
        # an opaque super: statically fine, fails the class-tag cast at
        # run time unless it happens to be a class
        supers.append(gen_typed_term(rng, env, DYN, depth - 1, cfg))

    methods = []
    fields = []
    for label, ty in goal.class_attrs.items():
        if label in inherited:
            continue
        if isinstance(ty, Function) and len(ty.params) >= 1:
            names = [f"v{i}" for i in range(len(ty.params) - 1)]
            mparams = tuple(zip(names, ty.params[1:]))
            inner = {**env, "self": inst, **dict(mparams)}
            methods.append(Method(label, "self", mparams, ty.ret,
                                  gen_typed_term(rng, inner, ty.ret,
                                                 depth - 1, cfg)))
        else:
            fields.append((label, gen_typed_term(rng, env, ty,
                                                 depth - 1, cfg)))
    taken = set(goal.class_attrs.names()) | set(goal.instance_attrs.names())
    free = [l for l in LABEL_POOL if l not in taken]
    if free and rng.random() < 0.2:
        # an undeclared extra member is allowed
        fields.append((rng.choice(free),
                       gen_typed_term(rng, env, gen_type(rng, depth - 1, cfg),
                                      depth - 1, cfg)))

    cparams = tuple((f"a{i}", ty) for i, ty in enumerate(goal.ctor_params))
    cenv = {**env, "self": DYN, **dict(cparams)}
    assigns = []
    for label, ty in goal.instance_attrs.items():
        source = next((Var(name) for name, pty in cparams if pty == ty), None)
        if source is None:
            source = gen_typed_term(rng, cenv, ty, depth - 1, cfg)
        assigns.append((label, source))
    ctor = Constructor("self", cparams,
                       _assign_chain("self", assigns, IntLit(0)))

    return ClassDecl(goal.name, goal.openness, goal.class_attrs,
                     goal.instance_attrs, tuple(supers), tuple(methods),
                     tuple(fields), ctor)


def gen_typed_program(rng: random.Random, depth: int,
                      cfg: TermGenConfig = DEFAULT_TERM_CONFIG
                      ) -> tuple[AnthillTerm, AnthillType]:
    """A closed well-typed term together with its type."""
    goal = gen_type(rng, max(1, depth // 2), cfg)
    return gen_typed_term(rng, {}, goal, depth, cfg), goal


# ---------------------------------------------------------------------------
# untyped code


def gen_tag(rng: random.Random) -> Tag:
    kind = rng.choices(("pyobj", "int", "fun", "obj", "class"),
                       weights=(3, 3, 2, 2, 1))[0]
    if kind == "pyobj":
        return PYOBJ
    if kind == "int":
        return INT_TAG
    if kind == "fun":
        return FunTag(rng.randint(0, 2))
    labels = tuple(rng.sample(LABEL_POOL, rng.randint(0, 2)))
    if kind == "obj":
        return ObjTag(labels)
    arity = None if rng.random() < 0.4 else rng.randint(0, 2)
    return ClassTag(labels, arity)


def gen_native_expr(rng: random.Random, scope: tuple[str, ...],
                    depth: int) -> UPyExpr:
    """Arbitrary untyped code over the given variables, all labels native."""
    if depth <= 0:
        if scope and rng.random() < 0.5:
            return UVar(rng.choice(scope))
        return UInt(rng.randint(0, 9))
    kind = rng.choices(
        ("int", "var", "lam", "app", "let", "get", "set", "class", "check"),
        weights=(2, 3 if scope else 0, 3, 3, 2, 2, 1, 1, 1))[0]
    if kind == "int":
        return UInt(rng.randint(0, 9))
    if kind == "var":
        return UVar(rng.choice(scope))
    if kind == "lam":
        params = tuple(rng.sample(BINDER_POOL, rng.randint(0, 2)))
        return ULam(params, gen_native_expr(rng, scope + params, depth - 1))
    if kind == "app":
        fn = gen_native_expr(rng, scope, depth - 1)
        args = tuple(gen_native_expr(rng, scope, depth - 1)
                     for _ in range(rng.randint(0, 2)))
        return UApp(fn, args, NATIVE)
    if kind == "let":
        name = rng.choice(BINDER_POOL)
        return ULet(name, gen_native_expr(rng, scope, depth - 1),
                    gen_native_expr(rng, scope + (name,), depth - 1))
    if kind == "get":
        return UGet(gen_native_expr(rng, scope, depth - 1),
                    rng.choice(LABEL_POOL), NATIVE)
    if kind == "set":
        return USet(gen_native_expr(rng, scope, depth - 1),
                    rng.choice(LABEL_POOL),
                    gen_native_expr(rng, scope, depth - 1), NATIVE)
    if kind == "class":
        return _gen_native_class(rng, scope, depth, None)
    return UCheck(gen_native_expr(rng, scope, depth - 1), gen_tag(rng))


def gen_native_value(rng: random.Random, scope: tuple[str, ...],
                     depth: int) -> UPyExpr:
    if rng.random() < 0.4:
        return UInt(rng.randint(0, 9))
    params = tuple(rng.sample(BINDER_POOL, rng.randint(0, 2)))
    return ULam(params, gen_native_expr(rng, scope + params, depth - 1))


def _gen_native_class(rng: random.Random, scope: tuple[str, ...], depth: int,
                      hole_member: UPyExpr | None) -> UPyExpr:
    """A native class literal; if hole_member is given it becomes one
    member and the supers are restricted to values."""
    if hole_member is not None:
        supers = tuple(gen_native_value(rng, scope, depth - 1)
                       for _ in range(rng.randint(0, 1)))
    else:
        supers = tuple(gen_native_expr(rng, scope, depth - 1)
                       for _ in range(rng.randint(0, 1)))
    labels = rng.sample(LABEL_POOL, rng.randint(1 if hole_member is not None
                                                else 0, 2))
    members: list[tuple[str, UPyExpr]] = []
    hole_at = rng.randrange(len(labels)) if hole_member is not None else -1
    for i, label in enumerate(labels):
        value = (hole_member if i == hole_at
                 else gen_native_expr(rng, scope, depth - 1))
        members.append((label, value))
    if rng.random() < 0.8:
        arity = rng.randint(1, 3)
        names = tuple(f"v{i}" for i in range(arity))
        ctor = ULam(names, gen_native_expr(rng, scope + names, depth - 1))
    else:
        ctor = gen_native_expr(rng, scope, depth - 1)
    return UClass(rng.choice(TYPE_NAME_POOL), supers, tuple(members), ctor,
                  NATIVE)


# ---------------------------------------------------------------------------
# one-hole contexts


@dataclass(frozen=True)
class GeneratedContext:
    expr: UPyExpr
    binders: tuple[str, ...]  # in scope at the hole, outermost first


def gen_untyped_context(rng: random.Random, depth: int) -> GeneratedContext:
    expr, binders = _gen_ctx(rng, (), depth)
    return GeneratedContext(expr, binders)


def _gen_ctx(rng: random.Random, scope: tuple[str, ...],
             depth: int) -> tuple[UPyExpr, tuple[str, ...]]:
    if depth <= 0 or rng.random() < 0.12:
        return UHole(), scope
    kind = rng.choices(
        ("let_bound", "let_body", "lam_body", "app_fn", "app_arg",
         "get_subject", "set_subject", "set_value", "check",
         "class_super", "class_ctor", "class_member"),
        weights=(2, 3, 3, 2, 2, 2, 1, 1, 1, 1, 1, 1))[0]
    if kind == "let_bound":
        name = rng.choice(BINDER_POOL)
        inner, binders = _gen_ctx(rng, scope, depth - 1)
        body = gen_native_expr(rng, scope + (name,), depth - 1)
        return ULet(name, inner, body), binders
    if kind == "let_body":
        name = rng.choice(BINDER_POOL)
        bound = gen_native_expr(rng, scope, depth - 1)
        inner, binders = _gen_ctx(rng, scope + (name,), depth - 1)
        return ULet(name, bound, inner), binders
    if kind == "lam_body":
        params = tuple(rng.sample(BINDER_POOL, rng.randint(0, 2)))
        inner, binders = _gen_ctx(rng, scope + params, depth - 1)
        return ULam(params, inner), binders
    if kind == "app_fn":
        inner, binders = _gen_ctx(rng, scope, depth - 1)
        args = tuple(gen_native_expr(rng, scope, depth - 1)
                     for _ in range(rng.randint(0, 2)))
        return UApp(inner, args, NATIVE), binders
    if kind == "app_arg":
        fn = gen_native_expr(rng, scope, depth - 1)
        count = rng.randint(1, 2)
        at = rng.randrange(count)
        inner, binders = _gen_ctx(rng, scope, depth - 1)
        args = tuple(inner if i == at
                     else gen_native_expr(rng, scope, depth - 1)
                     for i in range(count))
        return UApp(fn, args, NATIVE), binders
    if kind == "get_subject":
        inner, binders = _gen_ctx(rng, scope, depth - 1)
        return UGet(inner, rng.choice(LABEL_POOL), NATIVE), binders
    if kind == "set_subject":
        inner, binders = _gen_ctx(rng, scope, depth - 1)
        value = gen_native_expr(rng, scope, depth - 1)
        return USet(inner, rng.choice(LABEL_POOL), value, NATIVE), binders
    if kind == "set_value":
        subject = gen_native_expr(rng, scope, depth - 1)
        inner, binders = _gen_ctx(rng, scope, depth - 1)
        return USet(subject, rng.choice(LABEL_POOL), inner, NATIVE), binders
    if kind == "check":
        inner, binders = _gen_ctx(rng, scope, depth - 1)
        return UCheck(inner, gen_tag(rng)), binders
    if kind == "class_super":
        inner, binders = _gen_ctx(rng, scope, depth - 1)
        cls = _gen_native_class(rng, scope, depth, None)
        return UClass(cls.name, (inner,) + cls.supers, cls.members,
                      cls.ctor, NATIVE), binders
    if kind == "class_ctor":
        inner, binders = _gen_ctx(rng, scope, depth - 1)
        cls = _gen_native_class(rng, scope, depth, None)
        return UClass(cls.name, cls.supers, cls.members, inner,
                      NATIVE), binders
    if kind == "class_member":
        inner, binders = _gen_ctx(rng, scope, depth - 1)
        return _gen_native_class(rng, scope, depth, inner), binders
    raise AssertionError(kind)
