"""Concrete syntax for both languages.

One lexer serves both grammars; keywords are reserved in both so a
program never means different things to the two parsers. Elimination
and creation forms parsed from source default to the native label; a
postfix exclamation mark (and class! for class expressions) marks the
translated label, which the printer emits and this parser accepts for
round-tripping. Runtime addresses (@n) and the context hole (HOLE)
parse only under explicit flags.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    CLOSED,
    OPEN,
    AnthillTerm,
    AnthillType,
    App,
    AttrTypes,
    Class,
    ClassDecl,
    Constructor,
    Fun,
    Get,
    Let,
    Method,
    Object,
    Set,
    Var,
    IntLit,
    DYN,
    INT,
)
from .upython import (
    NATIVE,
    TRANSLATED,
    ClassTag,
    FunTag,
    ObjTag,
    Tag,
    UAddr,
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

KEYWORDS = frozenset({
    "let", "in", "fun", "meth", "ctor", "init", "class", "obj",
    "open", "closed", "dyn", "int", "lambda", "check", "pyobj", "any",
    "HOLE",
})


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int) -> None:
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # NUM, IDENT, KW, PUNCT, EOF
    text: str
    line: int
    col: int


_PUNCT2 = ("->",)
_PUNCT1 = "(){}[],;:.=!@"


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "$":
            raise ParseError("the $ namespace is reserved for runtime "
                             "binders", line, col)
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("NUM", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "KW" if word in KEYWORDS else "IDENT"
            tokens.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        if text[i:i + 2] in _PUNCT2:
            tokens.append(Token("PUNCT", text[i:i + 2], line, col))
            i += 2
            col += 2
            continue
        if c in _PUNCT1:
            tokens.append(Token("PUNCT", c, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        t = self.peek()
        if t.kind != "EOF":
            self.pos += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.next()
        return None

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.peek()
        if not self.at(kind, text):
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {t.text or t.kind!r}",
                             t.line, t.col)
        return self.next()

    def fail(self, message: str) -> ParseError:
        t = self.peek()
        return ParseError(message, t.line, t.col)

    def expect_end(self) -> None:
        t = self.peek()
        if t.kind != "EOF":
            raise ParseError(f"unexpected trailing input {t.text!r}",
                             t.line, t.col)

    def ident(self, what: str = "identifier") -> str:
        t = self.peek()
        if t.kind != "IDENT":
            raise ParseError(f"expected {what}, found {t.text or t.kind!r}",
                             t.line, t.col)
        self.next()
        return t.text

    def binder(self) -> str:
        # a binder may be the wildcard; a reference may not
        return self.ident("binder")

    def reference(self) -> str:
        t = self.peek()
        name = self.ident("variable")
        if name == "_":
            raise ParseError("the wildcard _ cannot be referenced",
                             t.line, t.col)
        return name


# ---------------------------------------------------------------------------
# source language


class AnthillParser(_Parser):
    def parse_program(self) -> AnthillTerm:
        t = self.term()
        self.expect_end()
        return t

    def parse_type_only(self) -> AnthillType:
        ty = self.type_()
        self.expect_end()
        return ty

    def term(self) -> AnthillTerm:
        if self.at("KW", "let"):
            return self.let_term()
        if self.at("KW", "fun"):
            return self.fun_term()
        if self.at("KW", "class"):
            return self.class_term()
        return self.postfix_term()

    def let_term(self) -> AnthillTerm:
        self.expect("KW", "let")
        name = self.binder()
        self.expect("PUNCT", "=")
        bound = self.term()
        self.expect("KW", "in")
        body = self.term()
        return Let(name, bound, body)

    def fun_term(self) -> AnthillTerm:
        self.expect("KW", "fun")
        self.expect("PUNCT", "(")
        params = self.params()
        self.expect("PUNCT", ")")
        self.expect("PUNCT", "->")
        ret = self.type_()
        self.expect("PUNCT", ":")
        body = self.term()
        return Fun(params, ret, body)

    def params(self) -> tuple:
        params = []
        while not self.at("PUNCT", ")"):
            if params:
                self.expect("PUNCT", ",")
            name = self.binder()
            self.expect("PUNCT", ":")
            params.append((name, self.type_()))
        return tuple(params)

    def class_term(self) -> AnthillTerm:
        self.expect("KW", "class")
        name = self.ident("class name")
        self.expect("PUNCT", "(")
        supers = []
        while not self.at("PUNCT", ")"):
            if supers:
                self.expect("PUNCT", ",")
            supers.append(self.term())
        self.expect("PUNCT", ")")
        self.expect("PUNCT", "[")
        openness = self.openness()
        self.expect("PUNCT", ";")
        class_attrs = self.attr_types()
        self.expect("PUNCT", ";")
        instance_attrs = self.attr_types()
        self.expect("PUNCT", "]")
        self.expect("PUNCT", "{")
        methods: list[Method] = []
        fields: list[tuple[str, AnthillTerm]] = []
        ctor = None
        while True:
            if self.at("KW", "init"):
                self.expect("KW", "init")
                self.expect("PUNCT", "=")
                ctor = self.ctor_term()
                break
            label_tok = self.peek()
            label = self.ident("member label or init")
            self.expect("PUNCT", "=")
            if self.at("KW", "meth"):
                methods.append(self.meth_term(label))
            else:
                fields.append((label, self.term()))
            self.expect("PUNCT", ";")
            if self.at("PUNCT", "}"):
                raise ParseError("class body must end with an init clause",
                                 label_tok.line, label_tok.col)
        self.expect("PUNCT", "}")
        try:
            return ClassDecl(name, openness, class_attrs, instance_attrs,
                             tuple(supers), tuple(methods), tuple(fields),
                             ctor)
        except ValueError as exc:
            raise self.fail(str(exc)) from None

    def meth_term(self, label: str) -> Method:
        self.expect("KW", "meth")
        self.expect("PUNCT", "(")
        receiver = self.binder()
        params = []
        while not self.at("PUNCT", ")"):
            self.expect("PUNCT", ",")
            pname = self.binder()
            self.expect("PUNCT", ":")
            params.append((pname, self.type_()))
        self.expect("PUNCT", ")")
        self.expect("PUNCT", "->")
        ret = self.type_()
        self.expect("PUNCT", ":")
        body = self.term()
        return Method(label, receiver, tuple(params), ret, body)

    def ctor_term(self) -> Constructor:
        self.expect("KW", "ctor")
        self.expect("PUNCT", "(")
        receiver = self.binder()
        params = []
        while not self.at("PUNCT", ")"):
            self.expect("PUNCT", ",")
            pname = self.binder()
            self.expect("PUNCT", ":")
            params.append((pname, self.type_()))
        self.expect("PUNCT", ")")
        self.expect("PUNCT", ":")
        body = self.term()
        return Constructor(receiver, tuple(params), body)

    def postfix_term(self) -> AnthillTerm:
        e = self.atom()
        while True:
            if self.at("PUNCT", "("):
                self.next()
                args = []
                while not self.at("PUNCT", ")"):
                    if args:
                        self.expect("PUNCT", ",")
                    args.append(self.term())
                self.expect("PUNCT", ")")
                e = App(e, tuple(args))
                continue
            if self.at("PUNCT", "."):
                self.next()
                attr = self.ident("attribute label")
                if self.accept("PUNCT", "="):
                    return Set(e, attr, self.term())
                e = Get(e, attr)
                continue
            return e

    def atom(self) -> AnthillTerm:
        if self.at("NUM"):
            return IntLit(int(self.next().text))
        if self.at("PUNCT", "("):
            self.next()
            inner = self.term()
            self.expect("PUNCT", ")")
            return inner
        if self.at("IDENT"):
            return Var(self.reference())
        raise self.fail("expected a term")

    def openness(self):
        if self.accept("KW", "open"):
            return OPEN
        if self.accept("KW", "closed"):
            return CLOSED
        raise self.fail("expected 'open' or 'closed'")

    def attr_types(self) -> AttrTypes:
        self.expect("PUNCT", "{")
        entries = []
        while not self.at("PUNCT", "}"):
            if entries:
                self.expect("PUNCT", ",")
            tok = self.peek()
            label = self.ident("attribute label")
            self.expect("PUNCT", ":")
            entries.append((label, self.type_()))
            if any(l == label for l, _ in entries[:-1]):
                raise ParseError(f"duplicate attribute label {label!r}",
                                 tok.line, tok.col)
        self.expect("PUNCT", "}")
        return AttrTypes(entries)

    def type_(self) -> AnthillType:
        if self.accept("KW", "dyn"):
            return DYN
        if self.accept("KW", "int"):
            return INT
        if self.at("PUNCT", "("):
            self.next()
            params = []
            while not self.at("PUNCT", ")"):
                if params:
                    self.expect("PUNCT", ",")
                params.append(self.type_())
            self.expect("PUNCT", ")")
            self.expect("PUNCT", "->")
            from .core import Function
            return Function(tuple(params), self.type_())
        if self.accept("KW", "obj"):
            name = self.ident("object type name")
            openness = self.openness()
            return Object(name, openness, self.attr_types())
        if self.accept("KW", "class"):
            name = self.ident("class type name")
            openness = self.openness()
            class_attrs = self.attr_types()
            instance_attrs = self.attr_types()
            self.expect("PUNCT", "(")
            ctor_params = []
            while not self.at("PUNCT", ")"):
                if ctor_params:
                    self.expect("PUNCT", ",")
                ctor_params.append(self.type_())
            self.expect("PUNCT", ")")
            return Class(name, openness, class_attrs, instance_attrs,
                         tuple(ctor_params))
        raise self.fail("expected a type")


# ---------------------------------------------------------------------------
# target language


class UPythonParser(_Parser):
    def __init__(self, text: str, allow_hole: bool = False,
                 allow_addresses: bool = False) -> None:
        super().__init__(text)
        self.allow_hole = allow_hole
        self.allow_addresses = allow_addresses

    def parse_program(self) -> UPyExpr:
        e = self.expr()
        self.expect_end()
        return e

    def parse_tag_only(self) -> Tag:
        s = self.tag()
        self.expect_end()
        return s

    def expr(self) -> UPyExpr:
        if self.at("KW", "let"):
            self.next()
            name = self.binder()
            self.expect("PUNCT", "=")
            bound = self.expr()
            self.expect("KW", "in")
            return ULet(name, bound, self.expr())
        if self.at("KW", "lambda"):
            self.next()
            self.expect("PUNCT", "(")
            params = []
            while not self.at("PUNCT", ")"):
                if params:
                    self.expect("PUNCT", ",")
                params.append(self.binder())
            self.expect("PUNCT", ")")
            self.expect("PUNCT", ":")
            return ULam(tuple(params), self.expr())
        if self.at("KW", "class"):
            return self.class_expr()
        return self.postfix_expr()

    def class_expr(self) -> UPyExpr:
        self.expect("KW", "class")
        label = TRANSLATED if self.accept("PUNCT", "!") else NATIVE
        name = self.ident("class name")
        self.expect("PUNCT", "(")
        supers = []
        while not self.at("PUNCT", ")"):
            if supers:
                self.expect("PUNCT", ",")
            supers.append(self.expr())
        self.expect("PUNCT", ")")
        self.expect("PUNCT", "{")
        members = []
        while not self.at("PUNCT", "}"):
            if members:
                self.expect("PUNCT", ",")
            tok = self.peek()
            mlabel = self.ident("member label")
            if any(l == mlabel for l, _ in members):
                raise ParseError(f"duplicate member label {mlabel!r}",
                                 tok.line, tok.col)
            self.expect("PUNCT", "=")
            members.append((mlabel, self.expr()))
        self.expect("PUNCT", "}")
        self.expect("KW", "init")
        ctor = self.expr()
        return UClass(name, tuple(supers), tuple(members), ctor, label)

    def postfix_expr(self) -> UPyExpr:
        e = self.atom()
        while True:
            if self.at("PUNCT", "("):
                self.next()
                args = []
                while not self.at("PUNCT", ")"):
                    if args:
                        self.expect("PUNCT", ",")
                    args.append(self.expr())
                self.expect("PUNCT", ")")
                label = TRANSLATED if self.accept("PUNCT", "!") else NATIVE
                e = UApp(e, tuple(args), label)
                continue
            if self.at("PUNCT", "."):
                self.next()
                attr = self.ident("attribute label")
                label = TRANSLATED if self.accept("PUNCT", "!") else NATIVE
                if self.accept("PUNCT", "="):
                    return USet(e, attr, self.expr(), label)
                e = UGet(e, attr, label)
                continue
            return e

    def atom(self) -> UPyExpr:
        if self.at("NUM"):
            return UInt(int(self.next().text))
        if self.at("PUNCT", "("):
            self.next()
            inner = self.expr()
            self.expect("PUNCT", ")")
            return inner
        if self.at("KW", "check"):
            self.next()
            self.expect("PUNCT", "(")
            subject = self.expr()
            self.expect("PUNCT", ",")
            tag = self.tag()
            self.expect("PUNCT", ")")
            return UCheck(subject, tag)
        if self.at("PUNCT", "@"):
            tok = self.peek()
            if not self.allow_addresses:
                raise ParseError("addresses are not allowed in source",
                                 tok.line, tok.col)
            self.next()
            return UAddr(int(self.expect("NUM").text))
        if self.at("KW", "HOLE"):
            tok = self.peek()
            if not self.allow_hole:
                raise ParseError("HOLE is only allowed in context files",
                                 tok.line, tok.col)
            self.next()
            return UHole()
        if self.at("IDENT"):
            return UVar(self.reference())
        raise self.fail("expected an expression")

    def tag(self) -> Tag:
        if self.accept("KW", "pyobj"):
            return PYOBJ
        if self.accept("KW", "int"):
            return INT_TAG
        if self.accept("KW", "fun"):
            self.expect("PUNCT", "[")
            arity = int(self.expect("NUM").text)
            self.expect("PUNCT", "]")
            return FunTag(arity)
        if self.accept("KW", "obj"):
            return ObjTag(self.tag_labels())
        if self.accept("KW", "class"):
            labels = self.tag_labels()
            self.expect("PUNCT", "[")
            if self.accept("KW", "any"):
                arity = None
            else:
                arity = int(self.expect("NUM").text)
            self.expect("PUNCT", "]")
            return ClassTag(labels, arity)
        raise self.fail("expected a tag")

    def tag_labels(self) -> tuple[str, ...]:
        self.expect("PUNCT", "{")
        labels = []
        while not self.at("PUNCT", "}"):
            if labels:
                self.expect("PUNCT", ",")
            labels.append(self.ident("label"))
        self.expect("PUNCT", "}")
        return tuple(labels)


# ---------------------------------------------------------------------------
# entry points


def parse_anthill(text: str) -> AnthillTerm:
    return AnthillParser(text).parse_program()


def parse_anthill_type(text: str) -> AnthillType:
    return AnthillParser(text).parse_type_only()


def parse_upython(text: str, allow_hole: bool = False,
                  allow_addresses: bool = False) -> UPyExpr:
    return UPythonParser(text, allow_hole, allow_addresses).parse_program()


def parse_tag(text: str) -> Tag:
    return UPythonParser(text).parse_tag_only()
