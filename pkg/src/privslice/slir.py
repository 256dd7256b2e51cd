"""SLIR frontend: a small Jimple-like 3-address IR with a textual syntax.

The statement forms are deliberately minimal: constant and operator
assignments, calls (with and without a result), field loads/stores,
conditional and unconditional gotos, and returns. Identifiers are
dotted names; call and field targets are fully qualified. `#` starts
a line comment.

`parse_slir` / `print_slir` round-trip: parsing the canonical printout
of a program yields a structurally identical program.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import SlirParseError

Pos = tuple[int, int]  # (line, col), 1-based; (0, 0) = synthetic
_NOPOS: Pos = (0, 0)

KEYWORDS = frozenset(
    {"class", "method", "const", "op", "call", "getfield", "putfield", "if", "goto", "return"}
)


# ---------------------------------------------------------------------------
# Statements


@dataclass(frozen=True)
class ConstAssign:
    target: str
    value: Union[int, str]
    label: str | None = None
    pos: Pos = field(default=_NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class OpAssign:
    target: str
    operands: tuple[str, ...]
    label: str | None = None
    pos: Pos = field(default=_NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class CallAssign:
    target: str
    signature: str
    args: tuple[str, ...]
    label: str | None = None
    pos: Pos = field(default=_NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    signature: str
    args: tuple[str, ...]
    label: str | None = None
    pos: Pos = field(default=_NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class FieldLoad:
    target: str
    field_name: str
    label: str | None = None
    pos: Pos = field(default=_NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class FieldStore:
    field_name: str
    value: str
    label: str | None = None
    pos: Pos = field(default=_NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class If:
    cond: str
    target: str
    label: str | None = None
    pos: Pos = field(default=_NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class Goto:
    target: str
    label: str | None = None
    pos: Pos = field(default=_NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class Return:
    value: str | None = None
    label: str | None = None
    pos: Pos = field(default=_NOPOS, compare=False, repr=False)


Stmt = Union[ConstAssign, OpAssign, CallAssign, Call, FieldLoad, FieldStore, If, Goto, Return]


@dataclass(frozen=True)
class SlirMethod:
    name: str
    params: tuple[str, ...]
    statements: tuple[Stmt, ...]
    pos: Pos = field(default=_NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class SlirClass:
    name: str
    methods: tuple[SlirMethod, ...]
    pos: Pos = field(default=_NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class SlirProgram:
    classes: tuple[SlirClass, ...] = ()


def stmt_def(stmt: Stmt) -> str | None:
    """Local defined by the statement, if any."""
    if isinstance(stmt, (ConstAssign, OpAssign, CallAssign, FieldLoad)):
        return stmt.target
    return None


def stmt_uses(stmt: Stmt) -> tuple[str, ...]:
    """Locals read by the statement, in syntactic order."""
    if isinstance(stmt, OpAssign):
        return stmt.operands
    if isinstance(stmt, (CallAssign, Call)):
        return stmt.args
    if isinstance(stmt, FieldStore):
        return (stmt.value,)
    if isinstance(stmt, If):
        return (stmt.cond,)
    if isinstance(stmt, Return) and stmt.value is not None:
        return (stmt.value,)
    return ()


def stmt_field_def(stmt: Stmt) -> str | None:
    return stmt.field_name if isinstance(stmt, FieldStore) else None


def stmt_field_use(stmt: Stmt) -> str | None:
    return stmt.field_name if isinstance(stmt, FieldLoad) else None


def call_signature(stmt: Stmt) -> str | None:
    if isinstance(stmt, (Call, CallAssign)):
        return stmt.signature
    return None


def label_table(method: SlirMethod) -> dict[str, int]:
    """Label -> statement index. Assumes a validated method."""
    return {s.label: i for i, s in enumerate(method.statements) if s.label is not None}


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<name>[A-Za-z_][A-Za-z0-9_$]*(?:\.[A-Za-z_][A-Za-z0-9_$]*)*)
  | (?P<int>-?[0-9]+)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<punct>[{}(),=:])
    """,
    re.VERBOSE,
)

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}


@dataclass(frozen=True)
class _Token:
    kind: str  # name | int | string | punct | newline | eof
    value: str
    line: int
    col: int


def _unescape(raw: str, line: int, col: int) -> str:
    out: list[str] = []
    i = 1
    while i < len(raw) - 1:
        ch = raw[i]
        if ch == "\\":
            esc = raw[i + 1]
            if esc not in _ESCAPES:
                raise SlirParseError(f"unknown escape '\\{esc}' in string literal", line, col)
            out.append(_ESCAPES[esc])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")


def _tokenize(text: str) -> Iterator[_Token]:
    line, col = 1, 1
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise SlirParseError(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup or ""
        value = m.group()
        if kind == "newline":
            yield _Token("newline", value, line, col)
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(value)
        else:
            yield _Token(kind, value, line, col)
            col += len(value)
        i = m.end()
    yield _Token("eof", "", line, col)


# ---------------------------------------------------------------------------
# Parser

_STMT_STARTS = ("identifier", "'call'", "'putfield'", "'if'", "'goto'", "'return'")


class _Parser:
    def __init__(self, text: str):
        self._tokens = list(_tokenize(text))
        self._i = 0

    def _peek(self, ahead: int = 0) -> _Token:
        j = min(self._i + ahead, len(self._tokens) - 1)
        return self._tokens[j]

    def _next(self) -> _Token:
        tok = self._tokens[self._i]
        if tok.kind != "eof":
            self._i += 1
        return tok

    def _skip_newlines(self) -> None:
        while self._peek().kind == "newline":
            self._next()

    def _error(self, message: str, tok: _Token, expected: tuple[str, ...] = ()) -> SlirParseError:
        return SlirParseError(message, tok.line, tok.col, expected)

    def _expect_punct(self, punct: str) -> _Token:
        tok = self._peek()
        if tok.kind != "punct" or tok.value != punct:
            raise self._error(f"found {_describe(tok)}", tok, (f"'{punct}'",))
        return self._next()

    def _expect_keyword(self, word: str) -> _Token:
        tok = self._peek()
        if tok.kind != "name" or tok.value != word:
            raise self._error(f"found {_describe(tok)}", tok, (f"'{word}'",))
        return self._next()

    def _expect_qname(self, what: str) -> _Token:
        tok = self._peek()
        if tok.kind != "name" or tok.value in KEYWORDS:
            raise self._error(f"found {_describe(tok)}", tok, (what,))
        return self._next()

    def _expect_ident(self, what: str) -> _Token:
        tok = self._expect_qname(what)
        if "." in tok.value:
            raise SlirParseError(f"{what} must not be dotted: '{tok.value}'", tok.line, tok.col)
        return tok

    def _at_punct(self, punct: str) -> bool:
        tok = self._peek()
        return tok.kind == "punct" and tok.value == punct

    def _end_statement(self) -> None:
        tok = self._peek()
        if tok.kind == "newline":
            self._skip_newlines()
        elif not self._at_punct("}"):
            raise self._error(f"found {_describe(tok)}", tok, ("end of line",))

    # Grammar productions ---------------------------------------------------

    def parse_program(self) -> SlirProgram:
        classes: list[SlirClass] = []
        seen: dict[str, SlirClass] = {}
        self._skip_newlines()
        while self._peek().kind != "eof":
            cls = self._parse_class()
            if cls.name in seen:
                raise SlirParseError(f"duplicate class '{cls.name}'", cls.pos[0], cls.pos[1])
            seen[cls.name] = cls
            classes.append(cls)
            self._skip_newlines()
        return SlirProgram(tuple(classes))

    def _parse_class(self) -> SlirClass:
        kw = self._expect_keyword("class")
        name = self._expect_qname("class name")
        self._expect_punct("{")
        self._skip_newlines()
        methods: list[SlirMethod] = []
        names: set[str] = set()
        while not self._at_punct("}"):
            meth = self._parse_method()
            if meth.name in names:
                raise SlirParseError(
                    f"duplicate method '{meth.name}' in class '{name.value}'",
                    meth.pos[0],
                    meth.pos[1],
                )
            names.add(meth.name)
            methods.append(meth)
            self._skip_newlines()
        self._expect_punct("}")
        return SlirClass(name.value, tuple(methods), pos=(kw.line, kw.col))

    def _parse_method(self) -> SlirMethod:
        kw = self._expect_keyword("method")
        name = self._expect_ident("method name")
        self._expect_punct("(")
        params: list[str] = []
        if not self._at_punct(")"):
            params.append(self._expect_ident("parameter name").value)
            while self._at_punct(","):
                self._next()
                params.append(self._expect_ident("parameter name").value)
        self._expect_punct(")")
        self._expect_punct("{")
        self._skip_newlines()
        statements: list[Stmt] = []
        labels: dict[str, int] = {}
        while not self._at_punct("}"):
            stmt = self._parse_line()
            if stmt.label is not None:
                if stmt.label in labels:
                    raise SlirParseError(f"duplicate label '{stmt.label}'", stmt.pos[0], stmt.pos[1])
                labels[stmt.label] = len(statements)
            statements.append(stmt)
        self._expect_punct("}")
        method = SlirMethod(name.value, tuple(params), tuple(statements), pos=(kw.line, kw.col))
        _validate_method(method, labels)
        return method

    def _parse_line(self) -> Stmt:
        label: str | None = None
        tok = self._peek()
        if (
            tok.kind == "name"
            and tok.value not in KEYWORDS
            and self._peek(1).kind == "punct"
            and self._peek(1).value == ":"
        ):
            label_tok = self._expect_ident("label")
            label = label_tok.value
            self._next()  # ':'
        stmt = self._parse_stmt(label)
        self._end_statement()
        return stmt

    def _parse_stmt(self, label: str | None) -> Stmt:
        tok = self._peek()
        if tok.kind != "name":
            raise self._error(f"found {_describe(tok)}", tok, _STMT_STARTS)
        pos = (tok.line, tok.col)
        if tok.value == "call":
            self._next()
            signature = self._expect_qname("call signature")
            args = self._parse_arg_list()
            return Call(signature.value, args, label, pos)
        if tok.value == "putfield":
            self._next()
            fld = self._expect_qname("field name")
            value = self._expect_ident("local name")
            return FieldStore(fld.value, value.value, label, pos)
        if tok.value == "if":
            self._next()
            cond = self._expect_ident("condition local")
            self._expect_keyword("goto")
            target = self._expect_ident("label")
            return If(cond.value, target.value, label, pos)
        if tok.value == "goto":
            self._next()
            target = self._expect_ident("label")
            return Goto(target.value, label, pos)
        if tok.value == "return":
            self._next()
            nxt = self._peek()
            if nxt.kind == "name" and nxt.value not in KEYWORDS:
                value = self._expect_ident("local name")
                return Return(value.value, label, pos)
            return Return(None, label, pos)
        if tok.value in KEYWORDS:
            raise self._error(f"found {_describe(tok)}", tok, _STMT_STARTS)
        # Assignment forms: ident '=' ...
        target = self._expect_ident("local name")
        self._expect_punct("=")
        head = self._peek()
        if head.kind != "name":
            raise self._error(f"found {_describe(head)}", head, ("'const'", "'op'", "'call'", "'getfield'"))
        if head.value == "const":
            self._next()
            lit = self._peek()
            if lit.kind == "int":
                self._next()
                return ConstAssign(target.value, int(lit.value), label, pos)
            if lit.kind == "string":
                self._next()
                return ConstAssign(target.value, _unescape(lit.value, lit.line, lit.col), label, pos)
            raise self._error(f"found {_describe(lit)}", lit, ("literal",))
        if head.value == "op":
            self._next()
            operands = self._parse_arg_list()
            if not operands:
                raise SlirParseError("op needs at least one operand", head.line, head.col)
            return OpAssign(target.value, operands, label, pos)
        if head.value == "call":
            self._next()
            signature = self._expect_qname("call signature")
            args = self._parse_arg_list()
            return CallAssign(target.value, signature.value, args, label, pos)
        if head.value == "getfield":
            self._next()
            fld = self._expect_qname("field name")
            return FieldLoad(target.value, fld.value, label, pos)
        raise self._error(f"found {_describe(head)}", head, ("'const'", "'op'", "'call'", "'getfield'"))

    def _parse_arg_list(self) -> tuple[str, ...]:
        self._expect_punct("(")
        args: list[str] = []
        if not self._at_punct(")"):
            args.append(self._expect_ident("local name").value)
            while self._at_punct(","):
                self._next()
                args.append(self._expect_ident("local name").value)
        self._expect_punct(")")
        return tuple(args)


def _describe(tok: _Token) -> str:
    if tok.kind == "eof":
        return "end of input"
    if tok.kind == "newline":
        return "end of line"
    return f"'{tok.value}'"


def _validate_method(method: SlirMethod, labels: dict[str, int]) -> None:
    defined: set[str] = set(method.params)
    for stmt in method.statements:
        if isinstance(stmt, (If, Goto)):
            if stmt.target not in labels:
                raise SlirParseError(f"undefined label '{stmt.target}'", stmt.pos[0], stmt.pos[1])
        for local in stmt_uses(stmt):
            if local not in defined:
                raise SlirParseError(
                    f"local '{local}' read before any definition", stmt.pos[0], stmt.pos[1]
                )
        d = stmt_def(stmt)
        if d is not None:
            defined.add(d)


def parse_slir(text: str) -> SlirProgram:
    """Parse an SLIR document. Raises SlirParseError on the first defect."""
    return _Parser(text).parse_program()


# ---------------------------------------------------------------------------
# Printer

def format_stmt(stmt: Stmt, with_label: bool = True) -> str:
    if isinstance(stmt, ConstAssign):
        if isinstance(stmt.value, str):
            core = f'{stmt.target} = const "{_escape(stmt.value)}"'
        else:
            core = f"{stmt.target} = const {stmt.value}"
    elif isinstance(stmt, OpAssign):
        core = f"{stmt.target} = op({', '.join(stmt.operands)})"
    elif isinstance(stmt, CallAssign):
        core = f"{stmt.target} = call {stmt.signature}({', '.join(stmt.args)})"
    elif isinstance(stmt, Call):
        core = f"call {stmt.signature}({', '.join(stmt.args)})"
    elif isinstance(stmt, FieldLoad):
        core = f"{stmt.target} = getfield {stmt.field_name}"
    elif isinstance(stmt, FieldStore):
        core = f"putfield {stmt.field_name} {stmt.value}"
    elif isinstance(stmt, If):
        core = f"if {stmt.cond} goto {stmt.target}"
    elif isinstance(stmt, Goto):
        core = f"goto {stmt.target}"
    elif isinstance(stmt, Return):
        core = "return" if stmt.value is None else f"return {stmt.value}"
    else:  # pragma: no cover - exhaustive over Stmt
        raise TypeError(f"not a statement: {stmt!r}")
    if with_label and stmt.label is not None:
        return f"{stmt.label}: {core}"
    return core


def print_slir(program: SlirProgram) -> str:
    """Canonical form: 2-space indent per level, one statement per line, LF."""
    lines: list[str] = []
    for cls in program.classes:
        lines.append(f"class {cls.name} {{")
        for method in cls.methods:
            lines.append(f"  method {method.name}({', '.join(method.params)}) {{")
            for stmt in method.statements:
                lines.append(f"    {format_stmt(stmt)}")
            lines.append("  }")
        lines.append("}")
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
