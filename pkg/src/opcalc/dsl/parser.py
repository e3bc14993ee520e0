"""Tokenizer and recursive-descent parser for opcalc scripts.

Grammar (statements end with ``;``, ``#`` starts a comment)::

    statement := "model" KIND { NAME "=" value }
               | "let" NAME "=" ( list | family | poly | op-expr )
               | COMMAND { NAME "=" value | op-expr | list }
    op-expr   := factor { "*" factor }          factor := NAME [ "^" INT ]
    value     := rational | list | NAME         rational := ["-"] INT [ "/" INT ]
    list      := "[" [ (rational | list) { "," (rational | list) } ] "]"
    family    := "{" [ entry { "," entry } ] "}"    entry := op-expr [ ":" op-expr ]
    poly      := ["-"] term { ("+" | "-") term }
    term      := rational [ "*" mono ] | mono   mono := VAR [ "^" INT ] { "*" VAR [ "^" INT ] }

Polynomial variables are ``x`` and ``x1``, ``x2``, ...; a ``let`` right-hand
side that mentions one of them, contains ``+``, or starts with a number or a
sign is read as a polynomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import OpcalcError
from .syntax import (
    COMMANDS, Command, FamilyEntry, FamilyLit, ListLit, Let, Loc, ModelDecl, Num, OpAtom,
    OpCompose, OpPower, Param, PolyLit, Positional, Script, Term,
)

_TOKEN_RE = re.compile(r"""
    (?P<NL>\n)
  | (?P<WS>[ \t\r\f]+)
  | (?P<COMMENT>\#[^\n]*)
  | (?P<NUM>\d+)
  | (?P<IDENT>check-suite|[A-Za-z_][A-Za-z0-9_]*)
  | (?P<PUNCT>[;=\[\]{},:*^+\-/])
  | (?P<ERR>.)
""", re.VERBOSE)

POLY_VAR = re.compile(r"x\d*\Z")
MAX_DEPTH = 64


class ScriptSyntaxError(OpcalcError):
    def __init__(self, message: str, loc: Loc, expected: tuple[str, ...] = ()):
        self.loc = loc
        self.expected = expected
        detail = f"{loc}: {message}"
        if expected:
            detail += f" (expected {', '.join(expected)})"
        super().__init__(detail)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    loc: Loc


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        loc = Loc(line, m.start() - line_start + 1)
        if kind == "NL":
            line += 1
            line_start = m.end()
        elif kind in ("WS", "COMMENT"):
            continue
        elif kind == "ERR":
            raise ScriptSyntaxError(f"unexpected character {m.group()!r}", loc)
        else:
            tokens.append(Token(kind, m.group(), loc))
    tokens.append(Token("EOF", "", Loc(line, len(text) - line_start + 1)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("PUNCT", "IDENT") and self.tok.text == text

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.pos += 1
        return t

    def fail(self, message: str, *expected: str):
        found = "end of input" if self.tok.kind == "EOF" else repr(self.tok.text)
        raise ScriptSyntaxError(f"{message}, found {found}", self.tok.loc, expected)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}", repr(text))
        return self.advance()

    def ident(self, what: str = "a name") -> str:
        if self.tok.kind != "IDENT":
            self.fail(f"expected {what}", what)
        return self.advance().text

    def integer(self) -> int:
        if self.tok.kind != "NUM":
            self.fail("expected an integer", "integer")
        return int(self.advance().text)

    # -- statements --

    def script(self) -> Script:
        stmts = []
        while self.tok.kind != "EOF":
            stmts.append(self.statement())
            self.expect(";")
        return Script(tuple(stmts))

    def statement(self):
        loc = self.tok.loc
        if self.at("model"):
            self.advance()
            kind = self.ident("a model kind")
            params = []
            while not self.at(";"):
                if self.tok.kind == "EOF":
                    self.fail("unterminated statement", "';'")
                params.append(self.param())
            return ModelDecl(kind, tuple(params), loc)
        if self.at("let"):
            self.advance()
            name = self.ident()
            self.expect("=")
            return Let(name, self.rhs(), loc)
        if self.tok.kind == "IDENT" and self.tok.text in COMMANDS:
            name = self.advance().text
            args = []
            while not self.at(";"):
                if self.tok.kind == "EOF":
                    self.fail("unterminated statement", "';'")
                args.append(self.arg())
            return Command(name, tuple(args), loc)
        self.fail("expected a statement", "'model'", "'let'", "a command")

    def param(self) -> Param:
        name = self.ident("a parameter name")
        self.expect("=")
        return Param(name, self.value())

    def arg(self):
        if self.tok.kind == "IDENT" and self.toks[self.pos + 1].text == "=":
            return self.param()
        if self.at("["):
            return Positional(self.list_lit())
        if self.tok.kind == "NUM" or self.at("-"):
            return Positional(self.rational())
        if self.tok.kind == "IDENT":
            return Positional(self.op_expr())
        self.fail("expected an argument", "name", "name=value", "list")

    def value(self):
        if self.at("["):
            return self.list_lit()
        if self.tok.kind == "IDENT":
            return OpAtom(self.advance().text)
        return self.rational()

    def rational(self) -> Num:
        sign = -1 if self.at("-") else 1
        if sign < 0:
            self.advance()
        num = self.integer()
        den = 1
        if self.at("/"):
            self.advance()
            den = self.integer()
            if den == 0:
                raise ScriptSyntaxError("zero denominator", self.toks[self.pos - 1].loc)
        return Num(Fraction(sign * num, den))

    def list_lit(self) -> ListLit:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.fail("lists nested too deeply")
        self.expect("[")
        items = []
        if not self.at("]"):
            while True:
                items.append(self.list_lit() if self.at("[") else self.rational())
                if not self.at(","):
                    break
                self.advance()
        self.expect("]")
        self.depth -= 1
        return ListLit(tuple(items))

    # -- right-hand sides --

    def rhs(self):
        if self.at("["):
            return self.list_lit()
        if self.at("{"):
            return self.family()
        end = self.pos
        while self.toks[end].kind != "EOF" and self.toks[end].text != ";":
            end += 1
        window = self.toks[self.pos:end]
        starts_numeric = bool(window) and (window[0].kind == "NUM" or window[0].text == "-")
        if starts_numeric or any(t.text == "+" or (t.kind == "IDENT" and POLY_VAR.match(t.text))
                                 for t in window):
            return self.poly()
        return self.op_expr()

    def op_factor(self):
        name = self.ident("an operator name")
        if self.at("^"):
            self.advance()
            return OpPower(OpAtom(name), self.integer())
        return OpAtom(name)

    def op_expr(self):
        expr = self.op_factor()
        while self.at("*"):
            self.advance()
            expr = OpCompose(expr, self.op_factor())
        return expr

    def family(self) -> FamilyLit:
        self.expect("{")
        entries = []
        if not self.at("}"):
            while True:
                member = self.op_expr()
                inverse = None
                if self.at(":"):
                    self.advance()
                    inverse = self.op_expr()
                entries.append(FamilyEntry(member, inverse))
                if not self.at(","):
                    break
                self.advance()
        self.expect("}")
        return FamilyLit(tuple(entries))

    def poly(self) -> PolyLit:
        terms = []
        sign = 1
        if self.at("-"):
            self.advance()
            sign = -1
        while True:
            terms.append(self.term(sign))
            if self.at("+"):
                sign = 1
            elif self.at("-"):
                sign = -1
            else:
                break
            self.advance()
        return PolyLit(tuple(terms))

    def term(self, sign: int) -> Term:
        coef = Fraction(sign)
        if self.tok.kind == "NUM":
            coef *= self.rational().value
            if not self.at("*"):
                return Term(coef, ())
            self.advance()
        factors = [self.poly_factor()]
        while self.at("*"):
            self.advance()
            factors.append(self.poly_factor())
        return Term(coef, tuple(factors))

    def poly_factor(self) -> tuple[str, int]:
        if self.tok.kind != "IDENT" or not POLY_VAR.match(self.tok.text):
            self.fail("expected a polynomial variable", "x", "x1", "x2")
        var = self.advance().text
        if self.at("^"):
            self.advance()
            return var, self.integer()
        return var, 1


def parse(text: str) -> Script:
    """Parse a script; any failure surfaces as :class:`ScriptSyntaxError`."""
    try:
        return _Parser(tokenize(text)).script()
    except ScriptSyntaxError:
        raise
    except (RecursionError, ValueError, IndexError) as exc:
        raise ScriptSyntaxError(f"malformed input: {exc}", Loc(1, 1)) from None
