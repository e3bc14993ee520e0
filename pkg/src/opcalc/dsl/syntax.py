"""AST nodes for opcalc scripts and the canonical pretty-printer.

Source locations are carried on every statement but excluded from equality,
so ``parse(pretty(parse(text))) == parse(text)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from ..ratlin import render

COMMANDS = (
    "apply", "taylor", "degree", "fdegree", "decompose", "basis", "constants", "pn",
    "effective", "proper", "weak", "check-suite",
)


@dataclass(frozen=True)
class Loc:
    line: int
    col: int

    def __str__(self) -> str:
        return f"line {self.line}, column {self.col}"


NOWHERE = Loc(0, 0)


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class ListLit:
    items: tuple  # of Num | ListLit


@dataclass(frozen=True)
class OpAtom:
    name: str


@dataclass(frozen=True)
class OpPower:
    base: OpAtom
    exponent: int


@dataclass(frozen=True)
class OpCompose:
    left: "OpExpr"
    right: "OpExpr"


OpExpr = Union[OpAtom, OpPower, OpCompose]


@dataclass(frozen=True)
class Term:
    coef: Fraction
    factors: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class PolyLit:
    terms: tuple[Term, ...]


@dataclass(frozen=True)
class FamilyEntry:
    member: OpExpr
    inverse: OpExpr | None


@dataclass(frozen=True)
class FamilyLit:
    entries: tuple[FamilyEntry, ...]


Value = Union[Num, ListLit, OpAtom]
Expr = Union[OpExpr, ListLit, PolyLit, FamilyLit, Num]


@dataclass(frozen=True)
class Param:
    name: str
    value: Value


@dataclass(frozen=True)
class Positional:
    expr: Expr


Arg = Union[Param, Positional]


@dataclass(frozen=True)
class ModelDecl:
    kind: str
    params: tuple[Param, ...]
    loc: Loc = field(default=NOWHERE, compare=False)


@dataclass(frozen=True)
class Let:
    name: str
    value: Expr
    loc: Loc = field(default=NOWHERE, compare=False)


@dataclass(frozen=True)
class Command:
    name: str
    args: tuple[Arg, ...]
    loc: Loc = field(default=NOWHERE, compare=False)

    @property
    def positional(self) -> list[Expr]:
        return [a.expr for a in self.args if isinstance(a, Positional)]

    @property
    def named(self) -> dict[str, Value]:
        return {a.name: a.value for a in self.args if isinstance(a, Param)}


Statement = Union[ModelDecl, Let, Command]


@dataclass(frozen=True)
class Script:
    statements: tuple[Statement, ...]


# --- printing ------------------------------------------------------------------

def pretty_expr(e) -> str:
    if isinstance(e, Num):
        return render(e.value)
    if isinstance(e, ListLit):
        return "[" + ", ".join(pretty_expr(i) for i in e.items) + "]"
    if isinstance(e, OpAtom):
        return e.name
    if isinstance(e, OpPower):
        return f"{e.base.name}^{e.exponent}"
    if isinstance(e, OpCompose):
        return f"{pretty_expr(e.left)}*{pretty_expr(e.right)}"
    if isinstance(e, PolyLit):
        return _pretty_poly(e)
    if isinstance(e, FamilyLit):
        parts = []
        for entry in e.entries:
            s = pretty_expr(entry.member)
            if entry.inverse is not None:
                s += ": " + pretty_expr(entry.inverse)
            parts.append(s)
        return "{" + ", ".join(parts) + "}"
    raise TypeError(f"cannot print {e!r}")


def _pretty_term(coef: Fraction, factors) -> str:
    mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in factors)
    if not mono:
        return render(coef)
    if coef == 1:
        return mono
    return f"{render(coef)}*{mono}"


def _pretty_poly(p: PolyLit) -> str:
    out = ""
    for i, t in enumerate(p.terms):
        body = _pretty_term(abs(t.coef), t.factors)
        if i == 0:
            out = ("-" if t.coef < 0 else "") + body
        else:
            out += (" - " if t.coef < 0 else " + ") + body
    return out


def pretty_arg(a: Arg) -> str:
    if isinstance(a, Param):
        return f"{a.name}={pretty_expr(a.value)}"
    return pretty_expr(a.expr)


def pretty_statement(s: Statement) -> str:
    if isinstance(s, ModelDecl):
        return " ".join(["model", s.kind] + [pretty_arg(p) for p in s.params]) + ";"
    if isinstance(s, Let):
        return f"let {s.name} = {pretty_expr(s.value)};"
    if isinstance(s, Command):
        return " ".join([s.name] + [pretty_arg(a) for a in s.args]) + ";"
    raise TypeError(f"cannot print {s!r}")


def pretty(script: Script) -> str:
    return "".join(pretty_statement(s) + "\n" for s in script.statements)
