"""Execute parsed scripts against the engine and collect a :class:`Report`."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any

from .. import __version__
from ..dfamily import (
    FamilySpec, effectivity_check, family_constants, family_degree, family_Pn, proper_violation,
    weakly_effective,
)
from ..dpoly import basis_Pn, decompose, degree_single, kernel, kernel_elements
from ..errors import ModelError, OpcalcError
from ..models import build_model
from ..opcore import (
    Element, OperatorHandle, OperatorWord, Space, apply, as_grade, compose, format_grade, identity,
    power,
)
from ..ratlin import SubspaceBasis, render
from ..taylor import taylor_split
from .parser import POLY_VAR, parse
from .report import Report, Section
from .syntax import (
    Command, FamilyLit, ListLit, Let, ModelDecl, Num, OpAtom, OpCompose, OpPower, PolyLit,
    Script, pretty_arg, pretty_statement,
)


class ScriptError(OpcalcError):
    """An engine or name error tagged with the statement's source location."""

    def __init__(self, message: str, loc):
        self.loc = loc
        super().__init__(f"{loc}: {message}")


class ScriptNameError(OpcalcError):
    pass


def parse_grade(text: str) -> tuple[int, ...]:
    """``"6"`` or ``"6x6"`` -> grade tuple."""
    try:
        return tuple(int(part) for part in text.lower().split("x"))
    except ValueError:
        raise ModelError(f"bad grade {text!r}; use forms like 6 or 6x6") from None


def element_json(x: Element) -> dict[str, Any]:
    return {"grade": list(x.grade), "coords": [render(v) for v in x.vector()]}


def subspace_json(b: SubspaceBasis) -> dict[str, Any]:
    return {"dim": b.dim, "basis": [[render(v) for v in vec] for vec in b.vectors]}


def _plain(value):
    if isinstance(value, Num):
        v = value.value
        return v.numerator if v.denominator == 1 else v
    if isinstance(value, ListLit):
        return [_plain(i) for i in value.items]
    if isinstance(value, OpAtom):
        return value.name
    raise ModelError(f"unsupported parameter value {value!r}")


class Evaluator:
    def __init__(self, seed: int = 0, grade: tuple[int, ...] | None = None, nmax: int = 3,
                 samples: int = 50):
        self.seed = seed
        self.grade_override = grade
        self.nmax = nmax
        self.samples = samples
        self.space: Space | None = None
        self.working_grade: tuple[int, ...] | None = None
        self.env: dict[str, Any] = {}

    # -- driver --

    def run(self, script: Script) -> Report:
        report = Report(__version__, self.seed)
        for stmt in script.statements:
            try:
                section = self.statement(stmt)
            except ScriptError:
                raise
            except OpcalcError as exc:
                raise ScriptError(f"{type(exc).__name__}: {exc}", stmt.loc) from exc
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                raise ScriptError(f"{type(exc).__name__}: {exc}", stmt.loc) from exc
            if section is not None:
                report.sections.append(section)
        return report

    def statement(self, stmt):
        if isinstance(stmt, ModelDecl):
            self.declare_model(stmt)
            return None
        if isinstance(stmt, Let):
            self.env[stmt.name] = self.value_of(stmt.value)
            return None
        return self.command(stmt)

    # -- models and values --

    def declare_model(self, decl: ModelDecl):
        params = {p.name: _plain(p.value) for p in decl.params}
        space, ops = build_model(decl.kind, **params)
        self.space = space
        self.working_grade = self._fit_grade(self.grade_override) if self.grade_override else space.default_grade
        self.env = {"I": identity(space), **ops}

    def _fit_grade(self, g) -> tuple[int, ...]:
        g = as_grade(g)
        if len(g) == 1 and self.space.naxes > 1:
            g = g * self.space.naxes
        if len(g) != self.space.naxes:
            raise ModelError(f"grade {format_grade(g)} does not fit a space with {self.space.naxes} axes")
        return g

    def _require_space(self) -> Space:
        if self.space is None:
            raise ModelError("declare a model first")
        return self.space

    def lookup(self, name: str):
        self._require_space()
        if name not in self.env:
            raise ScriptNameError(f"unbound name {name!r}")
        return self.env[name]

    def value_of(self, expr):
        if isinstance(expr, (OpAtom, OpPower, OpCompose)):
            if isinstance(expr, OpAtom):
                return self.lookup(expr.name)
            return self.op_of(expr)
        if isinstance(expr, ListLit):
            return self.element_from_list(expr)
        if isinstance(expr, PolyLit):
            return self.element_from_poly(expr)
        if isinstance(expr, FamilyLit):
            return self.family_of(expr)
        if isinstance(expr, Num):
            return expr.value
        raise ModelError(f"cannot evaluate {expr!r}")

    def op_of(self, expr):
        if isinstance(expr, OpAtom):
            op = self.lookup(expr.name)
            if not isinstance(op, (OperatorHandle, OperatorWord)):
                raise ScriptNameError(f"{expr.name!r} is not an operator")
            return op
        if isinstance(expr, OpPower):
            return power(self.op_of(expr.base), expr.exponent)
        if isinstance(expr, OpCompose):
            return compose(self.op_of(expr.left), self.op_of(expr.right))
        raise ScriptNameError(f"expected an operator expression, got {expr!r}")

    def element_of(self, expr) -> Element:
        value = self.value_of(expr)
        if not isinstance(value, Element):
            raise ScriptNameError("expected an element")
        return value

    def family_of_expr(self, expr) -> FamilySpec:
        value = self.value_of(expr)
        if not isinstance(value, FamilySpec):
            raise ScriptNameError("expected a family")
        return value

    def family_of(self, lit: FamilyLit) -> FamilySpec:
        space = self._require_space()
        members = tuple(self.op_of(e.member) for e in lit.entries)
        inverses = [e.inverse for e in lit.entries]
        if all(i is None for i in inverses):
            rinv = None
        elif any(i is None for i in inverses):
            raise ModelError("give a right inverse for every member or for none")
        else:
            rinv = tuple(self.op_of(i) for i in inverses)
        return FamilySpec(space, members, rinv, self.working_grade)

    def element_from_list(self, lit: ListLit) -> Element:
        space = self._require_space()
        if any(isinstance(i, ListLit) for i in lit.items):
            shape, flat = _flatten(lit)
            if space.kind != "grid" or len(shape) != space.m:
                raise ModelError(f"nested lists need a grid model with {len(shape)} axes")
            return Element.from_vector(space, shape, flat)
        flat = [i.value for i in lit.items]
        if space.kind in ("sequence", "jackson") or (space.kind == "grid" and space.m == 1):
            return Element.from_vector(space, (len(flat),), flat)
        return Element.from_vector(space, self.working_grade, flat)

    def element_from_poly(self, lit: PolyLit) -> Element:
        space = self._require_space()
        g = self.working_grade

        def var_axis(name: str) -> int:
            k = 0 if name == "x" else int(name[1:]) - 1
            if not 0 <= k < space.m:
                raise ModelError(f"variable {name} does not exist in a model with m = {space.m}")
            return k

        if space.kind in ("sequence", "grid"):
            def value(idx):
                point = (idx,) if space.kind == "sequence" else idx
                total = Fraction(0)
                for t in lit.terms:
                    total += t.coef * math.prod(point[var_axis(v)] ** e for v, e in t.factors)
                return total
            return Element.from_function(space, g, value)

        coords: dict = {}
        for t in lit.terms:
            alpha = [0] * space.m
            for v, e in t.factors:
                alpha[var_axis(v)] += e
            idx = alpha[0] if space.kind == "jackson" else tuple(alpha)
            coords[idx] = coords.get(idx, 0) + t.coef
        pos = space.positions(g)
        for idx in coords:
            if idx not in pos:
                raise ModelError(f"monomial {idx} exceeds the truncation at grade {format_grade(g)}")
        return Element.make(space, g, coords)

    # -- commands --

    def _grade_arg(self, cmd: Command, default):
        named = cmd.named
        if "grade" in named:
            g = _plain(named["grade"])
            return self._fit_grade(g if isinstance(g, list) else [g])
        return default

    def _int_arg(self, cmd: Command, name: str, default=None) -> int:
        named = cmd.named
        if name not in named:
            if default is None:
                raise ModelError(f"{cmd.name} needs {name}=...")
            return default
        v = _plain(named[name])
        if not isinstance(v, int) or v < 0:
            raise ModelError(f"{name} must be a nonnegative integer")
        return v

    def _args(self, cmd: Command, count: int):
        pos = cmd.positional
        if len(pos) != count:
            raise ModelError(f"{cmd.name} takes {count} positional argument(s), got {len(pos)}")
        return pos

    def command(self, cmd: Command) -> Section:
        section = Section(pretty_statement(cmd))
        section.inputs = {"args": [pretty_arg(a) for a in cmd.args]}
        handler = getattr(self, "cmd_" + cmd.name.replace("-", "_"))
        handler(cmd, section)
        return section

    def cmd_apply(self, cmd, section):
        op_e, x_e = self._args(cmd, 2)
        section.result = {"element": element_json(apply(self.op_of(op_e), self.element_of(x_e)))}

    def cmd_taylor(self, cmd, section):
        d, r, f, x = self._args(cmd, 4)
        m = self._int_arg(cmd, "m")
        x = self.element_of(x)
        split = taylor_split(self.op_of(d), self.op_of(r), self.op_of(f), m, x)
        section.result = {
            "order": m,
            "coefficients": [element_json(z) for z in split.coefficients],
            "poly_part": element_json(split.poly_part),
            "remainder": element_json(split.remainder),
            "reconstructs": split.reconstructs(x),
        }

    def cmd_degree(self, cmd, section):
        d, x = self._args(cmd, 2)
        section.result = {"degree": str(degree_single(self.op_of(d), self.element_of(x)))}

    def cmd_fdegree(self, cmd, section):
        fam, x = self._args(cmd, 2)
        section.result = {"degree": str(family_degree(self.family_of_expr(fam), self.element_of(x)))}

    def cmd_decompose(self, cmd, section):
        d, r, f, x = self._args(cmd, 4)
        dec = decompose(self.op_of(d), self.op_of(r), self.op_of(f), self.element_of(x))
        section.result = {
            "degree": str(dec.degree),
            "parts": [{"k": k, "z": element_json(z)} for k, z in dec.parts],
        }

    def cmd_basis(self, cmd, section):
        d, r = self._args(cmd, 2)
        D, R = self.op_of(d), self.op_of(r)
        n = self._int_arg(cmd, "n")
        g = self._grade_arg(cmd, self.working_grade)
        b = basis_Pn(D, R, kernel_elements(D, g), n)
        section.result = {**subspace_json(b), "equals_kernel": b == kernel(power(D, n + 1), g)}

    def cmd_constants(self, cmd, section):
        (fam,) = self._args(cmd, 1)
        F = self.family_of_expr(fam)
        section.result = subspace_json(family_constants(F, self._grade_arg(cmd, F.grade)))

    def cmd_pn(self, cmd, section):
        (fam,) = self._args(cmd, 1)
        F = self.family_of_expr(fam)
        n = self._int_arg(cmd, "n")
        section.result = subspace_json(family_Pn(F, n, self._grade_arg(cmd, F.grade)))

    def cmd_effective(self, cmd, section):
        (fam,) = self._args(cmd, 1)
        F = self.family_of_expr(fam)
        g = self._grade_arg(cmd, F.grade)
        seed = self._int_arg(cmd, "seed", self.seed)
        rep = effectivity_check(F, self._int_arg(cmd, "nmax", self.nmax), g,
                                self._int_arg(cmd, "samples", self.samples), seed)
        inclusions = rep.linear_inclusions
        section.result = {
            "verdict": rep.verdict,
            "checked_range": rep.checked_range,
            "inclusions_checked": len(inclusions),
            "inclusions_failed": [
                {"removed": list(r.removed), "member": r.member, "n": r.n, "kind": r.kind}
                for r in inclusions if not r.passed],
            "samples_checked": rep.samples_checked,
        }
        section.witnesses = [
            {"removed": [F.members[i].name for i in w.removed], "member": F.members[w.member].name,
             "level": w.level, "reason": w.reason, **element_json(w.element)}
            for w in rep.witnesses]

    def cmd_proper(self, cmd, section):
        d, r, fam = self._args(cmd, 3)
        F = self.family_of_expr(fam)
        D = self.op_of(d)
        member = next((m for m in F.members if m is D), None)
        if member is None:
            member = next((m for m in F.members if m.name == D.name), D)
        bad = proper_violation(member, self.op_of(r), F, self._grade_arg(cmd, F.grade))
        section.result = {"proper": bad is None}
        if bad is not None:
            other, z = bad
            section.witnesses = [{"kernel_of": other.name, **element_json(z)}]

    def cmd_weak(self, cmd, section):
        (fam,) = self._args(cmd, 1)
        F = self.family_of_expr(fam)
        ok, D = weakly_effective(F, self._grade_arg(cmd, F.grade))
        section.result = {"weakly_effective": ok, "regular": D.name if D is not None else None}

    def cmd_check_suite(self, cmd, section):
        from ..suites import run_suite

        name = cmd.named.get("name")
        name = _plain(name) if name is not None else "all"
        results = run_suite(str(name), seed=self.seed)
        section.result = {
            "suite": str(name),
            "passed": all(r.passed for r in results),
            "checks": [{"name": r.name, "passed": r.passed} for r in results],
        }


def _flatten(lit: ListLit) -> tuple[tuple[int, ...], list[Fraction]]:
    if not lit.items or not isinstance(lit.items[0], ListLit):
        if any(isinstance(i, ListLit) for i in lit.items):
            raise ModelError("ragged nested list")
        return (len(lit.items),), [i.value for i in lit.items]
    shapes, flat = set(), []
    for item in lit.items:
        if not isinstance(item, ListLit):
            raise ModelError("ragged nested list")
        shape, values = _flatten(item)
        shapes.add(shape)
        flat.extend(values)
    if len(shapes) != 1:
        raise ModelError("ragged nested list")
    return (len(lit.items),) + shapes.pop(), flat


def run_script(text: str, seed: int = 0, grade=None, nmax: int = 3, samples: int = 50) -> Report:
    return Evaluator(seed, grade, nmax, samples).run(parse(text))
