"""D-polynomials of a single operator: degree, R-monomials, bases of P_n(D)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NotBasisOfConstants, NotConstant, NotPolynomialAtGrade, ZeroWitness
from .opcore import (
    Element, Op, apply, as_grade, check_applicable, compose, power, realize, shift_grade,
)
from .errors import GradeUnderflow
from .ratlin import SubspaceBasis, independent, nullspace
from .taylor import _require_corresponding


@dataclass(frozen=True)
class DegreeResult:
    """A natural number, or ``value=None`` for the degree -inf of zero."""

    value: int | None

    @property
    def is_neg_infinity(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        return "-inf" if self.value is None else str(self.value)


NEG_INFINITY = DegreeResult(None)


@dataclass(frozen=True)
class MonomialDecomposition:
    degree: DegreeResult
    parts: tuple[tuple[int, Element], ...]

    def coefficient(self, k: int) -> Element | None:
        return dict(self.parts).get(k)


def kernel(D: Op, g) -> SubspaceBasis:
    return nullspace(realize(D, g))


def kernel_elements(D: Op, g) -> list[Element]:
    g = as_grade(g)
    return [Element.from_vector(D.space, g, v) for v in kernel(D, g).vectors]


def _step_budget(D: Op, x: Element) -> int:
    return x.space.dim(x.grade) + 1


def degree_single(D: Op, x: Element) -> DegreeResult:
    """Smallest n with D^(n+1) x = 0, found by iterating D."""
    if x.is_zero():
        return NEG_INFINITY
    y = x
    for n in range(_step_budget(D, x)):
        try:
            check_applicable(D, y.grade)
        except GradeUnderflow:
            break
        y = apply(D, y)
        if y.is_zero():
            return DegreeResult(n)
    raise NotPolynomialAtGrade(f"{D.name} does not annihilate the element within grade {x.grade}")


def degree_by_kernels(D: Op, x: Element) -> DegreeResult:
    """Same answer as :func:`degree_single`, via nullspaces of D^(n+1)."""
    if x.is_zero():
        return NEG_INFINITY
    vec = x.vector()
    for n in range(_step_budget(D, x)):
        try:
            ker = kernel(power(D, n + 1), x.grade)
        except GradeUnderflow:
            break
        if ker.contains(vec):
            return DegreeResult(n)
    raise NotPolynomialAtGrade(f"{D.name} does not annihilate the element within grade {x.grade}")


def decompose(D: Op, R: Op, F: Op, u: Element) -> MonomialDecomposition:
    """Write u = sum R^k z_k with z_k = F D^k u in ker D; only nonzero parts are kept."""
    deg = degree_single(D, u)
    if deg.is_neg_infinity:
        return MonomialDecomposition(deg, ())
    _require_corresponding(F, R, u.grade)
    parts = []
    total = Element.zero(u.space, u.grade)
    y = u
    for k in range(deg.value + 1):
        z = apply(F, y)
        if not z.is_zero():
            parts.append((k, z))
            total = total + apply(power(R, k), z)
        y = apply(D, y)
    assert total == u, "Taylor reconstruction failed for a polynomial"
    return MonomialDecomposition(deg, tuple(parts))


def reconstruct(R: Op, decomposition: MonomialDecomposition, grade) -> Element:
    g = as_grade(grade)
    total = Element.zero(R.space, g)
    for k, z in decomposition.parts:
        total = total + apply(power(R, k), z)
    return total


def _require_constant(D: Op, z: Element):
    if z.is_zero():
        raise ZeroWitness("a nonzero constant is required")
    if not apply(D, z).is_zero():
        raise NotConstant(f"element is not in the kernel of {D.name}")


def monomial(D: Op, R: Op, z: Element, k: int) -> Element:
    """R^k z for a nonzero constant z; its D-degree is exactly k."""
    _require_constant(D, z)
    return apply(power(R, k), z)


def _lift(R: Op, z: Element, m: int) -> Element:
    """R^m applied to z seen through the window that lands back on z's grade."""
    start = shift_grade(z.grade, tuple(-m * s for s in R.shift))
    return apply(power(R, m), z.restrict(start))


def basis_Pn(D: Op, R: Op, zetas: Sequence[Element], n: int) -> SubspaceBasis:
    """Span of {R^m zeta_s : m <= n} at the grade of the zetas."""
    if not zetas:
        raise NotBasisOfConstants("at least one constant is required")
    g = zetas[0].grade
    if any(z.grade != g for z in zetas):
        raise NotBasisOfConstants("the constants live at different grades")
    vecs = [z.vector() for z in zetas]
    if not independent(vecs) or SubspaceBasis.span(vecs, len(vecs[0])) != kernel(D, g):
        raise NotBasisOfConstants(f"the given elements are not a basis of ker {D.name}")
    out = [_lift(R, z, m).vector() for z in zetas for m in range(n + 1)]
    return SubspaceBasis.span(out, D.space.dim(g))


def homogeneous_subspace(D: Op, R: Op, zeta: Element, n: int) -> SubspaceBasis:
    """V_s^n = span{R^m zeta : m <= n}."""
    _require_constant(D, zeta)
    return SubspaceBasis.span([_lift(R, zeta, m).vector() for m in range(n + 1)], D.space.dim(zeta.grade))


def dim_formula_check(D: Op, n: int, grade, grade_constants=None) -> bool:
    """dim ker D^(n+1) == (n+1) dim ker D."""
    g = as_grade(grade)
    gz = as_grade(grade_constants) if grade_constants is not None else g
    return kernel(power(D, n + 1), g).dim == (n + 1) * kernel(D, gz).dim


def independence_witness(D: Op, R: Op, reps: Sequence[int], grade=None) -> bool:
    """Are the monomials R^i z (i in reps, z a fixed nonzero constant) independent?"""
    g = as_grade(grade if grade is not None else D.space.default_grade)
    constants = kernel_elements(D, g)
    if not constants:
        raise NotConstant(f"{D.name} has no nonzero constants at grade {g}")
    z = constants[0]
    return independent([_lift(R, z, i).vector() for i in reps])
