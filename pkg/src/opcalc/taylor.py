"""The algebraic Taylor formula for one right invertible operator.

For D with right inverse R and corresponding initial operator F (F R = 0)::

    x = sum_{k<=m} R^k F D^k x  +  R^(m+1) D^(m+1) x
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotCorresponding, NotInitial, WrongModel
from .opcore import (
    Element, Op, OperatorHandle, apply, as_grade, check_applicable, combine, compose, power, realize,
)


@dataclass(frozen=True)
class TaylorSplit:
    order: int
    coefficients: tuple[Element, ...]
    poly_part: Element
    remainder: Element

    def reconstructs(self, x: Element) -> bool:
        return self.poly_part + self.remainder == x


def _require_corresponding(F: Op, R: Op, g):
    if not realize(compose(F, R), g).is_zero():
        raise NotCorresponding(f"{F.name}*{R.name} is not zero at grade {g}")


def taylor_split(D: Op, R: Op, F: Op, m: int, x: Element) -> TaylorSplit:
    if m < 0:
        raise ValueError("the order must be nonnegative")
    check_applicable(power(D, m + 1), x.grade)
    _require_corresponding(F, R, x.grade)
    coeffs = []
    poly = Element.zero(x.space, x.grade)
    y = x
    for k in range(m + 1):
        z = apply(F, y)
        if not apply(D, z).is_zero():
            raise NotInitial(f"{F.name} does not map into the kernel of {D.name}")
        coeffs.append(z)
        poly = poly + apply(power(R, k), z)
        y = apply(D, y)
    remainder = apply(power(R, m + 1), y)
    return TaylorSplit(m, tuple(coeffs), poly, remainder)


def taylor_operator(D: Op, R: Op, F: Op, m: int, with_remainder: bool = True) -> OperatorHandle:
    """The handle sum_{k<=m} R^k F D^k (+ R^(m+1) D^(m+1))."""
    terms = [(1, compose(power(R, k), F, power(D, k))) for k in range(m + 1)]
    if with_remainder:
        terms.append((1, compose(power(R, m + 1), power(D, m + 1))))
    return combine(terms, f"taylor[{m}]")


def taylor_identity_check(D: Op, R: Op, F: Op, m: int, x) -> bool:
    """Operator-level check at the grade of ``x`` (an Element or a grade)."""
    g = x.grade if isinstance(x, Element) else as_grade(x)
    check_applicable(power(D, m + 1), g)
    return realize(taylor_operator(D, R, F, m), g).is_identity()


def newton_expansion(x: Element) -> list[tuple[int, Fraction]]:
    """Nonzero forward-difference coefficients (F D^k x) of a finite sequence."""
    from .models import sequence_ops

    if x.space.kind != "sequence":
        raise WrongModel(f"Newton expansion needs a sequence element, got {x.space.kind}")
    D, R, F = sequence_ops(x.space.default_grade[0])
    N = x.grade[0]
    if N == 0:
        return []
    split = taylor_split(D, R, F, N - 1, x)
    out = []
    for k, z in enumerate(split.coefficients):
        value = z.coords.get(1, Fraction(0))
        if value:
            out.append((k, value))
    return out
