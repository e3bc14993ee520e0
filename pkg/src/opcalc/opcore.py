"""Graded spaces, elements, operators and the right inverse / initial operator algebra.

Every space is an infinite-dimensional model seen through finite windows
called grades.  An operator knows how it moves grades (``shift``): the
difference-like operators shrink the window, the summation-like ones grow it,
projections keep it.  With that bookkeeping the algebraic identities hold
exactly on every window, with no boundary junk.

Operators are defined by their action on basis vectors; matrices are derived
on demand by :func:`realize`.  Words apply their rightmost factor first.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Mapping, Sequence, Union

from .errors import GradeMismatch, GradeUnderflow, NotInitial, NotRightInverse, ZeroWitness
from .ratlin import RatMatrix, SubspaceBasis, as_scalar, column_space, nullspace, render

Grade = tuple[int, ...]
BasisIndex = Hashable

KINDS = ("sequence", "grid", "jackson", "expmono")


def as_grade(g) -> Grade:
    if isinstance(g, int):
        return (g,)
    return tuple(int(c) for c in g)


def shift_grade(g: Grade, s: Sequence[int]) -> Grade:
    return tuple(a + b for a, b in zip(g, s))


def _check_grade(g: Grade, context: str = ""):
    if any(c < 0 for c in g):
        raise GradeUnderflow(f"grade {format_grade(g)} has a negative component{context}")


def format_grade(g: Grade) -> str:
    return "x".join(str(c) for c in g)


@lru_cache(maxsize=None)
def _enumerate_basis(kind: str, m: int, grade: Grade) -> tuple:
    if kind == "sequence":
        return tuple(range(1, grade[0] + 1))
    if kind == "grid":
        return tuple(itertools.product(*(range(1, n + 1) for n in grade)))
    if kind == "jackson":
        return tuple(range(grade[0]))
    if kind == "expmono":
        # graded lexicographic: total degree first, then x1 before x2 ...
        top = grade[0] - 1
        alphas = [a for a in itertools.product(range(top + 1), repeat=m) if sum(a) <= top]
        alphas.sort(key=lambda a: (sum(a), tuple(-c for c in a)))
        return tuple(alphas)
    raise ValueError(f"unknown model kind {kind!r}")


@lru_cache(maxsize=None)
def _positions(kind: str, m: int, grade: Grade) -> dict:
    return {idx: k for k, idx in enumerate(_enumerate_basis(kind, m, grade))}


@dataclass(frozen=True)
class Space:
    """Descriptor of one graded model space.

    ``m`` is the coordinate count (1 for univariate models).  ``params`` holds
    the model-specific extras (``q`` for Jackson, ``a`` for expmono) as a
    sorted tuple of pairs so the descriptor stays hashable.
    """

    kind: str
    m: int
    default_grade: Grade
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if len(self.default_grade) != self.naxes:
            raise GradeMismatch(f"{self.kind} grades have {self.naxes} component(s)")

    @property
    def naxes(self) -> int:
        return self.m if self.kind == "grid" else 1

    def param(self, name: str, default=None):
        return dict(self.params).get(name, default)

    def basis(self, grade) -> tuple:
        g = as_grade(grade)
        if len(g) != self.naxes:
            raise GradeMismatch(f"grade {format_grade(g)} for a space with {self.naxes} axes")
        _check_grade(g)
        return _enumerate_basis(self.kind, self.m, g)

    def positions(self, grade) -> dict:
        self.basis(grade)
        return _positions(self.kind, self.m, as_grade(grade))

    def dim(self, grade) -> int:
        return len(self.basis(grade))


@dataclass(frozen=True)
class Element:
    """Sparse coefficient vector at one grade.  Build with :meth:`make`."""

    space: Space
    grade: Grade
    coords: Mapping[BasisIndex, Fraction]

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def make(cls, space: Space, grade, coords: Mapping | None = None) -> Element:
        g = as_grade(grade)
        pos = space.positions(g)
        clean = {}
        for idx, v in (coords or {}).items():
            if idx not in pos:
                raise GradeMismatch(f"basis index {idx!r} is not valid at grade {format_grade(g)}")
            v = as_scalar(v)
            if v:
                clean[idx] = v
        return cls(space, g, clean)

    @classmethod
    def zero(cls, space: Space, grade) -> Element:
        return cls(space, as_grade(grade), {})

    @classmethod
    def unit(cls, space: Space, grade, idx) -> Element:
        return cls.make(space, grade, {idx: 1})

    @classmethod
    def from_vector(cls, space: Space, grade, vec: Sequence) -> Element:
        basis = space.basis(grade)
        if len(vec) != len(basis):
            raise GradeMismatch(f"{len(vec)} coordinates for a {len(basis)}-dimensional grade")
        return cls.make(space, grade, dict(zip(basis, vec)))

    @classmethod
    def from_function(cls, space: Space, grade, fn: Callable) -> Element:
        return cls.make(space, grade, {idx: fn(idx) for idx in space.basis(grade)})

    def vector(self) -> tuple[Fraction, ...]:
        zero = Fraction(0)
        return tuple(self.coords.get(idx, zero) for idx in self.space.basis(self.grade))

    def is_zero(self) -> bool:
        return not self.coords

    def _check(self, other: Element):
        if self.space != other.space or self.grade != other.grade:
            raise GradeMismatch(
                f"elements at grades {format_grade(self.grade)} and {format_grade(other.grade)} do not combine")

    def __add__(self, other: Element) -> Element:
        self._check(other)
        out = dict(self.coords)
        for k, v in other.coords.items():
            nv = out.get(k, 0) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return Element(self.space, self.grade, out)

    def __neg__(self) -> Element:
        return Element(self.space, self.grade, {k: -v for k, v in self.coords.items()})

    def __sub__(self, other: Element) -> Element:
        return self + (-other)

    def __rmul__(self, c) -> Element:
        c = as_scalar(c)
        if not c:
            return Element.zero(self.space, self.grade)
        return Element(self.space, self.grade, {k: c * v for k, v in self.coords.items()})

    def restrict(self, grade) -> Element:
        """Drop the coordinates that fall outside a smaller window."""
        g = as_grade(grade)
        pos = self.space.positions(g)
        return Element(self.space, g, {k: v for k, v in self.coords.items() if k in pos})

    def __str__(self) -> str:
        return "[" + ", ".join(render(v) for v in self.vector()) + "]"


@dataclass(frozen=True, eq=False)
class OperatorHandle:
    """A grade-indexed linear map given by its action on basis vectors.

    ``action(idx, grade)`` returns the image of the basis vector ``idx`` of
    ``grade`` as a mapping of basis indices at ``grade + shift``.
    """

    space: Space
    name: str
    shift: tuple[int, ...]
    action: Callable[[BasisIndex, Grade], Mapping[BasisIndex, Fraction]] = field(repr=False)
    _images: dict = field(default_factory=dict, repr=False)
    _matrices: dict = field(default_factory=dict, repr=False)

    def image(self, idx, grade: Grade) -> Mapping[BasisIndex, Fraction]:
        key = (idx, grade)
        out = self._images.get(key)
        if out is None:
            out = {k: as_scalar(v) for k, v in self.action(idx, grade).items() if v}
            self._images[key] = out
        return out

    @property
    def factors(self) -> tuple[OperatorHandle, ...]:
        return (self,)

    def __mul__(self, other: Op) -> OperatorWord:
        return compose(self, other)

    def __pow__(self, k: int) -> OperatorWord:
        return power(self, k)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=False)
class OperatorWord:
    """A finite composition; the rightmost factor acts first."""

    space: Space
    factors: tuple[OperatorHandle, ...]

    @property
    def shift(self) -> tuple[int, ...]:
        total = (0,) * self.space.naxes
        for f in self.factors:
            total = shift_grade(total, f.shift)
        return total

    @property
    def name(self) -> str:
        if not self.factors:
            return "I"
        parts = []
        for name, group in itertools.groupby(f.name for f in self.factors):
            k = len(list(group))
            label = f"({name})" if any(ch in name for ch in "+-*") else name
            parts.append(label if k == 1 else f"{label}^{k}")
        return "*".join(parts)

    def __mul__(self, other: Op) -> OperatorWord:
        return compose(self, other)

    def __pow__(self, k: int) -> OperatorWord:
        return power(self, k)

    def __str__(self) -> str:
        return self.name


Op = Union[OperatorHandle, OperatorWord]


def compose(*ops: Op) -> OperatorWord:
    if not ops:
        raise ValueError("compose needs at least one operator")
    space = ops[0].space
    factors: list[OperatorHandle] = []
    for op in ops:
        if op.space != space:
            raise GradeMismatch("operators act on different spaces")
        factors.extend(op.factors)
    return OperatorWord(space, tuple(factors))


def power(op: Op, k: int) -> OperatorWord:
    if k < 0:
        raise ValueError("operator powers must be nonnegative")
    return OperatorWord(op.space, tuple(op.factors) * k)


def _apply_handle(op: OperatorHandle, x: Element) -> Element:
    out_grade = shift_grade(x.grade, op.shift)
    _check_grade(out_grade, f" after applying {op.name} at grade {format_grade(x.grade)}")
    acc: dict = {}
    for idx, c in x.coords.items():
        for k, v in op.image(idx, x.grade).items():
            nv = acc.get(k, 0) + c * v
            if nv:
                acc[k] = nv
            else:
                acc.pop(k, None)
    pos = op.space.positions(out_grade)
    for k in acc:
        if k not in pos:
            raise GradeMismatch(f"{op.name} produced index {k!r} outside grade {format_grade(out_grade)}")
    return Element(op.space, out_grade, acc)


def apply(op: Op, x: Element) -> Element:
    if op.space != x.space:
        raise GradeMismatch("operator and element live in different spaces")
    _check_grade(x.grade)
    for f in reversed(op.factors):
        x = _apply_handle(f, x)
    return x


def check_applicable(op: Op, g) -> Grade:
    """Raise GradeUnderflow unless every intermediate grade is valid; return the output grade."""
    g = as_grade(g)
    _check_grade(g)
    for f in reversed(op.factors):
        g = shift_grade(g, f.shift)
        _check_grade(g, f" after {f.name}")
    return g


def realize(op: Op, g) -> RatMatrix:
    """Matrix of ``op`` from grade ``g`` to ``g + shift``; columns are images of basis vectors."""
    g = as_grade(g)
    cache = op._matrices if isinstance(op, OperatorHandle) else None
    if cache is not None and g in cache:
        return cache[g]
    out_grade = check_applicable(op, g)
    space = op.space
    columns = [apply(op, Element.unit(space, g, idx)).vector() for idx in space.basis(g)]
    mat = RatMatrix.from_columns(columns, space.dim(out_grade))
    if cache is not None:
        cache[g] = mat
    return mat


def as_handle(op: Op, name: str | None = None) -> OperatorHandle:
    if isinstance(op, OperatorHandle):
        return op
    if len(op.factors) == 1:
        return op.factors[0]

    def action(idx, grade):
        return apply(op, Element.unit(op.space, grade, idx)).coords

    return OperatorHandle(op.space, name or op.name, op.shift, action)


def _min_shift(shifts: Iterable[Sequence[int]]) -> tuple[int, ...]:
    return tuple(min(c) for c in zip(*shifts))


def combine(terms: Iterable[tuple[object, Op]], name: str) -> OperatorHandle:
    """The handle of ``sum c_i * op_i``.

    Terms with different shifts are read through the smallest common output
    window, which is always sound: it only drops coordinates.
    """
    terms = [(as_scalar(c), op) for c, op in terms]
    if not terms:
        raise ValueError("combine needs at least one term")
    space = terms[0][1].space
    for _, op in terms:
        if op.space != space:
            raise GradeMismatch("operators act on different spaces")
    shift = _min_shift(op.shift for _, op in terms)

    def action(idx, grade):
        unit = Element.unit(space, grade, idx)
        out = shift_grade(grade, shift)
        acc = Element.zero(space, out)
        for c, op in terms:
            if c:
                acc = acc + c * apply(op, unit).restrict(out)
        return acc.coords

    return OperatorHandle(space, name, shift, action)


def narrow(op: Op, shift: Sequence[int], name: str | None = None) -> OperatorHandle:
    """The same operator read through a smaller output window."""
    s = tuple(shift)
    if any(a > b for a, b in zip(s, op.shift)):
        raise GradeMismatch(f"cannot widen {op.name} from shift {tuple(op.shift)} to {s}")
    if s == tuple(op.shift):
        return as_handle(op, name)
    return combine([(1, op), (0, zero_operator(op.space, s))], name or op.name)


def identity(space: Space) -> OperatorHandle:
    return OperatorHandle(space, "I", (0,) * space.naxes, lambda idx, grade: {idx: 1})


def zero_operator(space: Space, shift: Sequence[int] | None = None, name: str = "0") -> OperatorHandle:
    s = tuple(shift) if shift is not None else (0,) * space.naxes
    return OperatorHandle(space, name, s, lambda idx, grade: {})


def scaled(c, op: Op, name: str | None = None) -> OperatorHandle:
    return combine([(c, op)], name or f"{render(as_scalar(c))}{op.name}")


def random_operator(space: Space, shift: Sequence[int], seed: int, density: float = 0.4,
                    name: str = "A") -> OperatorHandle:
    """A reproducible pseudo-random operator with small rational entries.

    Entry (j, i) depends only on (seed, i, j), so the operator is the same
    infinite matrix seen through every window.
    """
    s = tuple(shift)

    def action(idx, grade):
        out = {}
        for j in space.basis(shift_grade(grade, s)):
            rng = random.Random(f"{seed}|{idx!r}|{j!r}")
            if rng.random() < density:
                out[j] = Fraction(rng.randint(-5, 5), rng.choice((1, 2, 3)))
        return out

    return OperatorHandle(space, name, s, action)


def operators_equal(a: Op, b: Op, g) -> bool:
    """Equality seen through the smaller of the two output windows at ``g``."""
    s = _min_shift([a.shift, b.shift])
    return realize(narrow(a, s), g) == realize(narrow(b, s), g)


# --- right inverses and initial operators -----------------------------------------

def verify_right_inverse(D: Op, R: Op, g=None) -> bool:
    g = as_grade(g if g is not None else D.space.default_grade)
    word = compose(D, R)
    if not any(word.shift):
        return realize(word, g).is_identity()
    # a lopsided sum such as R + F*A is only known on a narrower window
    return operators_equal(word, identity(D.space), g)


def verify_initial(F: Op, D: Op, g=None) -> bool:
    g = as_grade(g if g is not None else D.space.default_grade)
    if any(F.shift):
        # a narrowed projection, e.g. F*(I - A*D) with A of shift 0
        if any(c > 0 for c in F.shift) or not operators_equal(compose(F, F), F, g):
            return False
        return column_space(realize(F, g)) == nullspace(realize(D, shift_grade(g, F.shift)))
    mf = realize(F, g)
    if mf @ mf != mf:
        return False
    return column_space(mf) == nullspace(realize(D, g))


def initial_from_right_inverse(D: Op, R: Op, g=None) -> OperatorHandle:
    """F = I - R D."""
    if not verify_right_inverse(D, R, g):
        raise NotRightInverse(f"{R.name} is not a right inverse of {D.name}")
    return combine([(1, identity(D.space)), (-1, compose(R, D))], f"I-{R.name}*{D.name}")


def right_inverse_from_initial(D: Op, R_any: Op, F: Op, g=None) -> OperatorHandle:
    """R = R' - F R'; the result does not depend on which right inverse R' is given."""
    if not verify_right_inverse(D, R_any, g):
        raise NotRightInverse(f"{R_any.name} is not a right inverse of {D.name}")
    if not verify_initial(F, D, g):
        raise NotInitial(f"{F.name} is not an initial operator for {D.name}")
    return combine([(1, R_any), (-1, compose(F, R_any))], f"{R_any.name}-{F.name}*{R_any.name}")


def perturb_right_inverse(R: Op, F: Op, A: Op) -> OperatorHandle:
    """R + F A, again a right inverse of the same D."""
    fa = compose(F, A)
    return combine([(1, R), (1, fa)], f"{R.name}+{F.name}*{A.name}")


def perturb_initial(F: Op, A: Op, D: Op) -> OperatorHandle:
    """F (I - A D), again an initial operator for D."""
    ad = compose(A, D)
    inner = combine([(1, identity(D.space)), (-1, ad)], f"I-{A.name}*{D.name}")
    return as_handle(compose(F, inner), f"{F.name}*(I-{A.name}*{D.name})")


def check_not_nilpotent(R: Op, z: Element, n_max: int) -> bool:
    """True when R^n z stays nonzero for every n <= n_max."""
    if z.is_zero():
        raise ZeroWitness("the witness element must be nonzero")
    y = z
    for _ in range(n_max):
        y = apply(R, y)
        if y.is_zero():
            return False
    return True
