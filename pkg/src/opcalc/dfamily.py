"""Families of right invertible operators.

Covers common constants Z(family), the spaces P_n(family) of family
polynomials, family initial operators, proper right inverses, weak
effectivity, and a checker for effectivity.

The effectivity condition is stated on the set differences
Z_n = P_n \\ P_(n-1), which are not subspaces.  The checker splits it into

* ``upper``: R_D(P_n(E)) is inside P_(n+1)(E) (or P_n(E)), an exact inclusion;
* ``lower``: no element of exact degree n drops into the next-lower space.
  The set {x in P_n : R_D x in L} is a subspace, so this is exact too;
* ``sample``: random elements of exact degree n, checked one by one.

A verdict is always relative to (n_max, grade); it is never a proof for all n.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .dpoly import NEG_INFINITY, DegreeResult
from .errors import (
    MissingRightInverses, NoRegularMember, NotMember, NotPolynomialAtGrade, NotRightInverse,
    NotSubset, SeparatingFamily, WordBudgetExceeded, GradeMismatch,
)
from .errors import GradeUnderflow
from .models import OperatorTriple
from .opcore import (
    Element, Grade, Op, OperatorHandle, Space, apply, as_grade, combine, compose, format_grade,
    power, realize, shift_grade, verify_right_inverse,
)
from .ratlin import RatMatrix, SubspaceBasis, intersect, kernel_of_rows, nullspace, preimage

DEFAULT_WORD_CAP = 10 ** 5
DEFAULT_POWERSET_CAP = 6

VERIFIED = "effective-verified"
FALSIFIED = "falsified"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class FamilySpec:
    space: Space
    members: tuple[Op, ...]
    right_inverses: tuple[Op, ...] | None = None
    grade: Grade | None = None
    word_cap: int = DEFAULT_WORD_CAP
    powerset_cap: int = DEFAULT_POWERSET_CAP
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if self.right_inverses is not None:
            object.__setattr__(self, "right_inverses", tuple(self.right_inverses))
        g = as_grade(self.grade if self.grade is not None else self.space.default_grade)
        object.__setattr__(self, "grade", g)
        for op in self.members:
            if op.space != self.space:
                raise GradeMismatch(f"{op.name} acts on a different space")
        for a, b in itertools.combinations(self.members, 2):
            if tuple(a.shift) == tuple(b.shift) and realize(a, g) == realize(b, g):
                raise ValueError(f"family members {a.name} and {b.name} coincide at grade {format_grade(g)}")
        if self.right_inverses is not None:
            if len(self.right_inverses) != len(self.members):
                raise MissingRightInverses("one right inverse per member is required")
            for D, R in zip(self.members, self.right_inverses):
                if not verify_right_inverse(D, R, g):
                    raise NotRightInverse(f"{R.name} is not a right inverse of {D.name}")

    @classmethod
    def from_triples(cls, triples: Sequence[OperatorTriple], grade=None, **kw) -> FamilySpec:
        return cls(triples[0].D.space, tuple(t.D for t in triples), tuple(t.R for t in triples), grade, **kw)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(op.name for op in self.members)

    def index(self, D: Op) -> int:
        for i, op in enumerate(self.members):
            if op is D:
                return i
        raise NotMember(f"{D.name} is not a member of the family")

    def right_inverse(self, D: Op) -> Op:
        if self.right_inverses is None:
            raise MissingRightInverses("the family carries no right inverses")
        return self.right_inverses[self.index(D)]

    def restrict(self, indices: Sequence[int]) -> FamilySpec:
        """Subfamily on the given member positions; caches are shared with the parent."""
        idx = tuple(sorted(set(indices)))
        rinv = None if self.right_inverses is None else tuple(self.right_inverses[i] for i in idx)
        return FamilySpec(self.space, tuple(self.members[i] for i in idx), rinv, self.grade,
                          self.word_cap, self.powerset_cap, self._cache)

    def with_grade(self, grade) -> FamilySpec:
        return FamilySpec(self.space, self.members, self.right_inverses, grade,
                          self.word_cap, self.powerset_cap, self._cache)

    def _g(self, g) -> Grade:
        return as_grade(g) if g is not None else self.grade


def _union(f1: FamilySpec, f2: FamilySpec) -> FamilySpec:
    if f1.space != f2.space:
        raise GradeMismatch("families act on different spaces")
    members = list(f1.members)
    rinv = None
    if f1.right_inverses is not None and f2.right_inverses is not None:
        rinv = list(f1.right_inverses)
    for i, op in enumerate(f2.members):
        if not any(op is m for m in members):
            members.append(op)
            if rinv is not None:
                rinv.append(f2.right_inverses[i])
    return FamilySpec(f1.space, tuple(members), None if rinv is None else tuple(rinv), f1.grade,
                      f1.word_cap, f1.powerset_cap, f1._cache)


def _is_subfamily(f1: FamilySpec, f2: FamilySpec) -> bool:
    return all(any(op is m for m in f2.members) for op in f1.members)


# --- constants and polynomial spaces ----------------------------------------------

def family_constants(F: FamilySpec, g=None) -> SubspaceBasis:
    """Z(family) = common kernel; the whole window for the empty family."""
    g = F._g(g)
    key = ("Z", F.members, g)
    if key not in F._cache:
        dim = F.space.dim(g)
        F._cache[key] = intersect([nullspace(realize(D, g)) for D in F.members], dim)
    return F._cache[key]


def union_law_check(F1: FamilySpec, F2: FamilySpec, g=None) -> bool:
    g = F1._g(g)
    lhs = family_constants(_union(F1, F2), g)
    ok = lhs == family_constants(F1, g) & family_constants(F2, g)
    if _is_subfamily(F1, F2):
        ok = ok and family_constants(F1, g) >= family_constants(F2, g)
    if _is_subfamily(F2, F1):
        ok = ok and family_constants(F2, g) >= family_constants(F1, g)
    return ok


def separates(F: FamilySpec, g=None) -> bool:
    return family_constants(F, g).dim == 0


def words(F: FamilySpec, length: int) -> Iterator[tuple[Op, ...]]:
    return itertools.product(F.members, repeat=length)


def _word_rows(members: Sequence[Op], depth: int, g: Grade) -> Iterator[tuple[Fraction, ...]]:
    """Rows of realize(w, g) for every word w of the given length.

    Suffix products are shared: a word D_0...D_n is built from D_1...D_n.
    """
    def walk(mat: RatMatrix, grade: Grade, left: int):
        if left == 0:
            yield from mat.rows
            return
        for D in members:
            yield from walk(realize(D, grade) @ mat, shift_grade(grade, D.shift), left - 1)

    for D in members:
        yield from walk(realize(D, g), shift_grade(g, D.shift), depth - 1)


def _check_word_budget(F: FamilySpec, length: int):
    count = len(F.members) ** length
    if count > F.word_cap:
        raise WordBudgetExceeded(f"{count} words of length {length} exceed the cap of {F.word_cap}")


def family_Pn(F: FamilySpec, n: int, g=None) -> SubspaceBasis:
    """P_n(family): common kernel of all |family|^(n+1) words of length n+1."""
    g = F._g(g)
    if n < 0:
        return SubspaceBasis.zero(F.space.dim(g))
    if not F.members:
        return SubspaceBasis.full(F.space.dim(g))
    key = ("P", F.members, n, g)
    if key not in F._cache:
        _check_word_budget(F, n + 1)
        F._cache[key] = kernel_of_rows(_word_rows(F.members, n + 1, g), F.space.dim(g))
    return F._cache[key]


def family_Pn_by_preimage(F: FamilySpec, n: int, g=None) -> SubspaceBasis:
    """Same space as :func:`family_Pn`, built as P_n = {x : D x in P_(n-1) for all D}.

    Independent of word enumeration; used as a cross-check.
    """
    g = F._g(g)
    if n < 0:
        return SubspaceBasis.zero(F.space.dim(g))
    if not F.members:
        return SubspaceBasis.full(F.space.dim(g))
    key = ("Pre", F.members, n, g)
    if key not in F._cache:
        parts = []
        for D in F.members:
            target_grade = shift_grade(g, D.shift)
            mat = realize(D, g)
            parts.append(preimage(mat, family_Pn_by_preimage(F, n - 1, target_grade)))
        F._cache[key] = intersect(parts, F.space.dim(g))
    return F._cache[key]


def family_degree(F: FamilySpec, x: Element) -> DegreeResult:
    """Smallest n with x in P_n(family); -inf for zero."""
    if x.is_zero():
        return NEG_INFINITY
    if not F.members:
        return DegreeResult(0)
    vec = x.vector()
    for n in range(F.space.dim(x.grade) + 1):
        try:
            pn = family_Pn(F, n, x.grade)
        except GradeUnderflow:
            break
        if pn.contains(vec):
            return DegreeResult(n)
    raise NotPolynomialAtGrade(f"element is not a family polynomial within grade {format_grade(x.grade)}")


# --- initial operators and right inverses -------------------------------------------

def family_initial(F: FamilySpec, g=None) -> OperatorHandle:
    """Projection onto Z(family) along the non-pivot echelon coordinates.

    With the canonical basis b_1..b_r of Z(family) and pivot columns p_1..p_r,
    x maps to sum_i x[p_i] b_i.  The handle recomputes Z(family) at
    whatever grade it is applied.
    """
    g = F._g(g)
    if separates(F, g):
        raise SeparatingFamily(f"Z(family) is trivial at grade {format_grade(g)}")
    space = F.space

    def action(idx, grade):
        z = family_constants(F, grade)
        col = space.positions(grade)[idx]
        basis = space.basis(grade)
        for p, vec in zip(z.pivots, z.vectors):
            if p == col:
                return {basis[k]: v for k, v in enumerate(vec) if v}
        return {}

    return OperatorHandle(space, "F", (0,) * space.naxes, action)


def _require_inverses(F: FamilySpec):
    if F.right_inverses is None:
        raise MissingRightInverses("the family carries no right inverses")


def corresponds(Fop: Op, F: FamilySpec, g=None) -> bool:
    """Fop R_D = 0 for every member D."""
    _require_inverses(F)
    g = F._g(g)
    return all(realize(compose(Fop, R), g).is_zero() for R in F.right_inverses)


def correct_right_inverses(Fop: Op, F: FamilySpec) -> FamilySpec:
    """Replace each R_D by R_D - Fop R_D."""
    _require_inverses(F)
    fixed = tuple(combine([(1, R), (-1, compose(Fop, R))], f"{R.name}-{Fop.name}*{R.name}")
                  for R in F.right_inverses)
    return FamilySpec(F.space, F.members, fixed, F.grade, F.word_cap, F.powerset_cap)


def proper_violation(D: Op, R: Op, F: FamilySpec, g=None) -> tuple[Op, Element] | None:
    """First (D', z) with z in ker D' but R z outside ker D', or None."""
    g = F._g(g)
    F.index(D)
    for other in F.members:
        if other is D:
            continue
        ker = nullspace(realize(other, g))
        mat = realize(compose(other, R), g)
        for v in ker.vectors:
            if any(mat.apply(v)):
                return other, Element.from_vector(F.space, g, v)
    return None


def is_proper_right_inverse(D: Op, R: Op, F: FamilySpec, g=None) -> bool:
    """R maps ker D' into ker D' for every other member D'."""
    return proper_violation(D, R, F, g) is None


def weakly_effective(F: FamilySpec, g=None) -> tuple[bool, Op | None]:
    """Whether some member's chosen right inverse is proper; returns the first such member."""
    _require_inverses(F)
    for D, R in zip(F.members, F.right_inverses):
        if is_proper_right_inverse(D, R, F, g):
            return True, D
    return False, None


def degree_witness(F: FamilySpec, n: int, g=None) -> Element:
    """R_D^n z for a regular member D and a nonzero common constant z, at grade g."""
    g = F._g(g)
    z_space = family_constants(F, g)
    if z_space.dim == 0:
        raise SeparatingFamily(f"Z(family) is trivial at grade {format_grade(g)}")
    ok, D = weakly_effective(F, g)
    if not ok:
        raise NoRegularMember("no member has a proper right inverse")
    R = F.right_inverse(D)
    start = shift_grade(g, tuple(-n * c for c in R.shift))
    z = Element.from_vector(F.space, g, z_space.vectors[0]).restrict(start)
    return apply(power(R, n), z)


# --- effectivity ------------------------------------------------------------------

@dataclass(frozen=True)
class InclusionRecord:
    removed: tuple[str, ...]
    member: str
    n: int
    kind: str
    passed: bool


@dataclass(frozen=True)
class Witness:
    """An element of exact degree ``level`` (w.r.t. the members left after
    removing ``removed``) whose image under the member's right inverse has the
    wrong degree."""

    removed: tuple[int, ...]
    member: int
    level: int
    element: Element
    reason: str


@dataclass
class EffectivityReport:
    verdict: str
    checked_range: dict
    linear_inclusions: list[InclusionRecord]
    witnesses: list[Witness]
    samples_checked: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def falsified(self) -> bool:
        return self.verdict == FALSIFIED


def _subsets(k: int) -> Iterator[tuple[int, ...]]:
    for r in range(k + 1):
        yield from itertools.combinations(range(k), r)


def _exact_degree_in(F: FamilySpec, vec, n_hi: int, g: Grade) -> int:
    for k in range(n_hi + 1):
        if family_Pn(F, k, g).contains(vec):
            return k
    return n_hi + 1


def _sample_coeffs(rng: random.Random, count: int) -> list[Fraction]:
    return [Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3))) for _ in range(count)]


def recheck_witness(F: FamilySpec, w: Witness) -> bool:
    """True when the stored witness really violates the effectivity condition."""
    rest = F.restrict([i for i in range(len(F.members)) if i not in w.removed])
    x = w.element
    if family_degree(rest, x).value != w.level:
        return False
    D = F.members[w.member]
    y = apply(F.right_inverse(D), x)
    expected = w.level + 1 if w.member not in w.removed else w.level
    try:
        got = family_degree(rest, y).value
    except NotPolynomialAtGrade:
        return True
    return got != expected


def effectivity_check(F: FamilySpec, n_max: int, g=None, samples: int = 50, seed: int = 0,
                      max_resample: int = 64) -> EffectivityReport:
    g = F._g(g)
    k = len(F.members)
    checked = {"n_max": n_max, "grade": list(g), "samples": samples, "seed": seed}
    if k == 0:
        return EffectivityReport(VERIFIED, checked, [], [], notes=["empty family is effective by definition"])
    _require_inverses(F)
    if k > F.powerset_cap:
        raise WordBudgetExceeded(f"{k} members exceed the powerset cap of {F.powerset_cap}")
    _check_word_budget(F, n_max + 2)
    if separates(F, g):
        raise SeparatingFamily("effectivity is only defined for families that do not separate elements")

    rng = random.Random(seed)
    records: list[InclusionRecord] = []
    witnesses: list[Witness] = []
    exhausted = False
    n_samples = 0
    for removed in _subsets(k):
        rest = F.restrict([i for i in range(k) if i not in removed])
        removed_names = tuple(F.members[i].name for i in removed)
        for d in range(k):
            D, R = F.members[d], F.right_inverses[d]
            raises = d not in removed
            g_out = shift_grade(g, R.shift)
            mat = realize(R, g)
            for n in range(n_max + 1):
                pn = family_Pn(rest, n, g)
                below = family_Pn(rest, n - 1, g)
                upper = family_Pn(rest, n + 1 if raises else n, g_out)
                lower = family_Pn(rest, n if raises else n - 1, g_out)

                bad = next((v for v in pn.vectors if not upper.contains(mat.apply(v))), None)
                records.append(InclusionRecord(removed_names, D.name, n, "upper", bad is None))
                if bad is not None:
                    level = _exact_degree_in(rest, bad, n, g)
                    witnesses.append(Witness(removed, d, level, Element.from_vector(F.space, g, bad),
                                             f"image of {R.name} has degree above {level + int(raises)}"))

                stuck = pn & preimage(mat, lower)
                bad = next((v for v in stuck.vectors if not below.contains(v)), None)
                records.append(InclusionRecord(removed_names, D.name, n, "lower", bad is None))
                if bad is not None:
                    witnesses.append(Witness(removed, d, n, Element.from_vector(F.space, g, bad),
                                             f"image of {R.name} has degree below {n + int(raises)}"))

                if pn.dim == below.dim:
                    continue  # no element of exact degree n at this grade
                for _ in range(samples):
                    for _ in range(max_resample):
                        coeffs = _sample_coeffs(rng, pn.dim)
                        x = pn.combination(coeffs)
                        if not below.contains(x):
                            break
                    else:
                        exhausted = True
                        continue
                    n_samples += 1
                    y = mat.apply(x)
                    if not upper.contains(y) or lower.contains(y):
                        witnesses.append(Witness(removed, d, n, Element.from_vector(F.space, g, x),
                                                 f"sampled element maps to the wrong degree under {R.name}"))
                        break

    if witnesses:
        verdict = FALSIFIED
    elif exhausted:
        verdict = INCONCLUSIVE
    else:
        verdict = VERIFIED
    return EffectivityReport(verdict, checked, records, witnesses, n_samples)


def subfamily_check(F: FamilySpec, sub: Sequence, n_max: int, g=None, samples: int = 50,
                    seed: int = 0) -> EffectivityReport:
    """Run :func:`effectivity_check` on a subfamily with the restricted right inverses."""
    idx = []
    for s in sub:
        if isinstance(s, int):
            if not 0 <= s < len(F.members):
                raise NotSubset(f"member position {s} out of range")
            idx.append(s)
        else:
            try:
                idx.append(F.index(s))
            except NotMember as exc:
                raise NotSubset(str(exc)) from None
    return effectivity_check(F.restrict(idx), n_max, g, samples, seed)


def lattice_check(F: FamilySpec, n_max: int, g=None) -> dict[str, bool]:
    """Union, chain and anti-monotonicity laws over all pairs of subfamilies."""
    g = F._g(g)
    k = len(F.members)
    subs = [F.restrict(s) for s in _subsets(k)]
    out = {"constants_union": True, "chain": True, "anti_monotone": True, "pn_union": True}
    for s in subs:
        for n in range(n_max):
            if not family_Pn(s, n, g) <= family_Pn(s, n + 1, g):
                out["chain"] = False
    for s1, s2 in itertools.product(subs, repeat=2):
        if not union_law_check(s1, s2, g):
            out["constants_union"] = False
        u = _union(s1, s2)
        for n in range(n_max + 1):
            if not family_Pn(u, n, g) <= family_Pn(s1, n, g) & family_Pn(s2, n, g):
                out["pn_union"] = False
            if _is_subfamily(s1, s2) and not family_Pn(s1, n, g) >= family_Pn(s2, n, g):
                out["anti_monotone"] = False
    return out
