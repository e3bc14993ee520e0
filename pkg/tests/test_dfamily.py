from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from opcalc.dfamily import (
    FALSIFIED, VERIFIED, FamilySpec, correct_right_inverses, corresponds, degree_witness,
    effectivity_check, family_constants, family_degree, family_initial, family_Pn,
    family_Pn_by_preimage, is_proper_right_inverse, lattice_check, proper_violation, recheck_witness,
    separates, subfamily_check, union_law_check, weakly_effective, words,
)
from opcalc.dpoly import NEG_INFINITY
from opcalc.errors import (
    MissingRightInverses, NotPolynomialAtGrade, NotRightInverse, NotSubset, SeparatingFamily,
    WordBudgetExceeded,
)
from opcalc.models import grid_ops, sequence_ops
from opcalc.opcore import (
    Element, apply, identity, perturb_right_inverse, power, random_operator, realize, scaled,
)
from opcalc.ratlin import SubspaceBasis
from opcalc.suites import dd2_family, grid_family


def grid_fn(fam, fn, grade=None):
    return Element.from_function(fam.space, grade or fam.grade, lambda ij: Fraction(fn(*ij)))


@pytest.fixture(scope="module")
def g44():
    return grid_family((4, 4))


def test_constants_grid(g44):
    z = family_constants(g44)
    assert z.dim == 1 and z.contains([1] * 16)


def test_constants_expmono(expmono8):
    z = family_constants(expmono8)
    weight = Element.make(expmono8.space, expmono8.grade, {(0, 0): 1})
    assert z.dim == 1 and z.contains(weight.vector())


def test_constants_empty_family(g44):
    assert family_constants(g44.restrict([])) == SubspaceBasis.full(16)


def test_union_law(g44):
    d1, d2, empty = g44.restrict([0]), g44.restrict([1]), g44.restrict([])
    assert union_law_check(d1, empty)
    assert union_law_check(d1, d2)
    assert union_law_check(d1, g44)
    assert family_constants(d1) >= family_constants(g44)


def test_separates(g44):
    assert not separates(g44)
    assert not separates(g44.restrict([]))
    two = scaled(2, identity(g44.space), "2I")
    assert separates(FamilySpec(g44.space, g44.members + (two,)))


def test_Pn_grid_first_level(g44):
    p1 = family_Pn(g44, 1)
    expected = SubspaceBasis.span([grid_fn(g44, lambda i, j: 1).vector(),
                                   grid_fn(g44, lambda i, j: i).vector(),
                                   grid_fn(g44, lambda i, j: j).vector()], 16)
    assert p1 == expected and p1.dim == 3
    assert family_Pn(g44, 0) == family_constants(g44)
    assert family_Pn(g44, -1).dim == 0


def test_Pn_empty_family_is_full(g44):
    for n in range(3):
        assert family_Pn(g44.restrict([]), n) == SubspaceBasis.full(16)


@given(st.integers(0, 3), st.sampled_from([(0,), (1,), (0, 1)]))
def test_Pn_routes_agree(n, idx):
    fam = grid_family((5, 5)).restrict(idx)
    assert family_Pn(fam, n) == family_Pn_by_preimage(fam, n)


def test_Pn_routes_agree_on_words():
    fam = dd2_family(10)
    for n in range(3):
        assert family_Pn(fam, n) == family_Pn_by_preimage(fam, n)


def test_family_degree(grid66, expmono8):
    assert family_degree(grid66, grid_fn(grid66, lambda i, j: i * j)).value == 2
    x1 = Element.make(expmono8.space, expmono8.grade, {(1, 0): 1})
    assert family_degree(expmono8, x1).value == 1
    assert family_degree(grid66, Element.zero(grid66.space, grid66.grade)) == NEG_INFINITY


def test_family_degree_out_of_window():
    # words of length 6 in D^2 do not fit a window of 5, and n^4 lies outside ker D^4
    D, R, _ = sequence_ops(8)
    fam = FamilySpec(D.space, (power(D, 2),), grade=(5,))
    x = Element.from_function(D.space, (5,), lambda n: Fraction(n ** 4))
    with pytest.raises(NotPolynomialAtGrade):
        family_degree(fam, x)
    assert family_degree(fam, Element.from_function(D.space, (5,), lambda n: Fraction(n ** 3))).value == 1


def test_family_initial_grid(g44):
    Fop = family_initial(g44)
    x = grid_fn(g44, lambda i, j: 10 * i + j)
    assert apply(Fop, x) == grid_fn(g44, lambda i, j: 11)
    m = realize(Fop, (4, 4))
    assert m @ m == m
    one = grid_fn(g44, lambda i, j: 1)
    assert apply(Fop, one) == one


def test_corresponds_and_correction(g44):
    Fop = family_initial(g44)
    assert corresponds(Fop, g44)
    assert not corresponds(identity(g44.space), g44)
    fixed = correct_right_inverses(Fop, g44)
    for a, b in zip(fixed.right_inverses, g44.right_inverses):
        assert realize(a, (4, 4)) == realize(b, (4, 4))


@given(st.integers(0, 10 ** 6))
def test_correction_restores_correspondence(seed):
    (D1, R1, F1), (D2, R2, _) = grid_ops(2, (4, 4))
    A = random_operator(D1.space, (1, 0), seed)
    bent = FamilySpec(D1.space, (D1, D2), (perturb_right_inverse(R1, F1, A), R2))
    Fop = family_initial(bent)
    assert corresponds(Fop, correct_right_inverses(Fop, bent))


def test_proper_right_inverses(g44):
    D1, D2 = g44.members
    R1, R2 = g44.right_inverses
    assert is_proper_right_inverse(D1, R1, g44)
    assert is_proper_right_inverse(D2, R2, g44)
    single = g44.restrict([0])
    assert is_proper_right_inverse(D1, power(R1, 1), single)


def test_leaky_right_inverse_is_not_proper(g44):
    D1 = g44.members[0]
    R1 = g44.right_inverses[0]
    F1 = grid_ops(2, (4, 4))[0].F
    for seed in range(50):
        leaky = perturb_right_inverse(R1, F1, random_operator(g44.space, (1, 0), seed))
        bad = proper_violation(D1, leaky, g44)
        if bad is not None:
            other, z = bad
            assert other is g44.members[1]
            assert apply(other, z).is_zero()
            assert not apply(other, apply(leaky, z)).is_zero()
            return
    pytest.fail("no leaking perturbation found")


def test_weakly_effective(g44):
    assert weakly_effective(g44) == (True, g44.members[0])
    assert weakly_effective(g44.restrict([1]))[0]
    ok, member = weakly_effective(dd2_family(10))
    assert not ok and member is None


def test_family_needs_right_inverses(g44):
    bare = FamilySpec(g44.space, g44.members)
    with pytest.raises(MissingRightInverses):
        weakly_effective(bare)
    with pytest.raises(NotRightInverse):
        FamilySpec(g44.space, g44.members, tuple(reversed(g44.right_inverses)))


def test_duplicate_members_rejected(g44):
    with pytest.raises(ValueError):
        FamilySpec(g44.space, (g44.members[0], g44.members[0]))


def test_effectivity_grid_small():
    rep = effectivity_check(grid_family((5, 5)), 2, samples=5, seed=1)
    assert rep.verdict == VERIFIED
    assert all(r.passed for r in rep.linear_inclusions)
    assert rep.samples_checked > 0
    assert rep.checked_range["seed"] == 1


def test_effectivity_falsifies_dd2():
    fam = dd2_family(12)
    rep = effectivity_check(fam, 2, samples=3)
    assert rep.verdict == FALSIFIED and rep.falsified
    w = rep.witnesses[0]
    assert w.element.vector() == (1,) * 12
    assert recheck_witness(fam, w)


def test_effectivity_is_deterministic():
    fam = grid_family((4, 4))
    a = effectivity_check(fam, 2, samples=4, seed=9)
    b = effectivity_check(fam, 2, samples=4, seed=9)
    assert a == b


def test_effectivity_empty_family_and_separating(g44):
    assert effectivity_check(g44.restrict([]), 2).verdict == VERIFIED
    assert subfamily_check(g44, [], 2).verdict == VERIFIED
    two = scaled(2, identity(g44.space), "2I")
    half = scaled(Fraction(1, 2), identity(g44.space), "I/2")
    sep = FamilySpec(g44.space, (two,), (half,))
    with pytest.raises(SeparatingFamily):
        effectivity_check(sep, 1)


def test_subfamily_check(g44):
    assert subfamily_check(g44, [g44.members[0]], 2, samples=3).verdict == VERIFIED
    with pytest.raises(NotSubset):
        subfamily_check(g44, [5], 2)


def test_caps(g44):
    tiny = FamilySpec(g44.space, g44.members, g44.right_inverses, word_cap=7)
    with pytest.raises(WordBudgetExceeded):
        family_Pn(tiny, 2)
    D, R, _ = sequence_ops(30)
    many = FamilySpec(D.space, tuple(power(D, k) for k in range(1, 8)),
                      tuple(power(R, k) for k in range(1, 8)))
    with pytest.raises(WordBudgetExceeded):
        effectivity_check(many, 0)


def test_words_enumeration(g44):
    assert len(list(words(g44, 3))) == 8


def test_degree_witnesses(g44):
    w = degree_witness(g44, 2)
    assert w == grid_fn(g44, lambda i, j: Fraction((i - 1) * (i - 2), 2))
    assert family_degree(g44, w).value == 2
    assert degree_witness(g44, 0) == grid_fn(g44, lambda i, j: 1)


def test_degree_witness_expmono(expmono8):
    w = degree_witness(expmono8, 1)
    assert w.coords == {(1, 0): 1}


def test_lattice_laws(g44):
    assert all(lattice_check(g44, 3).values())
