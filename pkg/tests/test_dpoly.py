from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from opcalc.dpoly import (
    NEG_INFINITY, basis_Pn, decompose, degree_by_kernels, degree_single, dim_formula_check,
    homogeneous_subspace, independence_witness, kernel, kernel_elements, monomial, reconstruct,
)
from opcalc.errors import NotBasisOfConstants, NotConstant, ZeroWitness
from opcalc.models import expmono_ops, grid_ops, jackson_ops, sequence_ops
from opcalc.opcore import Element, apply, power

from .conftest import rationals

D, R, F = sequence_ops(12)
S = D.space


def seq(values) -> Element:
    return Element.from_vector(S, (len(values),), list(values))


def test_degree_fixtures():
    assert degree_single(D, seq([0, 0, 0])) == NEG_INFINITY
    assert str(NEG_INFINITY) == "-inf"
    assert degree_single(D, seq([5] * 6)).value == 0
    assert degree_single(D, seq([n * n for n in range(1, 7)])).value == 2


@given(st.lists(rationals(), min_size=1, max_size=8))
def test_two_degree_routes_agree(values):
    x = seq(values)
    assert degree_single(D, x) == degree_by_kernels(D, x)


@given(st.lists(rationals(), min_size=1, max_size=5))
def test_degree_of_polynomial_sequences(coeffs):
    # sum c_k n^k has degree equal to its top nonzero k
    x = seq([sum(c * n ** k for k, c in enumerate(coeffs)) for n in range(1, 9)])
    nz = [k for k, c in enumerate(coeffs) if c]
    expected = nz[-1] if nz else None
    assert degree_single(D, x).value == expected


def test_decompose_squares():
    u = seq([n * n for n in range(1, 7)])
    dec = decompose(D, R, F, u)
    assert [(k, z.vector()[0]) for k, z in dec.parts] == [(0, 1), (1, 3), (2, 2)]
    assert reconstruct(R, dec, (6,)) == u


def test_decompose_constant():
    u = seq([3] * 5)
    dec = decompose(D, R, F, u)
    assert len(dec.parts) == 1 and dec.parts[0] == (0, u)


def test_decompose_pure_monomial():
    one = seq([1] * 4)
    u = apply(power(R, 3), one)
    dec = decompose(D, R, F, u)
    assert [k for k, _ in dec.parts] == [3]
    assert dec.coefficient(3) == one
    assert dec.coefficient(0) is None


def test_monomial_binomials():
    z = seq([1] * 4)
    assert monomial(D, R, z, 0) == z
    # iterated prefix sums of ones: C(n-1, 2)
    assert monomial(D, R, z, 2).vector() == tuple(comb(n - 1, 2) for n in range(1, 7))


def test_monomial_expmono():
    D1, R1, _ = expmono_ops(2, (1, 2), 4)[0]
    z = Element.make(D1.space, (1,), {(0, 0): 1})
    assert monomial(D1, R1, z, 2).coords == {(2, 0): Fraction(1, 2)}


def test_monomial_requires_constant():
    with pytest.raises(NotConstant):
        monomial(D, R, seq([1, 2, 3]), 1)
    with pytest.raises(ZeroWitness):
        monomial(D, R, seq([0, 0]), 1)


def test_basis_Pn_sequences():
    zetas = kernel_elements(D, (8,))
    assert basis_Pn(D, R, zetas, 2) == kernel(power(D, 3), (8,))
    assert basis_Pn(D, R, zetas, 2).dim == 3
    assert basis_Pn(D, R, zetas, 0) == kernel(D, (8,))


def test_basis_Pn_grid_axis():
    D1, R1, _ = grid_ops(2, (5, 5))[0]
    zetas = kernel_elements(D1, (5, 5))
    assert len(zetas) == 5
    b = basis_Pn(D1, R1, zetas, 1)
    assert b == kernel(power(D1, 2), (5, 5))
    assert b.dim == 10


def test_basis_Pn_rejects_partial_constants():
    D1, R1, _ = grid_ops(2, (4, 4))[0]
    with pytest.raises(NotBasisOfConstants):
        basis_Pn(D1, R1, kernel_elements(D1, (4, 4))[:2], 1)


def test_dim_formula():
    assert dim_formula_check(D, 3, (6,))
    assert kernel(power(D, 4), (6,)).dim == 4
    assert dim_formula_check(D, 0, (6,))
    J = jackson_ops(6, 2)
    assert dim_formula_check(J.D, 2, (5,))
    assert kernel(power(J.D, 3), (5,)).dim == 3


def test_dim_formula_grid_axes():
    for D_k, _, _ in grid_ops(2, (6, 6)):
        assert all(dim_formula_check(D_k, n, (6, 6)) for n in range(5))


def test_homogeneous_subspace():
    z = seq([1] * 8)
    assert homogeneous_subspace(D, R, z, 0).dim == 1
    assert homogeneous_subspace(D, R, z, 4).dim == 5


def test_independence_witness():
    assert independence_witness(D, R, [0, 1, 2, 3], (8,))
    assert independence_witness(D, R, [0], (8,))
    assert not independence_witness(D, R, [1, 1], (8,))
