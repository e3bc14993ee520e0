"""The four concrete operator models and their canonical (D, R, F) triples.

* sequence: forward difference, prefix sum with zero start, evaluation at 1
* grid: the same, one triple per axis of a box in N^m
* jackson: q-derivative on polynomials, its monomial antiderivative, constant term
* expmono: generalized derivations a_k + d/dx_k on x^alpha e^{-a.x}, with
  the weighted integral from 0 as right inverse (closed form on the basis)
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import BadDeformation, BadTruncation
from .opcore import OperatorHandle, Space, as_grade
from .ratlin import as_scalar


class OperatorTriple(NamedTuple):
    D: OperatorHandle
    R: OperatorHandle
    F: OperatorHandle


def _bump(idx: tuple, k: int, value: int) -> tuple:
    return idx[:k] + (value,) + idx[k + 1:]


# --- sequences -----------------------------------------------------------------

def sequence_space(N: int) -> Space:
    if N < 2:
        raise BadTruncation(f"sequence truncation must be at least 2, got {N}")
    return Space("sequence", 1, (N,))


def sequence_ops(N: int) -> OperatorTriple:
    space = sequence_space(N)

    def diff(n, grade):
        out = {}
        if n >= 2:
            out[n - 1] = 1
        if n <= grade[0] - 1:
            out[n] = -1
        return out

    def summ(n, grade):
        return {j: 1 for j in range(n + 1, grade[0] + 2)}

    def first(n, grade):
        return {j: 1 for j in range(1, grade[0] + 1)} if n == 1 else {}

    return OperatorTriple(
        OperatorHandle(space, "D", (-1,), diff),
        OperatorHandle(space, "R", (1,), summ),
        OperatorHandle(space, "F", (0,), first),
    )


# --- grids ---------------------------------------------------------------------

def grid_space(m: int, box) -> Space:
    box = as_grade(box) if not isinstance(box, int) else (box,) * m
    if m < 1 or len(box) != m:
        raise BadTruncation(f"grid box {box} does not have {m} sides")
    if any(n < 2 for n in box):
        raise BadTruncation(f"every grid box side must be at least 2, got {box}")
    return Space("grid", m, box)


def grid_ops(m: int, box) -> list[OperatorTriple]:
    space = grid_space(m, box)
    triples = []
    for k in range(m):
        e = tuple(-1 if j == k else 0 for j in range(m))

        def diff(i, grade, k=k):
            out = {}
            if i[k] >= 2:
                out[_bump(i, k, i[k] - 1)] = 1
            if i[k] <= grade[k] - 1:
                out[i] = -1
            return out

        def summ(i, grade, k=k):
            return {_bump(i, k, j): 1 for j in range(i[k] + 1, grade[k] + 2)}

        def first(i, grade, k=k):
            if i[k] != 1:
                return {}
            return {_bump(i, k, j): 1 for j in range(1, grade[k] + 1)}

        triples.append(OperatorTriple(
            OperatorHandle(space, f"D{k + 1}", e, diff),
            OperatorHandle(space, f"R{k + 1}", tuple(-c for c in e), summ),
            OperatorHandle(space, f"F{k + 1}", (0,) * m, first),
        ))
    return triples


# --- Jackson q-calculus --------------------------------------------------------

def q_integer(n: int, q: Fraction) -> Fraction:
    """[n]_q = 1 + q + ... + q^(n-1)."""
    return sum((q ** i for i in range(n)), Fraction(0))


def jackson_space(N: int, q) -> Space:
    q = as_scalar(q)
    if N < 1:
        raise BadTruncation(f"Jackson degree bound must be at least 1, got {N}")
    if q in (0, 1):
        raise BadDeformation(f"q must avoid 0 and 1, got {q}")
    for n in range(1, N + 1):
        if q_integer(n, q) == 0:
            raise BadDeformation(f"[{n}]_q vanishes for q = {q}")
    return Space("jackson", 1, (N + 1,), (("q", q),))


def jackson_ops(N: int, q) -> OperatorTriple:
    space = jackson_space(N, q)
    q = space.param("q")

    def qdiff(n, grade):
        return {n - 1: q_integer(n, q)} if n >= 1 else {}

    def qint(n, grade):
        c = q_integer(n + 1, q)
        if c == 0:
            raise BadDeformation(f"[{n + 1}]_q vanishes for q = {q}")
        return {n + 1: 1 / c}

    def const(n, grade):
        return {0: 1} if n == 0 else {}

    return OperatorTriple(
        OperatorHandle(space, "D", (-1,), qdiff),
        OperatorHandle(space, "R", (1,), qint),
        OperatorHandle(space, "F", (0,), const),
    )


# --- exponential monomials -----------------------------------------------------

def expmono_space(m: int, a: Sequence, N: int) -> Space:
    if m < 1 or N < 1:
        raise BadTruncation(f"expmono needs m >= 1 and N >= 1, got m={m}, N={N}")
    a = tuple(as_scalar(c) for c in a)
    if len(a) != m:
        raise BadTruncation(f"exponent vector has {len(a)} entries for m = {m}")
    return Space("expmono", m, (N + 1,), (("a", a),))


def expmono_ops(m: int, a: Sequence, N: int) -> list[OperatorTriple]:
    space = expmono_space(m, a, N)
    triples = []
    for k in range(m):
        def diff(al, grade, k=k):
            return {_bump(al, k, al[k] - 1): al[k]} if al[k] else {}

        def integ(al, grade, k=k):
            return {_bump(al, k, al[k] + 1): Fraction(1, al[k] + 1)}

        def proj(al, grade, k=k):
            return {al: 1} if al[k] == 0 else {}

        triples.append(OperatorTriple(
            OperatorHandle(space, f"D{k + 1}", (-1,), diff),
            OperatorHandle(space, f"R{k + 1}", (1,), integ),
            OperatorHandle(space, f"F{k + 1}", (0,), proj),
        ))
    return triples


def build_model(kind: str, **params) -> tuple[Space, dict[str, OperatorHandle]]:
    """Space plus its canonical operators keyed by their display names."""
    if kind in ("seq", "sequence"):
        triples = [sequence_ops(int(params["N"]))]
    elif kind == "grid":
        m = int(params.get("m", 1))
        box = params.get("box", params.get("N"))
        if box is None:
            raise BadTruncation("grid needs N or box")
        triples = grid_ops(m, box if not isinstance(box, int) else (box,) * m)
    elif kind == "jackson":
        triples = [jackson_ops(int(params["N"]), params["q"])]
    elif kind == "expmono":
        m = int(params.get("m", 1))
        a = params.get("a", [0] * m)
        if not isinstance(a, (list, tuple)):
            a = [a] * m
        triples = expmono_ops(m, a, int(params["N"]))
    else:
        raise BadTruncation(f"unknown model {kind!r}")
    ops = {}
    for t in triples:
        for op in t:
            ops[op.name] = op
    return triples[0].D.space, ops
