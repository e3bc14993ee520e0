"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`, which is already canonical
(positive denominator, reduced).  Subspaces are stored by their reduced
row echelon basis, so two subspaces are equal exactly when their
:class:`SubspaceBasis` values compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import AmbientMismatch

Scalar = Fraction

# Above this many columns elimination switches to dict-of-columns rows.
SPARSE_THRESHOLD = 200

ZERO = Fraction(0)
ONE = Fraction(1)


def as_scalar(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


def render(value: Fraction) -> str:
    """``p/q`` with the ``/1`` dropped."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class RatMatrix:
    nrows: int
    ncols: int
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ValueError("row data does not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], ncols: int | None = None) -> RatMatrix:
        data = tuple(tuple(as_scalar(v) for v in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(data[0])
        return cls(len(data), ncols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> RatMatrix:
        ncols = len(columns)
        rows = [[ZERO] * ncols for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                rows[i][j] = as_scalar(v)
        return cls.from_rows(rows, ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> RatMatrix:
        return cls(nrows, ncols, tuple((ZERO,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> RatMatrix:
        return RatMatrix(self.ncols, self.nrows, tuple(zip(*self.rows)) if self.nrows else
                         tuple(() for _ in range(self.ncols)))

    @cached_property
    def sparse_rows(self) -> tuple[tuple[tuple[int, Fraction], ...], ...]:
        return tuple(tuple((k, a) for k, a in enumerate(r) if a) for r in self.rows)

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.ncols != other.nrows:
            raise AmbientMismatch(f"cannot multiply {self.shape} by {other.shape}")
        right = other.sparse_rows
        out = []
        for row in self.sparse_rows:
            acc = [ZERO] * other.ncols
            for k, a in row:
                for j, b in right[k]:
                    acc[j] += a * b
            out.append(tuple(acc))
        return RatMatrix(self.nrows, other.ncols, tuple(out))

    def apply(self, vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(vec) != self.ncols:
            raise AmbientMismatch(f"vector of length {len(vec)} for {self.ncols} columns")
        out = []
        for row in self.sparse_rows:
            acc = ZERO
            for k, a in row:
                v = vec[k]
                if v:
                    acc += a * v
            out.append(acc)
        return tuple(out)

    def _check_same(self, other: RatMatrix):
        if self.shape != other.shape:
            raise AmbientMismatch(f"shape {self.shape} vs {other.shape}")

    def __add__(self, other: RatMatrix) -> RatMatrix:
        self._check_same(other)
        return RatMatrix(self.nrows, self.ncols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        self._check_same(other)
        return RatMatrix(self.nrows, self.ncols, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def scale(self, c) -> RatMatrix:
        c = as_scalar(c)
        return RatMatrix(self.nrows, self.ncols, tuple(tuple(c * a for a in r) for r in self.rows))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and self == RatMatrix.identity(self.nrows)

    def vstack(self, other: RatMatrix) -> RatMatrix:
        if self.ncols != other.ncols:
            raise AmbientMismatch("column counts differ")
        return RatMatrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(render(v) for v in r) + "]" for r in self.rows)


# --- elimination kernels -------------------------------------------------------

def _reduce_dense(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        if inv != 1:
            rows[r] = [v * inv for v in rows[r]]
        prow = rows[r]
        nz = [k for k in range(c, ncols) if prow[k]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                row = rows[i]
                for k in nz:
                    row[k] -= f * prow[k]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[: len(pivots)], pivots


def _reduce_sparse(rows: Iterable[Mapping[int, Fraction]]) -> list[tuple[int, dict[int, Fraction]]]:
    """Gauss-Jordan on dict rows; returns (pivot, row) pairs sorted by pivot."""
    basis: dict[int, dict[int, Fraction]] = {}
    for src in rows:
        row = {k: v for k, v in src.items() if v}
        for p in [k for k in row if k in basis]:
            f = row.get(p)
            if not f:
                continue
            for k, v in basis[p].items():
                nv = row.get(k, ZERO) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        if not row:
            continue
        p = min(row)
        inv = 1 / row[p]
        if inv != 1:
            row = {k: v * inv for k, v in row.items()}
        for q, brow in basis.items():
            f = brow.get(p)
            if f:
                for k, v in row.items():
                    nv = brow.get(k, ZERO) - f * v
                    if nv:
                        brow[k] = nv
                    else:
                        brow.pop(k, None)
        basis[p] = row
    return sorted(basis.items())


def _echelon(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[tuple[Fraction, ...]], list[int]]:
    if ncols > SPARSE_THRESHOLD:
        red = _reduce_sparse({k: v for k, v in enumerate(r) if v} for r in rows)
        dense = []
        for _, row in red:
            vec = [ZERO] * ncols
            for k, v in row.items():
                vec[k] = v
            dense.append(tuple(vec))
        return dense, [p for p, _ in red]
    red, piv = _reduce_dense([list(r) for r in rows], ncols)
    return [tuple(r) for r in red], piv


def rref(m: RatMatrix) -> tuple[RatMatrix, tuple[int, ...]]:
    """Reduced row echelon form (same shape, zero rows last) and pivot columns."""
    red, piv = _echelon(m.rows, m.ncols)
    rows = red + [(ZERO,) * m.ncols] * (m.nrows - len(red))
    return RatMatrix(m.nrows, m.ncols, tuple(rows)), tuple(piv)


def rank(m: RatMatrix) -> int:
    return len(_echelon(m.rows, m.ncols)[1])


# --- subspaces -----------------------------------------------------------------

@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of Q^ambient_dim held by its reduced echelon basis."""

    ambient_dim: int
    vectors: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> SubspaceBasis:
        vecs = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise AmbientMismatch(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            vecs.append(tuple(as_scalar(x) for x in v))
        red, piv = _echelon(vecs, ambient_dim)
        return cls(ambient_dim, tuple(red), tuple(piv))

    @classmethod
    def span_sparse(cls, vectors: Iterable[Mapping[int, Fraction]], ambient_dim: int) -> SubspaceBasis:
        red = _reduce_sparse(vectors)
        out = []
        for _, row in red:
            if row and max(row) >= ambient_dim:
                raise AmbientMismatch("sparse vector index outside the ambient space")
            vec = [ZERO] * ambient_dim
            for k, v in row.items():
                vec[k] = v
            out.append(tuple(vec))
        return cls(ambient_dim, tuple(out), tuple(p for p, _ in red))

    @classmethod
    def zero(cls, ambient_dim: int) -> SubspaceBasis:
        return cls(ambient_dim, (), ())

    @classmethod
    def full(cls, ambient_dim: int) -> SubspaceBasis:
        ident = RatMatrix.identity(ambient_dim)
        return cls(ambient_dim, ident.rows, tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def as_matrix(self) -> RatMatrix:
        """Basis vectors as rows."""
        return RatMatrix(self.dim, self.ambient_dim, self.vectors)

    @cached_property
    def sparse_vectors(self) -> tuple[tuple[tuple[int, Fraction], ...], ...]:
        return tuple(tuple((k, a) for k, a in enumerate(v) if a) for v in self.vectors)

    def coordinates(self, v: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
        if len(v) != self.ambient_dim:
            raise AmbientMismatch(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        coeffs = tuple(as_scalar(v[p]) for p in self.pivots)
        residual = [as_scalar(x) for x in v]
        for c, b in zip(coeffs, self.sparse_vectors):
            if c:
                for k, bk in b:
                    residual[k] -= c * bk
        return None if any(residual) else coeffs

    def combination(self, coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """sum_i coeffs[i] * vectors[i] as a dense vector."""
        out = [ZERO] * self.ambient_dim
        for c, b in zip(coeffs, self.sparse_vectors):
            if c:
                for k, bk in b:
                    out[k] += c * bk
        return tuple(out)

    def contains(self, v: Sequence[Fraction]) -> bool:
        return self.coordinates(v) is not None

    def __le__(self, other: SubspaceBasis) -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch("subspaces live in different ambient spaces")
        return all(other.contains(v) for v in self.vectors)

    def __ge__(self, other: SubspaceBasis) -> bool:
        return other <= self

    def __and__(self, other: SubspaceBasis) -> SubspaceBasis:
        return intersect([self, other])

    def __add__(self, other: SubspaceBasis) -> SubspaceBasis:
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch("subspaces live in different ambient spaces")
        return SubspaceBasis.span(self.vectors + other.vectors, self.ambient_dim)

    def annihilator(self) -> SubspaceBasis:
        """All c with c . v = 0 for every v in the subspace."""
        return nullspace(self.as_matrix())


def nullspace(m: RatMatrix) -> SubspaceBasis:
    red, piv = _echelon(m.rows, m.ncols)
    pivset = set(piv)
    vecs = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [ZERO] * m.ncols
        v[f] = ONE
        for row, p in zip(red, piv):
            v[p] = -row[f]
        vecs.append(v)
    return SubspaceBasis.span(vecs, m.ncols)


def kernel_of_rows(rows: Iterable[Sequence[Fraction]], ncols: int) -> SubspaceBasis:
    """Common kernel of a stream of row constraints, reduced as they arrive."""
    red = _reduce_sparse({k: v for k, v in enumerate(r) if v} for r in rows)
    pivots = {p for p, _ in red}
    vecs = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = {f: ONE}
        for p, row in red:
            c = row.get(f)
            if c:
                v[p] = -c
        vecs.append(v)
    return SubspaceBasis.span_sparse(vecs, ncols)


def column_space(m: RatMatrix) -> SubspaceBasis:
    return SubspaceBasis.span(m.transpose().rows, m.nrows)


def intersect(bases: Sequence[SubspaceBasis], ambient_dim: int | None = None) -> SubspaceBasis:
    """Intersection of subspaces; the empty intersection is the full space."""
    dims = {b.ambient_dim for b in bases}
    if ambient_dim is not None:
        dims.add(ambient_dim)
    if len(dims) != 1:
        raise AmbientMismatch(f"ambient dimensions differ: {sorted(dims)}")
    n = dims.pop()
    if not bases:
        return SubspaceBasis.full(n)
    if len(bases) == 1:
        return bases[0]
    constraints: list[tuple[Fraction, ...]] = []
    for b in bases:
        constraints.extend(b.annihilator().vectors)
    if not constraints:
        return SubspaceBasis.full(n)
    return nullspace(RatMatrix(len(constraints), n, tuple(constraints)))


def preimage(m: RatMatrix, target: SubspaceBasis) -> SubspaceBasis:
    """{x : m x lies in target}."""
    if target.ambient_dim != m.nrows:
        raise AmbientMismatch("target subspace does not live in the codomain")
    ann = target.annihilator()
    if ann.dim == 0:
        return SubspaceBasis.full(m.ncols)
    return nullspace(ann.as_matrix() @ m)


def image(m: RatMatrix, sub: SubspaceBasis) -> SubspaceBasis:
    if sub.ambient_dim != m.ncols:
        raise AmbientMismatch("subspace does not live in the domain")
    return SubspaceBasis.span((m.apply(v) for v in sub.vectors), m.nrows)


def in_span(v: Sequence, b: SubspaceBasis) -> tuple[bool, tuple[Fraction, ...] | None]:
    """Membership test; coefficients are with respect to ``b.vectors``."""
    coeffs = b.coordinates([as_scalar(x) for x in v])
    return coeffs is not None, coeffs


def independent(vs: Sequence[Sequence]) -> bool:
    if not vs:
        return True
    n = len(vs[0])
    if any(len(v) != n for v in vs):
        raise AmbientMismatch("vectors have different lengths")
    return rank(RatMatrix.from_rows(vs, n)) == len(vs)
