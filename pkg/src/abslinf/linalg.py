"""Exact linear algebra over the rationals.

Matrices are sparse (row -> {col: value}). Small matrices go through
fraction-free Bareiss elimination on an integer copy; large ones through
sparse row elimination over ``gmpy2.mpq``. Both routes return identical
reduced row echelon forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence

import gmpy2

Rational = Fraction

DENSE_CUTOFF = 64


class StructureError(ArithmeticError):
    """A complex whose differential does not square to zero."""

    def __init__(self, degree: int, msg: str = ""):
        self.degree = degree
        super().__init__(msg or f"d o d != 0 starting in degree {degree}")


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if type(x).__name__ == "mpq":
        return Fraction(int(x.numerator), int(x.denominator))
    return Fraction(x)


def fmt(x) -> str:
    x = frac(x)
    return f"{x.numerator}/{x.denominator}"


class SparseMatrix:
    """A rows x cols matrix stored as {row: {col: value}} with nonzero values."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Mapping | None = None):
        self.rows = rows
        self.cols = cols
        self.data: Dict[int, Dict[int, Fraction]] = {}
        if data:
            for (i, j), v in data.items():
                self.add(i, j, v)

    @classmethod
    def from_dense(cls, M: Sequence[Sequence]) -> "SparseMatrix":
        rows = len(M)
        cols = len(M[0]) if rows else 0
        S = cls(rows, cols)
        for i, row in enumerate(M):
            if len(row) != cols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                if v:
                    S.add(i, j, v)
        return S

    def add(self, i: int, j: int, v) -> None:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        v = frac(v)
        if not v:
            return
        r = self.data.setdefault(i, {})
        s = r.get(j, 0) + v
        if s:
            r[j] = s
        else:
            del r[j]
            if not r:
                del self.data[i]

    def get(self, i: int, j: int) -> Fraction:
        return self.data.get(i, {}).get(j, Fraction(0))

    def triplets(self) -> List[tuple]:
        return sorted((i, j, v) for i, r in self.data.items() for j, v in r.items())

    def to_dense(self) -> List[List[Fraction]]:
        M = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for i, j, v in self.triplets():
            M[i][j] = v
        return M

    def is_zero(self) -> bool:
        return not self.data

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = SparseMatrix(self.rows, other.cols)
        for i, r in self.data.items():
            acc: Dict[int, Fraction] = {}
            for k, a in r.items():
                for j, b in other.data.get(k, {}).items():
                    acc[j] = acc.get(j, 0) + a * b
            for j, v in acc.items():
                if v:
                    out.data.setdefault(i, {})[j] = v
        return out

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "SparseMatrix":
        out = SparseMatrix(self.rows, self.cols)
        for i, r in self.data.items():
            out.data[row_perm[i]] = {col_perm[j]: v for j, v in r.items()}
        return out


def as_sparse(M) -> SparseMatrix:
    if isinstance(M, SparseMatrix):
        return M
    return SparseMatrix.from_dense(M)


# ---------------------------------------------------------------- elimination

def _bareiss_rref(M: SparseMatrix) -> tuple:
    """Fraction-free Bareiss forward pass, then exact back substitution."""
    rows, cols = M.rows, M.cols
    # clear denominators row by row
    A: List[List[int]] = []
    for i in range(rows):
        r = M.data.get(i, {})
        den = 1
        for v in r.values():
            den = den * v.denominator // gmpy2.gcd(den, v.denominator)
        row = [0] * cols
        for j, v in r.items():
            row[j] = int(v * den)
        A.append(row)
    pivots: List[int] = []
    prev = 1
    rank = 0
    for c in range(cols):
        p = next((i for i in range(rank, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[rank], A[p] = A[p], A[rank]
        piv = A[rank][c]
        for i in range(rank + 1, rows):
            a = A[i][c]
            Ai, Ar = A[i], A[rank]
            for j in range(c, cols):
                Ai[j] = (piv * Ai[j] - a * Ar[j]) // prev
        prev = piv
        pivots.append(c)
        rank += 1
    R = [[Fraction(x) for x in A[i]] for i in range(rank)]
    for k in range(rank - 1, -1, -1):
        c = pivots[k]
        inv = 1 / R[k][c]
        R[k] = [x * inv for x in R[k]]
        for i in range(k):
            f = R[i][c]
            if f:
                R[i] = [a - f * b for a, b in zip(R[i], R[k])]
    out = []
    for row in R:
        out.append({j: v for j, v in enumerate(row) if v})
    return out, pivots


def _sparse_rref(M: SparseMatrix) -> tuple:
    """Sparse Gauss-Jordan over mpq with deterministic column-order pivots."""
    mpq = gmpy2.mpq
    pending = [{j: mpq(v.numerator, v.denominator) for j, v in r.items()} for _, r in sorted(M.data.items())]
    basis: Dict[int, Dict[int, object]] = {}
    for r in pending:
        r = dict(r)
        # reduce against existing pivots until the leading column is new
        while r:
            c = min(r)
            b = basis.get(c)
            if b is None:
                break
            f = r[c]
            for j, v in b.items():
                x = r.get(j, 0) - f * v
                if x:
                    r[j] = x
                else:
                    r.pop(j, None)
        if not r:
            continue
        c = min(r)
        inv = 1 / r[c]
        r = {j: v * inv for j, v in r.items()}
        basis[c] = r
    pivots = sorted(basis)
    # back substitution to reduced form
    for k in reversed(pivots):
        rk = basis[k]
        for c in pivots:
            if c >= k:
                break
            rc = basis[c]
            f = rc.get(k)
            if f:
                for j, v in rk.items():
                    x = rc.get(j, 0) - f * v
                    if x:
                        rc[j] = x
                    else:
                        rc.pop(j, None)
    out = [{j: frac(v) for j, v in basis[c].items()} for c in pivots]
    return out, pivots


def rref(M) -> tuple:
    """Reduced row echelon form: (list of sparse rows, pivot columns)."""
    M = as_sparse(M)
    if M.rows < DENSE_CUTOFF and M.cols < DENSE_CUTOFF:
        return _bareiss_rref(M)
    return _sparse_rref(M)


def rank(M) -> int:
    M = as_sparse(M)
    if M.is_zero():
        return 0
    return len(rref(M)[1])


def kernel_basis(M) -> List[List[Fraction]]:
    """Basis of the right kernel, one vector per free column."""
    M = as_sparse(M)
    R, pivots = rref(M)
    pset = set(pivots)
    out = []
    for f in range(M.cols):
        if f in pset:
            continue
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            a = row.get(f)
            if a:
                v[p] = -a
        out.append(v)
    return out


def solve(M, b: Sequence) -> List[Fraction] | None:
    """One solution of M x = b, or None when inconsistent."""
    M = as_sparse(M)
    aug = SparseMatrix(M.rows, M.cols + 1)
    aug.data = {i: dict(r) for i, r in M.data.items()}
    for i, v in enumerate(b):
        if v:
            aug.add(i, M.cols, v)
    R, pivots = rref(aug)
    if pivots and pivots[-1] == M.cols:
        return None
    x = [Fraction(0)] * M.cols
    for row, p in zip(R, pivots):
        x[p] = row.get(M.cols, Fraction(0))
    return x


# ------------------------------------------------------------------- homology

@dataclass
class GradedComplex:
    """Finite chain complex with degree -1 differential.

    ``basis[k]`` lists the labels in degree k; ``d[k]`` is the matrix of
    d: C_k -> C_{k-1} with rows indexed by ``basis[k-1]``.
    """

    basis: Dict[int, list] = field(default_factory=dict)
    d: Dict[int, SparseMatrix] = field(default_factory=dict)

    def dim(self, k: int) -> int:
        return len(self.basis.get(k, ()))

    def diff(self, k: int) -> SparseMatrix:
        m = self.d.get(k)
        if m is None:
            return SparseMatrix(self.dim(k - 1), self.dim(k))
        if (m.rows, m.cols) != (self.dim(k - 1), self.dim(k)):
            raise ValueError(f"differential in degree {k} has wrong shape")
        return m


def check_square_zero(C: GradedComplex, degrees: Iterable[int]) -> None:
    for k in degrees:
        if not C.diff(k).matmul(C.diff(k + 1)).is_zero():
            raise StructureError(k + 1, f"d o d != 0 on degree {k + 1} (landing in degree {k - 1})")


def homology_dims(C: GradedComplex, degrees: Iterable[int]) -> Dict[int, int]:
    degrees = list(degrees)
    if not degrees:
        return {}
    check_square_zero(C, range(min(degrees) - 1, max(degrees) + 2))
    ranks: Dict[int, int] = {}

    def r(k: int) -> int:
        if k not in ranks:
            ranks[k] = rank(C.diff(k))
        return ranks[k]

    return {k: C.dim(k) - r(k) - r(k + 1) for k in degrees}
