from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, strategies as st

from abslinf import linalg as L


def test_kernel_examples():
    assert L.kernel_basis([[1, 0], [0, 1]]) == []
    assert len(L.kernel_basis([[0, 0, 0], [0, 0, 0]])) == 3
    (v,) = L.kernel_basis([[1, 2], [2, 4]])
    assert v[0] == -2 * v[1] and v[1] != 0


def test_homology_examples():
    C = L.GradedComplex({2: ["x"]})
    assert L.homology_dims(C, [2]) == {2: 1}
    C = L.GradedComplex({0: ["a"], 1: ["b"]}, {1: L.SparseMatrix.from_dense([[1]])})
    assert L.homology_dims(C, [0, 1]) == {0: 0, 1: 0}
    # boundary of a triangle
    d1 = L.SparseMatrix.from_dense([[-1, -1, 0], [1, 0, -1], [0, 1, 1]])
    C = L.GradedComplex({0: ["0", "1", "2"], 1: ["01", "02", "12"]}, {1: d1})
    assert L.homology_dims(C, [0, 1]) == {0: 1, 1: 1}


def test_square_zero_violation_names_degree():
    C = L.GradedComplex({0: ["a"], 1: ["b"], 2: ["c"]},
                        {1: L.SparseMatrix.from_dense([[1]]), 2: L.SparseMatrix.from_dense([[1]])})
    with pytest.raises(L.StructureError) as e:
        L.homology_dims(C, [1])
    assert e.value.degree == 2


def test_fmt_is_reduced():
    assert L.fmt(F(4, -6)) == "-2/3"
    assert L.fmt(3) == "3/1"


def test_solve():
    assert L.solve([[1, 1], [1, -1]], [2, 0]) == [1, 1]
    assert L.solve([[1, 1], [1, 1]], [1, 2]) is None


matrices = st.integers(1, 7).flatmap(lambda r: st.integers(1, 7).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3).map(lambda x: F(x, 1 + abs(x) % 2)), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


@given(matrices)
def test_rank_nullity(M):
    assert L.rank(M) + len(L.kernel_basis(M)) == len(M[0])


@given(matrices)
def test_kernel_vectors_are_killed(M):
    for v in L.kernel_basis(M):
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)


@given(matrices)
def test_elimination_routes_agree_with_each_other_and_sympy(M):
    S = L.as_sparse(M)
    a = L._bareiss_rref(S)
    b = L._sparse_rref(S)
    assert a[1] == b[1]
    assert [dict(r) for r in a[0]] == [{k: L.frac(v) for k, v in r.items()} for r in b[0]]
    R, piv = sympy.Matrix(M).rref()
    assert tuple(a[1]) == tuple(piv)
    for i, row in enumerate(a[0]):
        assert [row.get(j, 0) for j in range(len(M[0]))] == [F(int(x.p), int(x.q)) for x in R.row(i)]


@given(st.lists(st.integers(-2, 2), min_size=6, max_size=6), st.permutations(range(3)), st.permutations(range(3)))
def test_homology_invariant_under_basis_permutation(entries, p1, p0):
    # 3 -> 3 map in degree 1 and the zero complex around it
    d1 = L.SparseMatrix.from_dense([entries[:3], entries[3:], [0, 0, 0]])
    C = L.GradedComplex({0: list("abc"), 1: list("xyz")}, {1: d1})
    C2 = L.GradedComplex({0: list("abc"), 1: list("xyz")}, {1: d1.permuted(list(p0), list(p1))})
    assert L.homology_dims(C, [0, 1]) == L.homology_dims(C2, [0, 1])


def test_rank_nullity_200_seeded():
    import random
    rng = random.Random(2024)
    for _ in range(200):
        r, c = rng.randint(1, 9), rng.randint(1, 9)
        M = [[F(rng.randint(-4, 4), rng.randint(1, 3)) if rng.random() < 0.6 else F(0) for _ in range(c)]
             for _ in range(r)]
        assert L.rank(M) + len(L.kernel_basis(M)) == c
