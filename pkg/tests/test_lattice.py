import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from conftest import tri_of
from sl3skein.cone import cone_constraints, in_cone
from sl3skein.errors import NotASublattice
from sl3skein.lattice import (
    GE,
    Infinite,
    SublatticeBasis,
    det,
    elementary_divisors,
    enumerate_points,
    hermite_normal_form,
    identity,
    kernel_mod_m_lattice,
    lattice_index,
    matmul,
    smith_normal_form,
    solve_left,
)

small_matrix = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def diag(D):
    return [D[i][i] for i in range(min(len(D), len(D[0])))]


def test_snf_examples():
    assert diag(smith_normal_form(identity(3))[1]) == [1, 1, 1]
    assert diag(smith_normal_form([[2, 0], [0, 6]])[1]) == [2, 6]
    assert diag(smith_normal_form([[2, 4], [6, 8]])[1]) == [2, 4]


@given(small_matrix)
def test_snf_decomposition(A):
    U, D, V = smith_normal_form(A)
    assert matmul(matmul(U, D), V) == A
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    d = [x for x in diag(D) if x]
    assert all(x > 0 for x in d)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)


@given(small_matrix)
def test_divisors_match_sympy(A):
    ours = elementary_divisors(A)
    ref = [abs(int(x)) for x in diag(sympy_snf(Matrix(A)).tolist()) if x != 0]
    assert ours == sorted(ref)


@given(small_matrix)
def test_hnf_spans_same_lattice(A):
    H = hermite_normal_form(A)
    L = SublatticeBasis(len(A[0]), tuple(tuple(r) for r in H))
    assert all(L.contains(r) for r in A)
    # every HNF row is an integer combination of the original rows
    for r in H:
        assert _in_row_span(A, r)


def _in_row_span(A, r):
    """``r`` in the integer row span of ``A``, decided through the SNF of ``A``."""
    U, D, V = smith_normal_form(A)
    y = solve_left(V, [r])[0]  # r = y V
    d = diag(D)
    for i, c in enumerate(y):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if c != 0:
                return False
        elif (c / di).denominator != 1:
            return False
    return True


def test_index_examples():
    Z2 = SublatticeBasis.standard(2)
    assert lattice_index(Z2, [[2, 0], [0, 2]]) == 4
    assert lattice_index(Z2, [[1, 1], [1, -1]]) == 2
    assert lattice_index(Z2, [[1, 1]]) is Infinite
    with pytest.raises(NotASublattice):
        lattice_index(SublatticeBasis.from_generators([[2, 0], [0, 2]]), [[1, 0]])


@pytest.mark.parametrize("rank", [1, 3, 5, 8])
@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_index_of_scaled(rank, m):
    gens = [[(i + 1) * (j == i) + (j == (i + 1) % rank) for j in range(rank)] for i in range(rank)]
    L = SublatticeBasis.from_generators(gens)
    assert lattice_index(L, L.scaled(m).basis) == m**rank


def test_kernel_examples():
    Z2 = SublatticeBasis.standard(2)
    assert kernel_mod_m_lattice([[0], [0]], 3, Z2) == Z2
    assert kernel_mod_m_lattice([[1]], 3, SublatticeBasis.standard(1)).basis == ((3,),)
    K = kernel_mod_m_lattice([[1], [1]], 3, Z2)
    assert K == SublatticeBasis.from_generators([[1, -1], [0, 3]])
    assert lattice_index(Z2, K.basis) == 3


@given(small_matrix, st.integers(2, 12))
def test_kernel_by_brute_force(A, m):
    n = len(A)
    K = kernel_mod_m_lattice(A, m, SublatticeBasis.standard(n))
    assert K.rank == n
    idx = lattice_index(SublatticeBasis.standard(n), K.basis)
    assert m ** len(A[0]) % idx == 0 if A[0] else idx == 1
    if n <= 3 and m <= 6:
        count = sum(
            1
            for x in itertools.product(range(m), repeat=n)
            if all(sum(x[i] * A[i][c] for i in range(n)) % m == 0 for c in range(len(A[0])))
        )
        # kernel classes in (Z/m)^n number m^n / index
        assert count * idx == m**n


def test_membership_certificate():
    L = SublatticeBasis.from_generators([[1, 2], [0, 6]])
    A, d = L.membership_certificate()
    for x in itertools.product(range(-6, 7), repeat=2):
        cert = all(sum(x[i] * A[i][j] for i in range(2)) % d == 0 for j in range(2))
        assert cert == L.contains(x)


def test_enumerate_examples():
    assert enumerate_points([], 2, 1) == [(0, 0), (0, 1), (1, 0)]
    assert enumerate_points([((1, -1), GE, 0)], 2, 1) == [(0, 0), (1, 0)]


def test_enumerate_cone_vs_filter():
    tri = tri_of(0, 3)
    got = enumerate_points(cone_constraints(tri), tri.n_vertices, 3)
    ref = [x for x in enumerate_points([], tri.n_vertices, 3) if in_cone(tri, x)]
    assert got == ref
