"""GF(2) linear algebra against a dense numpy oracle."""

from random import Random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strandcalc import f2
from strandcalc.errors import NotAComplex

from helpers import dense, dense_rank, dense_solvable, random_complex, \
    random_matrix


def mat(rows, cols, entries):
    return f2.F2Matrix(rows, cols, frozenset(entries))


def vec(*indices):
    return f2.F2Vector(frozenset(indices))


class TestRank:
    def test_identity(self):
        assert f2.rank(f2.F2Matrix.identity(2)) == 2

    def test_zero(self):
        assert f2.rank(f2.F2Matrix.zero(3, 5)) == 0

    def test_dependent_rows(self):
        # both rows are (1, 1): rank 1, frozen from the dense oracle
        m = mat(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
        assert dense_rank(dense(m)) == 1
        assert f2.rank(m) == 1


class TestKernel:
    def test_identity_trivial(self):
        assert f2.kernel_basis(f2.F2Matrix.identity(2)) == []

    def test_zero_full(self):
        basis = f2.kernel_basis(f2.F2Matrix.zero(2, 3))
        assert len(basis) == 3

    def test_sum_equation(self):
        # x0 + x1 = 0 has kernel {0, 1}; checked against all 4 vectors
        m = mat(1, 2, [(0, 0), (0, 1)])
        solutions = [v for v in [frozenset(), {0}, {1}, {0, 1}]
                     if not m.apply(f2.F2Vector(frozenset(v)))]
        assert frozenset({0, 1}) in [frozenset(s) for s in solutions]
        basis = f2.kernel_basis(m)
        assert basis == [vec(0, 1)]

    def test_kernel_vectors_annihilated(self):
        rng = Random(3)
        for _ in range(25):
            m = random_matrix(rng, rng.randrange(1, 9), rng.randrange(1, 9))
            basis = f2.kernel_basis(m)
            assert f2.rank(m) + len(basis) == m.cols
            for v in basis:
                assert not m.apply(v)

    def test_order_by_free_column(self):
        m = mat(1, 3, [(0, 1)])  # pivot col 1; free cols 0, 2
        basis = f2.kernel_basis(m)
        assert [min(v.support) for v in basis] == [0, 2]


class TestSolve:
    def test_identity(self):
        assert f2.solve(f2.F2Matrix.identity(1), vec(0)) == vec(0)

    def test_inconsistent(self):
        assert f2.solve(f2.F2Matrix.zero(2, 2), vec(0)) is None

    def test_underdetermined(self):
        # x0 + x1 = 1: any valid solution accepted, then checked exactly
        m = mat(1, 2, [(0, 0), (0, 1)])
        x = f2.solve(m, vec(0))
        assert x is not None
        assert m.apply(x) == vec(0)

    def test_against_oracle(self):
        rng = Random(4)
        for _ in range(50):
            rows, cols = rng.randrange(1, 10), rng.randrange(1, 10)
            m = random_matrix(rng, rows, cols)
            b = f2.F2Vector(frozenset(
                r for r in range(rows) if rng.random() < 0.5))
            x = f2.solve(m, b)
            bd = np.zeros(rows, dtype=np.uint8)
            for r in b.support:
                bd[r] = 1
            assert (x is not None) == dense_solvable(dense(m), bd)
            if x is not None:
                assert m.apply(x) == b


class TestHomology:
    def test_zero_complex(self):
        z = f2.F2Matrix.zero(4, 4)
        assert f2.homology_dim(z, z) == 4

    def test_exact(self):
        n = 3
        assert f2.homology_dim(f2.F2Matrix.identity(n),
                               f2.F2Matrix.zero(n, n)) == 0

    def test_not_a_complex(self):
        i2 = f2.F2Matrix.identity(2)
        with pytest.raises(NotAComplex):
            f2.homology_dim(i2, i2)

    def test_against_oracle(self):
        rng = Random(5)
        for _ in range(25):
            d_in, d_out = random_complex(rng, 6)
            expect = ((d_out.cols - dense_rank(dense(d_out)))
                      - dense_rank(dense(d_in)))
            assert f2.homology_dim(d_in, d_out) == expect


@given(st.frozensets(st.integers(0, 30)), st.frozensets(st.integers(0, 30)))
def test_vector_addition_is_symmetric_difference(a, b):
    assert (f2.F2Vector(a) + f2.F2Vector(b)).support == a ^ b


@given(st.frozensets(st.integers(0, 30)))
def test_vector_self_inverse(a):
    v = f2.F2Vector(a)
    assert not (v + v)


@settings(max_examples=30)
@given(st.integers(0, 6), st.integers(1, 6), st.integers(0, 2 ** 12))
def test_rank_matches_oracle(rows, cols, seed):
    rng = Random(seed)
    m = random_matrix(rng, rows, cols)
    assert f2.rank(m) == dense_rank(dense(m))
