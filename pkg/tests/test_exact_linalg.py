from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from hypertoric.exact_linalg import (
    GaussRational,
    det,
    hermite_rows,
    int_matrix,
    integer_kernel_basis,
    is_saturated,
    is_unimodular_configuration,
    lp_maximize,
    rank,
    rational_kernel,
    rational_solve,
    right_inverse,
    smith_normal_form,
)


def int_matrices(max_rows=4, max_cols=5, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def brute_force_unimodular(U):
    n, d = U.shape
    for idx in combinations(range(d), n):
        if int(sympy.Matrix(U[:, list(idx)].tolist()).det()) not in (0, 1, -1):
            return False
    return True


class TestSmithNormalForm:
    def test_example_2x3(self):
        M = int_matrix([[1, 1, 0], [1, 0, 1]])
        S, L, R = smith_normal_form(M)
        assert S.tolist() == [[1, 0, 0], [0, 1, 0]]
        assert (L @ M @ R == S).all()
        assert abs(det(L)) == 1 and abs(det(R)) == 1

    def test_identity(self):
        I = int_matrix(np.identity(3, dtype=int).tolist())
        S, L, R = smith_normal_form(I)
        assert S.tolist() == I.tolist()
        assert L.tolist() == I.tolist()
        assert R.tolist() == I.tolist()

    def test_already_diagonal(self):
        S, _, _ = smith_normal_form(int_matrix([[2, 0], [0, 2]]))
        assert S.tolist() == [[2, 0], [0, 2]]

    def test_divisibility_is_enforced(self):
        S, _, _ = smith_normal_form(int_matrix([[2, 0], [0, 3]]))
        assert S.tolist() == [[1, 0], [0, 6]]

    def test_sympy_reference(self):
        m = [[12, 6, 4], [3, 9, 6], [2, 16, 14]]
        S, _, _ = smith_normal_form(int_matrix(m))
        assert [S[i, i] for i in range(3)] == [1, 10, 30]

    @settings(max_examples=150, deadline=None)
    @given(int_matrices())
    def test_reconstruction_and_unimodularity(self, rows):
        M = int_matrix(rows)
        S, L, R = smith_normal_form(M)
        assert (L @ M @ R == S).all()
        assert abs(det(L)) == 1 and abs(det(R)) == 1
        diag = [S[i, i] for i in range(min(S.shape))]
        assert all(v >= 0 for v in diag)
        off = S.copy()
        for i in range(len(diag)):
            off[i, i] = 0
        assert not off.any()
        nz = [v for v in diag if v]
        assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
        assert diag.index(0) >= len(nz) if 0 in diag else True
        assert len(nz) == rank(M)


class TestKernel:
    def test_example_kernel(self):
        K = integer_kernel_basis(int_matrix([[1, 1, 0], [1, 0, 1]]))
        assert K.tolist() == [[1, -1, -1]]

    def test_single_row(self):
        K = integer_kernel_basis(int_matrix([[1, 1]]))
        assert K.tolist() == [[1, -1]]
        assert sympy.igcd(*K[0]) == 1

    def test_injective_map(self):
        assert integer_kernel_basis(int_matrix(np.identity(3, dtype=int).tolist())).shape == (0, 3)

    def test_empty_matrix_kernel_is_everything(self):
        K = integer_kernel_basis(int_matrix([], ncols=2))
        assert K.tolist() == [[1, 0], [0, 1]]

    def test_saturation_not_finite_index(self):
        # rational kernel contains (1, -2, 1)/1 but also test a scaled system
        K = integer_kernel_basis(int_matrix([[2, 4, 6]]))
        assert is_saturated(K)
        assert K.shape == (2, 3)

    @settings(max_examples=120, deadline=None)
    @given(int_matrices(max_rows=3, max_cols=6))
    def test_kernel_properties(self, rows):
        M = int_matrix(rows)
        K = integer_kernel_basis(M)
        assert K.shape[0] == M.shape[1] - rank(M)
        if K.shape[0]:
            assert not (M @ K.T).any()
            assert is_saturated(K)
            # Hermite normalisation: first nonzero entry positive
            for row in K:
                lead = next(v for v in row if v)
                assert lead > 0
            assert hermite_rows(K).tolist() == K.tolist()


class TestRationalSolve:
    def test_example_level(self):
        M = int_matrix([[1, 1, 0], [1, 0, 1]])
        x = rational_solve(M, [Fraction(1, 2), 1])
        assert list(x) == [0, Fraction(1, 2), 1]
        assert list(M @ x) == [Fraction(1, 2), 1]

    def test_identity(self):
        v = [Fraction(3, 7), -2]
        assert list(rational_solve(int_matrix([[1, 0], [0, 1]]), v)) == v

    def test_inconsistent(self):
        assert rational_solve(int_matrix([[1, 1], [1, 1]]), [1, 2]) is None

    @settings(max_examples=100, deadline=None)
    @given(int_matrices(max_rows=4, max_cols=4), st.data())
    def test_substitution(self, rows, draw):
        M = int_matrix(rows)
        x0 = [Fraction(draw.draw(st.integers(-5, 5)), draw.draw(st.integers(1, 4))) for _ in range(M.shape[1])]
        v = M @ np.array(x0, dtype=object)
        x = rational_solve(M, v)
        assert x is not None
        assert list(M @ x) == list(v)

    def test_rational_kernel(self):
        M = int_matrix([[1, 1, 0], [1, 0, 1]])
        K = rational_kernel(M)
        assert K.shape == (1, 3)
        assert not (M @ K.T).any()


class TestRank:
    def test_examples(self):
        assert rank(int_matrix([[1, 1, 0], [1, 0, 1]])) == 2
        assert rank(int_matrix([[0, 0], [0, 0]])) == 0
        assert rank(int_matrix(np.identity(4, dtype=int).tolist())) == 4

    @settings(max_examples=80, deadline=None)
    @given(int_matrices())
    def test_matches_sympy(self, rows):
        assert rank(int_matrix(rows)) == sympy.Matrix(rows).rank()

    @settings(max_examples=80, deadline=None)
    @given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n)))
    def test_det_matches_sympy(self, rows):
        assert det(int_matrix(rows)) == sympy.Matrix(rows).det()


class TestUnimodular:
    def test_examples(self):
        assert is_unimodular_configuration(int_matrix([[1, -1, -1]]))
        assert not is_unimodular_configuration(int_matrix([[2]]))
        assert is_unimodular_configuration(int_matrix([[1, 0, 1], [0, 1, 1]]))

    def test_rank_deficient_rejected(self):
        with pytest.raises(ValueError):
            is_unimodular_configuration(int_matrix([[1, 1], [2, 2]]))

    def test_non_unimodular_hidden_minor(self):
        # every column primitive, but columns 2 and 3 span index 2
        U = int_matrix([[1, 0, 1, 1], [0, 1, 1, -1]])
        assert not is_unimodular_configuration(U)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(1, 3).flatmap(
        lambda n: st.integers(n, 7).flatmap(
            lambda d: st.lists(st.lists(st.integers(-2, 2), min_size=d, max_size=d), min_size=n, max_size=n))))
    def test_agrees_with_brute_force_minors(self, rows):
        U = int_matrix(rows)
        if rank(U) < U.shape[0]:
            return
        assert is_unimodular_configuration(U) == brute_force_unimodular(U)

    def test_right_inverse(self):
        U = int_matrix([[1, 0, 1, -1], [0, 1, 1, 0]])
        S = right_inverse(U)
        assert (U @ S).tolist() == [[1, 0], [0, 1]]


class TestGaussRational:
    def test_arithmetic(self):
        a = GaussRational(1, 2)
        b = GaussRational(Fraction(1, 2), -1)
        assert a * b == GaussRational(Fraction(1, 2) + 2, -1 + 1)
        assert a + 1 == GaussRational(2, 2)
        assert 3 * a == GaussRational(3, 6)
        assert (a - a) == 0 and not (a - a)
        assert complex(b) == 0.5 - 1j

    def test_matmul_with_object_arrays(self):
        A = int_matrix([[1, 1, 0], [1, 0, 1]])
        y = np.array([GaussRational(1, 1), GaussRational(-1, 0), GaussRational(0, -1)], dtype=object)
        assert list(A @ y) == [GaussRational(0, 1), GaussRational(1, 0)]

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            GaussRational.coerce(1 + 2j)


class TestExactLP:
    def test_simple_optimum(self):
        res = lp_maximize([1, 1], [[1, 0], [0, 1], [1, 1]], [2, 3, 4])
        assert res.status == "optimal" and res.value == 4

    def test_infeasible_and_unbounded(self):
        assert lp_maximize([1], [[1], [-1]], [1, -2]).status == "infeasible"
        assert lp_maximize([1], [[-1]], [0]).status == "unbounded"

    def test_negative_rhs_needs_phase_one(self):
        # x >= 1/3, y >= 1/2, x + y <= 2, maximise x - y
        res = lp_maximize([1, -1], [[-1, 0], [0, -1], [1, 1]], [Fraction(-1, 3), Fraction(-1, 2), 2])
        assert res.value == Fraction(3, 2) - Fraction(1, 2)

    def test_infeasible_orthant(self):
        # x <= 0, y <= 0, x + y >= 1
        assert lp_maximize([0, 0], [[0, 1], [1, 0], [-1, -1]], [0, 0, -1]).status == "infeasible"

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 3).flatmap(lambda n: st.tuples(
        st.lists(st.integers(-3, 3), min_size=n, max_size=n),
        st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=6),
        st.lists(st.integers(-4, 6), min_size=6, max_size=6))))
    def test_matches_highs(self, case):
        c, G, h = case
        h = h[: len(G)]
        n = len(c)
        # bounded box keeps the reference answer finite
        G = G + [[int(i == k) for i in range(n)] for k in range(n)] + [[-int(i == k) for i in range(n)] for k in range(n)]
        h = h + [5] * (2 * n)
        ours = lp_maximize(c, G, h)
        ref = linprog([-v for v in c], A_ub=G, b_ub=h, bounds=[(None, None)] * n, method="highs")
        if ref.status == 2:
            assert ours.status == "infeasible"
            return
        assert ref.status == 0
        assert ours.status == "optimal"
        assert abs(float(ours.value) + ref.fun) < 1e-9
        assert all(sum(g * x for g, x in zip(row, ours.x)) <= b for row, b in zip(G, h))
