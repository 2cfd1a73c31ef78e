from fractions import Fraction
from itertools import combinations

import pytest

from hypertoric import build, check_parameter_regularity
from hypertoric.errors import DimensionTooLarge, NonPrimitiveSubtorus, RankDeficient, ValidationError
from hypertoric.exact_linalg import GaussRational, is_saturated, rank, rational_solve
from hypertoric.hypertoric_data import SmoothnessReport, complex_level_point, level_point
from hypertoric.random_instances import random_smooth_instance


def test_example_build(example):
    assert example.U.tolist() == [[1, -1, -1]]
    assert (example.m, example.n, example.d) == (2, 1, 3)
    assert not (example.A @ example.U.T).any()
    assert (example.U @ example.section).tolist() == [[1]]
    assert example.beta_is_zero


def test_eguchi_hanson_build(eguchi_hanson):
    assert eguchi_hanson.U.tolist() == [[1, -1]]
    assert eguchi_hanson.n == 1


def test_trivial_subtorus(flat_line):
    assert flat_line.U.tolist() == [[1]]
    assert (flat_line.m, flat_line.n, flat_line.d) == (0, 1, 1)


def test_point_quotient():
    data = build([[1, 0], [0, 1]], [1, 1], [0, 0])
    assert data.n == 0 and data.U.shape == (0, 2)
    assert check_parameter_regularity(data).status == "smooth manifold"


def test_non_primitive_subtorus():
    with pytest.raises(NonPrimitiveSubtorus):
        build([[2]], [1], [0])
    with pytest.raises(NonPrimitiveSubtorus):
        build([[1, 1, 0], [1, -1, 0]], [0, 0], [0, 0])


def test_rank_deficient():
    with pytest.raises(RankDeficient):
        build([[1, 1], [2, 2]], [0, 0], [0, 0])
    with pytest.raises(RankDeficient):
        build([[1], [0]], [0, 0], [0, 0])


def test_length_mismatch():
    with pytest.raises(ValidationError):
        build([[1, 1]], [1, 2], [0])


def test_complex_beta_accepted():
    data = build([[1, 1]], [1], [("1/2", -3)])
    assert data.beta[0] == GaussRational(Fraction(1, 2), -3)
    y = complex_level_point(data)
    assert sum(y, GaussRational()) == data.beta[0]


def test_level_points(example):
    x = level_point(example)
    assert list(example.A @ x) == [Fraction(1, 2), 1]


class TestRegularity:
    def test_example_regular(self, example):
        r = check_parameter_regularity(example)
        assert r.parameter_regular and r.unimodular
        assert r.offending_subsets == []
        assert r.status == "smooth manifold"

    def test_singular_cone(self):
        r = check_parameter_regularity(build([[1, 1]], [0], [0]))
        assert not r.parameter_regular
        assert r.offending_subsets == [(0, 1)]
        assert r.status == "singular"

    def test_nonzero_beta_resolves(self):
        assert check_parameter_regularity(build([[1, 1]], [0], [1])).parameter_regular

    def test_m_zero_vacuous(self, flat_line):
        assert check_parameter_regularity(flat_line).parameter_regular

    def test_orbifold(self):
        # normals u_1, u_2 span a sublattice of index 2
        data = build([[1, 1, 2]], [1], [0])
        r = check_parameter_regularity(data)
        assert not r.unimodular
        assert r.status == "orbifold"
        assert r.offending_subsets

    def test_round_trip(self):
        r = check_parameter_regularity(build([[1, 1]], [0], [0]))
        assert SmoothnessReport.from_dict(r.to_dict()) == r

    def test_offending_empty_iff_flags(self, rng):
        for _ in range(20):
            A = rng.integers(-2, 3, size=(1, 3)).tolist()
            try:
                data = build(A, [int(rng.integers(-1, 2))], [0])
            except ValidationError:
                continue
            r = check_parameter_regularity(data)
            assert (not r.offending_subsets) == (r.parameter_regular and r.unimodular)

    def test_dimension_cap(self):
        data = build([[1] * 17], [1], [0])
        with pytest.raises(DimensionTooLarge):
            check_parameter_regularity(data)

    def test_brute_force_criterion(self, rng):
        """Oracle: a critical point exists iff some Z admits solutions of both systems."""
        for _ in range(15):
            data = random_smooth_instance(rng, d_max=5, n_max=2)
            # put alpha on a hyperplane-degenerate value half of the time
            alpha = [Fraction(0)] * data.m if rng.random() < 0.5 else list(data.alpha)
            degenerate = build(data.A, alpha, [0] * data.m)
            critical = False
            for k in range(data.d + 1):
                for Z in combinations(range(data.d), k):
                    keep = [i for i in range(data.d) if i not in Z]
                    if keep and rank(data.A[:, keep]) == data.m:
                        continue
                    sub = data.A[:, keep]
                    if keep and rational_solve(sub, degenerate.alpha) is not None:
                        critical = True
                    elif not keep and not any(degenerate.alpha):
                        critical = True
            assert check_parameter_regularity(degenerate).parameter_regular == (not critical)

    def test_generic_perturbation_keeps_regular(self, rng):
        # regular alpha form an open set, so a small enough nudge stays regular
        for _ in range(10):
            data = random_smooth_instance(rng, d_max=6, n_max=3, beta_zero=True)
            for _ in range(3):
                eps = [Fraction(int(rng.integers(-50, 51)), 10**9) for _ in range(data.m)]
                pert = build(data.A, [a + e for a, e in zip(data.alpha, eps)], data.beta)
                assert check_parameter_regularity(pert).parameter_regular

def test_kernel_is_saturated_for_random_data(rng):
    for _ in range(20):
        data = random_smooth_instance(rng, d_max=7)
        assert is_saturated(data.U)
        assert not (data.A @ data.U.T).any()
        assert data.m + data.n == data.d
