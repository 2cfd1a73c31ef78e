import numpy as np
import pytest

from hypertoric.errors import NonUnitParameter, ValidationError
from hypertoric.moment_maps import (
    FlatPoint,
    act,
    complex_structure,
    constraint_jacobian,
    constraint_values,
    evaluate,
    metric,
    omega,
    omega_c,
    subtorus_element,
    to_real,
)
from hypertoric.random_instances import random_smooth_instance


def random_point(rng, d, scale=1.0):
    z = rng.normal(size=d) + 1j * rng.normal(size=d)
    w = rng.normal(size=d) + 1j * rng.normal(size=d)
    return FlatPoint(scale * z, scale * w)


def e(i, d):
    v = np.zeros(d, dtype=complex)
    v[i] = 1
    return v


class TestAct:
    def test_identity(self, rng):
        p = random_point(rng, 3)
        q = act(p, np.ones(3))
        assert np.array_equal(q.z, p.z) and np.array_equal(q.w, p.w)

    def test_direct_substitution(self):
        q = act(FlatPoint([1, 0], [0, 1]), [1j, 1j])
        assert np.allclose(q.z, [1j, 0]) and np.allclose(q.w, [0, -1j])

    def test_non_unit(self):
        with pytest.raises(NonUnitParameter):
            act(FlatPoint([1], [1]), [2])

    def test_non_finite_point(self):
        with pytest.raises(ValidationError):
            FlatPoint([np.nan], [0])

    def test_subtorus_invariance(self, example, rng):
        for _ in range(100):
            p = random_point(rng, 3)
            q = act(p, subtorus_element(example, rng.uniform(0, 2 * np.pi, size=2)))
            a, b = evaluate(example, p), evaluate(example, q)
            assert np.allclose(a.mu_r, b.mu_r, atol=1e-12, rtol=0)
            assert np.allclose(a.mu_c, b.mu_c, atol=1e-12, rtol=0)

    def test_y_invariant_under_full_torus(self, rng):
        data = random_smooth_instance(rng, d_max=6)
        for _ in range(100):
            p = random_point(rng, data.d)
            q = act(p, np.exp(1j * rng.uniform(0, 2 * np.pi, size=data.d)))
            assert np.allclose(evaluate(data, p).y, evaluate(data, q).y, atol=1e-12, rtol=0)
            assert np.allclose(evaluate(data, p).x, evaluate(data, q).x, atol=1e-12, rtol=0)


class TestEvaluate:
    def test_coordinate_point(self, example):
        v = evaluate(example, FlatPoint([1, 0, 0], [0, 0, 0]))
        assert np.allclose(v.x, [0.5, 0, 0])
        assert np.allclose(v.y, 0)
        assert np.allclose(v.mu_r, [0.5, 0.5])
        assert np.allclose(v.mu_c, 0)

    def test_origin(self, example):
        v = evaluate(example, FlatPoint(np.zeros(3), np.zeros(3)))
        assert not v.x.any() and not v.y.any() and not v.mu_r.any() and not v.mu_c.any()

    def test_residual_values_determine_flat(self, example, rng):
        p = random_point(rng, 3)
        v = evaluate(example, p)
        A = np.array(example.A, dtype=float)
        assert np.allclose(v.mu_r, A @ v.x)
        assert np.allclose(v.mu_c, A @ v.y)


class TestForms:
    def test_canonical_pairing(self):
        z0 = np.zeros(2)
        assert omega_c(None, (e(0, 2), z0), (z0, e(0, 2))) == 1

    def test_equal_vectors(self, rng):
        X = rng.normal(size=8)
        assert omega_c(None, X, X) == 0

    def test_lagrangian_coordinate_plane(self):
        z0 = np.zeros(2)
        assert omega_c(None, (e(0, 2), z0), (e(1, 2), z0)) == 0

    def test_antisymmetric_and_bilinear(self, rng):
        for _ in range(20):
            X, Y, W = rng.normal(size=(3, 12))
            assert abs(omega_c(None, X, Y) + omega_c(None, Y, X)) < 1e-14
            a = rng.normal()
            lhs = omega_c(None, a * X + W, Y)
            assert abs(lhs - (a * omega_c(None, X, Y) + omega_c(None, W, Y))) < 1e-12

    def test_quaternionic_relation(self, rng):
        for _ in range(20):
            X, Y = rng.normal(size=(2, 12))
            assert abs(omega(2, X, Y) - omega(3, X, complex_structure(1, Y))) < 1e-12

    def test_kahler_forms_from_metric(self, rng):
        for _ in range(20):
            X, Y = rng.normal(size=(2, 8))
            for k in (1, 2, 3):
                assert abs(omega(k, X, Y) - metric(complex_structure(k, X), Y)) < 1e-12

    def test_quaternion_algebra(self, rng):
        X = rng.normal(size=8)
        I = lambda k, v: complex_structure(k, v)
        assert np.allclose(I(1, I(2, X)), I(3, X))
        for k in (1, 2, 3):
            assert np.allclose(I(k, I(k, X)), -X)

    def test_real_layout(self):
        assert to_real([1 + 2j], [3 + 4j]).tolist() == [1, 2, 3, 4]

    def test_orbit_pairs_with_rotated_orbit(self, example, rng):
        """omega_c(V, I_2 V) = |V|^2 != 0: the negative control has power."""
        p = random_point(rng, 3)
        from hypertoric.moment_maps import torus_vector_fields
        V = torus_vector_fields(p, [[1.0, -1.0, -1.0]])[:, 0]
        val = omega_c(None, V, complex_structure(2, V))
        assert abs(val) > 1e-3 and abs(abs(val) - metric(V, V)) < 1e-12


class TestJacobian:
    def test_finite_differences(self, rng):
        h = 1e-5
        for _ in range(100):
            data = random_smooth_instance(rng, d_max=6)
            p = random_point(rng, data.d)
            y = evaluate(data, p).y
            J = constraint_jacobian(data, p, y)
            v0 = p.as_real()
            d = data.d
            fd = np.empty_like(J)
            for k in range(4 * d):
                dv = np.zeros(4 * d)
                dv[k] = h
                plus = FlatPoint(*_from(v0 + dv, d))
                minus = FlatPoint(*_from(v0 - dv, d))
                fd[:, k] = (constraint_values(data, plus, y) - constraint_values(data, minus, y)) / (2 * h)
            assert np.linalg.norm(J - fd) <= 1e-6 * max(1.0, np.linalg.norm(J))

    def test_vanishing_rows_at_origin_pair(self, example, rng):
        p = random_point(rng, 3)
        z, w = p.z.copy(), p.w.copy()
        z[1] = w[1] = 0
        J = constraint_jacobian(example, FlatPoint(z, w))
        d, m = 3, 2
        assert not J[m + 1].any()
        assert not J[m + d + 1].any()

    def test_full_rank_at_generic_point(self, rng):
        for _ in range(10):
            data = random_smooth_instance(rng, d_max=6)
            p = random_point(rng, data.d)
            s = np.linalg.svd(constraint_jacobian(data, p), compute_uv=False)
            assert int(np.sum(s > 1e-8)) == data.m + 2 * data.d


def _from(v, d):
    return v[:d] + 1j * v[d : 2 * d], v[2 * d : 3 * d] + 1j * v[3 * d :]
