"""Random smooth hypertoric data and random exact points on the base."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .arrangement import solution_space, strata
from .exact_linalg import GaussRational, gauss_vector, int_matrix, integer_kernel_basis
from .hypertoric_data import HypertoricData, build, check_parameter_regularity


def _fraction(rng: np.random.Generator, size: int = 6, max_den: int = 5) -> Fraction:
    return Fraction(int(rng.integers(-size, size + 1)), int(rng.integers(1, max_den + 1)))


def _gauss(rng: np.random.Generator) -> GaussRational:
    return GaussRational(_fraction(rng), _fraction(rng))


def random_unimodular_normals(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """An ``n x d`` unimodular configuration.

    Columns are drawn from ``±e_i`` and ``±(e_i - e_j)`` (a reduced incidence
    matrix, hence totally unimodular), then mixed by a random element of
    ``GL(n, Z)`` and shuffled.
    """
    pool = [tuple(int(k == i) for k in range(n)) for i in range(n)]
    pool += [tuple(int(k == i) - int(k == j) for k in range(n)) for i in range(n) for j in range(n) if i < j]
    cols = [pool[i] for i in range(n)]
    for _ in range(d - n):
        c = pool[int(rng.integers(len(pool)))]
        sign = 1 if rng.random() < 0.5 else -1
        cols.append(tuple(sign * v for v in c))
    U = np.array(cols, dtype=object).T.reshape(n, d)
    G = np.identity(n, dtype=int).astype(object)
    for _ in range(2 * n):
        i, j = rng.choice(n, size=2, replace=False) if n > 1 else (0, 0)
        if i != j:
            E = np.identity(n, dtype=int).astype(object)
            E[i, j] = int(rng.integers(-1, 2))
            G = E @ G
    U = G @ U
    return U[:, rng.permutation(d)]


def random_smooth_instance(
    rng: np.random.Generator,
    d_max: int = 7,
    n_max: int = 3,
    beta_zero: bool | None = None,
    n: int | None = None,
    d: int | None = None,
) -> HypertoricData:
    """Random data whose quotient is a smooth manifold."""
    while True:
        nn = n if n is not None else int(rng.integers(1, n_max + 1))
        dd = d if d is not None else int(rng.integers(nn + 1, max(nn + 1, d_max) + 1))
        U = random_unimodular_normals(rng, nn, dd)
        A = integer_kernel_basis(U)
        m = A.shape[0]
        x = [_fraction(rng) for _ in range(dd)]
        alpha = [sum((int(A[k, i]) * x[i] for i in range(dd)), Fraction(0)) for k in range(m)]
        bz = (rng.random() < 0.5) if beta_zero is None else beta_zero
        if bz:
            beta = [0] * m
        else:
            yv = [_gauss(rng) for _ in range(dd)]
            beta = [sum((int(A[k, i]) * yv[i] for i in range(dd)), GaussRational()) for k in range(m)]
        data = build(int_matrix(A.tolist(), ncols=dd), alpha, beta)
        report = check_parameter_regularity(data)
        if report.parameter_regular and report.unimodular:
            return data


def random_base_point(
    rng: np.random.Generator,
    data: HypertoricData,
    on_walls: Sequence[int] = (),
) -> np.ndarray | None:
    """Random exact ``b`` with ``A b = beta`` lying on the walls ``on_walls``.

    Returns ``None`` when those walls do not meet.
    """
    space = solution_space(data, "complex")
    st = strata(data, on_walls, "complex")
    if not st.feasible:
        return None
    t = list(st.flat_base)
    for row in st.flat_directions:
        c = _gauss(rng)
        t = [ti + c * r for ti, r in zip(t, row)]
    return gauss_vector(space.point(t))


def random_regular_point(rng: np.random.Generator, data: HypertoricData, tries: int = 100) -> np.ndarray:
    for _ in range(tries):
        b = random_base_point(rng, data)
        if all(b):
            return b
    raise RuntimeError("no regular point found")
