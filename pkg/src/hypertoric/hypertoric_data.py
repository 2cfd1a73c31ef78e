"""Input data of a toric hyperkähler quotient ``Y(alpha, beta)``.

The subtorus ``M`` of ``T^d`` is given by the integer ``m x d`` matrix ``A``
whose rows are the generators ``iota(theta_k)`` and whose columns are the
coordinates of ``iota^* e_i^*``.  The quotient torus ``N = T^d / M`` has Lie
algebra with integer basis dual to the rows of ``U``, a primitive basis of
``ker A``; the columns ``u_i`` of ``U`` are the images ``pi(e_i)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionTooLarge, NonPrimitiveSubtorus, RankDeficient, ValidationError
from .exact_linalg import (
    GaussRational,
    gauss_vector,
    int_matrix,
    integer_kernel_basis,
    is_unimodular_configuration,
    nonunimodular_bases,
    rank,
    rat_vector,
    rational_solve,
    right_inverse,
    smith_normal_form,
)

log = logging.getLogger(__name__)

MAX_SUBSET_DIM = 16


@dataclass(frozen=True, eq=False)
class HypertoricData:
    A: np.ndarray
    U: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    # integer right inverse of U: lifts N-directions to T^d
    section: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def d(self) -> int:
        return self.A.shape[1]

    @property
    def n(self) -> int:
        return self.U.shape[0]

    @property
    def beta_is_zero(self) -> bool:
        return not any(self.beta)

    def beta_parts(self) -> tuple[np.ndarray, np.ndarray]:
        return rat_vector(b.re for b in self.beta), rat_vector(b.im for b in self.beta)

    def to_dict(self) -> dict:
        return {
            "A": [[int(v) for v in row] for row in self.A],
            "d": self.d,
            "alpha": [str(a) for a in self.alpha],
            "beta": [[str(b.re), str(b.im)] for b in self.beta],
            "U": [[int(v) for v in row] for row in self.U],
            "m": self.m,
            "n": self.n,
        }


def build(
    A: Sequence[Sequence[int]] | np.ndarray,
    alpha: Sequence,
    beta: Sequence,
    d: int | None = None,
) -> HypertoricData:
    """Validate ``(A, alpha, beta)`` and derive the normals ``U``.

    ``d`` is only required when ``A`` has no rows.  ``beta`` entries may be
    rationals or ``(re, im)`` pairs.
    """
    if isinstance(A, np.ndarray):
        A = int_matrix(A.tolist(), ncols=A.shape[1])
    else:
        A = int_matrix(A, ncols=d)
    m, dd = A.shape
    if d is not None and d != dd:
        raise ValidationError(f"A has {dd} columns but d={d}")
    if m > dd:
        raise RankDeficient(f"A has more rows ({m}) than columns ({dd})")
    alpha = rat_vector(alpha)
    beta = gauss_vector(beta)
    if len(alpha) != m or len(beta) != m:
        raise ValidationError(f"alpha and beta must have length m={m}")
    if rank(A) != m:
        raise RankDeficient(f"rank(A) < m = {m}")
    S, _, _ = smith_normal_form(A)
    diag = [S[i, i] for i in range(m)]
    if any(v != 1 for v in diag):
        raise NonPrimitiveSubtorus(f"Smith invariants of A are {diag}, expected all 1")
    U = integer_kernel_basis(A)
    n = U.shape[0]
    section = right_inverse(U) if n else np.empty((dd, 0), dtype=object)
    return HypertoricData(A=A, U=U, alpha=alpha, beta=beta, section=section)


@dataclass
class SmoothnessReport:
    unimodular: bool
    parameter_regular: bool
    # minimal vanishing sets Z admitting a critical point, then bad column bases of U
    offending_subsets: list[tuple[int, ...]]

    @property
    def status(self) -> str:
        if self.parameter_regular and self.unimodular:
            return "smooth manifold"
        if self.parameter_regular:
            return "orbifold"
        return "singular"

    def to_dict(self) -> dict:
        return {
            "unimodular": self.unimodular,
            "parameter_regular": self.parameter_regular,
            "status": self.status,
            "offending_subsets": [[i + 1 for i in z] for z in self.offending_subsets],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "SmoothnessReport":
        return cls(
            unimodular=payload["unimodular"],
            parameter_regular=payload["parameter_regular"],
            offending_subsets=[tuple(i - 1 for i in z) for z in payload["offending_subsets"]],
        )


def _feasible_with_zeros(A: np.ndarray, level: np.ndarray, keep: list[int]) -> bool:
    """Is ``A v = level`` solvable with ``v_i = 0`` off ``keep``?"""
    if not keep:
        return not any(level)
    return rational_solve(A[:, keep], level) is not None


def critical_subsets(data: HypertoricData) -> list[tuple[int, ...]]:
    """All index sets ``Z`` on which the level set has a critical point.

    ``Z`` qualifies when the covectors ``a_i`` off ``Z`` fail to span and both
    the real and the complex level equations admit solutions vanishing on
    ``Z``.  Enumeration is over all ``2^d`` subsets.
    """
    m, d = data.A.shape
    if d > MAX_SUBSET_DIM:
        raise DimensionTooLarge(f"subset enumeration capped at d <= {MAX_SUBSET_DIM}, got {d}")
    if m == 0:
        return []
    beta_re, beta_im = data.beta_parts()
    found = []
    for mask in range(1 << d):
        Z = tuple(i for i in range(d) if mask >> i & 1)
        keep = [i for i in range(d) if not mask >> i & 1]
        if keep and rank(data.A[:, keep]) == m:
            continue
        if not _feasible_with_zeros(data.A, data.alpha, keep):
            continue
        if _feasible_with_zeros(data.A, beta_re, keep) and _feasible_with_zeros(data.A, beta_im, keep):
            found.append(Z)
    return found


def check_parameter_regularity(data: HypertoricData) -> SmoothnessReport:
    failures = critical_subsets(data)
    minimal: list[tuple[int, ...]] = []
    for Z in sorted(failures, key=len):
        if not any(set(z) <= set(Z) for z in minimal):
            minimal.append(Z)
    if data.n == 0:
        unimodular, bad = True, []
    else:
        unimodular = is_unimodular_configuration(data.U)
        bad = [] if unimodular else nonunimodular_bases(data.U, limit=1)
    report = SmoothnessReport(
        unimodular=unimodular,
        parameter_regular=not minimal,
        offending_subsets=minimal + bad,
    )
    if report.status == "orbifold":
        log.warning("normals are not unimodular: Y(alpha, beta) is an orbifold")
    return report


def level_point(data: HypertoricData) -> np.ndarray:
    """Particular real solution of ``A x = alpha``."""
    x = rational_solve(data.A, data.alpha) if data.m else rat_vector([0] * data.d)
    assert x is not None  # rank A = m
    return x


def complex_level_point(data: HypertoricData) -> np.ndarray:
    """Particular complex solution of ``A y = beta``."""
    if not data.m:
        return gauss_vector([0] * data.d)
    re, im = data.beta_parts()
    y_re = rational_solve(data.A, re)
    y_im = rational_solve(data.A, im)
    return gauss_vector(zip(y_re, y_im))


__all__ = [
    "HypertoricData",
    "SmoothnessReport",
    "build",
    "check_parameter_regularity",
    "critical_subsets",
    "level_point",
    "complex_level_point",
    "GaussRational",
]
