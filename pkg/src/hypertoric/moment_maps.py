"""Flat model ``H^d = T^*C^d``: torus action, moment maps, flat 2-forms.

Conventions for the flat hyperkähler structure:

* ``I_1`` is multiplication by ``i`` on ``(z, w)``;
* ``omega_C = sum dz_i ^ dw_i``, ``omega_2 = Re omega_C``, ``omega_3 = Im omega_C``;
* ``omega_1 = (i/2) sum (dz_i ^ dzbar_i + dw_i ^ dwbar_i)``;
* ``g`` is the Euclidean metric and ``omega_a(X, Y) = g(I_a X, Y)``.

Tangent vectors are either ``(dz, dw)`` pairs of complex arrays or real
``4d`` vectors laid out as ``(Re z, Im z, Re w, Im w)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonUnitParameter, ValidationError
from .hypertoric_data import HypertoricData

UNIT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FlatPoint:
    z: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex)
        w = np.asarray(self.w, dtype=complex)
        if z.shape != w.shape or z.ndim != 1:
            raise ValidationError("z and w must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(z)) and np.all(np.isfinite(w))):
            raise ValidationError("flat point has non-finite coordinates")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)

    @property
    def d(self) -> int:
        return len(self.z)

    def as_real(self) -> np.ndarray:
        return to_real(self.z, self.w)


@dataclass(frozen=True, eq=False)
class MomentValues:
    mu_r: np.ndarray
    mu_c: np.ndarray
    x: np.ndarray
    y: np.ndarray


def to_real(dz, dw) -> np.ndarray:
    dz, dw = np.asarray(dz, dtype=complex), np.asarray(dw, dtype=complex)
    return np.concatenate([dz.real, dz.imag, dw.real, dw.imag])


def from_real(v) -> tuple[np.ndarray, np.ndarray]:
    v = np.asarray(v, dtype=float)
    d = len(v) // 4
    return v[:d] + 1j * v[d : 2 * d], v[2 * d : 3 * d] + 1j * v[3 * d :]


def act(point: FlatPoint, zeta) -> FlatPoint:
    """``(z, w) zeta = (z zeta, w zeta^{-1})``."""
    zeta = np.asarray(zeta, dtype=complex)
    if zeta.shape != point.z.shape:
        raise ValidationError("torus parameter has the wrong length")
    if np.any(np.abs(np.abs(zeta) - 1.0) > UNIT_TOL):
        raise NonUnitParameter("torus parameters must have unit modulus")
    return FlatPoint(point.z * zeta, point.w * np.conj(zeta))


def subtorus_element(data: HypertoricData, angles) -> np.ndarray:
    """``exp(i A^T angles)``: an element of the subtorus ``M``."""
    A = np.asarray(data.A, dtype=float).reshape(data.m, data.d)
    return np.exp(1j * (A.T @ np.asarray(angles, dtype=float)))


def evaluate(data: HypertoricData, point: FlatPoint) -> MomentValues:
    A = np.asarray(data.A, dtype=float).reshape(data.m, data.d)
    x = 0.5 * (np.abs(point.z) ** 2 - np.abs(point.w) ** 2)
    y = point.z * point.w
    return MomentValues(mu_r=A @ x, mu_c=A @ y, x=x, y=y)


def omega_c(point: FlatPoint | None, X1, X2) -> complex:
    """Holomorphic symplectic form ``sum dz_i ^ dw_i`` on a pair of tangents.

    The form is constant on the flat model, so ``point`` is only accepted for
    signature symmetry with curved settings.
    """
    dz1, dw1 = _split(X1)
    dz2, dw2 = _split(X2)
    return complex(np.sum(dz1 * dw2 - dz2 * dw1))


def _split(X) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(X, tuple):
        return np.asarray(X[0], dtype=complex), np.asarray(X[1], dtype=complex)
    return from_real(X)


def metric(X, Y) -> float:
    dz1, dw1 = _split(X)
    dz2, dw2 = _split(Y)
    return float(np.real(np.sum(dz1 * np.conj(dz2) + dw1 * np.conj(dw2))))


def complex_structure(k: int, X) -> np.ndarray:
    """``I_k X`` as a real 4d vector, ``k`` in {1, 2, 3}."""
    dz, dw = _split(X)
    if k == 1:
        return to_real(1j * dz, 1j * dw)
    if k == 2:
        return to_real(-np.conj(dw), np.conj(dz))
    if k == 3:
        return to_real(-1j * np.conj(dw), 1j * np.conj(dz))
    raise ValueError("complex structure index must be 1, 2 or 3")


def omega(k: int, X, Y) -> float:
    """Kähler form ``omega_k(X, Y) = g(I_k X, Y)``."""
    if k == 1:
        dz1, dw1 = _split(X)
        dz2, dw2 = _split(Y)
        return float(-np.imag(np.sum(dz1 * np.conj(dz2) + dw1 * np.conj(dw2))))
    if k == 2:
        return omega_c(None, X, Y).real
    if k == 3:
        return omega_c(None, X, Y).imag
    raise ValueError("form index must be 1, 2 or 3")


def torus_vector_fields(point: FlatPoint, xis) -> np.ndarray:
    """Columns: real 4d vector fields of ``xi in t^d`` at ``point``.

    ``xi`` generates ``zeta = exp(i xi)``, so ``dz = i xi z``, ``dw = -i xi w``.
    """
    xis = np.asarray(xis, dtype=float)
    if xis.ndim == 1:
        xis = xis[None, :]
    cols = [to_real(1j * xi * point.z, -1j * xi * point.w) for xi in xis]
    if not cols:
        return np.zeros((4 * point.d, 0))
    return np.stack(cols, axis=1)


def constraint_jacobian(data: HypertoricData, point: FlatPoint, y_target=None) -> np.ndarray:
    """Jacobian of ``{A x(z,w) - alpha, Re/Im(z_i w_i - y_i)}``.

    Rows: the ``m`` real level equations, then ``Re(z_i w_i)`` for all ``i``,
    then ``Im(z_i w_i)``.  Columns follow the ``(Re z, Im z, Re w, Im w)``
    layout.  ``y_target`` shifts the constraint values, not their derivative.
    """
    d = data.d
    A = np.asarray(data.A, dtype=float).reshape(data.m, d)
    a, b = point.z.real, point.z.imag
    c, e = point.w.real, point.w.imag
    # x_i = (a^2 + b^2 - c^2 - e^2) / 2
    dx = np.hstack([np.diag(a), np.diag(b), -np.diag(c), -np.diag(e)])
    # Re(zw) = ac - be,  Im(zw) = ae + bc
    dre = np.hstack([np.diag(c), -np.diag(e), np.diag(a), -np.diag(b)])
    dim = np.hstack([np.diag(e), np.diag(c), np.diag(b), np.diag(a)])
    return np.vstack([A @ dx, dre, dim])


def constraint_values(data: HypertoricData, point: FlatPoint, y_target) -> np.ndarray:
    vals = evaluate(data, point)
    alpha = np.array([float(v) for v in data.alpha])
    r = vals.y - np.asarray(y_target, dtype=complex)
    return np.concatenate([vals.mu_r - alpha, r.real, r.imag])
