"""Numerical certification on sampled fibers inside the flat space ``H^d``.

Points of a fiber ``F_b`` are lifted to ``H^d`` in closed form: for a target
real moment value ``x_i`` and complex value ``y_i``, ``|z_i|^2 = s_i`` with
``s_i = x_i + sqrt(x_i^2 + |y_i|^2)`` and ``w_i = y_i / z_i``.  Tangent
frames of the fiber are horizontal lifts, i.e. vectors tangent to the level
set and orthogonal to the ``M``-orbit.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .arrangement import active_walls, solution_space
from .errors import InfeasibleTarget, PreconditionError, RankDrop
from .exact_linalg import gauss_vector
from .fiber_classifier import classify_fiber, isotropy_rank
from .hypertoric_data import HypertoricData
from .moment_maps import (
    FlatPoint,
    complex_structure,
    constraint_jacobian,
    evaluate,
    omega_c,
    torus_vector_fields,
)

FORM_TOL = 1e-7
RANK_TOL = 1e-8
SAMPLER_TOL = 1e-10
ISOTROPY_TOL = 1e-9


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("HYPERTORIC_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn: Callable, items: Sequence) -> list:
    workers = min(_threads(), len(items)) or 1
    if workers == 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True, eq=False)
class FiberSample:
    point: FlatPoint
    x: np.ndarray
    phases: np.ndarray
    y_target: np.ndarray
    residual: float


def _float_data(data: HypertoricData):
    A = np.asarray(data.A, dtype=float).reshape(data.m, data.d)
    alpha = np.array([float(a) for a in data.alpha])
    section = np.asarray(data.section, dtype=float).reshape(data.d, data.n)
    return A, alpha, section


def target_x(data: HypertoricData, t: Sequence) -> np.ndarray:
    """Ambient real moment value ``x0 + U^T t``, exact when ``t`` is rational."""
    space = solution_space(data, "real")
    if all(isinstance(v, (int, Fraction)) for v in t):
        return np.array([float(v) for v in space.point(t)])
    U = np.asarray(data.U, dtype=float).reshape(data.n, data.d)
    return np.array([float(v) for v in space.base]) + U.T @ np.asarray(t, dtype=float)


def sample_fiber(data: HypertoricData, b, t: Sequence, phases: Sequence | None = None) -> FiberSample:
    """Closed-form lift of the point ``(x(t), b)`` of the fiber ``F_b``.

    ``phases`` (``n`` angles) act through the integer section of ``U``; the
    remaining phase freedom is ``M``-gauge and fixed to zero.
    """
    b = gauss_vector(b)
    active_walls(data, b)  # validates A b = beta
    y = np.array([complex(v) for v in b])
    x = target_x(data, t)
    _, alpha, section = _float_data(data)
    phases = np.zeros(data.n) if phases is None else np.asarray(phases, dtype=float)
    psi = section @ phases if data.n else np.zeros(data.d)
    rot = np.exp(1j * psi)

    z = np.zeros(data.d, dtype=complex)
    w = np.zeros(data.d, dtype=complex)
    for i in range(data.d):
        if y[i] != 0:
            r = math.hypot(x[i], abs(y[i]))
            s = x[i] + r if x[i] >= 0 else abs(y[i]) ** 2 / (r - x[i])
            z[i] = math.sqrt(s) * rot[i]
            w[i] = y[i] / z[i]
        else:
            z[i] = math.sqrt(max(2 * x[i], 0.0)) * rot[i]
            w[i] = math.sqrt(max(-2 * x[i], 0.0)) * np.conj(rot[i])
    point = FlatPoint(z, w)
    vals = evaluate(data, point)
    res_y = np.max(np.abs(vals.y - y) / (1 + np.abs(y)), initial=0.0)
    res_x = np.max(np.abs(vals.x - x) / (1 + np.abs(x)), initial=0.0)
    res_a = np.max(np.abs(vals.mu_r - alpha) / (1 + np.abs(alpha)), initial=0.0)
    residual = float(max(res_y, res_x, res_a))
    if residual > SAMPLER_TOL:
        raise InfeasibleTarget(f"sampler residual {residual:.3e} exceeds {SAMPLER_TOL}")
    return FiberSample(point=point, x=vals.x, phases=rot, y_target=y, residual=residual)


def _orth_basis(M: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the column space of ``M``."""
    if M.size == 0:
        return np.zeros((M.shape[0], 0))
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    keep = s > tol * max(1.0, s[0])
    return u[:, keep]


def horizontal_fiber_frame(data: HypertoricData, sample: FiberSample) -> np.ndarray:
    """Orthonormal rows spanning the horizontal tangent space of the fiber.

    This is ``ker J`` intersected with the orthogonal complement of the
    ``M``-orbit; on a regular fiber it has dimension ``2n``.
    """
    p = sample.point
    J = constraint_jacobian(data, p, sample.y_target)
    orbit = torus_vector_fields(p, np.asarray(data.A, dtype=float).reshape(data.m, data.d))
    stacked = np.vstack([J, orbit.T])
    _, s, vh = np.linalg.svd(stacked, full_matrices=True)
    r = int(np.sum(s > RANK_TOL * max(1.0, s[0] if len(s) else 0.0)))
    frame = vh[r:]
    if frame.shape[0] != 2 * data.n:
        raise RankDrop(f"horizontal frame has dimension {frame.shape[0]}, expected {2 * data.n}")
    if frame.size and np.max(np.abs(stacked @ frame.T)) > RANK_TOL:
        raise RankDrop("frame residual too large")
    return frame


def residual_orbit_vectors(data: HypertoricData, point: FlatPoint) -> np.ndarray:
    """Horizontal parts (columns) of the residual torus vector fields."""
    A, _, section = _float_data(data)
    VN = torus_vector_fields(point, section.T)
    Q = _orth_basis(torus_vector_fields(point, A))
    return VN - Q @ (Q.T @ VN)


def numeric_isotropy(data: HypertoricData, point: FlatPoint, tol: float = ISOTROPY_TOL) -> tuple[int, float]:
    """Dimension of the residual-torus isotropy at ``point`` and the smallest
    singular value of the horizontal orbit map (``inf`` when ``n = 0``)."""
    if data.n == 0:
        return 0, math.inf
    P = residual_orbit_vectors(data, point)
    s = np.linalg.svd(P, compute_uv=False)
    s = np.concatenate([s, np.zeros(data.n - len(s))])
    scale = max(1.0, float(np.linalg.norm(point.as_real())))
    return int(np.sum(s < tol * scale)), float(np.min(s))


def isotropy_at(data: HypertoricData, b, t: Sequence) -> int:
    return numeric_isotropy(data, sample_fiber(data, b, t).point)[0]


@dataclass
class VerificationReport:
    kind: str
    status: str  # "pass" | "fail" | "precondition"
    tolerance: float
    n_samples: int = 0
    max_omega_c: float = 0.0
    max_omega_orbit: float = 0.0
    max_sampler_residual: float = 0.0
    min_isotropy_gap: float | None = None
    jacobian_rank_ok: bool = True
    freeness_ok: bool = True
    lagrangian_ok: bool = True
    isotropy_ok: bool = True
    message: str = ""
    per_sample_max_omega: list[float] = field(default_factory=list)
    strata: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: dict) -> "VerificationReport":
        return cls(**payload)


def _gap(values: Iterable[float]) -> float | None:
    vals = [v for v in values if math.isfinite(v)]
    return min(vals) if vals else None


def _regular_or_raise(data: HypertoricData, b) -> None:
    S = active_walls(data, b)
    if S:
        raise PreconditionError(f"b lies on walls {[i + 1 for i in S]}")


def verify_lagrangian(
    data: HypertoricData,
    b,
    n_samples: int = 20,
    tol: float = FORM_TOL,
    seed: int = 0,
    corrupt: bool = False,
) -> VerificationReport:
    """Sample ``F_b`` and measure ``omega_C`` on horizontal tangent frames.

    Passes when the largest ``|omega_C(X_a, X_b)|`` over orthonormal frame
    pairs is strictly below ``tol``.  ``corrupt=True`` swaps in an
    ``I_2``-rotated orbit vector as a negative control.
    """
    _regular_or_raise(data, b)
    if n_samples < 1:
        raise PreconditionError("n_samples must be at least 1")
    if corrupt and data.n == 0:
        raise PreconditionError("no frame to corrupt when n = 0")
    rng = np.random.default_rng(seed)
    ts = rng.normal(scale=1.5, size=(n_samples, data.n))
    phis = rng.uniform(0.0, 2 * math.pi, size=(n_samples, data.n))

    def one(k: int):
        sample = sample_fiber(data, b, ts[k], phis[k])
        frame = horizontal_fiber_frame(data, sample)
        V = residual_orbit_vectors(data, sample.point)
        V = V / np.maximum(np.linalg.norm(V, axis=0), 1e-300)
        if corrupt:
            frame = frame.copy()
            frame[0] = V[:, 0]
            frame[-1] = complex_structure(2, V[:, 0])
        pair = max(
            (abs(omega_c(sample.point, frame[a], frame[c])) for a in range(len(frame)) for c in range(a + 1, len(frame))),
            default=0.0,
        )
        orbit = max(
            (abs(omega_c(sample.point, V[:, k2], f)) for k2 in range(V.shape[1]) for f in frame),
            default=0.0,
        )
        return pair, orbit, sample.residual

    results = _map(one, list(range(n_samples)))
    per = [r[0] for r in results]
    max_pair = max(per)
    max_orbit = max(r[1] for r in results)
    ok = max_pair < tol and max_orbit < tol
    return VerificationReport(
        kind="lagrangian",
        status="pass" if ok else "fail",
        tolerance=tol,
        n_samples=n_samples,
        max_omega_c=max_pair,
        max_omega_orbit=max_orbit,
        max_sampler_residual=max(r[2] for r in results),
        lagrangian_ok=ok,
        per_sample_max_omega=per,
    )


def default_grid(n: int, radius: int = 2) -> list[tuple[Fraction, ...]]:
    return [tuple(Fraction(v) for v in t) for t in itertools.product(range(-radius, radius + 1), repeat=n)]


def verify_generic_fiber(
    data: HypertoricData,
    b,
    grid: Sequence[Sequence] | None = None,
    tol: float = ISOTROPY_TOL,
) -> VerificationReport:
    """Check freeness, frame existence and surjectivity on a rational grid.

    A singular ``b`` yields a report with status ``precondition``.
    """
    S = active_walls(data, b)
    if S:
        return VerificationReport(
            kind="generic_fiber",
            status="precondition",
            tolerance=tol,
            message=f"b lies on walls {[i + 1 for i in S]}",
        )
    grid = default_grid(data.n) if grid is None else [tuple(t) for t in grid]
    combinatorial = isotropy_rank(data, ())

    def one(t):
        sample = sample_fiber(data, b, t)
        try:
            horizontal_fiber_frame(data, sample)
            frame_ok = True
        except RankDrop:
            frame_ok = False
        iso, gap = numeric_isotropy(data, sample.point, tol)
        return frame_ok, iso, gap, sample.residual

    results = _map(one, grid)
    frame_ok = all(r[0] for r in results)
    gap = _gap(r[2] for r in results)
    free = combinatorial == 0 and all(r[1] == 0 for r in results)
    residual = max((r[3] for r in results), default=0.0)
    ok = frame_ok and free and residual <= SAMPLER_TOL
    return VerificationReport(
        kind="generic_fiber",
        status="pass" if ok else "fail",
        tolerance=tol,
        n_samples=len(grid),
        max_sampler_residual=residual,
        min_isotropy_gap=gap,
        jacobian_rank_ok=frame_ok,
        freeness_ok=free,
    )


def _generic_on_flat(data, stratum, S, x_at) -> tuple[Fraction, ...]:
    """A rational point of the stratum flat avoiding every hyperplane of ``S``
    that does not contain the whole flat."""
    base = stratum.flat_base
    dirs = stratum.flat_directions
    if not dirs:
        return base
    forced = {j for j in S if x_at(base)[j] == 0 and all(
        sum(u * r for u, r in zip(data.U[:, j], row)) == 0 for row in dirs)}
    for attempt in range(500):
        coef = [Fraction(1, attempt + 2 + k) for k in range(len(dirs))]
        t = tuple(b + sum(c * row[i] for c, row in zip(coef, dirs)) for i, b in enumerate(base))
        x = x_at(t)
        if all(x[j] != 0 for j in S if j not in forced):
            return t
    raise InfeasibleTarget("could not place a generic point on the stratum flat")


def verify_shrinking(data: HypertoricData, b, tol: float = ISOTROPY_TOL) -> VerificationReport:
    """Compare numeric isotropy ranks with the shrinking data of ``F_b``.

    For every stratum ``Q`` a point is placed generically on its flat, where
    the isotropy must equal ``rank{u_l : l in Q}``, and then pushed off the
    flat along some ``u_l``, where it must drop.
    """
    S = active_walls(data, b)
    if not S:
        return VerificationReport(
            kind="shrinking", status="precondition", tolerance=tol, message="b is a regular value"
        )
    desc = classify_fiber(data, b)
    space = solution_space(data, "real")

    def x_at(t):
        return space.point(t)

    entries = []
    ok = True
    for st in desc.shrink_strata:
        if not st.feasible:
            raise InfeasibleTarget(f"stratum {st.active} has an empty flat")
        t_on = _generic_on_flat(data, st, S, x_at)
        on, _ = numeric_isotropy(data, sample_fiber(data, b, t_on).point, tol)
        lead = next((l for l in st.active if any(data.U[:, l])), None)
        if lead is None:
            # only zero normals: nothing shrinks and there is no direction to push
            good = on == 0
            ok = ok and good
            entries.append({"active": [i + 1 for i in st.active], "shrunk_torus_rank": 0,
                            "numeric_rank_on_flat": on, "ok": good})
            continue
        r = tuple(int(v) for v in data.U[:, lead])
        x_on = x_at(t_on)
        closure = [j for j in S if x_on[j] == 0]
        remaining = [j for j in closure if sum(u * v for u, v in zip(data.U[:, j], r)) == 0]
        delta = Fraction(1, 4)
        while True:
            t_off = tuple(a + delta * c for a, c in zip(t_on, r))
            x_off = x_at(t_off)
            if all(x_off[j] != 0 for j in S if j not in remaining):
                break
            delta /= 2
        off, _ = numeric_isotropy(data, sample_fiber(data, b, t_off).point, tol)
        expected_off = isotropy_rank(data, remaining)
        good = on == st.shrunk_torus_rank and off < on and off == expected_off
        ok = ok and good
        entries.append(
            {
                "active": [i + 1 for i in st.active],
                "shrunk_torus_rank": st.shrunk_torus_rank,
                "numeric_rank_on_flat": on,
                "numeric_rank_off_flat": off,
                "expected_rank_off_flat": expected_off,
                "t_on": [str(v) for v in t_on],
                "t_off": [str(v) for v in t_off],
                "ok": good,
            }
        )
    return VerificationReport(
        kind="shrinking",
        status="pass" if ok else "fail",
        tolerance=tol,
        n_samples=2 * len(entries),
        isotropy_ok=ok,
        strata=entries,
    )


def samples_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["sample", "max_omega_c"])
    for k, v in enumerate(report.per_sample_max_omega):
        writer.writerow([k, repr(v)])
    return buf.getvalue()
