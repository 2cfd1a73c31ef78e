"""Solution spaces, the hyperplane arrangement ``{H_i}`` and the walls ``{W_i}``.

The real solution space ``{x : A x = alpha}`` is parametrized as
``x(t) = x0 + U^T t`` with ``t`` in ``R^n``; the complex one as
``y(t) = y0 + U^T t`` with ``t`` in ``C^n``.  In these coordinates the i-th
hyperplane (or wall) is ``{t : <u_i, t> + x0_i = 0}``.

Everything here is exact.  Indices are 0-based in the Python API.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import DimensionTooLarge, NotOnBase, ValidationError
from .exact_linalg import (
    GaussRational,
    gauss_vector,
    lp_maximize,
    rank,
    rat_vector,
    rational_kernel,
    rational_solve,
)
from .hypertoric_data import HypertoricData, complex_level_point, level_point

Side = Literal["real", "complex"]
MAX_CHAMBER_DIM = 3


@dataclass(frozen=True, eq=False)
class SolutionSpace:
    base: np.ndarray
    directions: np.ndarray
    field_tag: Side

    def point(self, t: Sequence) -> np.ndarray:
        """Ambient coordinates of the parameter point ``t``."""
        t = gauss_vector(t) if self.field_tag == "complex" else rat_vector(t)
        if len(t) != self.directions.shape[0]:
            raise ValidationError("parameter has the wrong length")
        if not len(t):
            return self.base.copy()
        return self.base + self.directions.T @ t


@dataclass(frozen=True)
class Hyperplane:
    index: int
    normal: tuple[int, ...]
    offset: Fraction | GaussRational
    kind: str  # "proper" | "empty" | "full"

    def value(self, t: Sequence) -> Fraction | GaussRational:
        """Ambient coordinate ``<u_i, t> + offset`` at parameter ``t``."""
        total = self.offset
        for u, ti in zip(self.normal, t):
            if u:
                total = total + u * ti
        return total


@dataclass(frozen=True)
class Stratum:
    active: tuple[int, ...]
    feasible: bool
    flat_dim: int | None = None
    flat_base: tuple | None = None
    flat_directions: tuple[tuple[Fraction, ...], ...] | None = None


@dataclass(frozen=True)
class Chamber:
    signs: tuple[int, ...]
    bounded: bool
    interior: tuple[Fraction, ...]


@dataclass(frozen=True)
class FixedPoint:
    t: tuple[Fraction, ...]
    x: tuple[Fraction, ...]
    active: tuple[int, ...]


def solution_space(data: HypertoricData, which: Side = "real") -> SolutionSpace:
    if which == "real":
        base = level_point(data)
    elif which == "complex":
        base = complex_level_point(data)
    else:
        raise ValueError(f"unknown side {which!r}")
    return SolutionSpace(base=base, directions=data.U, field_tag=which)


def _kind(normal: tuple[int, ...], offset) -> str:
    if any(normal):
        return "proper"
    return "empty" if offset else "full"


def hyperplanes(data: HypertoricData, side: Side = "real") -> list[Hyperplane]:
    """The ``d`` hyperplanes ``H_i`` (real side) or walls ``W_i`` (complex side)."""
    space = solution_space(data, side)
    out = []
    for i in range(data.d):
        normal = tuple(int(v) for v in data.U[:, i])
        offset = space.base[i]
        out.append(Hyperplane(index=i, normal=normal, offset=offset, kind=_kind(normal, offset)))
    return out


def walls(data: HypertoricData) -> list[Hyperplane]:
    return hyperplanes(data, "complex")


def _check_on_base(data: HypertoricData, b) -> np.ndarray:
    b = gauss_vector(b)
    if len(b) != data.d:
        raise NotOnBase(f"b has length {len(b)}, expected d={data.d}")
    if data.m:
        image = data.A @ b
        if any(GaussRational.coerce(lhs) != rhs for lhs, rhs in zip(image, data.beta)):
            raise NotOnBase("A b != beta")
    return b


def active_walls(data: HypertoricData, b) -> tuple[int, ...]:
    """Indices ``i`` with ``b_i = 0``."""
    b = _check_on_base(data, b)
    return tuple(i for i, bi in enumerate(b) if not bi)


def is_regular_value(data: HypertoricData, b) -> bool:
    return not active_walls(data, b)


def to_parameter(data: HypertoricData, v, side: Side = "complex") -> tuple:
    """Parameter coordinates ``t`` of an ambient point on the solution space."""
    space = solution_space(data, side)
    v = gauss_vector(v) if side == "complex" else rat_vector(v)
    diff = v - space.base
    if data.n == 0:
        return ()
    t = data.section.T @ diff
    if any(x != y for x, y in zip(space.point(t), v)):
        raise NotOnBase("point is not on the solution space")
    return tuple(t)


def _solve_flat(data: HypertoricData, S: Sequence[int], offsets: Sequence[Fraction]):
    """Rational point of ``{t : <u_i, t> = -offset_i, i in S}`` or ``None``."""
    S = list(S)
    n = data.n
    if not S:
        return rat_vector([0] * n)
    M = data.U[:, S].T
    rhs = [-Fraction(offsets[i]) for i in S]
    return rational_solve(M.reshape(len(S), n), rhs)


def strata(data: HypertoricData, S: Iterable[int], side: Side = "real") -> Stratum:
    """Feasibility and dimension of the flat cut out by the hyperplanes in ``S``."""
    S = tuple(sorted(set(S)))
    if any(not 0 <= i < data.d for i in S):
        raise ValidationError("stratum index out of range")
    space = solution_space(data, side)
    if side == "real":
        t = _solve_flat(data, S, list(space.base))
        if t is None:
            return Stratum(active=S, feasible=False)
        base = tuple(t)
    else:
        t_re = _solve_flat(data, S, [b.re for b in space.base])
        t_im = _solve_flat(data, S, [b.im for b in space.base])
        if t_re is None or t_im is None:
            return Stratum(active=S, feasible=False)
        base = tuple(GaussRational(r, i) for r, i in zip(t_re, t_im))
    US = data.U[:, list(S)].T.reshape(len(S), data.n)
    directions = rational_kernel(US) if data.n else np.empty((0, 0), dtype=object)
    return Stratum(
        active=S,
        feasible=True,
        flat_dim=data.n - (rank(US) if S else 0),
        flat_base=base,
        flat_directions=tuple(tuple(row) for row in directions),
    )


# ---------------------------------------------------------------------------
# chambers of the real arrangement


def _strict_witness(constraints: list[tuple[tuple[int, ...], Fraction, int]], n: int):
    """Point with ``sign * (<u, t> + c) > 0`` for every constraint, or ``None``."""
    G, h = [], []
    for normal, c, sign in constraints:
        G.append([-sign * u for u in normal] + [1])
        h.append(sign * c)
    G.append([0] * n + [1])
    h.append(1)
    res = lp_maximize([0] * n + [1], G, h)
    if res.status != "optimal" or res.value <= 0:
        return None
    return tuple(res.x[:n])


def _is_bounded(constraints: list[tuple[tuple[int, ...], Fraction, int]], n: int) -> bool:
    """Is the closed chamber bounded, i.e. its recession cone trivial?"""
    if n == 0:
        return True
    G, h = [], []
    for normal, _, sign in constraints:
        G.append([-sign * u for u in normal])
        h.append(0)
    for k in range(n):
        unit = [int(j == k) for j in range(n)]
        G.append(unit)
        h.append(1)
        G.append([-u for u in unit])
        h.append(1)
    for k in range(n):
        for s in (1, -1):
            c = [s * int(j == k) for j in range(n)]
            res = lp_maximize(c, G, h)
            if res.value > 0:
                return False
    return True


def chambers(data: HypertoricData) -> list[Chamber]:
    """Chambers of ``{H_i}`` in the real solution space, each with boundedness.

    Sign vectors carry ``+1``/``-1`` for the side of ``x_i``; full hyperplanes
    (``x_i`` identically zero) get ``0``.  The arrangement is built one
    hyperplane at a time, splitting cells by exact LP feasibility.
    """
    n = data.n
    if n > MAX_CHAMBER_DIM:
        raise DimensionTooLarge(f"chamber enumeration supports n <= {MAX_CHAMBER_DIM}, got {n}")
    hps = hyperplanes(data, "real")
    # cell: (signs, constraints, witness)
    cells = [((), [], tuple(Fraction(0) for _ in range(n)))]
    for hp in hps:
        nxt = []
        for signs, cons, wit in cells:
            if hp.kind == "full":
                nxt.append((signs + (0,), cons, wit))
                continue
            if hp.kind == "empty":
                nxt.append((signs + ((1 if hp.offset > 0 else -1),), cons, wit))
                continue
            here = hp.value(wit)
            for sign in (1, -1):
                new_cons = cons + [(hp.normal, hp.offset, sign)]
                if sign * here > 0:
                    nxt.append((signs + (sign,), new_cons, wit))
                    continue
                w = _strict_witness(new_cons, n)
                if w is not None:
                    nxt.append((signs + (sign,), new_cons, w))
        cells = nxt
    out = [Chamber(signs=s, bounded=_is_bounded(c, n), interior=w) for s, c, w in cells]
    if n == 1:
        out.sort(key=lambda ch: ch.interior)
    else:
        out.sort(key=lambda ch: ch.signs, reverse=True)
    return out


def chamber_of(data: HypertoricData, t: Sequence) -> tuple[int, ...] | None:
    """Sign vector of the parameter point ``t``, ``None`` on a proper hyperplane."""
    signs = []
    for hp in hyperplanes(data, "real"):
        v = hp.value(t)
        if hp.kind == "full":
            signs.append(0)
        elif v == 0:
            return None
        else:
            signs.append(1 if v > 0 else -1)
    return tuple(signs)


def in_closure(chamber: Chamber, data: HypertoricData, t: Sequence) -> bool:
    for hp, s in zip(hyperplanes(data, "real"), chamber.signs):
        if s and s * hp.value(t) < 0:
            return False
    return True


def fixed_points(data: HypertoricData) -> list[FixedPoint]:
    """Vertices of the real arrangement: points where ``n`` independent ``H_i`` meet."""
    n = data.n
    hps = hyperplanes(data, "real")
    proper = [hp.index for hp in hps if hp.kind == "proper"]
    if n == 0 or not proper:
        return []
    space = solution_space(data, "real")
    seen: dict[tuple, FixedPoint] = {}
    for idx in combinations(proper, n):
        if rank(data.U[:, list(idx)]) < n:
            continue
        t = _solve_flat(data, idx, list(space.base))
        if t is None:
            continue
        key = tuple(t)
        if key in seen:
            continue
        x = space.point(key)
        active = tuple(i for i in range(data.d) if x[i] == 0)
        seen[key] = FixedPoint(t=key, x=tuple(x), active=active)
    return [seen[k] for k in sorted(seen)]


# ---------------------------------------------------------------------------
# plot data


def _fmt(value) -> str:
    if isinstance(value, GaussRational):
        return str(value)
    return str(Fraction(value))


def arrangement_csv(data: HypertoricData) -> str:
    """One row per hyperplane and wall: ``side,index,normal,offset,kind``.

    Indices are 1-based; the normal is space separated.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["side", "index", "normal", "offset", "kind"])
    for side in ("real", "complex"):
        for hp in hyperplanes(data, side):
            writer.writerow(
                [side, hp.index + 1, " ".join(str(u) for u in hp.normal), _fmt(hp.offset), hp.kind]
            )
    return buf.getvalue()
