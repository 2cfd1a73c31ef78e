"""Combinatorial type of the fibers of the residual complex moment map.

A regular fiber is a complex torus ``(C^*)^n = T^n x R^n``.  Over a point
``b`` on walls ``S`` the fiber is obtained from that model by collapsing, over
each nonempty intersection ``H_Q`` (``Q`` a subset of ``S``) of real
hyperplanes, the subtorus generated by ``{u_l : l in Q}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .arrangement import (
    Chamber,
    active_walls,
    chambers,
    fixed_points,
    in_closure,
    solution_space,
    strata,
)
from .errors import BetaNotZero
from .exact_linalg import GaussRational, gauss_vector, smith_normal_form
from .hypertoric_data import HypertoricData


@dataclass(frozen=True)
class ShrinkStratum:
    active: tuple[int, ...]
    flat_dim: int
    flat_base: tuple[Fraction, ...]  # parameter coordinates t
    flat_point: tuple[Fraction, ...]  # ambient x = x0 + U^T t
    flat_directions: tuple[tuple[Fraction, ...], ...]
    shrunk_torus_rank: int
    feasible: bool = True

    def to_dict(self) -> dict:
        return {
            "active": [i + 1 for i in self.active],
            "flat_dim": self.flat_dim,
            "flat_base": [str(v) for v in self.flat_base],
            "flat_point": [str(v) for v in self.flat_point],
            "flat_directions": [[str(v) for v in row] for row in self.flat_directions],
            "shrunk_torus_rank": self.shrunk_torus_rank,
            "feasible": self.feasible,
        }

    @classmethod
    def from_dict(cls, p: dict) -> "ShrinkStratum":
        return cls(
            active=tuple(i - 1 for i in p["active"]),
            flat_dim=p["flat_dim"],
            flat_base=tuple(Fraction(v) for v in p["flat_base"]),
            flat_point=tuple(Fraction(v) for v in p["flat_point"]),
            flat_directions=tuple(tuple(Fraction(v) for v in row) for row in p["flat_directions"]),
            shrunk_torus_rank=p["shrunk_torus_rank"],
            feasible=p["feasible"],
        )


@dataclass(frozen=True)
class FiberDescription:
    base_point: tuple[GaussRational, ...]
    regular: bool
    n: int
    shrink_strata: tuple[ShrinkStratum, ...] = ()
    beta_zero: bool = True

    @property
    def generic_model(self) -> dict | None:
        if not self.regular:
            return None
        return {"torus_rank": self.n, "affine_rank": self.n}

    @property
    def fixed_loci(self) -> tuple[ShrinkStratum, ...]:
        return tuple(s for s in self.shrink_strata if self.n and s.shrunk_torus_rank == self.n)

    @property
    def note(self) -> str:
        if self.beta_zero:
            return ""
        return "beta != 0: classification per the same shrinking rule"

    def to_dict(self) -> dict:
        return {
            "base_point": [[str(b.re), str(b.im)] for b in self.base_point],
            "regular": self.regular,
            "n": self.n,
            "generic_model": self.generic_model,
            "shrink_strata": [s.to_dict() for s in self.shrink_strata],
            "fixed_loci": [[i + 1 for i in s.active] for s in self.fixed_loci],
            "beta_zero": self.beta_zero,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, p: dict) -> "FiberDescription":
        return cls(
            base_point=tuple(gauss_vector(p["base_point"])),
            regular=p["regular"],
            n=p["n"],
            shrink_strata=tuple(ShrinkStratum.from_dict(s) for s in p["shrink_strata"]),
            beta_zero=p["beta_zero"],
        )


def isotropy_rank(data: HypertoricData, Z: Iterable[int]) -> int:
    """Rank of the lattice spanned by ``{u_i : i in Z}``."""
    Z = sorted(set(Z))
    if not Z or data.n == 0:
        return 0
    D, _, _ = smith_normal_form(data.U[:, Z])
    return sum(1 for k in range(min(D.shape)) if D[k, k])


def classify_fiber(data: HypertoricData, b) -> FiberDescription:
    S = active_walls(data, b)
    base = tuple(gauss_vector(b))
    space = solution_space(data, "real")
    found = []
    for size in range(1, len(S) + 1):
        for Q in combinations(S, size):
            st = strata(data, Q, "real")
            if not st.feasible:
                continue
            found.append(
                ShrinkStratum(
                    active=Q,
                    flat_dim=st.flat_dim,
                    flat_base=st.flat_base,
                    flat_point=tuple(space.point(st.flat_base)),
                    flat_directions=st.flat_directions,
                    shrunk_torus_rank=isotropy_rank(data, Q),
                )
            )
    return FiberDescription(
        base_point=base,
        regular=not S,
        n=data.n,
        shrink_strata=tuple(found),
        beta_zero=data.beta_is_zero,
    )


@dataclass(frozen=True)
class CoreComponent:
    signs: tuple[int, ...]
    bounded: bool
    label: str
    neighbors: tuple[int, ...] = field(default=())
    interior: tuple[Fraction, ...] = ()

    def to_dict(self) -> dict:
        return {
            "signs": list(self.signs),
            "bounded": self.bounded,
            "label": self.label,
            "neighbors": [j + 1 for j in self.neighbors],
            "interior": [str(v) for v in self.interior],
        }

    @classmethod
    def from_dict(cls, p: dict) -> "CoreComponent":
        return cls(
            signs=tuple(p["signs"]),
            bounded=p["bounded"],
            label=p["label"],
            neighbors=tuple(j - 1 for j in p["neighbors"]),
            interior=tuple(Fraction(v) for v in p["interior"]),
        )


def _label(ch: Chamber, n: int) -> str:
    if n == 1:
        return "CP1" if ch.bounded else "C"
    if n == 0:
        return "pt"
    return "compact" if ch.bounded else "noncompact"


def extended_core(data: HypertoricData) -> list[CoreComponent]:
    """Components of the central fiber ``F_0``, one per chamber of ``{H_i}``.

    Two components are neighbors when their closed chambers share a vertex of
    the arrangement.  For ``n = 1`` the list is in line order and labels are
    ``C`` (unbounded chamber) or ``CP1`` (bounded chamber).
    """
    if not data.beta_is_zero:
        raise BetaNotZero("the extended core is the central fiber of Y(alpha, 0)")
    chs = chambers(data)
    verts = fixed_points(data)
    touching = [{k for k, v in enumerate(verts) if in_closure(ch, data, v.t)} for ch in chs]
    out = []
    for i, ch in enumerate(chs):
        nbrs = tuple(j for j in range(len(chs)) if j != i and touching[i] & touching[j])
        out.append(
            CoreComponent(
                signs=ch.signs,
                bounded=ch.bounded,
                label=_label(ch, data.n),
                neighbors=nbrs,
                interior=ch.interior,
            )
        )
    return out


def core_text(components: list[CoreComponent], n: int) -> str:
    """Human-readable core: a chain for ``n = 1``, one line per component otherwise."""
    if n == 1:
        return " -- ".join(c.label for c in components)
    lines = []
    for i, c in enumerate(components):
        signs = "".join("+" if s > 0 else "-" if s < 0 else "0" for s in c.signs)
        nb = ",".join(str(j + 1) for j in c.neighbors) or "none"
        lines.append(f"[{i + 1}] {c.label} chamber {signs} neighbors {nb}")
    return "\n".join(lines)
