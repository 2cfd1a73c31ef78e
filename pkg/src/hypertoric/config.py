"""JSON problem configuration.

Rationals are strings ``"p/q"`` (plain integers are accepted too) and
complex rationals are ``[re, im]`` pairs, so nothing is parsed as a float.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import ValidationError
from .exact_linalg import GaussRational
from .hypertoric_data import HypertoricData, build


def parse_rational(value: Any) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ValidationError(f"rational expected as int or 'p/q' string, got {value!r}")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"cannot parse rational {value!r}") from exc


def parse_gauss(value: Any) -> GaussRational:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValidationError(f"complex rational must be [re, im], got {value!r}")
        return GaussRational(parse_rational(value[0]), parse_rational(value[1]))
    return GaussRational(parse_rational(value), 0)


def parse_point_arg(text: str) -> list[GaussRational]:
    """Command-line point: comma separated entries ``p/q`` or ``re:im``."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if ":" in item:
            re, im = item.split(":", 1)
            out.append(GaussRational(parse_rational(re), parse_rational(im)))
        else:
            out.append(GaussRational(parse_rational(item), 0))
    return out


@dataclass
class VerifySettings:
    samples: int = 20
    tolerance: float = 1e-7
    seed: int = 0


@dataclass
class ProblemConfig:
    A: list[list[int]]
    d: int
    alpha: list[Fraction]
    beta: list[GaussRational]
    points: list[list[GaussRational]] = field(default_factory=list)
    verify: VerifySettings = field(default_factory=VerifySettings)

    @classmethod
    def from_dict(cls, payload: dict) -> "ProblemConfig":
        if "A" not in payload:
            raise ValidationError("config is missing 'A'")
        A = payload["A"]
        if not isinstance(A, list) or any(not isinstance(r, list) for r in A):
            raise ValidationError("'A' must be a list of integer rows")
        for row in A:
            for v in row:
                if isinstance(v, bool) or not isinstance(v, int):
                    raise ValidationError(f"A entries must be integers, got {v!r}")
        d = payload.get("d")
        if A:
            widths = {len(r) for r in A}
            if len(widths) != 1:
                raise ValidationError("rows of A have different lengths")
            width = widths.pop()
            if d is not None and d != width:
                raise ValidationError(f"'d'={d} disagrees with A having {width} columns")
            d = width
        elif d is None:
            raise ValidationError("'d' is required when A has no rows")
        m = len(A)
        alpha = [parse_rational(v) for v in payload.get("alpha", [])]
        beta = [parse_gauss(v) for v in payload.get("beta", [0] * m)]
        if len(alpha) != m or len(beta) != m:
            raise ValidationError(f"alpha and beta must have length m={m}")
        points = [[parse_gauss(v) for v in p] for p in payload.get("points", [])]
        for p in points:
            if len(p) != d:
                raise ValidationError(f"query point has length {len(p)}, expected d={d}")
        vs = payload.get("verify", {})
        verify = VerifySettings(
            samples=int(vs.get("samples", 20)),
            tolerance=float(vs.get("tolerance", 1e-7)),
            seed=int(vs.get("seed", 0)),
        )
        return cls(A=A, d=d, alpha=alpha, beta=beta, points=points, verify=verify)

    def to_dict(self) -> dict:
        return {
            "A": self.A,
            "d": self.d,
            "alpha": [str(a) for a in self.alpha],
            "beta": [[str(b.re), str(b.im)] for b in self.beta],
            "points": [[[str(v.re), str(v.im)] for v in p] for p in self.points],
            "verify": {
                "samples": self.verify.samples,
                "tolerance": self.verify.tolerance,
                "seed": self.verify.seed,
            },
        }

    def build(self) -> HypertoricData:
        return build(self.A, self.alpha, self.beta, d=self.d)


def load_config(path: str | Path) -> ProblemConfig:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(payload, dict):
        raise ValidationError(f"{path}: top level must be an object")
    return ProblemConfig.from_dict(payload)
