"""Command-line interface.

Exit codes: 0 success, 2 validation error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import __version__
from .arrangement import (
    Hyperplane,
    arrangement_csv,
    chambers,
    fixed_points,
    hyperplanes,
    strata,
    walls,
)
from .config import ProblemConfig, load_config, parse_point_arg
from .errors import HypertoricError, PreconditionError, ValidationError
from .exact_linalg import GaussRational
from .fiber_classifier import FiberDescription, classify_fiber, core_text, extended_core
from .hypertoric_data import HypertoricData, check_parameter_regularity
from .numeric_verifier import (
    VerificationReport,
    verify_generic_fiber,
    verify_lagrangian,
    verify_shrinking,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAILED = 3

log = logging.getLogger("hypertoric")


@dataclass
class Outcome:
    payload: dict
    text: str
    csv: str | None = None
    exit_code: int = EXIT_OK
    samples_csv: str | None = None


def dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _offset(value) -> str | list[str]:
    if isinstance(value, GaussRational):
        return [str(value.re), str(value.im)]
    return str(value)


def hyperplane_dict(hp: Hyperplane) -> dict:
    return {"index": hp.index + 1, "normal": list(hp.normal), "offset": _offset(hp.offset), "kind": hp.kind}


def _points(args, cfg: ProblemConfig) -> list[list[GaussRational]]:
    if args.point:
        return [parse_point_arg(p) for p in args.point]
    if not cfg.points:
        raise ValidationError("no query points: give --point or 'points' in the config")
    return cfg.points


def _fmt_point(b) -> str:
    return "(" + ", ".join(str(v) for v in b) + ")"


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(data: HypertoricData, cfg, args) -> Outcome:
    rep = check_parameter_regularity(data)
    lines = [
        f"m={data.m} n={data.n} d={data.d}",
        f"smooth manifold: {'yes' if rep.status == 'smooth manifold' else 'no'}",
        f"status: {rep.status}",
    ]
    if rep.offending_subsets:
        lines.append("offending subsets: " + "; ".join(str([i + 1 for i in z]) for z in rep.offending_subsets))
    return Outcome({"data": data.to_dict(), "smoothness": rep.to_dict()}, "\n".join(lines) + "\n")


def cmd_normals(data: HypertoricData, cfg, args) -> Outcome:
    normals = [{"index": i + 1, "u": [int(v) for v in data.U[:, i]]} for i in range(data.d)]
    payload = {
        "U": [[int(v) for v in row] for row in data.U],
        "section": [[int(v) for v in row] for row in data.section],
        "normals": normals,
    }
    text = "".join(f"u_{e['index']} = {tuple(e['u'])}\n" for e in normals)
    return Outcome(payload, text)


def cmd_walls(data: HypertoricData, cfg, args) -> Outcome:
    ws = walls(data)
    hs = hyperplanes(data, "real")
    proper = [w.index for w in ws if w.kind == "proper"]
    common = strata(data, proper, "complex") if proper else None
    payload = {
        "walls": [hyperplane_dict(w) for w in ws],
        "hyperplanes": [hyperplane_dict(h) for h in hs],
        "proper_walls_meet": None if common is None else common.feasible,
        "proper_walls_meet_dim": None if common is None or not common.feasible else common.flat_dim,
    }
    lines = [f"W_{w.index + 1}: normal {w.normal} offset {w.offset} [{w.kind}]" for w in ws]
    lines += [f"H_{h.index + 1}: normal {h.normal} offset {h.offset} [{h.kind}]" for h in hs]
    if common is not None and common.feasible:
        lines.append(f"all proper walls meet in a flat of complex dimension {common.flat_dim}")
    return Outcome(payload, "\n".join(lines) + "\n", csv=arrangement_csv(data))


def _fiber_text(desc: FiberDescription) -> str:
    head = f"b = {_fmt_point(desc.base_point)}"
    if desc.regular:
        return f"{head}\n  regular: (C*)^{desc.n} = T^{desc.n} x R^{desc.n}\n"
    lines = [head, "  singular, shrink strata:"]
    for s in desc.shrink_strata:
        lines.append(
            f"    Q={[i + 1 for i in s.active]} torus rank {s.shrunk_torus_rank} "
            f"flat dim {s.flat_dim} through t={_fmt_point(s.flat_base)}"
        )
    if desc.note:
        lines.append(f"  note: {desc.note}")
    return "\n".join(lines) + "\n"


def cmd_classify(data: HypertoricData, cfg, args) -> Outcome:
    descs = [classify_fiber(data, b) for b in _points(args, cfg)]
    return Outcome({"fibers": [d.to_dict() for d in descs]}, "".join(_fiber_text(d) for d in descs))


def cmd_core(data: HypertoricData, cfg, args) -> Outcome:
    comps = extended_core(data)
    chain = core_text(comps, data.n)
    return Outcome({"components": [c.to_dict() for c in comps], "chain": chain, "n": data.n}, chain + "\n")


def _verify_points(data, cfg, args) -> tuple[list[dict], list[VerificationReport]]:
    samples = args.samples if args.samples is not None else cfg.verify.samples
    tol = args.tolerance if args.tolerance is not None else cfg.verify.tolerance
    seed = args.seed if args.seed is not None else cfg.verify.seed
    entries, all_reports = [], []
    for b in _points(args, cfg):
        desc = classify_fiber(data, b)
        if desc.regular:
            reports = [
                verify_lagrangian(data, b, n_samples=samples, tol=tol, seed=seed),
                verify_generic_fiber(data, b),
            ]
        elif getattr(args, "allow_singular", False):
            reports = [verify_shrinking(data, b)]
        else:
            raise PreconditionError(f"b = {_fmt_point(b)} is singular; pass --allow-singular")
        all_reports += reports
        entries.append(
            {"b": [[str(v.re), str(v.im)] for v in desc.base_point], "reports": [r.to_dict() for r in reports]}
        )
    return entries, all_reports


def _verify_text(entries: list[dict]) -> str:
    lines = []
    for e in entries:
        lines.append("b = (" + ", ".join(f"{re}+{im}i" if im != "0" else re for re, im in e["b"]) + ")")
        for r in e["reports"]:
            detail = ""
            if r["kind"] == "lagrangian":
                detail = f" max|omega_C|={r['max_omega_c']:.3e} tol={r['tolerance']:g}"
            elif r["kind"] == "generic_fiber":
                detail = f" frames={r['jacobian_rank_ok']} free={r['freeness_ok']} grid={r['n_samples']}"
            elif r["kind"] == "shrinking":
                detail = " " + "; ".join(
                    f"Q={s['active']} rank {s['numeric_rank_on_flat']}/{s['shrunk_torus_rank']}" for s in r["strata"]
                )
            lines.append(f"  {r['kind']}: {r['status'].upper()}{detail}")
    return "\n".join(lines) + "\n"


def _samples_table(entries: list[dict]) -> str:
    rows = ["point,sample,max_omega_c"]
    for k, e in enumerate(entries):
        for r in e["reports"]:
            for j, v in enumerate(r["per_sample_max_omega"]):
                rows.append(f"{k + 1},{j},{v!r}")
    return "\n".join(rows) + "\n"


def cmd_verify(data: HypertoricData, cfg, args) -> Outcome:
    entries, reports = _verify_points(data, cfg, args)
    passed = all(r.status == "pass" for r in reports)
    return Outcome(
        {"points": entries, "passed": passed},
        _verify_text(entries),
        csv=_samples_table(entries),
        exit_code=EXIT_OK if passed else EXIT_FAILED,
    )


def cmd_report(data: HypertoricData, cfg, args) -> Outcome:
    smooth = cmd_validate(data, cfg, args)
    wall_out = cmd_walls(data, cfg, args)
    payload = {
        "data": data.to_dict(),
        "smoothness": smooth.payload["smoothness"],
        "walls": wall_out.payload["walls"],
        "hyperplanes": wall_out.payload["hyperplanes"],
        "fixed_points": [
            {"t": [str(v) for v in p.t], "x": [str(v) for v in p.x], "active": [i + 1 for i in p.active]}
            for p in fixed_points(data)
        ],
    }
    text = [smooth.text, wall_out.text]
    text.append(f"fixed points: {len(payload['fixed_points'])}\n")
    if data.n <= 3:
        chs = chambers(data)
        payload["chambers"] = [{"signs": list(c.signs), "bounded": c.bounded} for c in chs]
        text.append(f"chambers: {len(chs)} ({sum(c.bounded for c in chs)} bounded)\n")
        if data.beta_is_zero:
            core = cmd_core(data, cfg, args)
            payload["core"] = core.payload
            text.append("extended core: " + core.text)
    exit_code = EXIT_OK
    points = args.point or cfg.points
    samples = None
    if points:
        payload["fibers"] = [classify_fiber(data, b).to_dict() for b in _points(args, cfg)]
        args.allow_singular = True
        entries, reports = _verify_points(data, cfg, args)
        payload["verification"] = entries
        payload["passed"] = all(r.status == "pass" for r in reports)
        text.append(_verify_text(entries))
        samples = _samples_table(entries)
        if not payload["passed"]:
            exit_code = EXIT_FAILED
    return Outcome(payload, "".join(text), csv=arrangement_csv(data), exit_code=exit_code, samples_csv=samples)


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "normals": cmd_normals,
    "walls": cmd_walls,
    "classify": cmd_classify,
    "core": cmd_core,
    "verify": cmd_verify,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypertoric",
        description="Walls, fibers and Lagrangian checks for toric hyperkahler quotients.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("config", help="JSON problem configuration")
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--csv", help="write plot data (CSV) to this path")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--point", action="append", help="query point b: 'p/q,...' with 're:im' for complex")
        if name in ("verify", "report"):
            p.add_argument("--samples", type=int, default=None)
            p.add_argument("--tolerance", type=float, default=None)
        if name == "verify":
            p.add_argument("--allow-singular", action="store_true")
    return parser


def _write(path: str | None, content: str) -> None:
    if path is None:
        sys.stdout.write(content)
    else:
        Path(path).write_text(content, encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    if not hasattr(args, "samples"):
        args.samples = args.tolerance = None
    try:
        cfg = load_config(args.config)
        data = cfg.build()
        out = COMMANDS[args.command](data, cfg, args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except HypertoricError as exc:
        print(f"verification error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED
    _write(args.output, dumps(out.payload) if args.format == "json" else out.text)
    if args.csv and out.csv is not None:
        Path(args.csv).write_text(out.csv, encoding="utf-8")
        if out.samples_csv:
            p = Path(args.csv)
            p.with_name(p.stem + "_samples.csv").write_text(out.samples_csv, encoding="utf-8")
    return out.exit_code


if __name__ == "__main__":
    sys.exit(main())
