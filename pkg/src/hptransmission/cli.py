"""Command-line driver.

Subcommands: ``solve``, ``sweep``, ``mesh``, ``oracle``, ``expansion``.
Exit codes: 0 success, 2 configuration error, 1 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .exact import radial_exact
from .expansion import build_composite, composite_error
from .geometry import AnnularGeometry
from .mesh import MeshError, build_mesh, dumps_17
from .pipeline import RunConfig, run_single, solution_dump
from .postproc import fit_rate, records_to_csv, records_to_json

log = logging.getLogger("hptransmission")


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from exc
    return vals


def _ints(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _radii(text: str) -> tuple[float, float, float]:
    vals = _floats(text)
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("--radii needs exactly three values a,b,c")
    return tuple(vals)


def _sign(text: str) -> int:
    if text in ("+", "+1", "1"):
        return 1
    if text in ("-", "-1"):
        return -1
    raise argparse.ArgumentTypeError("--h-sign must be + or -")


def _common(sub: argparse.ArgumentParser, eps_default="0.01", p_default="1-8"):
    sub.add_argument("--radii", type=_radii, default=(1.0, 2.0, 3.0))
    sub.add_argument("--eps", type=_floats, default=_floats(eps_default))
    sub.add_argument("--p", type=_ints, default=_ints(p_default))
    sub.add_argument("--kappa", type=float, default=1.0)
    sub.add_argument("--sectors", type=int, default=16)
    sub.add_argument("--rho0", type=float, default=None)
    sub.add_argument("--rho-sigma", type=float, default=None)
    sub.add_argument("--case", choices=("const", "manufactured"), default="const")
    sub.add_argument("--f", type=float, default=1.0, help="constant source (const case)")
    sub.add_argument("--h", type=float, default=0.0, help="constant interface flux (const case)")
    sub.add_argument("--h-sign", type=_sign, default=1)
    sub.add_argument("--out", type=Path, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hptransmission", description=__doc__)
    parser.add_argument("--verbose", action="store_true")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("solve", help="single (eps, p) solve")
    _common(s, p_default="8")
    s.add_argument("--dump", type=Path, default=None, help="nodal solution JSON")

    s = subs.add_parser("sweep", help="cross product of eps and p lists")
    _common(s)

    s = subs.add_parser("mesh", help="dump the layer mesh as JSON")
    _common(s, p_default="8")

    s = subs.add_parser("oracle", help="table of the exact radial solution")
    _common(s)
    s.add_argument("--points", type=int, default=201)

    s = subs.add_parser("expansion", help="composite (M=0) sup errors")
    _common(s, eps_default="0.1,0.01,0.001,0.0001")
    s.add_argument("--samples", type=int, default=2000)
    return parser


def _config(args) -> RunConfig:
    try:
        return RunConfig(
            radii=tuple(args.radii), eps=tuple(args.eps), p=tuple(args.p),
            kappa=args.kappa, sectors=args.sectors, rho0=args.rho0,
            rho_sigma=args.rho_sigma, case=args.case, f=args.f, h=args.h,
            h_sign=args.h_sign,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _single(values, name):
    if len(values) != 1:
        raise ConfigError(f"{name} needs exactly one value, got {len(values)}")
    return values[0]


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        out.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def _records_text(records, out: Path | None) -> str:
    if out is not None and out.suffix == ".json":
        return records_to_json(records)
    return records_to_csv(records)


def cmd_solve(args) -> int:
    cfg = _config(args)
    eps, p = _single(cfg.eps, "--eps"), _single(cfg.p, "--p")
    sol = _run(cfg, eps, p)
    _emit(_records_text([sol.record], args.out), args.out)
    if args.dump is not None:
        args.dump.write_text(dumps_17(solution_dump(sol)) + "\n", encoding="utf-8")
    return 0


def cmd_sweep(args) -> int:
    cfg = _config(args)
    records = sorted(
        (_run(cfg, eps, p).record for eps in cfg.eps for p in cfg.p),
        key=lambda rec: (rec.eps, rec.p),
    )
    text = _records_text(records, args.out)
    if not (args.out is not None and args.out.suffix == ".json"):
        lines = []
        for eps in sorted(set(cfg.eps)):
            group = [rec for rec in records if rec.eps == eps]
            try:
                fit = fit_rate(group)
            except ValueError as exc:
                lines.append(f"# fit eps={eps:.17g} skipped: {exc}")
                continue
            lines.append(
                f"# fit eps={eps:.17g} b={fit.b:.17g} C={fit.C:.17g} "
                f"r2={fit.r2:.17g} semilog_slope={fit.semilog_slope:.17g}"
            )
        text += "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def cmd_mesh(args) -> int:
    cfg = _config(args)
    eps, p = _single(cfg.eps, "--eps"), _single(cfg.p, "--p")
    try:
        mesh = build_mesh(cfg.geometry, cfg.sectors, p, eps, cfg.kappa, cfg.rho0, cfg.rho_sigma)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _emit(mesh.to_json(), args.out)
    return 0


def cmd_oracle(args) -> int:
    cfg = _config(args)
    eps = _single(cfg.eps, "--eps")
    geom = cfg.geometry
    sol = radial_exact(geom, eps, cfg.f, cfg.h, cfg.h_sign)
    r = np.linspace(geom.a, geom.c, max(args.points, 2))
    u, du = sol(r)
    rows = ["r,u,du_dr"] + [f"{x:.17g},{y:.17g},{z:.17g}" for x, y, z in zip(r, u, du)]
    _emit("\n".join(rows), args.out)
    return 0


def cmd_expansion(args) -> int:
    cfg = _config(args)
    geom = cfg.geometry
    rows = ["eps,composite_sup_error"]
    for eps in sorted(cfg.eps, reverse=True):
        comp = build_composite(geom, eps, cfg.f, cfg.h, rho0=cfg.rho0, rho_sigma=cfg.rho_sigma)
        err = composite_error(comp, radial_exact(geom, eps, cfg.f, cfg.h), args.samples)
        rows.append(f"{eps:.17g},{err:.17g}")
    _emit("\n".join(rows), args.out)
    return 0


def _run(cfg: RunConfig, eps: float, p: int):
    try:
        return run_single(cfg, eps, p)
    except MeshError as exc:
        raise ConfigError(str(exc)) from exc


COMMANDS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "mesh": cmd_mesh,
    "oracle": cmd_oracle,
    "expansion": cmd_expansion,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
