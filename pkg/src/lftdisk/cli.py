"""Command-line entry point: ``lftdisk <subcommand> ...``.

Maps are given as inline JSON ``{"a":[re,im],"b":...,"c":...,"d":...}`` or
``@path`` to a file holding such an object.  Non-LFT maps known to the
corpus registry may be named directly where an evaluable map is accepted.

Exit status: 0 on success, 1 when the answer to a yes/no question is no
(or the map fails a mathematical precondition), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import corpus
from .classify import classify, self_map_report
from .config import DEFAULT, Tolerances
from .dynamics import orbit, orbit_csv, orbit_svg
from .errors import LFTError, ParseError, UnknownMapName
from .intertwine import check_conditions, residual, solve_family
from .moebius import Moebius, complex_from_json, complex_to_json, fixed_points, iterate_n
from .roots import (
    EmbedStatus,
    dyadic_element,
    embeddable,
    parse_dyadic,
    root_nonelliptic,
    roots_elliptic,
)


class UsageError(Exception):
    pass


def _positive_int(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _positive_float(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def _read_json_arg(text: str, what: str):
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {text[1:]}: {exc.strerror}", what) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg} at column {exc.colno})", what) from exc


def parse_map(text: str, what: str = "map") -> Moebius:
    obj = _read_json_arg(text, what)
    try:
        return Moebius.from_json(obj)
    except ParseError as exc:
        raise ParseError(str(exc), what) from exc


def parse_evaluable(text: str, what: str = "f"):
    """An LFT as JSON/@file, or the name of a registry map."""
    if text in corpus.REGISTRY:
        return corpus.lookup(text)
    if not text.lstrip().startswith(("{", "@")):
        raise UnknownMapName(f"{what}: {text!r} is neither JSON nor a known map name ({sorted(corpus.REGISTRY)})")
    return parse_map(text, what)


def parse_point(text: str) -> complex:
    return complex_from_json(_read_json_arg(text, "point"), "point")


def _emit(obj, fmt: str, out) -> None:
    if fmt == "table":
        for k, v in obj.items():
            out.write(f"{k:<22} {json.dumps(v)}\n")
    else:
        out.write(json.dumps(obj, indent=2) + "\n")


def _tolerances(args) -> Tolerances:
    changes = {}
    if args.tol_class is not None:
        changes["classify"] = args.tol_class
    if args.tol_residual is not None:
        changes["residual"] = args.tol_residual
    return dataclasses.replace(DEFAULT, **changes)


def _tol_json(tol: Tolerances) -> dict:
    return dataclasses.asdict(tol)


# --- subcommands -------------------------------------------------------------------------


def cmd_classify(args, tol, out):
    m = parse_map(args.map)
    res = classify(m, tol).to_json()
    res["self_map"] = self_map_report(m, tol).to_json()
    res["tolerances"] = _tol_json(tol)
    _emit(res, args.format, out)
    return 0


def cmd_fixed_points(args, tol, out):
    fps = fixed_points(parse_map(args.map), tol)
    _emit(
        {"points": [complex_to_json(p) for p in fps], "double": fps.double, "everywhere": fps.everywhere},
        args.format,
        out,
    )
    return 0


def cmd_iterate(args, tol, out):
    m = iterate_n(parse_map(args.map), args.n)
    res = {"n": args.n, "map": m.to_json()}
    if args.point is not None:
        res["value"] = complex_to_json(m(parse_point(args.point)))
    _emit(res, args.format, out)
    return 0


def cmd_orbit(args, tol, out):
    m = parse_evaluable(args.map)
    orb = orbit(m, parse_point(args.z0), args.n, tol)
    if args.format == "csv":
        out.write(orbit_csv(orb))
    elif args.format == "svg":
        out.write(orbit_svg(orb))
    else:
        rows = [{"n": k, "z": complex_to_json(z), "step": s} for k, z, s in orb.rows()]
        _emit({"start": complex_to_json(orb.start), "orbit": rows, "truncated": orb.truncated}, args.format, out)
    return 0


def cmd_intertwine_check(args, tol, out):
    f = parse_evaluable(args.f, "f")
    phi = parse_map(args.phi, "phi")
    psi = parse_map(args.psi, "psi")
    if isinstance(f, Moebius):
        chk = check_conditions(f, phi, psi, tol)
        res = chk.to_json()
        holds = chk.holds
    else:
        r = residual(f, phi, psi)
        holds = r < tol.residual
        res = {"holds": holds, "residual": r, "bound": tol.residual}
    res["tolerances"] = _tol_json(tol)
    _emit(res, args.format, out)
    return 0 if holds else 1


def cmd_intertwine_solve(args, tol, out):
    phi = parse_map(args.phi, "phi")
    psi = parse_map(args.psi, "psi")
    fam = solve_family(phi, psi, tol)
    res = fam.to_json()
    rng = np.random.default_rng(args.seed)
    res["samples"] = [m.to_json() for m in fam.sample(rng, args.samples)]
    res["tolerances"] = _tol_json(tol)
    _emit(res, args.format, out)
    return 0


def cmd_roots(args, tol, out):
    phi = parse_map(args.map)
    cls = classify(phi, tol)
    if cls.tag.boundary_dw:
        roots = [root_nonelliptic(phi, args.n, tol)]
    else:
        roots = roots_elliptic(phi, args.n, tol)
    res = {"n": args.n, "class": cls.tag.value, "count": len(roots), "roots": [r.to_json() for r in roots]}
    _emit(res, args.format, out)
    return 0


def cmd_embed(args, tol, out):
    phi = parse_map(args.map)
    verdict = embeddable(phi, args.depth, tol)
    res = verdict.to_json()
    if args.time is not None and verdict.status is EmbedStatus.EMBEDDABLE:
        t = parse_dyadic(args.time)
        res["time"] = str(t)
        res["element"] = dyadic_element(phi, t, tol, verdict=verdict).to_json()
    _emit(res, args.format, out)
    return 0 if verdict.status is EmbedStatus.EMBEDDABLE else 1


def cmd_corpus(args, tol, out):
    records = corpus.load(args.path)
    report = corpus.run(records, tol)
    if args.format == "table":
        out.write(report.table())
    else:
        out.write(report.dumps())
    return report.exit_status


# --- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-class", type=_positive_float, help="classification tolerance")
    common.add_argument("--tol-residual", type=_positive_float, help="residual bound for non-LFT checks")
    common.add_argument("--format", choices=["json", "table", "csv", "svg"], default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised output")

    p = argparse.ArgumentParser(prog="lftdisk", description="LFT self-maps of the unit disk")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="dynamic type and Denjoy-Wolff data")
    s.add_argument("map")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("fixed-points", parents=[common], help="fixed points on the sphere")
    s.add_argument("map")
    s.set_defaults(func=cmd_fixed_points)

    s = sub.add_parser("iterate", parents=[common], help="n-th iterate")
    s.add_argument("map")
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--point", help="evaluate the iterate at [re,im]")
    s.set_defaults(func=cmd_iterate)

    s = sub.add_parser("orbit", parents=[common], help="forward orbit with hyperbolic steps")
    s.add_argument("map")
    s.add_argument("--z0", default="[0,0]")
    s.add_argument("--n", type=_positive_int, default=32)
    s.set_defaults(func=cmd_orbit)

    def add_check(sp):
        sp.add_argument("f", help="LFT JSON or registry name")
        sp.add_argument("phi")
        sp.add_argument("psi")
        sp.set_defaults(func=cmd_intertwine_check)

    def add_solve(sp):
        sp.add_argument("phi")
        sp.add_argument("psi")
        sp.add_argument("--samples", type=_positive_int, default=3)
        sp.set_defaults(func=cmd_intertwine_solve)

    add_check(sub.add_parser("intertwine-check", parents=[common], help="does f o phi = psi o f hold"))
    add_solve(sub.add_parser("intertwine-solve", parents=[common], help="all LFT solutions f"))
    s = sub.add_parser("intertwine", help="check or solve f o phi = psi o f")
    isub = s.add_subparsers(dest="action", required=True)
    add_check(isub.add_parser("check", parents=[common]))
    add_solve(isub.add_parser("solve", parents=[common]))

    s = sub.add_parser("roots", parents=[common], help="n-th iteration roots")
    s.add_argument("map")
    s.add_argument("--n", type=_positive_int, required=True)
    s.set_defaults(func=cmd_roots)

    s = sub.add_parser("embed", parents=[common], help="semigroup embedding verdict")
    s.add_argument("map")
    s.add_argument("--depth", type=_positive_int, default=64)
    s.add_argument("--time", help="dyadic time m/2^k of the element to construct")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("corpus", parents=[common], help="replay the worked examples")
    s.add_argument("--path", help=f"corpus file (default: ${corpus.CORPUS_ENV} or the bundled file)")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format in ("csv", "svg") and args.command != "orbit":
        err.write(f"lftdisk: error: --format {args.format} is only available for orbit\n")
        return 2
    try:
        return args.func(args, _tolerances(args), out)
    except (ParseError, UnknownMapName, ValueError) as exc:
        err.write(f"lftdisk: error: {exc}\n")
        return 2
    except LFTError as exc:
        err.write(f"lftdisk: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
