"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
Every report and error is printed as JSON (``"schema": 1``) on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .demo import DEMOS
from .errors import (EmptySet, GammaOutOfRange, InvalidPrimitive, NormalOracleFailure,
                     NotInComplement, OracleDisagreement, ProxballError, Unbounded,
                     VerificationFailure)
from .oracle import gamma_tightness_experiment, max_inscribed_through, random_scene
from .proxcheck import eesc_check
from .render import render_svg
from .sets import build_model, load_scene
from .synth import Certificate, synthesize, verify_certificate

SCHEMA = 1
BAD_INPUT = (InvalidPrimitive, GammaOutOfRange, NotInComplement, EmptySet,
             FileNotFoundError, json.JSONDecodeError, KeyError, ValueError)
FAILED = (VerificationFailure, NormalOracleFailure, OracleDisagreement)


def _point(text: str):
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y but got {text!r}") from None
    return (x, y)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gamma", type=float, default=0.7)
    common.add_argument("--at", type=_point, action="append", default=[],
                        metavar="X,Y", help="query point (repeatable)")
    common.add_argument("--samples", type=int, default=10_000)
    common.add_argument("--seed", type=int, default=0, help="seed for the scene name 'random'")
    common.add_argument("--json", type=Path, help="also write the report here")
    common.add_argument("--svg", type=Path, help="write an SVG drawing here")
    common.add_argument("--open", action="store_true", help="open-ball variant (oracle)")

    p = argparse.ArgumentParser(prog="proxball", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("check-eesc", "audit the exterior sphere condition of a scene"),
        ("synthesize", "build certificates at the --at points"),
        ("oracle", "brute-force largest inscribed ball through --at points"),
        ("render", "draw a scene (and certificates at --at points) as SVG"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("scene", help="scene file, bundled name, or 'random' (see --seed)")
    sp = sub.add_parser("verify", parents=[common], help="re-verify a certificate file")
    sp.add_argument("scene")
    sp.add_argument("certificate", type=Path)
    sub.add_parser("tightness", parents=[common], help="show gamma = 1 fails on the three-disk scene")
    sp = sub.add_parser("demo", parents=[common], help="run the checks for a bundled scene")
    sp.add_argument("name", choices=sorted(DEMOS))
    return p


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.json:
        args.json.write_text(text + "\n")


def _model(args):
    if args.scene == "random":
        return build_model(random_scene(args.seed))
    return build_model(load_scene(args.scene))


def _cmd_check_eesc(args) -> int:
    rep = eesc_check(_model(args), n_samples=max(args.samples // 50, 20))
    _emit({"schema": SCHEMA, "command": "check-eesc", **rep.to_json()}, args)
    return 0 if rep.passed else 1


def _cmd_synthesize(args) -> int:
    model = _model(args)
    if not args.at:
        raise ValueError("synthesize needs at least one --at point")
    certs = [synthesize(model, args.gamma, x, samples=args.samples) for x in args.at]
    if args.svg:
        args.svg.write_text(render_svg(model, certs))
    _emit({"schema": SCHEMA, "command": "synthesize",
           "certificates": [c.to_json() for c in certs]}, args)
    return 0


def _cmd_verify(args) -> int:
    model = _model(args)
    data = json.loads(args.certificate.read_text())
    records = data.get("certificates", [data])
    reports = [verify_certificate(model, Certificate.from_json(r), args.samples) for r in records]
    _emit({"schema": SCHEMA, "command": "verify", "reports": [r.to_json() for r in reports],
           "passed": all(r.passed for r in reports)}, args)
    return 0 if all(r.passed for r in reports) else 1


def _cmd_oracle(args) -> int:
    model = _model(args)
    if not args.at:
        raise ValueError("oracle needs at least one --at point")
    results = []
    for x in args.at:
        try:
            res = max_inscribed_through(model, x, open_variant=args.open).to_json()
            res["unbounded"] = False
        except Unbounded as exc:
            res = {"unbounded": True, "largest_radius": exc.largest_radius, "message": str(exc)}
        res["x"] = list(x)
        results.append(res)
    _emit({"schema": SCHEMA, "command": "oracle", "results": results}, args)
    return 0


def _cmd_tightness(args) -> int:
    rep = gamma_tightness_experiment()
    _emit({"command": "tightness", **rep}, args)
    return 0 if rep["passed"] else 1


def _cmd_render(args) -> int:
    model = _model(args)
    certs = [synthesize(model, args.gamma, x, samples=args.samples) for x in args.at]
    svg = render_svg(model, certs)
    if args.svg:
        args.svg.write_text(svg)
    else:
        sys.stdout.write(svg)
    return 0


def _cmd_demo(args) -> int:
    checks = DEMOS[args.name]()
    for c in checks:
        print(c.line())
    ok = all(c.passed for c in checks)
    print(f"{args.name}: {'all checks passed' if ok else 'some checks FAILED'}")
    if args.json:
        args.json.write_text(json.dumps(
            {"schema": SCHEMA, "command": "demo", "scene": args.name, "passed": ok,
             "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                        for c in checks]}, indent=2) + "\n")
    return 0 if ok else 1


COMMANDS = {"check-eesc": _cmd_check_eesc, "synthesize": _cmd_synthesize,
            "verify": _cmd_verify, "oracle": _cmd_oracle, "tightness": _cmd_tightness,
            "render": _cmd_render, "demo": _cmd_demo}


def _error(exc: BaseException) -> None:
    print(json.dumps({"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc)}))


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except FAILED as exc:
        _error(exc)
        return 1
    except BAD_INPUT as exc:
        _error(exc)
        return 2
    except ProxballError as exc:
        _error(exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
