"""Command line interface: ``wignerkit {generate,classify,verify,bloch}``.

Exit codes: 0 success (or an operator of one of the two preserving types),
1 usage / I/O / format error, 2 operator does not preserve rank-one
projections, 3 a verification check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import classifier as clf
from .coords import operator_from_json, operator_to_json
from .errors import WignerKitError
from .geometry import (
    LineParam,
    circle_angles,
    projection_from_param,
    sample_circle,
    small_circle,
    sphere_point,
)
from .linalg import as_projection, make_rng, projector_onto
from .suites import SUITES, run_suite

EXIT_OK, EXIT_ERROR, EXIT_NOT_PRESERVING, EXIT_CHECK_FAILED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def parse_dims(text: str) -> list[int]:
    """``"4"`` -> [4], ``"2..6"`` -> [2, 3, 4, 5, 6], ``"2,3,6"`` -> [2, 3, 6]."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
            dims = list(range(lo, hi + 1))
        else:
            dims = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension spec {text!r}") from None
    if not dims:
        raise argparse.ArgumentTypeError(f"empty dimension range {text!r}")
    return dims


def _default_seed() -> int:
    return int(os.environ.get("WIGNERKIT_SEED", "0"))


def _dump(doc) -> str:
    return json.dumps(doc, indent=1) + "\n"


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _complex_array(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1] != 2:
        raise WignerKitError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def read_projection(path: str):
    """Rank-one projection from JSON: ``{"matrix": [[[re, im], ...], ...]}``
    or ``{"vector": [[re, im], ...]}`` (a verdict's ``"P"`` is also accepted)."""
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise WignerKitError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if "vector" in doc:
        v = _complex_array(doc["vector"])
        return projector_onto(v / np.linalg.norm(v))
    key = "matrix" if "matrix" in doc else "P"
    if key not in doc:
        raise WignerKitError(f"{path}: expected a 'matrix' or 'vector' field")
    return as_projection(_complex_array(doc[key]))


def cmd_generate(args) -> int:
    rng = make_rng(args.seed)
    op, truth = clf.generate_with_truth(args.type, args.dim, rng, args.eps, args.base)
    text = operator_to_json(op)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        side = dict(clf.truth_to_dict(truth), seed=args.seed, dim=args.dim)
        Path(args.out).with_suffix(".truth.json").write_text(_dump(side), encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_classify(args) -> int:
    op = operator_from_json(_read_text(args.input))
    verdict = clf.classify(op, tol=args.tol, rng=make_rng(args.seed), trials=args.trials)
    sys.stdout.write(_dump(clf.verdict_to_dict(verdict, seed=args.seed)))
    if isinstance(verdict, clf.NotRankOnePreserving):
        return EXIT_NOT_PRESERVING
    return EXIT_OK


def cmd_verify(args) -> int:
    dims = args.dim
    if dims and not all(2 <= d <= 16 for d in dims):
        raise WignerKitError("verify accepts dimensions 2..16")
    command = " ".join(["verify"] + args.argv)
    report = run_suite(args.suite, args.seed, dims, args.trials, timing=args.timing, command=command)
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    for c in report.checks:
        if not c.passed:
            print(f"FAIL {c.name}: failing seed {c.failing_seed}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _emit_rows(header: list[str], rows: list[list[float]]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    sys.stdout.write(buf.getvalue())


def _generators(args):
    if args.input:
        return [read_projection(p) for p in args.input]
    return [projection_from_param(LineParam(t, a)) for t, a in (args.param or [])]


def cmd_bloch(args) -> int:
    if args.sub == "coords":
        if args.input:
            projs = [read_projection(p) for p in args.input]
        elif args.t is not None:
            projs = [projection_from_param(LineParam(args.t, args.alpha))]
        else:
            raise WignerKitError("bloch coords needs --t/--alpha or --input")
        rows = [list(sphere_point(P)) for P in projs]
        if args.csv:
            _emit_rows(["x0", "x1", "x2", "x3"], rows)
        else:
            sys.stdout.write(_dump({"points": rows}))
        return EXIT_OK

    gens = _generators(args)
    if len(gens) != 2:
        raise WignerKitError("bloch circle needs exactly two generators (--param or --input)")
    circle = small_circle(*gens)
    samples = sample_circle(circle.frame, args.samples)
    rows = [[float(th), *sphere_point(Z).vec.tolist()] for th, Z in zip(circle_angles(args.samples), samples)]
    if args.csv:
        _emit_rows(["theta", "x1", "x2", "x3"], rows)
    else:
        sys.stdout.write(_dump({
            "center": circle.center.tolist(),
            "radius": circle.radius,
            "normal": circle.normal.tolist(),
            "t": circle.frame.t,
            "points": rows,
        }))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wignerkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a random operator in herm-orthonormal-v1 format")
    g.add_argument("--type", required=True, choices=["isometry", "anti-isometry", "constant", "perturbed"])
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--seed", type=int, default=_default_seed())
    g.add_argument("--eps", type=float, default=0.0)
    g.add_argument("--base", default="isometry", choices=["isometry", "anti-isometry", "constant"],
                   help="underlying type for --type perturbed")
    g.add_argument("--out", help="output path; ground truth goes to <out>.truth.json")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("classify", help="classify an operator file")
    c.add_argument("--input", required=True, help="operator file, or - for stdin")
    c.add_argument("--tol", type=float, default=clf.DEFAULT_TOL)
    c.add_argument("--trials", type=int, default=None)
    c.add_argument("--seed", type=int, default=_default_seed())
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", help="run a randomised verification suite")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--dim", type=parse_dims, default=None)
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--seed", type=int, default=_default_seed())
    v.add_argument("--out", help="also write the report here")
    v.add_argument("--timing", action="store_true", help="include wall time (breaks byte-reproducibility)")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bloch", help="Bloch sphere coordinates and small circles")
    b.add_argument("sub", choices=["coords", "circle"])
    b.add_argument("--t", type=float)
    b.add_argument("--alpha", type=float, default=0.0)
    b.add_argument("--param", type=float, nargs=2, action="append", metavar=("T", "ALPHA"),
                   help="circle generator by (t, alpha); give twice")
    b.add_argument("--input", action="append", help="projection JSON file; repeatable")
    b.add_argument("--samples", type=int, default=16)
    b.add_argument("--csv", action="store_true")
    b.set_defaults(func=cmd_bloch)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv[1:]
    try:
        return args.func(args)
    except (WignerKitError, OSError) as exc:
        print(f"wignerkit {args.command}: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
