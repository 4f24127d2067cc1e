"""Command-line front end.

Three subcommands: ``runge`` writes benchmark curves for the classic
ill-behaved interpolation target 1/(1+25x^2), ``image`` reconstructs a PGM
through both estimators, ``natural`` emits the spectral analytics of an
image's matrix moments.  Outputs are plain CSV/PGM/JSON and bitwise
deterministic for fixed inputs and flags (the wall-clock ``seconds`` metric
is the one necessarily varying field).

Exit codes: 0 success, 1 usage, 2 I/O (unreadable/unwritable paths, bad
PGM), 3 numeric failure (Gramm factorization, eigensolve).
"""

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from .approx import (
    build_reconstructor,
    differentiate_reconstruction,
    eval_ls_grid,
    eval_rn_grid,
    lebesgue_measure,
    natural_basis,
    reconstruct_derivative_1d,
    reconstruct_image,
    spur_average,
)
from .basis import BasisKind
from .linalg import EigenConvergenceError, NotPositiveDefiniteError
from .moments import MomentSet, gauss_legendre_measure
from .pgm import PgmError, image_metrics, read_pgm, write_pgm

EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NUMERIC = 3

# central-difference step for the differentiate-after-reconstruct columns;
# fixed so CSV output is reproducible
DIFF_STEP = 1e-5


def _read_pgm_file(path: str):
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def _write_pgm_file(path: str, img) -> None:
    with open(path, "wb") as fh:
        fh.write(write_pgm(img))


def _runge(x):
    return 1.0 / (1.0 + 25.0 * x * x)


def _runge_deriv(x):
    return -50.0 * x / (1.0 + 25.0 * x * x) ** 2


class _Parser(argparse.ArgumentParser):
    """argparse terminates with code 2 on bad flags; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="rnmoments", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="cmd", required=True, metavar="command")

    runge = sub.add_parser("runge", help="benchmark curves for 1/(1+25x^2)")
    runge.add_argument("--basis", choices=("chebyshev", "legendre"), default="chebyshev")
    runge.add_argument("--n", type=int, default=7, help="basis size N (default 7)")
    runge.add_argument(
        "--quad-nodes", type=int, default=1000, help="Gauss quadrature nodes (default 1000)"
    )
    runge.add_argument(
        "--grid", type=int, default=1001, help="output points on [-1.5, 1.5] (default 1001)"
    )
    runge.add_argument("--out", default="runge.csv", help="output CSV path")

    image = sub.add_parser("image", help="reconstruct a PGM from its moments")
    image.add_argument("pgm", help="input PGM (binary P5)")
    image.add_argument("--basis", choices=("chebyshev", "legendre"), default="chebyshev")
    image.add_argument("--n", type=int, default=8, help="basis size per axis (default 8)")
    image.add_argument("--nx", type=int, default=None, help="override x basis size")
    image.add_argument("--ny", type=int, default=None, help="override y basis size")
    image.add_argument("--method", choices=("ls", "rn", "both"), default="both")
    image.add_argument(
        "--out", default=None, help="output stem (default: input path without .pgm)"
    )

    natural = sub.add_parser("natural", help="natural-basis spectrum of a PGM")
    natural.add_argument("pgm", help="input PGM (binary P5)")
    natural.add_argument("--basis", choices=("chebyshev", "legendre"), default="chebyshev")
    natural.add_argument("--n", type=int, default=8, help="basis size per axis (default 8)")
    natural.add_argument("--nx", type=int, default=None, help="override x basis size")
    natural.add_argument("--ny", type=int, default=None, help="override y basis size")
    natural.add_argument(
        "--bins", type=int, default=None, help="eigenvalue-count histogram bins"
    )
    natural.add_argument("--out", default=None, help="output JSON path")
    return parser


def _check_out_path(parser: _Parser, path: str) -> None:
    """Reject obviously unwritable targets before spending compute."""
    if os.path.isdir(path):
        parser.error(f"output path is a directory: {path}")
    parent = os.path.dirname(path) or "."
    if not os.path.isdir(parent):
        raise OSError(f"output directory does not exist: {parent}")


def _grid_sizes(parser: _Parser, args) -> tuple:
    nx = args.n if args.nx is None else args.nx
    ny = args.n if args.ny is None else args.ny
    if nx < 1 or ny < 1:
        parser.error("basis sizes must be >= 1")
    return nx, ny


def _stem(path: str) -> str:
    root, ext = os.path.splitext(path)
    return root if ext.lower() == ".pgm" else path


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _cmd_runge(parser: _Parser, args) -> None:
    if args.n < 1:
        parser.error("--n must be >= 1")
    if args.quad_nodes < args.n:
        parser.error("--quad-nodes must be >= --n")
    if args.grid < 2:
        parser.error("--grid must be >= 2")
    _check_out_path(parser, args.out)

    basis = BasisKind.from_name(args.basis)
    measure = gauss_legendre_measure(args.quad_nodes)
    ms = MomentSet.from_function_1d(_runge, measure, basis, args.n)
    dms = MomentSet.from_function_1d(_runge_deriv, measure, basis, args.n)
    rec = build_reconstructor(ms)

    xs = np.linspace(-1.5, 1.5, args.grid)
    cols = [
        xs,
        _runge(xs),
        eval_ls_grid(rec, xs),
        eval_rn_grid(rec, xs),
        _runge_deriv(xs),
        reconstruct_derivative_1d(dms, "ls", xs),
        reconstruct_derivative_1d(dms, "rn", xs),
        differentiate_reconstruction(rec, "ls", xs, DIFF_STEP),
        differentiate_reconstruction(rec, "rn", xs, DIFF_STEP),
    ]
    lines = ["x,f,A_LS,A_RN,df,ADf_LS,ADf_RN,DAf_LS,DAf_RN"]
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    with open(args.out, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {args.out} ({args.grid} rows)")


def _cmd_image(parser: _Parser, args) -> None:
    nx, ny = _grid_sizes(parser, args)
    stem = _stem(args.pgm) if args.out is None else args.out
    methods = ("ls", "rn") if args.method == "both" else (args.method,)
    for m in methods:
        _check_out_path(parser, f"{stem}.{m}.pgm")
    _check_out_path(parser, f"{stem}.metrics.json")

    img = _read_pgm_file(args.pgm)
    basis = BasisKind(args.basis, shifted=True)
    t0 = time.perf_counter()
    ms = MomentSet.from_image(img, basis, nx, ny)
    rec = build_reconstructor(ms)
    report = {
        "input": args.pgm,
        "basis": args.basis,
        "nx": nx,
        "ny": ny,
        "methods": {},
    }
    for m in methods:
        result = reconstruct_image(rec, (img.width, img.height), m)
        out_path = f"{stem}.{m}.pgm"
        _write_pgm_file(out_path, result.image)
        metrics = image_metrics(img, result.image)
        report["methods"][m] = {
            "output": out_path,
            "pre_clamp_min": result.pre_clamp_min,
            "pre_clamp_max": result.pre_clamp_max,
            "max_abs": metrics["max_abs"],
            "rmse": metrics["rmse"],
            "psnr": "inf" if math.isinf(metrics["psnr"]) else metrics["psnr"],
        }
    report["seconds"] = time.perf_counter() - t0
    json_path = f"{stem}.metrics.json"
    with open(json_path, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    print(f"wrote {json_path}")


def _cmd_natural(parser: _Parser, args) -> None:
    nx, ny = _grid_sizes(parser, args)
    if args.bins is not None and args.bins < 1:
        parser.error("--bins must be >= 1")
    out = f"{_stem(args.pgm)}.natural.json" if args.out is None else args.out
    _check_out_path(parser, out)

    img = _read_pgm_file(args.pgm)
    basis = BasisKind(args.basis, shifted=True)
    ms = MomentSet.from_image(img, basis, nx, ny)
    eig = natural_basis(ms)
    residuals = np.linalg.norm(
        ms.F @ eig.vectors - ms.G @ eig.vectors * eig.values[np.newaxis, :], axis=0
    )
    doc = {
        "input": args.pgm,
        "basis": args.basis,
        "nx": nx,
        "ny": ny,
        "lambda": eig.values.tolist(),
        "psi": eig.vectors.T.tolist(),
        "residuals": residuals.tolist(),
        "spur_average": spur_average(ms),
    }
    if args.bins is not None:
        hist = lebesgue_measure(eig, args.bins)
        doc["bins"] = hist.edges.tolist()
        doc["mu"] = hist.mu.tolist()
    with open(out, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    print(f"wrote {out}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.cmd == "runge":
            _cmd_runge(parser, args)
        elif args.cmd == "image":
            _cmd_image(parser, args)
        else:
            _cmd_natural(parser, args)
    except PgmError as exc:
        print(f"rnmoments: PGM error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"rnmoments: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NotPositiveDefiniteError as exc:
        print(
            f"rnmoments: Gramm matrix not positive definite (pivot {exc.pivot}); "
            "basis too large for the data",
            file=sys.stderr,
        )
        return EXIT_NUMERIC
    except EigenConvergenceError as exc:
        print(f"rnmoments: eigensolve failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
