"""Command-line interface: validate, simulate, density, report.

Model files are JSON::

    {"d": 3, "r": 3,
     "matrix": [[1, 0, 0], [0.5, 0.5, 0], ["1/3", "1/3", "1/3"]],
     "factors": [{"family": "logistic", "alpha": 0.5}, ...],
     "masses": [0.2, 0.3, 0.5],      # optional, uniform by default
     "mvn_tol": 1e-6}                # optional

Hüsler–Reiss factors are ``{"family": "huesler_reiss", "variogram": [[...]]}``
with rows and columns indexed by the sorted members of the column's signature.
Matrix entries may be numbers or fraction strings such as "1/3".
Components are numbered from 1 on the command line.

Exit codes: 0 success, 1 malformed input or usage, 2 invalid model,
3 numerical failure, 4 a diagnostic check failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import warnings
from fractions import Fraction

import numpy as np

from . import diagnostics
from .density import MgpPoint, density_oracle, log_density
from .errors import MgpError, ValidationError
from .model import HueslerReiss, Logistic, MixtureModel, extreme_directions, validate
from .simulate import SimulationConfig, boxcox_transform, sample_batch
from .stdf import mixture_stdf

EXIT_PARSE, EXIT_INVALID, EXIT_NUMERIC, EXIT_CHECK = 1, 2, 3, 4


class ModelFileError(Exception):
    pass


def _number(x):
    if isinstance(x, bool):
        raise ModelFileError(f"expected a number, got {x!r}")
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        try:
            return float(Fraction(x.strip()))
        except (ValueError, ZeroDivisionError):
            pass
    raise ModelFileError(f"expected a number, got {x!r}")


def _family_from_spec(spec):
    if not isinstance(spec, dict) or "family" not in spec:
        raise ModelFileError(f"factor entry must be an object with a 'family' key: {spec!r}")
    name = spec["family"]
    if name == "logistic":
        if "alpha" not in spec:
            raise ModelFileError("logistic factor needs 'alpha'")
        return Logistic(_number(spec["alpha"]))
    if name in ("huesler_reiss", "husler_reiss"):
        g = spec.get("variogram", [])
        try:
            g = np.array([[_number(v) for v in row] for row in g], dtype=float)
        except TypeError:
            raise ModelFileError("variogram must be a list of rows") from None
        return HueslerReiss(g.reshape(len(g), -1) if g.size else np.zeros((0, 0)),
                            cov_shift=_number(spec.get("cov_shift", 1.0)))
    raise ModelFileError(f"unknown factor family {name!r}")


def model_from_dict(doc, mvn_tol=None) -> MixtureModel:
    if not isinstance(doc, dict):
        raise ModelFileError("model document must be a JSON object")
    for key in ("matrix", "factors"):
        if key not in doc:
            raise ModelFileError(f"missing key {key!r}")
    try:
        matrix = np.array([[_number(v) for v in row] for row in doc["matrix"]], dtype=float)
    except (TypeError, ValueError):
        raise ModelFileError("matrix must be a list of equal-length numeric rows") from None
    if matrix.ndim != 2:
        raise ModelFileError("matrix must be a list of equal-length numeric rows")
    d, r = matrix.shape
    if doc.get("d", d) != d or doc.get("r", r) != r:
        raise ModelFileError(f"declared d, r = {doc.get('d')}, {doc.get('r')} but matrix is {d}x{r}")
    if not isinstance(doc["factors"], list):
        raise ModelFileError("factors must be a list")
    families = [_family_from_spec(f) for f in doc["factors"]]
    masses = doc.get("masses")
    if masses is not None:
        masses = [_number(v) for v in masses]
    tol = mvn_tol if mvn_tol is not None else _number(doc.get("mvn_tol", 1e-6))
    return validate(matrix, families, masses, mvn_tol=tol)


def model_to_dict(model: MixtureModel) -> dict:
    factors = []
    for fam in model.families:
        if isinstance(fam, Logistic):
            factors.append({"family": "logistic", "alpha": fam.alpha})
        else:
            spec = {"family": "huesler_reiss", "variogram": fam.variogram.tolist()}
            if fam.cov_shift != 1.0:
                spec["cov_shift"] = fam.cov_shift
            factors.append(spec)
    return {"d": model.d, "r": model.r, "matrix": model.matrix.tolist(), "factors": factors,
            "masses": model.masses.tolist(), "mvn_tol": model.mvn_tol}


def load_model(path, mvn_tol=None) -> MixtureModel:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFileError(f"{path}: {exc}") from None
    return model_from_dict(doc, mvn_tol=mvn_tol)


def _fmt(x) -> str:
    return repr(float(x))


def _sig(sig) -> str:
    return "{" + ",".join(str(j + 1) for j in sig) + "}"


def write_csv(fh, header, rows):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def read_points(path, d):
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ModelFileError(f"{path}: empty CSV")
    header, body = rows[0], [r for r in rows[1:] if r]
    if len(header) != d:
        raise ModelFileError(f"{path}: expected {d} columns, got {len(header)}")
    try:
        y = np.array([[float(v) for v in r] for r in body], dtype=float).reshape(len(body), d)
    except ValueError as exc:
        raise ModelFileError(f"{path}: {exc}") from None
    if np.any(np.isnan(y)) or np.any(y == np.inf):
        raise ModelFileError(f"{path}: only finite values and -inf are allowed")
    return y


def _resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get("MGP_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ModelFileError(f"MGP_SEED must be an integer, got {env!r}") from None
    return 0


def _parse_stdf_point(text, d):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise ModelFileError(f"--stdf-at expects comma-separated numbers, got {text!r}") from None
    if len(vals) != d:
        raise ModelFileError(f"--stdf-at needs {d} values, got {len(vals)}")
    return np.array(vals)


def cmd_validate(args, out) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        model = load_model(args.model, mvn_tol=args.mvn_tol)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.echo:
        json.dump(model_to_dict(model), out, indent=2)
        out.write("\n")
        return 0
    print(f"d = {model.d}", file=out)
    print(f"r = {model.r}", file=out)
    print("signatures = " + " ".join(_sig(s) for s in model.signatures), file=out)
    print("extreme directions = " + " ".join(_sig(s) for s in extreme_directions(model)), file=out)
    print(f"l(1) = {model.ell_one:.6f}", file=out)
    print("face weights = " + " ".join(f"{w:.6f}" for w in model.weights), file=out)
    for text in args.stdf_at or []:
        y = _parse_stdf_point(text, model.d)
        print(f"l({text}) = {mixture_stdf(model, y):.10g}", file=out)
    return 0


def cmd_simulate(args, out) -> int:
    model = load_model(args.model, mvn_tol=args.mvn_tol)
    cfg = SimulationConfig(n=args.samples, seed=_resolve_seed(args.seed), workers=args.workers)
    batch = sample_batch(model, cfg)
    if args.transform is not None:
        data = boxcox_transform(batch.y, args.transform)
        header = [f"Z{j + 1}" for j in range(model.d)]
    else:
        data = batch.y
        header = [f"Y{j + 1}" for j in range(model.d)]
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(fh, header, data)
    else:
        write_csv(out, header, data)
    return 0


def cmd_density(args, out) -> int:
    model = load_model(args.model, mvn_tol=args.mvn_tol)
    y = read_points(args.points, model.d)
    header = ["log_density"] + (["oracle_density", "rel_discrepancy"] if args.oracle else [])
    rows = []
    for row in y:
        if np.all(row == -np.inf):
            rows.append([-np.inf] + ([0.0, 0.0] if args.oracle else []))
            continue
        p = MgpPoint.from_dense(row)
        ld = log_density(model, p)
        if args.oracle:
            o = density_oracle(model, p)
            dens = np.exp(ld)
            rel = abs(dens - o) / o if o > 0 else (0.0 if dens == 0 else np.inf)
            rows.append([ld, o, rel])
        else:
            rows.append([ld])
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(fh, header, rows)
    else:
        write_csv(out, header, rows)
    return 0


def cmd_report(args, out) -> int:
    model = load_model(args.model, mvn_tol=args.mvn_tol)
    cfg = SimulationConfig(n=args.samples, seed=_resolve_seed(args.seed), workers=args.workers)
    batch = sample_batch(model, cfg)
    print(f"n = {batch.n}, l(1) = {model.ell_one:.6f}", file=out)
    print(diagnostics.face_report(model, batch).format(), file=out)
    if batch.n < diagnostics.MIN_BATCH:
        print(f"distribution checks skipped (need n >= {diagnostics.MIN_BATCH})", file=out)
        return 0
    summary = diagnostics.distribution_checks(model, batch)
    print(summary.format(), file=out)
    return 0 if summary.passed else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mgpmix", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("model", help="model file (JSON)")
        p.add_argument("--mvn-tol", type=float, default=None,
                       help="standard-error target for normal cdf evaluations")

    p = sub.add_parser("validate", help="check a model file and print its derived quantities")
    common(p)
    p.add_argument("--stdf-at", action="append", metavar="x1,...,xd",
                   help="evaluate the stdf at a point (repeatable)")
    p.add_argument("--echo", action="store_true", help="print the canonical model file instead")
    p.set_defaults(func=cmd_validate)

    for name, func, helptext in (("simulate", cmd_simulate, "write samples as CSV"),
                                 ("report", cmd_report, "face proportions and distribution checks")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("-n", "--samples", type=int, default=1000)
        p.add_argument("--seed", type=int, default=None, help="defaults to $MGP_SEED, then 0")
        p.add_argument("--workers", type=int, default=1)
        if name == "simulate":
            p.add_argument("--out", default=None)
            p.add_argument("--transform", type=float, default=None, metavar="SCALE",
                           help="write scale*(exp(Y/scale)-1) instead of Y")
        p.set_defaults(func=func)

    p = sub.add_parser("density", help="log-densities of points read from CSV")
    common(p)
    p.add_argument("points", help="CSV with a header row and d columns; '-inf' allowed")
    p.add_argument("--out", default=None)
    p.add_argument("--oracle", action="store_true", help="add the quadrature value and discrepancy")
    p.set_defaults(func=cmd_density)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else 0
    try:
        return args.func(args, out)
    except ValidationError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ModelFileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except MgpError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
