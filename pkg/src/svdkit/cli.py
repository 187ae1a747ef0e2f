"""``svdkit`` command-line front end.

Every subcommand reads one input file, runs the matching library routine and
either prints its report to stdout (``--format json`` or ``csv``) or, with
``--output DIR``, writes the report and its CSV companions into ``DIR``.
Errors are reported on stderr as ``ERROR <code>: <message>`` with exit
status 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import entangle, grains, rollcall, tensor3
from . import io as sio
from .core import numerical_rank, svd, truncate
from .errors import InsufficientData, SvdkitError

EXIT_OK = 0
EXIT_ERROR = 1


class UsageError(SvdkitError):
    code = "USAGE"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def default_seed() -> int:
    raw = os.environ.get("SVDKIT_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"SVDKIT_SEED must be an integer, got {raw!r}") from None


def _multirank(text: str) -> tuple[int, int, int]:
    try:
        dims = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"multirank must look like m1,m2,m3, got {text!r}") from None
    if len(dims) != 3:
        raise argparse.ArgumentTypeError(f"multirank needs three integers, got {text!r}")
    return dims


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", "-i", help="input file")
    common.add_argument("--output", "-o", help="output directory (default: print to stdout)")
    common.add_argument("--format", choices=["json", "csv"], default="json", help="stdout format")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default 0, or $SVDKIT_SEED)")

    parser = _Parser(prog="svdkit", description="SVD toolkit: low-rank analysis, ellipsoids, entanglement, tensors")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("svd", parents=[common], help="singular values and rank-k truncation of a CSV matrix")
    p.add_argument("--k", type=int, default=None, help="retain k leading terms and emit A_k")
    p.add_argument("--tol", type=float, default=None, help="threshold for the numerical rank")

    p = sub.add_parser("rollcall", parents=[common], help="two-mode analysis of a roll-call CSV")
    p.add_argument("--right-party", required=True, help="party placed on the positive partisan side")
    p.add_argument("--scheme", choices=[s.value for s in rollcall.Scheme], default="score-sum")
    p.add_argument("--k", type=int, default=2, help="truncation rank used for predictions")

    p = sub.add_parser("grains", parents=[common], help="ellipsoid fits and crystal size distributions")
    p.add_argument("--tol", type=float, default=1e-7, help="Khachiyan tolerance")
    p.add_argument("--selector", choices=["short", "intermediate", "long"], default="short")
    p.add_argument("--kind", choices=[k.value for k in grains.Kind], default="inscribed")
    p.add_argument("--alpha", type=float, default=0.5, help="nucleation constant (generation mode)")
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--growth-rate", type=float, default=1.0)
    p.add_argument("--shape", choices=["prism", "plate", "cuboid"], default="prism")
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--points-per-grain", type=int, default=5000)
    p.add_argument("--write-population", action="store_true", help="also save the generated grains as JSON")

    p = sub.add_parser("entangle", parents=[common], help="Schmidt spectrum and entropy of a state matrix")
    p.add_argument("--normalize", action="store_true", help="rescale the input to unit trace instead of rejecting it")

    p = sub.add_parser("tensor", parents=[common], help="CP or HOSVD decomposition of an order-3 tensor")
    p.add_argument("--method", choices=["cp", "hosvd"], default="hosvd")
    p.add_argument("--r", type=int, default=None, help="CP rank")
    p.add_argument("--multirank", type=_multirank, default=None, help="HOSVD multirank m1,m2,m3")
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--init", choices=["hosvd", "random"], default="hosvd")
    return parser


def _validate(args) -> None:
    if args.seed is None:
        args.seed = default_seed()
    cmd = args.subcommand
    if cmd != "grains" and not args.input:
        raise UsageError(f"{cmd} requires --input")
    if cmd == "svd" and args.k is not None and args.k < 0:
        raise UsageError("--k must be nonnegative")
    if cmd == "svd" and args.tol is not None and not args.tol >= 0:
        raise UsageError("--tol must be nonnegative")
    if cmd == "rollcall" and args.k < 1:
        raise UsageError("--k must be at least 1")
    if cmd == "grains":
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
    if cmd == "tensor":
        if args.method == "cp" and args.r is None:
            raise UsageError("--method cp requires --r")
        if args.method == "hosvd" and args.r is not None:
            raise UsageError("--r only applies to --method cp")
        if args.method == "cp" and args.multirank is not None:
            raise UsageError("--multirank only applies to --method hosvd")
        if args.max_iter < 1:
            raise UsageError("--max-iter must be at least 1")
        if not args.tol >= 0:
            raise UsageError("--tol must be nonnegative")


# each runner returns (report, {filename: csv_text}, csv text for --format csv)


def _run_svd(args):
    A = sio.read_matrix_csv(args.input)
    f = svd(A)
    report = {
        "shape": list(A.shape),
        "sigma": f.sigma,
        "rank": numerical_rank(f, "default" if args.tol is None else args.tol),
        "spectral_norm": f.sigma[0],
    }
    files = {}
    stdout_csv = sio.format_matrix_csv(f.sigma[None, :])
    if args.k is not None:
        approx = truncate(f, args.k)
        report["k"] = args.k
        report["spectral_error"] = approx.spectral_error
        report["frobenius_error"] = approx.frobenius_error
        files["approx.csv"] = stdout_csv = sio.format_matrix_csv(approx.approx)
    return report, files, stdout_csv


def _rollcall_report(vm: rollcall.VotingMatrix, right_party: str, scheme: str, k: int):
    proj = rollcall.orient(rollcall.project(vm), vm, right_party)
    pred = rollcall.predictability(vm, k)
    outcomes = {s.value: rollcall.reconstruct_outcomes(vm, s, k) for s in rollcall.Scheme}
    chosen = outcomes[scheme]
    legislators = [
        {
            "id": lid,
            "party": party,
            "partisan": proj.partisan[i],
            "bipartisan": proj.bipartisan[i],
            "predictability": pred[i],
        }
        for i, (lid, party) in enumerate(vm.legislators)
    ]
    bills = [
        {
            "id": bid,
            "partisan": proj.bill_coords[j, 0],
            "bipartisan": proj.bill_coords[j, 1],
            "score": chosen.scores[j],
            "predicted_pass": chosen.predicted[j],
            "actual_pass": chosen.actual[j],
        }
        for j, bid in enumerate(vm.bills)
    ]
    defined = pred[~np.isnan(pred)]
    report = {
        "legislators_count": len(vm.legislators),
        "bills_count": len(vm.bills),
        "k": k,
        "sigma": vm.factors.sigma[: min(10, vm.factors.p)],
        "right_party": right_party,
        "scheme": scheme,
        "accuracy": {
            name: {"correct": rep.correct_count, "total": rep.total, "accuracy": rep.accuracy}
            for name, rep in outcomes.items()
        },
        "predictability_range": [defined.min(), defined.max()] if defined.size else [None, None],
        "legislators": legislators,
        "bills": bills,
    }
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["legislator_id", "party", "partisan", "bipartisan"])
    for i, (lid, party) in enumerate(vm.legislators):
        w.writerow([lid, party, repr(float(proj.partisan[i])), repr(float(proj.bipartisan[i]))])
    coords_csv = buf.getvalue()
    return report, coords_csv


def _run_rollcall(args):
    records = sio.parse_rollcall_csv(sio.read_text(args.input))
    vm = rollcall.build_matrix(records)
    report, coords_csv = _rollcall_report(vm, args.right_party, args.scheme, args.k)
    return report, {"coordinates.csv": coords_csv}, coords_csv


def _ellipsoid_json(e: grains.Ellipsoid):
    g = grains.geometry(e)
    return {"center": e.center, "shape": e.shape, "radii": g.radii, "orientation": g.orientation}


def _histogram_csv(rep: grains.CsdReport) -> str:
    lines = ["bin_lo,bin_hi,count,population_density"]
    for lo, hi, c, d in zip(rep.bin_edges[:-1], rep.bin_edges[1:], rep.counts, rep.density):
        lines.append(f"{float(lo)!r},{float(hi)!r},{int(c)},{float(d)!r}")
    return "\n".join(lines) + "\n"


def _csd_json(rep: grains.CsdReport):
    return {
        "slope": rep.slope,
        "intercept": rep.intercept,
        "r_squared": rep.r_squared,
        "degenerate": rep.degenerate,
        "bin_edges": rep.bin_edges,
        "counts": rep.counts,
    }


def _run_grains(args):
    files = {}
    population = None
    if args.input and Path(args.input).suffix.lower() != ".json":
        pts = sio.parse_points_csv(sio.read_text(args.input))
        fits = grains.fit_all(pts, args.tol)
        report = {"points": len(pts), "ellipsoids": {k.value: _ellipsoid_json(e) for k, e in fits.items()}}
        chosen = fits[grains.Kind(args.kind)]
        stdout_csv = "radius\n" + "".join(f"{r!r}\n" for r in grains.geometry(chosen).radii.tolist())
        return report, files, stdout_csv

    if args.input:
        population = sio.parse_population(sio.read_text(args.input))
        source = {"input": os.path.basename(args.input)}
    else:
        params = grains.GrowthParams(
            alpha=args.alpha,
            steps=args.steps,
            growth_rate=args.growth_rate,
            shape=grains.Shape.parse(args.shape),
            noise=args.noise,
            seed=args.seed,
            points_per_grain=args.points_per_grain,
        )
        population = grains.generate_population(params)
        source = {
            "alpha": args.alpha,
            "steps": args.steps,
            "growth_rate": args.growth_rate,
            "shape": args.shape,
            "noise": args.noise,
            "seed": args.seed,
        }
        if args.write_population:
            files["population.json"] = sio.dumps(sio.population_to_json(population))

    if len(population) < 5:
        raise InsufficientData(f"need at least 5 grains, got {len(population)}")
    selector = grains.Selector.parse(args.selector)
    diam = grains.all_diameters(population, args.tol)
    reports = {k: grains.csd_from_sizes(d[:, selector.value]) for k, d in diam.items()}
    chosen = reports[grains.Kind(args.kind)]
    report = {
        "source": source,
        "grains": len(population),
        "selector": args.selector,
        "kind": args.kind,
        "csd": _csd_json(chosen),
        "r_squared_by_kind": {k.value: r.r_squared for k, r in reports.items()},
    }
    hist = _histogram_csv(chosen)
    files["histogram.csv"] = hist
    return report, files, hist


def _run_entangle(args):
    C = sio.read_matrix_csv(args.input)
    state = entangle.validate_state(C, normalize=args.normalize)
    spec = entangle.schmidt(state)
    nats = entangle.entropy(spec)
    m, n = state.shape
    report = {
        "schmidt_coefficients": spec.coefficients,
        "entropy_nats": nats,
        "entropy_bits": nats / math.log(2),
        "entangled": entangle.is_entangled(spec),
        "max_entropy": entangle.max_entropy(m, n),
    }
    stdout_csv = sio.format_matrix_csv(spec.coefficients[None, :])
    return report, {}, stdout_csv


def _run_tensor(args):
    T = sio.parse_tensor(sio.read_text(args.input))
    if args.method == "cp":
        model = tensor3.cp_als(T, args.r, max_iter=args.max_iter, tol=args.tol, init=args.init, seed=args.seed)
        approx = tensor3.reconstruct_cp(model)
        report = {
            "model": "cp",
            "dims": list(T.shape),
            "rank": model.rank,
            "weights": model.weights,
            "U": model.U,
            "V": model.V,
            "W": model.W,
            "converged": model.converged,
            "iterations": model.iterations,
        }
    else:
        model = tensor3.hosvd(T, args.multirank)
        approx = tensor3.reconstruct_tucker(model)
        report = {
            "model": "tucker",
            "dims": list(T.shape),
            "multirank": list(model.multirank),
            "core": model.core,
            "U": model.U,
            "V": model.V,
            "W": model.W,
            "mode_sigma": list(model.mode_sigma),
        }
    report["relative_error"] = tensor3.fit(T, approx)
    return report, {}, sio.format_tensor(approx)


RUNNERS = {
    "svd": _run_svd,
    "rollcall": _run_rollcall,
    "grains": _run_grains,
    "entangle": _run_entangle,
    "tensor": _run_tensor,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
        report, files, stdout_csv = RUNNERS[args.subcommand](args)
        text = sio.dumps(report)
        if args.output:
            sio.write_files_atomic(args.output, {"report.json": text, **files})
        else:
            stdout.write(text if args.format == "json" else stdout_csv)
    except SvdkitError as exc:
        msg = " ".join(str(exc).split())
        stderr.write(f"ERROR {exc.code}: {msg}\n")
        return EXIT_ERROR
    except OSError as exc:
        stderr.write(f"ERROR IO_ERROR: {exc}\n")
        return EXIT_ERROR
    except ValueError as exc:
        # argument checks inside the library that have no dedicated class
        msg = " ".join(str(exc).split())
        stderr.write(f"ERROR INVALID_INPUT: {msg}\n")
        return EXIT_ERROR
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
