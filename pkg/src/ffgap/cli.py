"""Command-line interface for local-gap thresholds, census checks and small-system ED."""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, kernels
from .criteria import (
    HONEYCOMB,
    HYPERCUBIC,
    LATTICE_NAMES,
    TRIANGULAR,
    LatticeKind,
    closed_form_bound,
    kset_for,
    threshold_for,
)
from .profiles import CoefficientProfile, validate_profile
from .scalars import DEFAULT_PRECISION, QuadraticScalar, qf_to_float

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

# reference spin-wave constants (ell^2 * gap on the open slanted box)
SPINWAVE_REFERENCE = {HONEYCOMB: 0.9, TRIANGULAR: 5.3}
SPINWAVE_NOTE = (
    "one-magnon gap = smallest nonzero eigenvalue of half the graph Laplacian "
    "(singlet-projector normalisation); 'open' is the slanted box with L cells per side"
)


class UsageError(Exception):
    pass


def parse_ell(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise UsageError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise UsageError(f"bad --ell value {text!r}; expected N or A..B") from None


def parse_lambda(text: str) -> QuadraticScalar:
    """``A``, ``A,k`` (meaning ``A*sqrt(k)``) or ``A,B,k`` (meaning ``A + B*sqrt(k)``)."""
    parts = [p.strip() for p in text.split(",")]
    try:
        if len(parts) == 1:
            return QuadraticScalar(Fraction(parts[0]))
        if len(parts) == 2:
            return QuadraticScalar(0, Fraction(parts[0]), int(parts[1]))
        if len(parts) == 3:
            return QuadraticScalar(Fraction(parts[0]), Fraction(parts[1]), int(parts[2]))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --lambda value {text!r}: {exc}") from None
    raise UsageError(f"bad --lambda value {text!r}")


def _lattice(args) -> LatticeKind:
    try:
        return LatticeKind(args.lattice, args.dim if args.lattice == HYPERCUBIC else 2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _profile(args, lattice: LatticeKind, ell: int) -> CoefficientProfile:
    from .tuner import paper_lambda

    if args.uniform:
        return CoefficientProfile.uniform(ell)
    lam = parse_lambda(args.lam) if args.lam else paper_lambda(lattice, ell)
    return CoefficientProfile.from_lambda(ell, lam)


# --- subcommands ----------------------------------------------------------------


def cmd_tables(args, out):
    from .tuner import (
        PAPER_TABLES,
        TableRow,
        compare_with_paper,
        reproduce_table,
        rows_to_records,
        write_csv,
    )

    lattice = _lattice(args)
    ells = parse_ell(args.ell)
    if min(ells) < 2:
        raise UsageError("ell must be >= 2")
    if args.compare:
        table = PAPER_TABLES.get((lattice.name, lattice.dim))
        if table is None:
            raise UsageError(f"no published table for {lattice}")
        missing = [e for e in ells if e not in table]
        if missing:
            raise UsageError(f"no published values for ell in {missing}")
    if args.lam or args.uniform:
        rows = []
        for ell in ells:
            p = _profile(args, lattice, ell)
            rep = threshold_for(kset_for(lattice, p, check=False, honeycomb_k1=args.honeycomb_k1))
            t = qf_to_float(rep.t_ell, args.precision)
            ok = validate_profile(p).ok and rep.feasible
            lam = qf_to_float(p.lam, args.precision) if p.lam is not None else float("nan")
            rows.append(TableRow(ell, t, t * ell * ell, lam, ok, rep.t_ell))
    else:
        rows = reproduce_table(lattice, ells, mode=args.mode, jobs=args.jobs, honeycomb_k1=args.honeycomb_k1)

    status = EXIT_OK
    comparison = None
    if args.compare:
        comparison = compare_with_paper(lattice, rows)
        status = EXIT_OK if all(c.ok for c in comparison) else EXIT_MISMATCH
        for c in comparison:
            mark = "ok" if c.ok else "MISMATCH"
            print(f"ell={c.ell} ours={c.ours_rounded} paper={c.paper:.3f} diff={c.diff:+.4f} {mark}",
                  file=sys.stderr)

    if args.format == "csv":
        buf = io.StringIO()
        write_csv(buf, lattice, rows)
        text = buf.getvalue()
        name = "tables.csv"
    else:
        obj = {"rows": rows_to_records(lattice, rows)}
        if comparison is not None:
            obj["comparison"] = [
                {"ell": c.ell, "ours": c.ours, "ours_rounded": str(c.ours_rounded), "paper": c.paper,
                 "diff": c.diff, "ok": c.ok}
                for c in comparison
            ]
        text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
        name = "tables.json"
    out.emit(name, text)
    return status


def cmd_bound(args, out):
    from .tuner import paper_default_threshold

    lattice = _lattice(args)
    ells = parse_ell(args.ell)
    if min(ells) < 10:
        raise UsageError("closed-form thresholds are stated for ell >= 10")
    recs = []
    status = EXIT_OK
    for ell in ells:
        bound = closed_form_bound(lattice, ell)
        rep = paper_default_threshold(lattice, ell, args.honeycomb_k1)
        dominated = rep.t_ell <= QuadraticScalar(bound)
        status = status if dominated else EXIT_MISMATCH
        recs.append({
            "lattice": lattice.name,
            "D": lattice.dim,
            "ell": ell,
            "bound": float(bound),
            "bound_exact": f"{bound.numerator}/{bound.denominator}",
            "t_ell": qf_to_float(rep.t_ell, args.precision),
            "prefactor": qf_to_float(rep.prefactor, args.precision),
            "t_le_bound": dominated,
        })
    if args.format == "csv":
        cols = list(recs[0])
        lines = [",".join(cols)] + [",".join(repr(r[c]) if isinstance(r[c], float) else str(r[c]) for c in cols) for r in recs]
        out.emit("bound.csv", "\n".join(lines) + "\n")
    else:
        out.emit("bound.json", json.dumps({"rows": recs}, indent=2, sort_keys=True) + "\n")
    return status


def cmd_census(args, out):
    from .weight_oracle import IDENTIFIED, run_census

    lattice = _lattice(args)
    ells = parse_ell(args.ell)
    if len(ells) != 1:
        raise UsageError("census takes a single ell")
    ell = ells[0]
    if ell < 1:
        raise UsageError("ell must be >= 1")
    L = args.L or 2 * ell + 1
    if not L > 2 * ell:
        raise UsageError(f"need L > 2*ell (got L={L}, ell={ell})")
    p = _profile(args, lattice, ell)
    try:
        c, report = run_census(lattice, ell, p, L, jobs=args.jobs, honeycomb_k1=args.honeycomb_k1)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    obj = c.to_json(include_pairs=args.pairs)
    identified, _ = IDENTIFIED[lattice.name]
    shape_const = {}
    for const, classes in identified.items():
        present = [c.shape_stats[s].max for s in classes if s in c.shape_stats]
        if present:
            shape_const[const] = qf_to_float(max(present), args.precision)
    obj["identified"] = shape_const
    obj["profile"] = p.to_json()
    obj["comparison"] = report.to_json()
    obj["kernels"] = kernels.backend()
    out.emit("census.json", json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if report.ok else EXIT_MISMATCH


def _ed_graph(args):
    from .lattice import build_box, build_torus, path_graph, ring_graph

    if args.chain:
        return path_graph(args.chain) if args.bc == "open" else ring_graph(args.chain)
    lattice = _lattice(args)
    if not args.L:
        raise UsageError("--L is required")
    return build_torus(lattice, args.L) if args.bc == "periodic" else build_box(lattice, args.L)


def cmd_gap(args, out):
    from .gapver import SpinSystem, SystemTooLargeError, spectral_gap

    try:
        g = _ed_graph(args)
        rep = spectral_gap(SpinSystem(g), jobs=args.jobs)
    except (SystemTooLargeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    obj = rep.to_json()
    obj["graph"] = g.summary()
    out.emit("gap.json", json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_spinwave(args, out):
    from .gapver import one_magnon_gap

    lattice = _lattice(args)
    if not args.L or args.L < 2:
        raise UsageError("--L >= 2 is required")
    gap = one_magnon_gap(lattice, args.L, args.bc)
    obj = {
        "lattice": lattice.to_json(),
        "L": args.L,
        "bc": args.bc,
        "gap": gap,
        "L_sq_gap": gap * args.L**2,
        "normalization": SPINWAVE_NOTE,
    }
    ref = SPINWAVE_REFERENCE.get(lattice.name)
    if ref is not None:
        obj["reference"] = ref
        obj["relative_error"] = abs(gap * args.L**2 - ref) / ref
    out.emit("spinwave.json", json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_verify(args, out):
    from .gapver import SpinSystem, SystemTooLargeError, check_criterion, spectral_gap
    from .lattice import build_box, build_torus
    from .tuner import TuneConfig, optimize_lambda

    lattice = _lattice(args)
    ells = parse_ell(args.ell)
    if len(ells) != 1:
        raise UsageError("verify takes a single ell")
    ell = ells[0]
    if ell < 2:
        raise UsageError("ell must be >= 2")
    if not args.L:
        raise UsageError("--L is required")
    try:
        torus = build_torus(lattice, args.L)
        box = build_box(lattice, ell)
        gL = spectral_gap(SpinSystem(torus), jobs=args.jobs)
        gl = spectral_gap(SpinSystem(box), jobs=args.jobs)
    except (SystemTooLargeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if args.uniform or args.lam:
        p = _profile(args, lattice, ell)
        rep = threshold_for(kset_for(lattice, p, honeycomb_k1=args.honeycomb_k1))
    else:
        rep = optimize_lambda(TuneConfig(lattice, ell, honeycomb_k1=args.honeycomb_k1)).report
    if rep is None or not rep.feasible:
        raise UsageError("no feasible threshold for this ell")
    verdict = check_criterion(gL.gamma, gl.gamma, rep)
    obj = {
        "lattice": lattice.to_json(),
        "L": args.L,
        "ell": ell,
        "gamma_L": gL.gamma,
        "gamma_ell": gl.gamma,
        "t_ell": rep.t_float,
        "prefactor": rep.prefactor_float,
        "box_fits": args.L > 2 * ell,
        "verdict": verdict.to_json(),
    }
    out.emit("verify.json", json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if verdict.holds else EXIT_MISMATCH


COMMANDS = {
    "tables": cmd_tables,
    "bound": cmd_bound,
    "census": cmd_census,
    "gap": cmd_gap,
    "spinwave": cmd_spinwave,
    "verify": cmd_verify,
}


HELP = {
    "tables": "optimise lambda and tabulate t_ell (CSV/JSON); --compare paper gates on the published tables",
    "bound": "exact t_ell at the published lambda against the closed-form bound (ell >= 10)",
    "census": "brute-force pair-weight census on the torus, compared with the closed-form constants",
    "gap": "exact-diagonalisation gap of the ferromagnetic Heisenberg model (<= 20 sites)",
    "spinwave": "one-magnon gap and L^2 * gap on the open box (default) or torus",
    "verify": "end-to-end check of gamma_L >= prefactor * (gamma_ell - t_ell) by ED",
}


# --- plumbing -------------------------------------------------------------------


class Output:
    """Collects emitted files; writes them to stdout or into ``--out DIR``."""

    def __init__(self, out_dir):
        self.out_dir = Path(out_dir) if out_dir else None
        self.files = []

    def emit(self, name: str, text: str):
        if self.out_dir is None:
            sys.stdout.write(text)
            return
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        path.write_text(text)
        self.files.append(str(path))

    def write_manifest(self, command: str, params: dict, seedless: bool):
        if self.out_dir is None:
            return
        manifest = {
            "command": command,
            "parameters": params,
            "versions": {"ffgap": __version__, "kernels": kernels.backend(), "python": sys.version.split()[0]},
            "outputs": self.files,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "seedless": seedless,
        }
        (self.out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lattice", choices=LATTICE_NAMES, default=HYPERCUBIC)
    common.add_argument("--dim", type=int, default=2, help="dimension D (hypercubic only)")
    common.add_argument("--ell", default="3", help="N or A..B")
    common.add_argument("--L", type=int, default=None, help="torus side / box side")
    common.add_argument("--lambda", dest="lam", default=None,
                        help="exact interpolation parameter: A, A,k (A*sqrt k) or A,B,k (A+B*sqrt k)")
    common.add_argument("--uniform", action="store_true", help="use the unweighted profile")
    common.add_argument("--compare", choices=["paper"], default=None)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="bits for float rendering")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    common.add_argument("--out", default=None, help="write files and a manifest into this directory")
    common.add_argument("--seedless", action="store_true",
                        help="assert deterministic mode (no randomness is used anywhere)")
    common.add_argument("--honeycomb-k1", choices=["published", "exact"], default="published")
    common.add_argument("--mode", choices=["lambda_only", "paper_default"], default="lambda_only")
    common.add_argument("--pairs", action="store_true", help="census: dump every pair weight")
    common.add_argument("--bc", choices=["open", "periodic"], default=None)
    common.add_argument("--chain", type=int, default=None, help="gap: use a chain of N sites")

    parser = argparse.ArgumentParser(prog="ffgap", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ffgap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in HELP.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def dispatch(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad usage
    if args.bc is None:
        args.bc = "open" if args.command == "spinwave" else "periodic"
    if args.precision < 53:
        parser.error("--precision must be at least 53")
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    out = Output(args.out)
    try:
        status = COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ffgap {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "out", "jobs")}
    out.write_manifest(args.command, params, args.seedless)
    return status


def main(argv=None) -> int:
    try:
        return dispatch(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
