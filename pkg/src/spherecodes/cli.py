"""Command-line surface for the pipeline.

Subcommands mirror the stages: `energy` evaluates a stored point set,
`minimize` searches from random or supplied starts, `build` and
`refine` work on parameterized structures, `hessian` certifies
second-order minimality, `symmetry` and `gram` fingerprint a
configuration, and `algdep` recovers a minimal polynomial from a
high-precision value.

Exit codes: 0 on success, 1 when a computation or an input file leaves
its domain, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

from . import fileio
from .algebra import minimal_polynomial
from .errors import DomainError, ParseError, SizeMismatch, SphereCodesError
from .fileio import _significant_digits
from .geometry import (
    Point3,
    PointSet,
    default_signature_tol,
    gram_matrix,
    gram_signature,
    normalize,
    random_point,
)
from .numerics import MIN_DIGITS, BigReal, Rng, with_precision
from .optimize import AnnealConfig, DescentConfig, descent, percolating_anneal
from .paramconfig import ParamVector, build_points, builtin_spec, newton_refine
from .potentials import Potential, energy
from .symmetry import symmetry_report
from .verify import verify_minimum

DEFAULT_PRECISION = 40
DEFAULT_POTENTIAL = "r1"

_ALGORITHM_IDS = {
    "descent": "descent",
    "anneal": "percolating-anneal",
    "both": "percolating-anneal+descent",
}


class _UsageError(Exception):
    """A flag combination the parser alone cannot reject."""


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} is not positive")
    return value


def _potential_arg(text: str) -> Potential:
    try:
        return Potential.from_token(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _real_arg(text: str) -> str:
    try:
        BigReal(text, MIN_DIGITS)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spherecodes",
        description="Minimal-energy point configurations on the unit sphere.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, summary):
        p = sub.add_parser(name, help=summary, description=summary)
        p.add_argument("--precision", type=_positive_int, metavar="DIGITS",
                       help="working decimal digits (default: input precision, "
                            f"else {DEFAULT_PRECISION})")
        p.add_argument("--seed", type=int, default=0, metavar="INT",
                       help="random stream seed (default 0)")
        p.add_argument("--potential", type=_potential_arg, metavar="TOK",
                       help="log, r1, r2, or rs:<s> "
                            f"(default {DEFAULT_POTENTIAL})")
        p.add_argument("--output", metavar="FILE",
                       help="write the result (points for minimize/build/"
                            "refine, the printed report otherwise)")
        p.add_argument("--manifest", metavar="FILE",
                       help="record the run as key-value lines")
        p.add_argument("--threads", type=_positive_int, default=1, metavar="INT",
                       help="cap on worker count (current algorithms are "
                            "single-threaded)")
        p.add_argument("--tol", type=_real_arg, metavar="REAL",
                       help="tolerance override; meaning depends on the "
                            "subcommand")
        p.add_argument("--renormalize", action="store_true",
                       help="push input points back onto the sphere instead "
                            "of rejecting them")
        return p

    p = add("energy", "total pair energy of a stored point set")
    p.add_argument("--input", required=True, metavar="FILE")

    p = add("minimize", "search for a minimal-energy configuration")
    p.add_argument("--n", type=_positive_int, metavar="INT",
                   help="number of points for random starts")
    p.add_argument("--input", metavar="FILE", help="start from this point set")
    p.add_argument("--algo", choices=("anneal", "descent", "both"),
                   default="descent",
                   help="anneal, descent, or anneal followed by descent")
    p.add_argument("--restarts", type=_positive_int, default=1, metavar="INT",
                   help="independent random starts (default 1)")
    p.add_argument("--report", metavar="FILE",
                   help="write the energy history as CSV plus a convergence "
                        "figure next to it")

    p = add("build", "instantiate a parameterized structure as points")
    p.add_argument("--n", type=_positive_int, metavar="INT",
                   help="use the built-in structure for this point count")
    p.add_argument("--spec", metavar="FILE", help="generator spec file")
    p.add_argument("--params", metavar="FILE", help="parameter value file")

    p = add("refine", "Newton-refine structure parameters to high precision")
    p.add_argument("--n", type=_positive_int, metavar="INT",
                   help="use the built-in structure for this point count")
    p.add_argument("--spec", metavar="FILE", help="generator spec file")
    p.add_argument("--params", metavar="FILE", help="parameter value file")
    p.add_argument("--params-out", metavar="FILE",
                   help="write the refined parameters")

    p = add("hessian", "tangent-space eigenvalue check of a point set")
    p.add_argument("--input", required=True, metavar="FILE")

    p = add("symmetry", "plane, polygon, and Gram-group report")
    p.add_argument("--input", required=True, metavar="FILE")

    p = add("gram", "Gram equal-value signature of a point set")
    p.add_argument("--input", required=True, metavar="FILE")

    p = add("algdep", "minimal polynomial of a high-precision value")
    p.add_argument("--value", required=True, metavar="FILE|LITERAL",
                   help="decimal literal, or a file holding one value")
    p.add_argument("--max-degree", type=_positive_int, required=True,
                   metavar="INT")
    p.add_argument("--even", action="store_true",
                   help="search even powers only")
    return parser


def _potential(args) -> Potential:
    return args.potential or Potential.from_token(DEFAULT_POTENTIAL)


def _at_digits(P: PointSet, digits: int) -> PointSet:
    """The point set at the requested working precision.  Lifting to
    more digits renormalizes, since stored coordinates sit on the
    sphere only to their own precision."""
    digits = max(int(digits), MIN_DIGITS)
    if digits == P.precision:
        return P
    if digits < P.precision:
        return P.with_precision(digits)
    return PointSet(normalize(Point3(with_precision(pt.x, digits),
                                     with_precision(pt.y, digits),
                                     with_precision(pt.z, digits)))
                    for pt in P.points)


def _read_input(args, digits=None) -> PointSet:
    P = fileio.read_points(args.input, renormalize=args.renormalize)
    if digits is None:
        digits = args.precision or P.precision
    return _at_digits(P, digits)


def _emit(lines, output=None) -> None:
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if output:
        Path(output).write_text(text, encoding="utf-8")


def _energy_text(value: BigReal, digits: int) -> str:
    return value.to_decimal(max(digits - 5, 1))


# -- subcommands -----------------------------------------------------------------


def _cmd_energy(args) -> dict:
    pot = _potential(args)
    P = _read_input(args)
    text = _energy_text(energy(P, pot).value, P.precision)
    _emit([f"n {P.n}",
           f"potential {pot.token}",
           f"energy {text}"], args.output)
    return {"potential": pot.token, "n": P.n, "precision": P.precision,
            "energy": text, "input_path": args.input}


def _run_algorithm(P0: PointSet, pot: Potential, algo: str, tol: BigReal,
                   digits: int, rng: Rng):
    if algo == "descent":
        return descent(P0, pot, DescentConfig(tolerance=tol))
    passes = 50 * P0.n
    if algo == "anneal":
        return percolating_anneal(P0, pot, AnnealConfig(final_precision=tol,
                                                        passes_per_round=passes),
                                  rng)
    # both: a coarse anneal finds the structure cheaply at reduced
    # precision, then descent polishes at full precision
    coarse = percolating_anneal(_at_digits(P0, min(digits, 20)), pot,
                                AnnealConfig(final_precision="1e-6",
                                             passes_per_round=passes), rng)
    polished = _at_digits(coarse.final_points, digits)
    return descent(polished, pot, DescentConfig(tolerance=tol))


def _cmd_minimize(args) -> dict:
    pot = _potential(args)
    digits = args.precision or DEFAULT_PRECISION
    tol = (BigReal(args.tol, digits) if args.tol
           else BigReal.exp10(-(digits // 2), digits))

    if args.input:
        if args.restarts != 1:
            raise _UsageError("--restarts applies to random starts; "
                              "drop it when --input is given")
        P0 = _read_input(args, digits)
        if args.n is not None and args.n != P0.n:
            raise _UsageError(f"--n {args.n} but the input holds {P0.n} points")
        best = _run_algorithm(P0, pot, args.algo, tol, digits, Rng(args.seed))
    elif args.n is None:
        raise _UsageError("minimize needs --n or --input")
    else:
        best = None
        first_error = None
        for k in range(args.restarts):
            rng = Rng(args.seed, stream=k)
            start = PointSet(random_point(rng, digits) for _ in range(args.n))
            try:
                run = _run_algorithm(start, pot, args.algo, tol, digits, rng)
            except SphereCodesError as exc:
                if first_error is None:
                    first_error = exc
                continue
            if best is None or run.final_energy.value < best.final_energy.value:
                best = run
        if best is None:
            raise first_error

    text = _energy_text(best.final_energy.value, digits)
    _emit([f"n {best.final_points.n}",
           f"potential {pot.token}",
           f"algorithm {_ALGORITHM_IDS[args.algo]}",
           f"energy {text}",
           f"iterations {best.iterations}",
           f"residual {best.residual.to_decimal(3)}",
           f"termination {best.termination}"])
    if args.output:
        fileio.write_points(args.output, best.final_points, digits, pot)
    if args.report:
        _write_report(args.report, best.history, digits)
    return {"potential": pot.token, "n": best.final_points.n,
            "precision": digits, "seed": args.seed,
            "algorithm": _ALGORITHM_IDS[args.algo], "energy": text,
            "input_path": args.input, "output_path": args.output}


def _write_report(path, history, digits: int) -> None:
    """Energy history as step,energy CSV plus a convergence figure with
    the same stem."""
    path = Path(path)
    final = history[-1][1]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "energy"])
        for step, e in history:
            writer.writerow([step, e.to_decimal(max(digits - 5, MIN_DIGITS))])

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    above = [(step, (e - final).to_float()) for step, e in history]
    above = [(step, v) for step, v in above if v > 0]
    if above:
        ax.semilogy([s for s, _ in above], [v for _, v in above], marker=".")
        ax.set_ylabel("energy above final")
    else:
        ax.plot([step for step, _ in history],
                [e.to_float() for _, e in history], marker=".")
        ax.set_ylabel("energy")
    ax.set_xlabel("step")
    fig.tight_layout()
    fig.savefig(path.with_suffix(".png"), dpi=120)
    plt.close(fig)


def _aligned_params(spec, names, loose: ParamVector) -> ParamVector:
    table = dict(zip(loose.names, loose.values))
    missing = [m for m in names if m not in table]
    unused = [u for u in loose.names if u not in names]
    if missing or unused:
        raise SizeMismatch("params file does not match the spec"
                           + (f"; missing {missing}" if missing else "")
                           + (f"; unused {unused}" if unused else ""))
    return ParamVector(tuple(names), tuple(table[m] for m in names))


def _load_structure(args, pot: Potential):
    """(spec, params, source path) from --n (registry) or --spec/--params."""
    if args.n is not None and args.spec:
        raise _UsageError("choose --n or --spec, not both")
    if args.n is not None:
        digits = args.precision or DEFAULT_PRECISION
        spec, params = builtin_spec(args.n, pot, digits)
        return spec, params, None
    if args.spec:
        spec, names = fileio.read_spec(args.spec)
        if args.params:
            params = _aligned_params(spec, names, fileio.read_params(args.params))
        elif spec.arity:
            raise _UsageError(f"the spec has {spec.arity} free parameters; "
                              "--params is required")
        else:
            params = ParamVector((), ())
        return spec, params, args.spec
    raise _UsageError("needs --n or --spec")


def _cmd_build(args) -> dict:
    pot = _potential(args)
    spec, params, source = _load_structure(args, pot)
    digits = args.precision or (params.precision if params.arity
                                else DEFAULT_PRECISION)
    P = build_points(spec, params, digits=digits)
    token = args.potential.token if args.potential else None
    if args.output:
        fileio.write_points(args.output, P, digits, token)
    else:
        sys.stdout.write(fileio.points_text(P, digits, token))
    return {"potential": token, "n": P.n, "precision": digits,
            "input_path": source, "output_path": args.output}


def _cmd_refine(args) -> dict:
    pot = _potential(args)
    spec, params, source = _load_structure(args, pot)
    target = args.precision or DEFAULT_PRECISION
    refined = newton_refine(spec, params, pot, target)
    P = build_points(spec, refined, digits=target)
    text = _energy_text(energy(P, pot).value, target)
    lines = [f"{name} {value.to_decimal(target)}"
             for name, value in zip(refined.names, refined.values)]
    lines.append(f"energy {text}")
    _emit(lines)
    if args.params_out:
        fileio.write_params(args.params_out, refined)
    if args.output:
        fileio.write_points(args.output, P, target, pot)
    return {"potential": pot.token, "n": P.n, "precision": target,
            "energy": text, "input_path": source,
            "output_path": args.output or args.params_out}


def _cmd_hessian(args) -> dict:
    pot = _potential(args)
    P = _read_input(args)
    zero_tol = BigReal(args.tol, P.precision) if args.tol else None
    report = verify_minimum(P, pot, zero_tol=zero_tol)
    _emit([f"n {P.n}",
           f"eigenvalue_min {report.eigenvalues[0].to_decimal(3)}",
           f"eigenvalue_max {report.eigenvalues[-1].to_decimal(3)}",
           f"zero_count {report.zero_count}",
           f"verdict {report.verdict}"], args.output)
    return {"potential": pot.token, "n": P.n, "precision": P.precision,
            "input_path": args.input}


def _cmd_symmetry(args) -> dict:
    P = _read_input(args)
    report = symmetry_report(P, tol=float(args.tol) if args.tol else None)
    _emit([f"planes {[list(g) for g in report.planes]}",
           f"polygons {[list(g) for g in report.polygons]}",
           f"gram {report.gram_groups.as_lists()}"], args.output)
    return {"n": P.n, "precision": P.precision, "input_path": args.input}


def _cmd_gram(args) -> dict:
    P = _read_input(args)
    tol = (BigReal(args.tol, P.precision) if args.tol
           else default_signature_tol(P.precision))
    signature = gram_signature(gram_matrix(P), tol)
    _emit([f"gram {signature.as_lists()}"], args.output)
    return {"n": P.n, "precision": P.precision, "input_path": args.input}


def _value_literal(text: str):
    """The decimal literal named by --value: the text itself, or the
    single value held by the file it points at."""
    path = Path(text)
    if not path.is_file():
        return text, None
    rows = [(no, line) for no, line in fileio._read_lines(path)
            if not line.startswith("#")]
    if len(rows) != 1:
        raise ParseError(f"value file {text} must hold a single value")
    no, line = rows[0]
    tokens = line.split()
    if len(tokens) == 1:
        return tokens[0], str(path)
    if len(tokens) == 2:
        return tokens[1], str(path)
    raise ParseError("expected 'value' or 'name value'", line=no)


def _cmd_algdep(args) -> dict:
    literal, source = _value_literal(args.value)
    digits = args.precision or max(MIN_DIGITS, _significant_digits(literal))
    x = BigReal(literal, digits)
    result = minimal_polynomial(x, args.max_degree, even_only=args.even)
    _emit(["poly " + " ".join(str(c) for c in result.poly.coeffs),
           f"degree {result.degree}",
           f"height {result.height}",
           f"residual {result.residual.to_decimal(3)}",
           f"accepted {'true' if result.accepted else 'false'}"], args.output)
    return {"precision": digits, "input_path": source}


_HANDLERS = {
    "energy": _cmd_energy,
    "minimize": _cmd_minimize,
    "build": _cmd_build,
    "refine": _cmd_refine,
    "hessian": _cmd_hessian,
    "symmetry": _cmd_symmetry,
    "gram": _cmd_gram,
    "algdep": _cmd_algdep,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    start = time.monotonic()
    try:
        fields = _HANDLERS[args.command](args)
        if args.manifest:
            manifest = fileio.RunManifest(
                command=args.command,
                wall_seconds=time.monotonic() - start,
                **{k: v for k, v in fields.items() if v is not None})
            fileio.write_manifest(args.manifest, manifest)
    except _UsageError as exc:
        parser.error(str(exc))
    except (SphereCodesError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
