"""Command-line entry point: ``hypercube <command> ...``.

Exit status: 0 when every assertion holds, 1 when one fails (its witness is
printed), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import entropy, fourier, influence, noise, social, sweep, zoo
from .cube import BooleanFunction, FormatError, parse_bfn
from .fourier import parse_spec, transform
from .report import DEFAULT_TOL, Report


class InputError(Exception):
    pass


def load_function(path: str):
    """Read a .bfn (BooleanFunction) or .spec (Spectrum) file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    try:
        if path.endswith(".spec"):
            return parse_spec(text)
        if path.endswith(".bfn"):
            return parse_bfn(text)
        lines = text.splitlines()
        if len(lines) == 2:
            return parse_bfn(text)
        return parse_spec(text)
    except FormatError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_boolean(path: str) -> BooleanFunction:
    f = load_function(path)
    if isinstance(f, BooleanFunction):
        return f
    try:
        return fourier.boolean_from_spectrum(f)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def emit(rep: Report, args) -> int:
    print(rep.to_json() if args.json else rep.to_text())
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# zoo

def build_zoo(name: str, params: list[int]):
    def need(k):
        if len(params) < k:
            raise InputError(f"zoo {name}: expected at least {k} integer parameters")

    if name in ("dictator", "dict"):
        need(2)
        return zoo.dictator(params[0], params[1])
    if name == "parity":
        need(1)
        return zoo.parity(params[0], params[1:])
    if name in ("maj", "majority"):
        need(1)
        return zoo.majority(params[0])
    if name == "or":
        need(1)
        return zoo.or_fn(params[0])
    if name == "and":
        need(1)
        return zoo.and_fn(params[0])
    if name == "tribes":
        need(2)
        return zoo.tribes(zoo.Partition.uniform(params[0], params[1]))
    if name == "bl":
        need(1)
        return zoo.bl_tribes(params[0])
    if name == "const":
        need(2)
        return BooleanFunction.constant(params[0], params[1])
    if name == "indicator":
        need(2)
        return transform(zoo.indicator(params[0], params[1]))
    raise InputError(f"unknown zoo function {name!r}")


def cmd_zoo(args) -> int:
    obj = build_zoo(args.name, args.params)
    rep = Report("zoo", {"name": args.name, "params": args.params})
    if isinstance(obj, BooleanFunction):
        s = transform(obj)
        rep.quantities["n"] = obj.n
        rep.quantities["table"] = obj.table_string()
        if args.output:
            Path(args.output).write_text(obj.to_bfn())
            spec_path = args.spec or str(Path(args.output).with_suffix(".spec"))
            Path(spec_path).write_text(s.to_spec())
            rep.quantities["files"] = [args.output, spec_path]
        elif not args.json:
            sys.stdout.write(obj.to_bfn())
            return 0
    else:
        rep.quantities["n"] = obj.n
        out = args.spec or args.output
        if out:
            Path(out).write_text(obj.to_spec())
            rep.quantities["files"] = [out]
        elif not args.json:
            sys.stdout.write(obj.to_spec())
            return 0
    return emit(rep, args)


# ---------------------------------------------------------------------------
# analysis

def cmd_analyze(args) -> int:
    f = load_function(args.file)
    s = transform(f) if isinstance(f, BooleanFunction) else f
    if args.output:
        Path(args.output).write_text(s.to_spec())
    if args.to_bfn:
        try:
            g = fourier.boolean_from_spectrum(s)
        except ValueError as exc:
            raise InputError(f"{args.file}: {exc}") from exc
        Path(args.to_bfn).write_text(g.to_bfn())
    rep = Report("analyze", {"file": args.file}, tol=args.tol)
    rep.quantities["n"] = s.n
    rep.quantities["boolean"] = isinstance(f, BooleanFunction)
    rep.quantities["mean"] = fourier.mean(s)
    rep.quantities["variance"] = fourier.variance(s)
    rep.quantities["degree"] = fourier.degree(s)
    rep.quantities["level_weights"] = fourier.level_weights(s)
    rep.quantities["influences"] = influence.influences_spectral(s)
    rep.quantities["total_influence"] = influence.total_influence(s)
    if isinstance(f, BooleanFunction):
        rep.quantities["monotone"] = bool(influence.find_monotone_violation(f) is None)
        rep.check("pivot=spectral influence",
                  float(abs(influence.influences_pivot(f) - influence.influences_spectral(s)).max()
                        if f.n else 0.0), 0.0, "==", witness=f)
        rep.check("parseval", float((s.coeffs ** 2).sum()), 1.0, "==", witness=f)
    if not args.json and args.output is None and args.to_bfn is None and not args.quiet:
        sys.stdout.write(s.to_spec())
        return 0 if rep.passed else 1
    return emit(rep, args)


def cmd_entropy(args) -> int:
    f = load_function(args.file)
    try:
        rep = entropy.entropy_report(f, tol=args.tol)
    except entropy.NormError as exc:
        raise InputError(str(exc)) from exc
    rep.inputs["file"] = args.file
    return emit(rep, args)


def _hyper_params(args) -> noise.NoiseParams:
    if args.preset:
        return noise.PRESETS[args.preset]
    if args.rho is None or args.p is None or args.q is None:
        return noise.PRESETS["4,2"]
    q = math.inf if str(args.q).lower() in ("inf", "infinity") else float(args.q)
    try:
        return noise.NoiseParams(float(args.rho), float(args.p), q)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_verify(args) -> int:
    check = args.check
    if args.all_n is not None:
        params = {}
        if check == "hyper":
            params["preset"] = _hyper_params(args)
        if check == "trunc":
            params["d"] = args.d
        try:
            rep = sweep.exhaustive_sweep(check, args.all_n, threads=args.threads, tol=args.tol,
                                         **params)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        return emit(rep, args)
    if args.file is None:
        raise InputError("verify needs a function file or --all-n")
    f = load_function(args.file)
    if check == "bonami":
        rep = noise.bonami_check(f, tol=args.tol)
    elif check == "norm1":
        rep = noise.one_norm_trick_check(f, tol=args.tol)
    elif check == "hyper":
        rep = noise.hypercontractivity_check(f, _hyper_params(args), tol=args.tol)
    elif check == "trunc":
        d = args.d if args.d is not None else f.n
        try:
            rep = noise.truncation_lemma_check(f, d, tol=args.tol)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    elif check == "poincare":
        rep = influence.poincare_check(f, tol=args.tol)
    else:
        g = load_boolean(args.file)
        rep = {"owz": entropy.owz_level_bound_check, "edge": entropy.edge_isoperimetric_check,
               "shannon": entropy.shannon_code_bound_check}[check](g, tol=args.tol)
    rep.inputs["file"] = args.file
    return emit(rep, args)


def cmd_survey(args) -> int:
    try:
        board = entropy.efi_survey(args.n, args.mode, count=args.count, seed=args.seed,
                                   top_k=args.top, threads=args.threads,
                                   allow_large=args.allow_large)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.output:
        Path(args.output).write_text(board.to_jsonl())
    rep = Report("survey", {"n": args.n, "mode": args.mode, "count": board.count,
                            "top": args.top}, tol=args.tol)
    rep.config["seed"] = args.seed
    rep.config["log_base"] = entropy.LOG_BASE
    rep.quantities["max_efi_ratio"] = board.max_efi
    rep.quantities["max_mefi_ratio"] = board.max_mefi
    rep.quantities["efi_leaderboard"] = [json.loads(e.to_json()) for e in board.efi]
    rep.quantities["mefi_leaderboard"] = [json.loads(e.to_json()) for e in board.mefi]
    if not args.json and not args.output:
        sys.stdout.write(board.to_jsonl())
        return 0
    return emit(rep, args)


def cmd_coalition(args) -> int:
    f = load_boolean(args.file)
    try:
        trace = social.greedy_coalition(f, target=args.target, direction=args.direction)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep = trace.to_report()
    rep.inputs["file"] = args.file
    return emit(rep, args)


def cmd_fkn(args) -> int:
    f = load_boolean(args.file)
    res = social.fkn_check(f, tol=args.tol)
    kind, i = social.affine_classify(f)
    res.report.quantities["affine_class"] = kind if i is None else f"{kind}({i})"
    res.report.inputs["file"] = args.file
    return emit(res.report, args)


def cmd_kkl(args) -> int:
    f = load_boolean(args.file)
    try:
        rep = social.kkl_intermediate_check(f, tol=args.tol)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep.inputs["file"] = args.file
    return emit(rep, args)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON report on stdout")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="relative tolerance, scaled by max(1, |rhs|)")

    parser = argparse.ArgumentParser(prog="hypercube",
                                     description="Fourier analysis of Boolean functions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zoo", parents=[common], help="build a canonical function")
    p.add_argument("name", help="dictator|parity|maj|or|and|tribes|bl|const|indicator")
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("-o", "--output", help=".bfn path (.spec written alongside)")
    p.add_argument("--spec", help="explicit .spec output path")
    p.set_defaults(func=cmd_zoo)

    p = sub.add_parser("analyze", parents=[common], help="spectrum and basic quantities")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write the spectrum as .spec")
    p.add_argument("--to-bfn", dest="to_bfn",
                   help="rebuild the Boolean table from the spectrum and write it as .bfn")
    p.add_argument("-q", "--quiet", action="store_true", help="print the report, not the spectrum")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("entropy", parents=[common], help="Fourier entropy report")
    p.add_argument("file")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("verify", parents=[common], help="check an inequality")
    p.add_argument("check", choices=["bonami", "hyper", "norm1", "trunc", "poincare",
                                     "owz", "edge", "shannon"])
    p.add_argument("file", nargs="?")
    p.add_argument("--all-n", type=int, dest="all_n",
                   help="run on every Boolean function of arity 1..N")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--preset", choices=sorted(noise.PRESETS))
    p.add_argument("--rho", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--q")
    p.add_argument("--d", type=int, help="truncation level")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("survey", parents=[common], help="EFI/MEFI leaderboard")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "random", "family"], default="exhaustive")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("-o", "--output", help="leaderboard as JSON lines")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("coalition", parents=[common], help="greedy Ben-Or-Linial coalition")
    p.add_argument("file")
    p.add_argument("--target", type=float, default=social.DEFAULT_TARGET)
    p.add_argument("--direction", type=int, choices=[1, -1], default=1)
    p.set_defaults(func=cmd_coalition)

    p = sub.add_parser("fkn", parents=[common], help="distance to the nearest dictator")
    p.add_argument("file")
    p.set_defaults(func=cmd_fkn)

    p = sub.add_parser("kkl", parents=[common], help="KKL influence bound")
    p.add_argument("file")
    p.set_defaults(func=cmd_kkl)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InputError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
