"""Command-line interface.

Exit status: 0 success (infeasible problems included), 2 usage or input
error, 3 enumeration cap exceeded, 4 internal invariant violation. Every
failure prints one ``error[<code>]: <message>`` line on stderr.
"""

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .exceptions import CapExceeded, CfxError, InvariantViolation

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_INVARIANT = 0, 2, 3, 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _emit(text, out=None):
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _max_dim(args):
    return getattr(args, "max_dim", None)


def cmd_eval(args):
    from .models.base import BinaryInstance
    from .models.io import load_model

    model = load_model(args.model)
    model.check_valid()
    x = BinaryInstance.from_string(args.instance)
    out = model.evaluate(x)
    _emit(f"class {out}" if model.is_classifier else f"value {Fraction(out)}", args.out)


def cmd_explain(args):
    from .explain.problem import load_spec
    from .explain.solvers import solve

    spec = load_spec(args.spec)
    sol = solve(spec, max_dim=_max_dim(args))
    _emit(json.dumps(sol.to_dict(), indent=1, sort_keys=True), args.out)


def _gadget(args):
    from .gadgets.build import build_gadget
    from .gadgets.cnf import load_dimacs

    cnf = load_dimacs(args.dimacs)
    return cnf, build_gadget(cnf, args.kind, args.bigm)


def cmd_gadget_build(args):
    from .gadgets.io import dumps_gadget

    _, g = _gadget(args)
    _emit(dumps_gadget(g, indent=1), args.out)


def cmd_gadget_verify(args):
    from .gadgets.check import verify_gadget

    cnf, g = _gadget(args)
    rep = verify_gadget(g, cnf, mode=args.mode, n=args.samples, seed=args.seed, cap=_max_dim(args))
    if args.out:
        _emit(json.dumps(rep, indent=1, sort_keys=True), args.out)
        print(rep["summary"])
    else:
        _emit(json.dumps(rep, indent=1, sort_keys=True))


def cmd_gadget_reduce(args):
    from .gadgets.check import reduce_sat
    from .gadgets.cnf import load_dimacs

    cnf = load_dimacs(args.dimacs)
    red = reduce_sat(cnf, args.kind, args.bigm, max_dim=_max_dim(args))
    lines = ["SAT" if red.satisfiable else "UNSAT"]
    if red.satisfiable:
        lines.append(f"assignment {red.assignment}")
    lines.append(f"objective {red.objective}")
    lines.append(f"M {red.M}")
    _emit("\n".join(lines), args.out)


def cmd_atlas_lookup(args):
    from .atlas import lookup

    e = lookup(args.family, args.problem, args.ensemble)
    _emit(json.dumps(e.to_dict(), indent=1, sort_keys=True, ensure_ascii=False), args.out)


def cmd_atlas_dump(args):
    from .atlas import dump

    entries = [e.to_dict() for e in dump()]
    _emit(json.dumps({"count": len(entries), "entries": entries}, indent=1, ensure_ascii=False), args.out)


def _pair(text):
    try:
        parts = [int(p) for p in text.split(":")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    if len(parts) == 1:
        parts *= 2
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    return tuple(parts)


def _float_pair(text):
    try:
        lo, hi = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return (lo, hi)


def cmd_bench(args):
    from .explain.enumerate import max_dim
    from .harness.experiments import ExperimentConfig, run_experiment

    kw = {"experiment": args.experiment, "seed": args.seed, "trials": args.trials, "max_dim": max_dim(args.max_dim)}
    for name in ("d_range", "v_range", "c_range", "clause_ratio"):
        value = getattr(args, name)
        if value is not None:
            kw[name] = value
    if args.kind:
        kw["kinds"] = (args.kind,)
    try:
        cfg = ExperimentConfig(**kw)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    report = run_experiment(cfg)
    if args.out:
        report.write(args.out, args.format)
        print(report.summary.get("line", "done"))
    else:
        sys.stdout.write(report.dumps(args.format))


def build_parser():
    p = _Parser(prog="cfxlab", description="Exact counterfactual and semi-factual explanations on binary inputs.")
    p.add_argument("--version", action="version", version=f"cfxlab {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, out=True, cap=True):
        if out:
            sp.add_argument("--out", help="write the result to this file instead of stdout")
        if cap:
            sp.add_argument("--max-dim", type=int, help="enumeration cap (overrides CFXLAB_MAX_DIM)")

    e = sub.add_parser("eval", help="evaluate a model on one instance")
    e.add_argument("--model", required=True)
    e.add_argument("instance", help="bit string such as 101")
    common(e, cap=False)
    e.set_defaults(func=cmd_eval)

    x = sub.add_parser("explain", help="solve an explanation problem spec")
    x.add_argument("--spec", required=True)
    common(x)
    x.set_defaults(func=cmd_explain)

    g = sub.add_parser("gadget", help="3-SAT gadgets")
    gsub = g.add_subparsers(dest="action", parser_class=_Parser)
    gsub.required = True
    for name, func in (("build", cmd_gadget_build), ("verify", cmd_gadget_verify), ("reduce", cmd_gadget_reduce)):
        sp = gsub.add_parser(name)
        sp.add_argument("--dimacs", required=True)
        sp.add_argument("--kind", choices=("relu", "atm", "knn"), default="relu")
        sp.add_argument("--bigm", type=Fraction, help="gap value M (default: smallest valid integer)")
        common(sp, cap=name != "build")
        if name == "verify":
            sp.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
            sp.add_argument("--samples", type=int, default=1000)
            sp.add_argument("--seed", type=int, default=0)
        sp.set_defaults(func=func)

    a = sub.add_parser("atlas", help="complexity atlas")
    asub = a.add_subparsers(dest="action", parser_class=_Parser)
    asub.required = True
    lk = asub.add_parser("lookup")
    lk.add_argument("family")
    lk.add_argument("problem")
    lk.add_argument("--ensemble", action="store_true")
    common(lk, cap=False)
    lk.set_defaults(func=cmd_atlas_lookup)
    dp = asub.add_parser("dump")
    common(dp, cap=False)
    dp.set_defaults(func=cmd_atlas_dump)

    b = sub.add_parser("bench", help="run a seeded experiment")
    b.add_argument("experiment")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--trials", type=int, default=100)
    b.add_argument("--d-range", type=_pair)
    b.add_argument("--v-range", type=_pair)
    b.add_argument("--c-range", type=_pair)
    b.add_argument("--clause-ratio", type=_float_pair)
    b.add_argument("--kind", choices=("relu", "atm", "knn"))
    b.add_argument("--format", choices=("json", "csv"), default="json")
    common(b)
    b.set_defaults(func=cmd_bench)
    return p


def _fail(code, message, status):
    message = " ".join(str(message).split())
    print(f"error[{code}]: {message}", file=sys.stderr)
    return status


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "max_dim", None) is not None and args.max_dim < 0:
            raise _UsageError("--max-dim must be nonnegative")
        args.func(args)
    except _UsageError as exc:
        return _fail("usage", exc, EXIT_USAGE)
    except CapExceeded as exc:
        return _fail(exc.code, exc, EXIT_CAP)
    except InvariantViolation as exc:
        return _fail(exc.code, exc, EXIT_INVARIANT)
    except CfxError as exc:
        return _fail(exc.code, exc, EXIT_USAGE)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        return _fail("io", f"{exc.strerror}: {exc.filename}", EXIT_USAGE)
    except (ValueError, IndexError) as exc:
        return _fail("input", exc, EXIT_USAGE)
    except AssertionError as exc:
        return _fail("invariant", exc or "assertion failed", EXIT_INVARIANT)
    except Exception as exc:  # noqa: BLE001 - last-resort single-line report
        return _fail("internal", f"{type(exc).__name__}: {exc}", EXIT_INVARIANT)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
