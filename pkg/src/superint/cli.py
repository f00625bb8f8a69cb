"""Command-line front end: ``superint {models,verify,integrate,reduce-check,orbit}``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import catalog, dynamics, reduction, verifier
from .dynamics import _atomic_write
from .errors import DimensionError, DomainError, ParameterError, SamplingError, StepSizeError
from .fields import PhasePoint

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _param(raw: str) -> tuple[str, str]:
    key, sep, value = raw.partition("=")
    if not sep or not key.strip() or not value.strip():
        raise argparse.ArgumentTypeError(f"expected key=value, got {raw!r}")
    return key.strip(), value.strip()


def _positive_int(raw: str) -> int:
    try:
        v = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {raw!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {raw!r}")
    return v


def _seed(raw: str) -> int:
    try:
        v = int(raw, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {raw!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive_float(raw: str) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {raw!r}") from None
    if not v > 0 or not np.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a positive finite number, got {raw!r}")
    return v


def _model_arg(p):
    p.add_argument("model", choices=catalog.MODEL_NAMES)
    p.add_argument("--param", action="append", type=_param, default=[], metavar="KEY=VALUE",
                   help="override a model parameter (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="superint", description="Verify and simulate superintegrable Hamiltonian systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    models = sub.add_parser("models", help="inspect the model catalog")
    msub = models.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ml = msub.add_parser("list", help="list catalog models")
    ml.add_argument("--json", action="store_true", help="machine-readable output")

    v = sub.add_parser("verify", help="commutation, rank and involution campaign")
    _model_arg(v)
    v.add_argument("--samples", type=_positive_int, default=1000)
    v.add_argument("--tol", type=_positive_float, default=verifier.DEFAULT_TOL)
    v.add_argument("--seed", type=_seed, default=0)
    v.add_argument("--jobs", type=_positive_int, default=1)
    v.add_argument("--out", help="write the JSON report here")

    it = sub.add_parser("integrate", help="integrate a trajectory and report conservation drift")
    _model_arg(it)
    it.add_argument("--q", type=float, nargs="+", required=True)
    it.add_argument("--p", type=float, nargs="+", required=True)
    it.add_argument("--t-end", type=_positive_float, required=True)
    it.add_argument("--method", choices=dynamics.METHODS, default="rk45")
    it.add_argument("--dt", type=_positive_float, default=1e-3, help="fixed step (verlet, euler)")
    it.add_argument("--rtol", type=_positive_float, default=1e-10, help="relative tolerance (rk45)")
    it.add_argument("--atol", type=_positive_float, default=1e-12, help="absolute tolerance (rk45)")
    it.add_argument("--stride", type=_positive_int, default=1, help="keep every n-th fixed step")
    it.add_argument("--out", help="write the trajectory CSV here")

    rc = sub.add_parser("reduce-check", help="pullback consistency of a full/reduced pair")
    rc.add_argument("pair", help="coulomb | oscillator (or full:reduced model names)")
    rc.add_argument("--param", action="append", type=_param, default=[], metavar="KEY=VALUE",
                    help="override a reduced-model parameter (repeatable)")
    rc.add_argument("--samples", type=_positive_int, default=200)
    rc.add_argument("--seed", type=_seed, default=0)
    rc.add_argument("--out", help="write the JSON results here")

    ob = sub.add_parser("orbit", help="search for the first recurrence of an orbit")
    _model_arg(ob)
    ob.add_argument("--q", type=float, nargs="+", required=True)
    ob.add_argument("--p", type=float, nargs="+", required=True)
    ob.add_argument("--t-max", type=_positive_float, required=True)
    ob.add_argument("--match-tol", type=_positive_float, default=1e-6)
    ob.add_argument("--rtol", type=_positive_float, default=1e-11)
    return parser


def _model(name: str, pairs) -> catalog.Model:
    params = {}
    for key, raw in pairs:
        if key in params:
            raise ParameterError(f"parameter {key} given twice")
        params[key] = catalog.parse_param(name, key, raw)
    return catalog.get_model(name, **params)


def _write_text(path: str, text: str) -> None:
    _atomic_write(path, lambda fh: fh.write(text))


def _cmd_models(args) -> int:
    if args.json:
        print(json.dumps([catalog.get_model(n).descriptor() for n in catalog.MODEL_NAMES], indent=2))
        return EXIT_OK
    for name in catalog.MODEL_NAMES:
        m = catalog.get_model(name)
        params = " ".join(f"{k}={v}" for k, v in catalog.default_params(name).items())
        print(f"{name:<12} N={m.N}  integrals={len(m.integrals):<3} rank={m.expected_rank:<3} {params}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    model = _model(args.model, args.param)
    spec = verifier.SampleSpec(count=args.samples, seed=args.seed)
    report = verifier.verify(model, spec, args.tol, jobs=args.jobs)
    print(report.summary())
    if args.out:
        _write_text(args.out, report.to_json() + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def _state(model, q, p) -> PhasePoint:
    if len(q) != model.N or len(p) != model.N:
        raise ParameterError(f"{model.name} needs --q and --p with {model.N} values each")
    return PhasePoint(q, p)


def _cmd_integrate(args) -> int:
    model = _model(args.model, args.param)
    state = _state(model, args.q, args.p)
    if args.method == "rk45":
        traj = dynamics.integrate_adaptive(model, state, args.t_end, args.rtol, args.atol)
    elif args.method == "verlet":
        traj = dynamics.integrate_verlet(model, state, args.t_end, args.dt, args.stride)
    else:
        traj = dynamics.integrate_euler(model, state, args.t_end, args.dt, args.stride)
    if args.out:
        traj.write_csv(args.out, model.hamiltonian)
    fields = [model.hamiltonian] + [i.field for i in model.integrals]
    drift = dynamics.conservation_drift(traj, fields)
    print(f"{model.name} {args.method}: {len(traj)} states, t = {traj.times[-1]:.6g}")
    for name, d in drift.items():
        print(f"  drift {name:>8}  {d:.3e}")
    return EXIT_OK


def _cmd_reduce_check(args) -> int:
    pair = reduction.resolve_pair(args.pair)
    red_name = reduction.PAIRS[pair][1]
    params = {}
    for key, raw in args.param:
        params[key] = catalog.parse_param(red_name, key, raw)
    results = reduction.reduce_check(pair, args.samples, args.seed, **params)
    for r in results:
        flag = "ok  " if r.passed else "FAIL"
        print(f"  {flag} {r.label:>6}  residual {r.residual:.3e}  angle spread {r.angle_spread:.3e}  tol {r.tol:g}")
    ok = all(r.passed for r in results)
    print("PASS" if ok else "FAIL")
    if args.out:
        payload = {"pair": pair, "params": params, "seed": args.seed, "samples": args.samples,
                   "results": [r.as_dict() for r in results], "pass": ok}
        _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_orbit(args) -> int:
    model = _model(args.model, args.param)
    state = _state(model, args.q, args.p)
    rec = dynamics.find_recurrence(model, state, args.t_max, args.match_tol, rel_tol=args.rtol,
                                   abs_tol=1e-2 * args.rtol)
    if rec is None:
        print("none")
        return EXIT_FAIL
    print(f"{rec.time:.12g}")
    print(f"distance {rec.distance:.3e}", file=sys.stderr)
    return EXIT_OK


_COMMANDS = {
    "models": _cmd_models,
    "verify": _cmd_verify,
    "integrate": _cmd_integrate,
    "reduce-check": _cmd_reduce_check,
    "orbit": _cmd_orbit,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ParameterError, DimensionError) as exc:
        print(f"superint: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, StepSizeError, SamplingError, FloatingPointError, ZeroDivisionError) as exc:
        print(f"superint: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"superint: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"superint: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
