"""Command line front end.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage error,
3 malformed input, 4 ambiguous numerical rank.
"""

import argparse
import json
import os
import sys
from contextlib import contextmanager
from dataclasses import asdict, dataclass

import numpy as np

from . import acceptance
from . import deformation as dfm
from . import geometry as geo
from . import moduli_maps as mm
from .datum import (
    TOLERANCES,
    ADHMDatum,
    DimVector,
    EnhancedDatum,
    StabilityParameter,
    adhm_from_dict,
    adhm_to_dict,
    datum_from_dict,
    datum_to_dict,
    dumps,
    generate_stable,
    residual_scale,
    residuals,
)
from .errors import AdhmError, DimensionError
from .stability import is_stable

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT, EXIT_AMBIGUOUS = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    rank_rtol: float
    residual_tau: float
    flow_tol: float
    seed: int
    fmt: str
    inp: str = None
    out: str = None

    def __post_init__(self):
        for name in ("rank_rtol", "residual_tau", "flow_tol"):
            if not getattr(self, name) > 0:
                raise InputError(f"{name} must be strictly positive")

    def tolerances(self):
        return {"rank_rtol": self.rank_rtol, "residual_tau": self.residual_tau, "flow_tol": self.flow_tol}


@contextmanager
def _tolerances(cfg):
    saved = asdict(TOLERANCES)
    TOLERANCES.update(**cfg.tolerances())
    try:
        yield
    finally:
        TOLERANCES.update(**saved)


def _default_seed():
    raw = os.environ.get("ADHM_LAB_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        return 0


# ---------------------------------------------------------------------------
# I/O


def _read_text(path):
    if path is None:
        raise InputError("--in is required")
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _parse_json(text, source):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: {exc.msg} at line {exc.lineno} column {exc.colno}") from None


def _load_enhanced(cfg):
    obj = _parse_json(_read_text(cfg.inp), cfg.inp)
    try:
        return datum_from_dict(obj)
    except (DimensionError, TypeError, ValueError) as exc:
        raise InputError(f"{cfg.inp}: {exc}") from None


def _load_adhm(cfg):
    obj = _parse_json(_read_text(cfg.inp), cfg.inp)
    try:
        if "cprime" in obj.get("dims", {}):
            return datum_from_dict(obj).adhm_part()
        return adhm_from_dict(obj)
    except (DimensionError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"{cfg.inp}: {exc}") from None


def _emit(cfg, payload, text=None):
    body = dumps(payload) + "\n" if cfg.fmt == "json" or text is None else text
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _envelope(cfg, command, **fields):
    return {"command": command, "seed": cfg.seed, "tolerances": cfg.tolerances(), **fields}


def _with_meta(obj, cfg, **extra):
    # extra key is ignored by the datum loader
    obj["meta"] = {"seed": cfg.seed, "tolerances": cfg.tolerances(), **extra}
    return obj


def _complex_pair(text):
    parts = [float(p) for p in text.split(",")]
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) == 2:
        return complex(parts[0], parts[1])
    raise argparse.ArgumentTypeError(f"expected 're' or 're,im', got {text!r}")


def _dims(text):
    try:
        return DimVector.parse(text)
    except (AdhmError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args, cfg):
    X = generate_stable(args.dims, cfg.seed, style=args.style)
    _emit(cfg, _with_meta(datum_to_dict(X), cfg, style=args.style))
    return EXIT_OK


def cmd_verify(args, cfg):
    X = _load_enhanced(cfg)
    res = residuals(X)
    bound = residual_scale(X)
    report = is_stable(X)
    valid = all(v <= bound for v in res.values())
    payload = _envelope(
        cfg,
        "verify",
        residuals=res,
        residual_bound=bound,
        valid=valid,
        stability=report.to_dict(),
    )
    _emit(cfg, payload)
    return EXIT_OK if valid and report.verdict == "stable" else EXIT_FAIL


def cmd_cohomology(args, cfg):
    X = _load_enhanced(cfg)
    variant = "reduced" if args.variant in ("reduced", "reduced-cprime1") else args.variant
    co = dfm.cohomology_dims(dfm.build_complex(X, variant))
    _emit(cfg, _envelope(cfg, "cohomology", variant=variant, gap_min=1e3, **co.to_dict()))
    return EXIT_AMBIGUOUS if co.flagged else EXIT_OK


def cmd_quotient(args, cfg):
    X2 = mm.quotient_rep(_load_enhanced(cfg))
    payload = _envelope(
        cfg,
        "quotient",
        datum=adhm_to_dict(X2),
        residual=X2.residual(),
        residual_bound=TOLERANCES.residual_tau * (1 + X2.norm() ** 2),
    )
    _emit(cfg, payload)
    return EXIT_OK if X2.is_valid() else EXIT_FAIL


def cmd_lift(args, cfg):
    X2 = _load_adhm(cfg)
    if args.aprime is not None or args.bprime is not None:
        Ap = np.array([[args.aprime or 0.0]], dtype=complex)
        Bp = np.array([[args.bprime or 0.0]], dtype=complex)
    else:
        Ap, Bp, _ = mm.vandermonde_frame(args.cprime, seed=cfg.seed)
    X = mm.fiber_lift(X2, Ap, Bp, seed=cfg.seed)
    _emit(cfg, _with_meta(datum_to_dict(X), cfg))
    return EXIT_OK


def cmd_support(args, cfg):
    X = _load_enhanced(cfg)
    supp = mm.quotient_support(X)
    fields = {"support": supp.to_dict(), "length": supp.length}
    if args.oracle:
        oracle = mm.pencil_scan_support(X.Aprime, X.Bprime)
        fields["oracle"] = oracle.to_dict()
        fields["oracle_agrees"] = oracle.matches(supp, 1e-6) if supp.length == len(supp.points) else None
    _emit(cfg, _envelope(cfg, "support", **fields))
    return EXIT_OK


def cmd_hilb(args, cfg):
    if args.inverse:
        X = _load_enhanced(cfg)
        Z1, Z2 = mm.nested_hilbert_points(X)
        _emit(cfg, _envelope(cfg, "hilb", Z1=Z1.sorted().to_dict(), Z2=Z2.sorted().to_dict()))
        return EXIT_OK
    obj = _parse_json(_read_text(cfg.inp), cfg.inp)
    try:
        Z1 = mm.PointConfiguration.from_dict(obj["Z1"])
        Z2 = mm.PointConfiguration.from_dict(obj["Z2"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"{cfg.inp}: expected keys 'Z1' and 'Z2' ({exc})") from None
    _emit(cfg, _with_meta(datum_to_dict(mm.nested_hilbert_datum(Z1, Z2)), cfg))
    return EXIT_OK


def cmd_flow(args, cfg):
    X = _load_enhanced(cfg)
    theta = StabilityParameter.default_chamber(X.dims) if args.level == "chamber" else None
    res = geo.balance_flow(X, max_iters=args.max_iters, tol=cfg.flow_tol, theta=theta)
    payload = _envelope(cfg, "flow", level=args.level, max_iters=args.max_iters, **res.to_dict())
    if args.datum_out:
        with open(args.datum_out, "w", encoding="utf-8") as fh:
            fh.write(dumps(datum_to_dict(res.datum)) + "\n")
    _emit(cfg, payload)
    return EXIT_OK if res.converged else EXIT_FAIL


def cmd_omega(args, cfg):
    X = _load_enhanced(cfg)
    om = geo.omega_on_h1(X, pairs=args.pairs, seed=cfg.seed)
    _emit(cfg, _envelope(cfg, "omega", gap_min=1e3, welldef_tol=1e-8, **om.to_dict()))
    if not om.welldef_ok:
        return EXIT_FAIL
    return EXIT_AMBIGUOUS if om.flagged else EXIT_OK


def cmd_scan(args, cfg):
    strata = tuple(args.stratum) if args.stratum else ("diagonal", "jordan", "jordan-b")
    rows, flagged = geo.degeneracy_scan(args.dims, args.samples, seed=cfg.seed, strata=strata)
    text = geo.scan_csv(rows)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    if cfg.fmt == "csv":
        _emit(cfg, None, text)
    else:
        payload = _envelope(
            cfg,
            "scan",
            dims=list(args.dims.as_tuple()),
            samples=args.samples,
            rows=[{"stratum": s, "rank": r, "count": n} for s, r, n in rows],
            flagged=flagged,
        )
        _emit(cfg, payload)
    return EXIT_AMBIGUOUS if any(flagged.values()) else EXIT_OK


def cmd_accept(args, cfg):
    results = acceptance.run_suite(seed=cfg.seed, count=args.samples)
    if not args.no_determinism:
        sys.stdout.flush()
        results.append(acceptance.criterion_9(seed=cfg.seed, count=args.samples))
    if cfg.fmt == "json":
        rows = [{"key": c.key, "title": c.title, "passed": c.passed, "detail": c.detail,
                 "supplementary": c.supplementary} for c in results]
        _emit(cfg, _envelope(cfg, "accept", samples=args.samples, criteria=rows,
                             all_passed=acceptance.all_passed(results)))
    else:
        _emit(cfg, None, f"seed {cfg.seed}\n" + acceptance.report(results))
    return EXIT_OK if acceptance.all_passed(results) else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $ADHM_LAB_SEED or 0)")
    common.add_argument("--rtol", type=float, default=1e-9, help="relative SVD rank cut")
    common.add_argument("--tau", type=float, default=1e-10, help="residual tolerance scale")
    common.add_argument("--flow-tol", dest="flow_tol", type=float, default=1e-8)
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="json")
    common.add_argument("--in", dest="inp", default=None, help="input file, '-' for stdin")
    common.add_argument("--out", default=None, help="output file (default stdout)")

    p = argparse.ArgumentParser(prog="adhm-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("gen", parents=[common], help="generate a stable datum")
    s.add_argument("--dims", type=_dims, required=True)
    s.add_argument("--style", choices=("diagonal", "jordan", "jordan-b", "lifted"), default="lifted")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("verify", parents=[common], help="residuals and stability report")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("cohomology", parents=[common], help="deformation complex cohomology")
    s.add_argument("--variant", choices=("general", "reduced", "reduced-cprime1"), default="reduced")
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("quotient", parents=[common], help="induced datum on V / Im F")
    s.set_defaults(func=cmd_quotient)

    s = sub.add_parser("lift", parents=[common], help="lift a plain datum through the fiber system")
    s.add_argument("--aprime", type=_complex_pair, default=None, help="scalar A' as 're,im'")
    s.add_argument("--bprime", type=_complex_pair, default=None, help="scalar B' as 're,im'")
    s.add_argument("--cprime", type=int, default=1, help="rank of V' when A', B' are sampled")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("support", parents=[common], help="support of the quotient sheaf")
    s.add_argument("--oracle", action="store_true", help="also run the pencil rank scan")
    s.set_defaults(func=cmd_support)

    s = sub.add_parser("hilb", parents=[common], help="nested Hilbert scheme dictionary")
    s.add_argument("--inverse", action="store_true", help="datum -> (Z1, Z2)")
    s.set_defaults(func=cmd_hilb)

    s = sub.add_parser("flow", parents=[common], help="balancing flow for the real moment map")
    s.add_argument("--tol", dest="flow_tol", type=float, default=1e-8)
    s.add_argument("--max-iters", dest="max_iters", type=int, default=100_000)
    s.add_argument("--level", choices=("zero", "chamber"), default="zero")
    s.add_argument("--datum-out", dest="datum_out", default=None)
    s.set_defaults(func=cmd_flow)

    s = sub.add_parser("omega", parents=[common], help="two-form on H^1")
    s.add_argument("--pairs", type=int, default=100)
    s.set_defaults(func=cmd_omega)

    s = sub.add_parser("scan", parents=[common], help="Omega rank histogram per stratum")
    s.add_argument("--dims", type=_dims, required=True)
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--stratum", action="append", choices=geo.SCAN_STRATA)
    s.add_argument("--csv", default=None)
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("accept", parents=[common], help="run the acceptance suite")
    s.add_argument("--samples", type=int, default=50)
    s.add_argument("--no-determinism", action="store_true", help="skip the repeated-run comparison")
    s.set_defaults(func=cmd_accept, fmt="text")
    return p


def dispatch(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        cfg = RunConfig(args.rtol, args.tau, args.flow_tol, seed, args.fmt, args.inp, args.out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        with _tolerances(cfg):
            return args.func(args, cfg)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AdhmError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main():
    sys.exit(dispatch())


__all__ = ["dispatch", "main", "build_parser", "RunConfig", "ADHMDatum", "EnhancedDatum"]
