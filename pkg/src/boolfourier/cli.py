"""Command-line entry point: analyze, verify, learn, zoo, report.

Exit codes: 0 all checks pass, 2 an inequality is violated (or learning missed
its target), 3 bad input, configuration or resource limits.
"""
import argparse
import json
import logging
import os
from pathlib import Path
import sys

import numpy as np

from . import zoo
from ._validation import coords_from_mask, set_max_n
from ._version import __version__
from .core import entropy_report, influence_profile, spectrum
from .exceptions import BoolFourierError, BudgetExceededError
from .reports import encode
from .suites import CACHE_ENV, SUITES, SuiteConfig, default_output, dumps, emit_report, run_suite

log = logging.getLogger("boolfourier")

EXIT_OK, EXIT_VIOLATION, EXIT_ERROR = 0, 2, 3


def _load_target(text):
    if os.path.exists(text):
        return zoo.load(text)
    return zoo.make(zoo.parse_family(text))


def _write(text, out):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(data):
    return json.dumps(encode(data), indent=2) + "\n"


def cmd_analyze(args):
    f = _load_target(args.target)
    prof = influence_profile(f)
    spec = spectrum(f)
    coeffs = spec.coeffs
    order = np.lexsort((np.arange(coeffs.size), -np.abs(coeffs)))[: args.top]
    out = {
        "n": f.n,
        "mean": f.mean(),
        "variance": f.variance(),
        "degree": spec.degree(),
        "influences": list(prof.per_coordinate),
        "total_influence": prof.total,
        "normalized_influence": prof.normalized,
        "entropy": entropy_report(f, args.degree).__dict__,
        "top_coefficients": [{"mask": int(S), "coords": coords_from_mask(int(S)),
                              "value": spec.coeff(int(S))} for S in order],
    }
    if prof.variance != 0:
        from .headline import entropy_bound_fit, min_entropy_witness
        out["witness"] = min_entropy_witness(f)[2].to_dict()
        fit = entropy_bound_fit(f, args.degree)
        out["entropy_fit"] = fit.to_dict()
    _write(_json(out), args.out)
    return EXIT_OK


def cmd_verify(args):
    if args.config:
        cfg = SuiteConfig.from_json(Path(args.config).read_text(), source=args.config)
        if args.threads:
            cfg.threads = args.threads
        if args.corrupt_rhs:
            cfg.corrupt_rhs = True
    else:
        if not args.suite:
            raise BoolFourierError("--suite or --config is required")
        cfg = SuiteConfig(suite=args.suite, families=args.family or [], max_n=args.n,
                          seed=args.seed, threads=args.threads or 1,
                          corrupt_rhs=args.corrupt_rhs, format=args.format or "json")
    out = args.out or cfg.output or default_output(cfg)
    report = run_suite(cfg)
    text = emit_report(report, args.format or cfg.format, out)
    if out is None:
        sys.stdout.write(text)
    agg = report.aggregate
    log.info("%s: %d rows, %d failed", cfg.suite, agg["rows"], agg["failed"])
    return report.exit_code


def cmd_learn(args):
    from .learning import NoisyOracle, TableOracle, agnostic_learn, build_sparse_approx, \
        hypothesis_error, km_search
    f = _load_target(args.target)
    oracle = TableOracle(f)
    if args.noise:
        oracle = NoisyOracle(oracle, args.noise, seed=args.seed)
    if args.theta is not None:
        masks = km_search(oracle, args.theta, budget=args.budget, seed=args.seed)
        masks = sorted(set(masks) | {0})
        h = build_sparse_approx(oracle, masks, seed=args.seed, tau=args.eps / 4)
        est = hypothesis_error(h, oracle, seed=args.seed)
        result = {"masks": masks, "coords": [coords_from_mask(m) for m in masks],
                  "coefficients": [h.coeffs[m] for m in masks], "error": est.value,
                  "error_sigma": est.sigma, "queries": oracle.queries, "theta": args.theta,
                  "seed": args.seed}
    else:
        res = agnostic_learn(oracle, args.K, args.eps, seed=args.seed, budget=args.budget)
        h = res.hypothesis
        result = res.to_dict()
    result["error_vs_target"] = hypothesis_error(h, f).value
    _write(_json(result), args.out)
    return EXIT_OK if result["error"] <= args.noise + args.eps else EXIT_VIOLATION


def cmd_zoo(args):
    if args.emit:
        f = zoo.make(zoo.parse_family(args.emit))
        if args.out:
            zoo.save(f, args.out)
        else:
            sys.stdout.write(zoo.dumps(f))
        return EXIT_OK
    lines = [f"families: {', '.join(zoo.FAMILIES)}", "standard zoo:"]
    lines += [f"  {s.label()}  (n={zoo.family_n(s)})" for s in zoo.standard_zoo(args.n or 24)]
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_report(args):
    try:
        data = json.loads(Path(args.input).read_text())
    except json.JSONDecodeError as exc:
        raise BoolFourierError(f"{args.input}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    _write(dumps(data, args.format), args.out)
    failed = data.get("aggregate", {}).get("failed", 0)
    return EXIT_OK if failed == 0 else EXIT_VIOLATION


def build_parser():
    p = argparse.ArgumentParser(prog="boolfourier", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--max-n", type=int, help="raise or lower the enumeration cap")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="spectrum, influences and entropy of one function")
    a.add_argument("target", help="zoo spec (e.g. tribes:w=2,s=2) or truth-table file")
    a.add_argument("--degree", type=int, default=None, help="entropy degree cap D")
    a.add_argument("--top", type=int, default=10)
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run an inequality suite")
    v.add_argument("--suite", choices=SUITES)
    v.add_argument("--config", help="JSON suite config")
    v.add_argument("--family", action="append", help="zoo spec or family name (repeatable)")
    v.add_argument("--n", type=int, default=None, help="largest n in the grid")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--threads", type=int, default=None)
    v.add_argument("--format", choices=("json", "csv", "markdown"), default=None)
    v.add_argument("--corrupt-rhs", action="store_true",
                   help="self-test: corrupt every right-hand side so rows fail")
    v.add_argument("--out", help=f"output file (default: ${CACHE_ENV}/<suite>-seed<s>.<ext>)")
    v.set_defaults(func=cmd_verify)

    le = sub.add_parser("learn", help="membership-query learning of a target")
    le.add_argument("--target", required=True)
    le.add_argument("--noise", type=float, default=0.0)
    le.add_argument("--theta", type=float, default=None)
    le.add_argument("--K", type=float, default=2.0)
    le.add_argument("--eps", type=float, default=0.1)
    le.add_argument("--budget", type=int, default=None)
    le.add_argument("--seed", type=int, default=0)
    le.add_argument("--out")
    le.set_defaults(func=cmd_learn)

    z = sub.add_parser("zoo", help="list families or emit a truth-table file")
    z.add_argument("--emit", metavar="SPEC")
    z.add_argument("--n", type=int, default=None)
    z.add_argument("--out")
    z.set_defaults(func=cmd_zoo)

    r = sub.add_parser("report", help="re-emit a JSON report as csv or markdown")
    r.add_argument("input")
    r.add_argument("--format", choices=("json", "csv", "markdown"), default="markdown")
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.max_n:
            set_max_n(args.max_n)
        return args.func(args)
    except BudgetExceededError as exc:
        log.error("%s", exc)
        return EXIT_ERROR
    except (BoolFourierError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
