"""Command line entry point: ``verify``, ``bound`` and ``converge``."""

import argparse
import sys

from .bounds import STATEMENTS, bound
from .errors import CapabilityError, DomainError
from .harness.audit import SUITES, audit_identities
from .harness.config import load_config
from .harness.convergence import run_convergence, xi_grid
from .harness.corpus import corpus_by_name
from .harness.reports import report_csv, to_json, write_text
from .kernel import KernelParams
from .operators import OperatorParams


def _add_params(sub, *, xi_flag):
    sub.add_argument("--statement", required=True, choices=STATEMENTS)
    sub.add_argument("--p", type=float, default=2.0, help="Lp exponent (forced to 1 for thm2/prop2/thm4/prop4)")
    sub.add_argument("--n", type=int, default=2)
    sub.add_argument("--r", type=int, default=2)
    sub.add_argument("--alpha", type=int, default=1)
    sub.add_argument("--beta", type=float, required=True)
    if xi_flag:
        sub.add_argument("--xi", type=float, default=1.0)
        sub.add_argument("--omega", type=float, default=1.0,
                         help="modulus value multiplying the prefactor (default 1)")


def build_parser():
    parser = argparse.ArgumentParser(prog="poisson-cauchy", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    v = subs.add_parser("verify", help="audit the identities the operators rest on")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--config")
    v.add_argument("--out", help="write the JSON report here")

    b = subs.add_parser("bound", help="print one statement's constants and bound as JSON")
    _add_params(b, xi_flag=True)

    c = subs.add_parser("converge", help="sweep xi and write a CSV of errors and bounds")
    _add_params(c, xi_flag=False)
    c.add_argument("--function", required=True, help="corpus entry name")
    c.add_argument("--xi-start", type=float, default=0.4)
    c.add_argument("--xi-stop", type=float, default=0.05)
    c.add_argument("--xi-ratio", type=float, default=0.5)
    c.add_argument("--out", required=True, help="CSV output path")
    c.add_argument("--json", help="optional full JSON report path")
    c.add_argument("--raw-error", action="store_true", help="add the uncorrected ||M f - f||_p column")
    c.add_argument("--config")
    return parser


def _op(args, xi):
    p = 1.0 if args.statement in ("thm2", "prop2", "thm4", "prop4") else args.p
    return OperatorParams(args.r, args.n, KernelParams(args.alpha, args.beta, xi), p)


def cmd_verify(args):
    _, spec = load_config(args.config)
    report = audit_identities(spec, args.suite)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {check.name}: residual {check.residual:.3g} (tol {check.tolerance:g})")
    if args.out:
        write_text(args.out, to_json(report.to_dict()))
    return 0 if report.passed else 1


def cmd_bound(args):
    rep = bound(args.statement, _op(args, args.xi), args.omega)
    sys.stdout.write(to_json(rep.to_dict()))
    return 0 if rep.constraint_ok else 1


def cmd_converge(args):
    cfg, _ = load_config(args.config)
    entry = corpus_by_name(args.function)
    grid = xi_grid(args.xi_start, args.xi_stop, args.xi_ratio)
    report = run_convergence(args.statement, entry, _op(args, grid[0]), grid, cfg, raw_error=args.raw_error)
    write_text(args.out, report_csv(report, raw_error=args.raw_error))
    if args.json:
        payload = report.to_dict()
        payload["ratios_ok"] = report.ratios_ok(cfg.ratio_slack)
        write_text(args.json, to_json(payload))
    for xi, msg in report.failures:
        print(f"warning: xi={xi:g}: {msg}", file=sys.stderr)
    return 0 if report.ratios_ok(cfg.ratio_slack) and not report.failures else 1


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"verify": cmd_verify, "bound": cmd_bound, "converge": cmd_converge}[args.command]
    try:
        return handler(args)
    except (DomainError, CapabilityError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
