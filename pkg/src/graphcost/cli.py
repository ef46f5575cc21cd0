"""graphcost command line.

Every command writes one CSV or JSON table to ``--out`` (stdout by
default). ``--plot`` also writes a PNG figure next to the output file.

Exit codes: 0 ok, 2 usage, 3 validation, 4 numeric or I/O failure.
Failures print one line to stderr: ``graphcost: error[<kind>]: <message>``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import report
from .analysis import (
    alt_route_headroom,
    default_ladder,
    disruption_impact,
    iso_price_contour,
    sensitivity_ladder,
    variant_comparison,
)
from .costing import plant_cost
from .finance import FinanceSpec, MarginError
from .flowsheet import ValidationError
from .montecarlo import SamplePlan, reference_prices, run_monte_carlo
from .scenarios import ScenarioSyntaxError, adjust_reported, load_projects, load_scenario, with_overrides

EXIT_USAGE, EXIT_VALIDATION, EXIT_NUMERIC = 2, 3, 4

log = logging.getLogger("graphcost")


def _number(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _assignment(text: str):
    key, sep, raw = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    lo, dots, hi = raw.partition("..")
    value = (_number(lo), _number(hi)) if dots else _number(raw)
    return key.strip(), value


def _price_list(text: str) -> list[float]:
    return [_number(p) for p in text.split(",") if p.strip()]


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--plot", action="store_true",
                        help="also write a PNG figure next to --out")

    scen = argparse.ArgumentParser(add_help=False)
    scen.add_argument("--scenario",
                      help="built-in name (US_SG, CN_SG, US_NG, CN_NG, US_SG_box, "
                           "US_SG_continuous) or scenario file path; default US_SG, "
                           "US_NG for headroom")
    scen.add_argument("--override", action="append", type=_assignment, default=[],
                      metavar="KEY=VALUE", help="pin a parameter, or KEY=LO..HI for a range")

    parser = argparse.ArgumentParser(prog="graphcost", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("cost", parents=[common, scen], help="baseline cost breakdown")

    p = sub.add_parser("montecarlo", parents=[common, scen], help="sampled cost distribution")
    p.add_argument("--n", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prices", type=_price_list,
                   help="comma list of market prices (default: the route's 2024 and 2022 prices)")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--samples", help="also write the per-sample table here")

    p = sub.add_parser("ladder", parents=[common, scen], help="cumulative sensitivity ladder")
    p.add_argument("--target", action="append", type=_assignment, default=[],
                   metavar="KEY=VALUE", help="ladder step (default: the route's standard ladder)")

    p = sub.add_parser("contour", parents=[common, scen], help="iso-price lines")
    p.add_argument("--prices", type=_price_list, default=[6500.0, 7500.0])
    p.add_argument("--ci-max", type=_number, default=30_000.0)

    sub.add_parser("variants", parents=[common, scen], help="Acheson, box and continuous furnaces")

    p = sub.add_parser("projects", parents=[common], help="harmonized reported project costs")
    p.add_argument("--irr", type=_number, default=0.15)
    p.add_argument("--years", type=_positive_int, default=10)

    p = sub.add_parser("disrupt", parents=[common], help="EV market response to a price shock")
    p.add_argument("--before", type=_number, default=7.0, help="$/kg")
    p.add_argument("--after", type=_number, default=35.0, help="$/kg")
    p.add_argument("--kg-per-ev", type=_number, default=100.0)

    p = sub.add_parser("headroom", parents=[common, scen],
                       help="cost ceiling for a process replacing some stages")
    p.add_argument("--target", type=_number, default=7000.0, help="market price, $/t")
    p.add_argument("--avoid", action="append", default=None, metavar="STAGE",
                   help="stage replaced by the new process (default: shaping)")
    p.add_argument("--plant-capital", action="store_true",
                   help="charge the plant-level capital to the kept cost")
    return parser


def _scenario(args):
    # parent-parser actions are shared, so per-command defaults live here
    default = "US_NG" if args.command == "headroom" else "US_SG"
    ps = load_scenario(args.scenario or default)
    if args.override:
        ps = with_overrides(ps, dict(args.override))
    return ps


def _plot_path(args) -> Optional[str]:
    if not args.plot:
        return None
    return str(Path(args.out).with_suffix(".png"))


def _run(args) -> None:
    form, plot = args.format, _plot_path(args)
    cmd = args.command

    if cmd == "projects":
        fin = FinanceSpec(args.irr, args.years)
        rows = [{"owner": p.owner, "report_year": p.report_year, "location": p.location,
                 "process_type": p.process_type, "capacity": p.capacity, "capex": p.capex,
                 "opex_per_tonne": p.opex_per_tonne, "total_cost": adjust_reported(p, fin),
                 "reported_total": p.reported_total} for p in load_projects()]
        report.write(report.emit_projects(rows, form), args.out)
        return
    if cmd == "disrupt":
        d = disruption_impact(args.before, args.after, args.kg_per_ev)
        report.write(report.emit_disruption(d, form), args.out)
        return

    ps = _scenario(args)
    if plot:
        from . import plotting  # matplotlib import is slow; skip it unless asked

    if cmd == "cost":
        b = plant_cost(ps.base)
        report.write(report.emit_breakdown(b, form), args.out)
        if plot:
            plotting.plot_breakdown(b, plot, ps.name)
    elif cmd == "montecarlo":
        prices = args.prices if args.prices is not None else reference_prices(ps)
        plan = SamplePlan(args.n, args.seed, ps.name)
        summary = run_monte_carlo(plan, ps, prices, workers=args.workers)
        report.write(report.emit_summary(summary, form), args.out)
        if args.samples:
            report.write(report.emit_samples(summary, form), args.samples)
        if plot:
            fin = ps.base.finance
            plotting.plot_cloud(summary, plot, [iso_price_contour(p, fin) for p in prices])
    elif cmd == "ladder":
        steps = sensitivity_ladder(ps, args.target or default_ladder(ps))
        report.write(report.emit_ladder(steps, form), args.out)
        if plot:
            plotting.plot_ladder(steps, plot)
    elif cmd == "contour":
        contours = [iso_price_contour(p, ps.base.finance) for p in args.prices]
        report.write(report.emit_contour(contours, args.ci_max, form), args.out)
        if plot:
            plotting.plot_contours(contours, args.ci_max, plot)
    elif cmd == "variants":
        breakdowns = variant_comparison(ps)
        report.write(report.emit_variants(breakdowns, form), args.out)
        if plot:
            plotting.plot_variants(breakdowns, plot)
    elif cmd == "headroom":
        avoided = args.avoid or ["shaping"]
        h = alt_route_headroom(plant_cost(ps.base), args.target, avoided, args.plant_capital)
        report.write(report.emit_headroom(args.target, avoided, h, form), args.out)


def _fail(kind: str, exc: BaseException, code: int) -> int:
    msg = str(exc.args[0]) if exc.args else type(exc).__name__
    if isinstance(exc, OSError) and exc.filename:
        msg = f"{exc.strerror}: {exc.filename}"
    print(f"graphcost: error[{kind}]: {' '.join(msg.split())}", file=sys.stderr)
    return code


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.plot and not args.out:
        parser.print_usage(sys.stderr)
        print("graphcost: error[usage]: --plot requires --out", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _run(args)
    except OSError as exc:
        return _fail("io", exc, EXIT_NUMERIC)
    except (MarginError, ArithmeticError) as exc:
        return _fail("numeric", exc, EXIT_NUMERIC)
    except (ValidationError, ScenarioSyntaxError, KeyError, ValueError) as exc:
        return _fail("validation", exc, EXIT_VALIDATION)
    return 0


def main() -> None:
    sys.exit(run_cli())
