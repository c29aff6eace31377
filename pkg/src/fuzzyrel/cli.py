"""Command-line interface: ``fuzzyrel analyze | cutsets | simulate``.

Exit codes: 0 success, 1 bad input, 2 internal invariant violation.
A model argument of the form ``builtin:NAME`` loads a model shipped with the
package (``builtin:robot``).
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .cutsets import minimal_cut_sets, minimal_path_sets
from .fuzzy import DEFAULT_ALPHA_LEVELS, DEFAULT_GRID_POINTS, SpreadSpec
from .lambdatau import MODES, NAIVE, reduce_crisp
from .mcsim import SimConfig, simulate_system
from .measures import (
    InvariantViolation,
    build_report,
    mission_time_for_reliability,
    point_measures,
)
from .model import ModelError, parse_model, to_petri_net
from .report import (
    RunManifest,
    check_roundtrip,
    csv_text,
    load_reference,
    membership_rows,
    reference_flags,
    reference_rows,
    render_table,
    report_rows,
    spread_label,
    trend_rows,
    write_text,
)


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def builtin_path(name: str) -> Path:
    return Path(str(resources.files("fuzzyrel") / "data" / f"{name}.json"))


def _resolve(path: str) -> Path:
    if path.startswith("builtin:"):
        p = builtin_path(path[len("builtin:"):])
        if not p.is_file():
            raise InputError(f"no builtin model named {path!r}")
        return p
    return Path(path)


def _load(path: str):
    p = _resolve(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read model {path}: {exc.strerror or exc}") from None
    try:
        return parse_model(data)
    except ModelError as exc:
        raise InputError(f"{path}: {exc}") from None


def _spread(text: str) -> float:
    try:
        return SpreadSpec(float(text)).fraction
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None


def cmd_analyze(args) -> int:
    m = _load(args.model)
    ref = None
    if args.reference:
        try:
            ref = load_reference(_resolve(args.reference))
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read reference {args.reference}: {exc}") from None
    rates = reduce_crisp(m)

    extra = {}
    if args.time is not None:
        t = args.time
    else:
        source = "model"
        lam = rates.lambda_s
        if ref is not None and "lambda_s" in ref.get("system", {}):
            lam, source = float(ref["system"]["lambda_s"]), "reference"
        try:
            t = mission_time_for_reliability(args.reliability_target, lam)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        extra["t_derivation"] = (
            f"solved exp(-lambda_s*t) = {args.reliability_target!r} with {source} lambda_s = {lam!r}"
        )
    if not t > 0:
        raise InputError(f"mission time must be positive, got {t!r}")
    if args.alpha_levels < 2:
        raise InputError("--alpha-levels must be at least 2")
    if args.grid_points < 2:
        raise InputError("--grid-points must be at least 2")
    if ref is not None:
        extra["reference"] = args.reference

    spreads = list(dict.fromkeys(args.spread or []))
    manifest = RunManifest(
        command="analyze",
        model=args.model,
        t=t,
        spreads=spreads,
        alpha_levels=args.alpha_levels,
        mode=args.mode,
        grid_points=args.grid_points,
        version=__version__,
        extra=extra,
    )
    point = point_measures(rates, t)
    reports = [build_report(m, t, s, args.alpha_levels, args.mode, args.grid_points) for s in spreads]
    notes = reference_flags(rates, ref) if ref is not None else []

    out = Path(args.out)
    header, rows = report_rows(point, reports)
    sys.stdout.write(render_table(header, rows))
    for note in notes:
        sys.stdout.write(f"# {note}\n")

    trends = trend_rows(reports, (ref or {}).get("trends")) if len(reports) >= 2 else None
    deltas = reference_rows(point, reports, ref) if ref is not None else None

    if args.format == "json":
        doc = {
            "manifest": manifest.as_dict(),
            "flags": notes,
            "system": {"lambda_s": rates.lambda_s, "tau_s": rates.tau_s, "mu_s": rates.mu_s},
            "crisp": {**point.as_dict(), "mttf": point.mttf, "mttr": point.mttr},
            "defuzzified": {spread_label(r.spread): {p: v.defuzzified for p, v in r.parameters.items()} for r in reports},
            "membership": {
                spread_label(r.spread): {
                    p: {
                        "alpha": v.fuzzy.alphas.tolist(),
                        "left": v.fuzzy.lows.tolist(),
                        "right": v.fuzzy.highs.tolist(),
                    }
                    for p, v in r.parameters.items()
                }
                for r in reports
            },
        }
        if trends is not None:
            doc["trends"] = [dict(zip(trends[0], row)) for row in trends[1]]
        if deltas is not None:
            doc["reference_deltas"] = [dict(zip(deltas[0], row)) for row in deltas[1]]
        write_text(out / "analysis.json", json.dumps(doc, indent=2) + "\n")
        return 0

    text = csv_text(manifest, header, rows, notes)
    check_roundtrip(text, rows)
    write_text(out / "report.csv", text)
    for r in reports:
        mh, mr = membership_rows(r)
        mtext = csv_text(manifest, mh, mr)
        check_roundtrip(mtext, mr)
        write_text(out / f"membership_{spread_label(r.spread)}.csv", mtext)
    if trends is not None:
        write_text(out / "trends.csv", csv_text(manifest, *trends))
    if deltas is not None:
        write_text(out / "reference_deltas.csv", csv_text(manifest, *deltas, notes))
    return 0


def cmd_cutsets(args) -> int:
    m = _load(args.model)
    net = to_petri_net(m)
    for s in minimal_cut_sets(net):
        print("cut: {" + ",".join(sorted(s)) + "}")
    for s in minimal_path_sets(net):
        print("path: {" + ",".join(sorted(s)) + "}")
    return 0


def simulation_rows(m, t: float, cfg: SimConfig):
    est = simulate_system(m, cfg)
    point = point_measures(reduce_crisp(m), t)
    header = ["quantity", "simulated", "stderr", "analytic", "rel_delta", "z"]
    rows = []
    for name, e, a in (
        ("availability", est.availability, point.availability),
        ("reliability", est.reliability, point.reliability),
        ("enof", est.expected_failures, point.enof),
    ):
        delta = (e.value - a) / a if a else float("nan")
        z = (e.value - a) / e.stderr if e.stderr else float("nan")
        rows.append([name, e.value, e.stderr, float(a), delta, z])
    return header, rows


def cmd_simulate(args) -> int:
    m = _load(args.model)
    if not args.time > 0:
        raise InputError(f"mission time must be positive, got {args.time!r}")
    try:
        cfg = SimConfig(args.trials, args.time, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    header, rows = simulation_rows(m, args.time, cfg)
    manifest = RunManifest(
        command="simulate",
        model=args.model,
        t=args.time,
        seed=args.seed,
        version=__version__,
        extra={"trials": str(args.trials)},
    )
    sys.stdout.write(render_table(header, rows))
    if args.out:
        write_text(Path(args.out) / "simulate.csv", csv_text(manifest, header, rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fuzzyrel", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="crisp, fuzzy and defuzzified reliability parameters")
    a.add_argument("--model", required=True)
    when = a.add_mutually_exclusive_group(required=True)
    when.add_argument("--time", type=_float, help="mission time in hours")
    when.add_argument(
        "--reliability-target",
        type=_float,
        help="solve the mission time from exp(-lambda_s t) = R (lambda_s from --reference if given)",
    )
    a.add_argument("--spread", type=_spread, action="append", help="relative spread, repeatable (0.15 = 15%%)")
    a.add_argument("--alpha-levels", type=_positive_int, default=DEFAULT_ALPHA_LEVELS)
    a.add_argument("--mode", choices=MODES, default=NAIVE)
    a.add_argument("--grid-points", type=_positive_int, default=DEFAULT_GRID_POINTS)
    a.add_argument("--format", choices=("csv", "json"), default="csv")
    a.add_argument("--reference", help="JSON file of published values to compare against")
    a.add_argument("--out", default=".", help="output directory")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("cutsets", help="minimal cut sets and path sets")
    c.add_argument("--model", required=True)
    c.set_defaults(func=cmd_cutsets)

    s = sub.add_parser("simulate", help="Monte Carlo estimates beside the analytic values")
    s.add_argument("--model", required=True)
    s.add_argument("--time", type=_float, required=True)
    s.add_argument("--trials", type=_positive_int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="also write simulate.csv here")
    s.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # usage errors exit 1 through _Parser.error; --help and --version exit 0
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except InputError as exc:
        print(f"fuzzyrel: error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(f"fuzzyrel: internal invariant violated: {exc}", file=sys.stderr)
        return 2
    except (ModelError, ValueError) as exc:
        print(f"fuzzyrel: error: {exc}", file=sys.stderr)
        return 1
