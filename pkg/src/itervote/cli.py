"""Command-line front end.

    itervote simulate   --rule plurality --move m2 --profile p.txt
    itervote experiment --config grid.cfg --out report.csv [--jobs 4]
    itervote generate   --m 5 --n 50 --count 10 --seed 7 --require-cw --out profiles.txt
    itervote analyze    --profile p.txt

Exit status: 0 on success (a run stopped by the step cap still counts as
success), 1 on runtime failures such as unreadable or malformed input,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .engine import format_trace, iterate
from .experiments import ConfigError, ExperimentConfig, run_experiment_detailed, write_csv, write_records
from .moves import MOVE_NAMES, restriction_from_name
from .preferences import (
    ProfileFormatError,
    SamplingError,
    TieBreak,
    condorcet_winner_from_matrix,
    generate_profile,
    generate_profile_with_condorcet_winner,
    majority_matrix,
    parse_profiles,
    profile_rng,
)
from .rules import RULE_NAMES, Election, rule_from_name

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _move(name: str):
    try:
        return restriction_from_name(name)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid move {name!r} (choose from {', '.join(MOVE_NAMES)}, or pragmatistK)") from None


def _order(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"tie-break order must list candidate ids, got {text!r}") from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="itervote", description="Iterative voting with restricted manipulation")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="iterate one or more profiles and print the move trace")
    src = sim.add_mutually_exclusive_group(required=True)
    src.add_argument("--profile", help="profile file (several concatenated profiles are run in turn)")
    src.add_argument("--seed", type=int, help="draw an impartial-culture profile instead of reading one")
    sim.add_argument("--m", type=_positive, default=5)
    sim.add_argument("--n", type=_positive, default=20)
    sim.add_argument("--require-cw", action="store_true", help="with --seed: draw until a Condorcet winner exists")
    sim.add_argument("--rule", required=True, choices=RULE_NAMES)
    sim.add_argument("--move", required=True, type=_move, metavar="MOVE",
                     help=f"one of {', '.join(MOVE_NAMES)} (pragmatistK for any k)")
    sim.add_argument("--tb", type=_order, help="tie-break priority, highest first (default 0..m-1)")
    sim.add_argument("--cap", type=_positive, help="step cap (default 10*n*m)")
    sim.add_argument("--out", help="write the trace here instead of stdout")
    sim.add_argument("--json", dest="json_out", help="write the structured outcome(s) as JSON")

    exp = sub.add_parser("experiment", help="run a Condorcet-efficiency grid and write a CSV report")
    exp.add_argument("--config", required=True, help="key=value grid file")
    exp.add_argument("--out", help="CSV path (default stdout)")
    exp.add_argument("--records", help="also write per-profile outcomes as JSON lines")
    exp.add_argument("--jobs", type=_positive, default=1)
    exp.add_argument("--seed", type=int, help="override the config's seed")

    gen = sub.add_parser("generate", help="write impartial-culture profiles")
    gen.add_argument("--m", type=_positive, required=True)
    gen.add_argument("--n", type=_positive, required=True)
    gen.add_argument("--count", type=_positive, default=1)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--require-cw", action="store_true")
    gen.add_argument("--out", help="profile file (default stdout)")

    ana = sub.add_parser("analyze", help="majority matrix, per-rule winners and Condorcet winner")
    ana.add_argument("--profile", required=True)
    ana.add_argument("--tb", type=_order)
    return parser


def _read_profiles(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise RuntimeError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_profiles(text)
    except ProfileFormatError as exc:
        raise RuntimeError(f"{path}: {exc}") from None


def _tie_break(order, m: int) -> TieBreak:
    if order is None:
        return TieBreak.identity(m)
    if sorted(order) != list(range(m)):
        raise UsageError(f"--tb must be a permutation of 0..{m - 1}, got {' '.join(map(str, order))}")
    return TieBreak(order)


def _open_out(path: str | None) -> TextIO:
    return open(path, "w") if path else sys.stdout


def cmd_simulate(args) -> int:
    if args.profile is not None:
        profiles = _read_profiles(args.profile)
    else:
        if args.m < 2:
            raise UsageError("--m must be at least 2")
        rng = profile_rng(args.seed, args.m, args.n, 0)
        draw = generate_profile_with_condorcet_winner if args.require_cw else generate_profile
        profiles = [draw(args.m, args.n, rng)]
    outcomes = []
    for profile in profiles:
        try:
            rule = rule_from_name(args.rule, profile.m)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.move.kind == "pragmatist" and args.move.k > profile.m:
            raise UsageError(f"{args.move.name}: k exceeds m={profile.m}")
        tb = _tie_break(args.tb, profile.m)
        outcomes.append(iterate(profile, rule, args.move, tb, args.cap))

    trace_out = _open_out(args.out)
    try:
        for i, outcome in enumerate(outcomes):
            if len(outcomes) > 1:
                trace_out.write(f"# profile {i}\n")
            trace_out.write(format_trace(outcome.trace))
    finally:
        if trace_out is not sys.stdout:
            trace_out.close()
    for i, outcome in enumerate(outcomes):
        prefix = f"profile {i}: " if len(outcomes) > 1 else ""
        print(prefix + outcome.summary())
    if args.json_out:
        payload = [o.to_dict() for o in outcomes]
        Path(args.json_out).write_text(json.dumps(payload if len(payload) > 1 else payload[0], indent=1) + "\n")
    return EXIT_OK


def cmd_experiment(args) -> int:
    try:
        config = ExperimentConfig.load(args.config)
        if args.seed is not None:
            config = ExperimentConfig(**{**config.__dict__, "seed": args.seed})
    except OSError as exc:
        raise RuntimeError(f"cannot read {args.config}: {exc.strerror}") from None
    except ConfigError as exc:
        raise RuntimeError(f"{args.config}: {exc}") from None
    reports, records = run_experiment_detailed(config, args.jobs)
    out = _open_out(args.out)
    try:
        write_csv(reports, out)
    finally:
        if out is not sys.stdout:
            out.close()
    if args.records:
        with open(args.records, "w") as fh:
            write_records(records, fh)
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.m < 2:
        raise UsageError("--m must be at least 2")
    draw = generate_profile_with_condorcet_winner if args.require_cw else generate_profile
    out = _open_out(args.out)
    try:
        for index in range(args.count):
            profile = draw(args.m, args.n, profile_rng(args.seed, args.m, args.n, index))
            out.write(profile.to_text())
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def analyze_text(profile, order=None) -> str:
    m, n = profile.m, profile.n
    support = majority_matrix(profile)
    width = max(len(str(n)), 2)
    lines = [f"m={m} n={n}", "majority matrix (voters preferring row over column):"]
    lines.append(" " * (width + 1) + " ".join(f"{c:>{width}}" for c in range(m)))
    for x in range(m):
        cells = ("-" if x == y else str(support[x][y]) for y in range(m))
        lines.append(f"{x:>{width}} " + " ".join(f"{c:>{width}}" for c in cells))
    tb = _tie_break(order, m)
    for name in RULE_NAMES:
        try:
            rule = rule_from_name(name, m)
        except ValueError:
            lines.append(f"{name}: n/a for m={m}")
            continue
        result = Election(rule, profile, tb).result
        label = "rounds" if name == "stv" else "scores"
        flag = " (tie-broken)" if result.tie_broken else ""
        lines.append(f"{name}: {label}={' '.join(map(str, result.scores))} winner={result.winner}{flag}")
    cw = condorcet_winner_from_matrix(support, n)
    lines.append(f"condorcet_winner: {'none' if cw is None else cw}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    profiles = _read_profiles(args.profile)
    for i, profile in enumerate(profiles):
        if len(profiles) > 1:
            print(f"# profile {i}")
        sys.stdout.write(analyze_text(profile, args.tb))
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "experiment": cmd_experiment, "generate": cmd_generate, "analyze": cmd_analyze}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"itervote {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RuntimeError, SamplingError) as exc:
        print(f"itervote {args.command}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
