"""Command-line interface.

Exit codes: 0 on success, 1 on input errors (parse failures, invalid games,
bad flags), 2 when the threshold decision is out of scope.  All solver output
is deterministic; rationals print as p/q in lowest terms and floats with 12
significant digits.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import gallery as gallery_mod
from .model import Game, SinkMode, validate
from .objectives import Objective, ObjectiveKind, parse_objective
from .exact import reach_plus_values
from .simulate import SimConfig, sample_plays
from .strategies import (
    ValueDecreaseError,
    buchi_md_pair,
    format_strategy,
    optimal_max_md_no_decrease,
    optimal_min_md,
    parse_strategy,
    reachplus_max_md,
    reachplus_min_md,
    threshold_decide,
)
from .textio import GameFormatError, ParsedGame, format_game, parse_game
from .transforms import rvi
from .values import (
    ValueVector,
    value_buchi,
    value_cobuchi,
    value_reach,
    value_reach_within,
    value_safety,
)
from .winning import WinningPartition, almost_sure_buchi, almost_sure_reach, almost_sure_safety


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _emit(rows: list[tuple], header: tuple[str, ...], fmt: str, out) -> None:
    if fmt == "json-lines":
        for row in rows:
            out.write(json.dumps(dict(zip(header, map(_fmt, row)))) + "\n")
    elif fmt == "table":
        cells = [header] + [tuple(map(_fmt, row)) for row in rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
        for r in cells:
            out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")
    else:
        for row in rows:
            out.write(" ".join(map(_fmt, row)) + "\n")


def _load(path: str) -> ParsedGame:
    with open(path, encoding="utf-8") as handle:
        return parse_game(handle.read())


def _objective(args, parsed: ParsedGame) -> Objective:
    target = args.target if args.target else ",".join(sorted(parsed.targets))
    if not target:
        raise ValueError("no target set: pass --target or declare targets in the file")
    return parse_objective(args.objective, target)


def _cmd_validate(args) -> int:
    parsed = _load(args.file)
    violations = validate(parsed.game)
    if not violations:
        print("ok")
        return 0
    for v in violations:
        line = parsed.state_lines.get(v.state)
        where = f"line {line}: " if line is not None else ""
        print(f"{where}{v}", file=sys.stderr)
    return 1


def _cmd_solve(args) -> int:
    parsed = _load(args.file)
    obj = _objective(args, parsed)
    game = parsed.game
    kind = obj.kind
    if kind is ObjectiveKind.REACH_WITHIN:
        vec = value_reach_within(game, obj.target, obj.steps)
    elif kind is ObjectiveKind.REACH_PLUS:
        if args.mode != "exact":
            raise ValueError("reachplus values are exact only")
        vec = ValueVector(reach_plus_values(game, obj.target))
    else:
        solver = {
            ObjectiveKind.REACH: value_reach,
            ObjectiveKind.SAFETY: value_safety,
            ObjectiveKind.BUCHI: value_buchi,
            ObjectiveKind.COBUCHI: value_cobuchi,
        }[kind]
        tol = Fraction(args.tol) if args.tol else None
        vec = solver(game, obj.target, mode=args.mode, tol=tol)
    rows = [(s, vec.values[s]) for s in game.states]
    _emit(rows, ("state", "value"), args.format, sys.stdout)
    if vec.error_bound is not None:
        print(f"# error-bound {_fmt(float(vec.error_bound))}")
    return 0


def _partition_for(kind: ObjectiveKind, game: Game, target) -> WinningPartition:
    if kind is ObjectiveKind.REACH:
        return almost_sure_reach(game, target)
    if kind is ObjectiveKind.BUCHI:
        return almost_sure_buchi(game, target)
    if kind is ObjectiveKind.SAFETY:
        return almost_sure_safety(game, target)
    raise ValueError(f"no almost-sure partition for {kind.value}")


def _cmd_winning_set(args) -> int:
    parsed = _load(args.file)
    obj = _objective(args, parsed)
    part = _partition_for(obj.kind, parsed.game, obj.target)
    rows = []
    for s in parsed.game.states:
        side = "max" if s in part.max_wins else "min"
        idx = part.index.get(s)
        rows.append(("state", s, side, "index", "bot" if idx is None else idx))
    _emit(rows, ("kw", "state", "side", "kw2", "index"), args.format, sys.stdout)
    print(f"rounds {part.rounds}")
    return 0


def _cmd_strategy(args) -> int:
    parsed = _load(args.file)
    obj = _objective(args, parsed)
    game = parsed.game
    if obj.kind is ObjectiveKind.REACH:
        strat = (
            optimal_max_md_no_decrease(game, obj.target)
            if args.player == "max"
            else optimal_min_md(game, obj.target)
        )
    elif obj.kind is ObjectiveKind.REACH_PLUS:
        strat = (
            reachplus_max_md(game, obj.target)
            if args.player == "max"
            else reachplus_min_md(game, obj.target)
        )
    elif obj.kind is ObjectiveKind.BUCHI:
        sigma, pi = buchi_md_pair(game, obj.target)
        strat = sigma if args.player == "max" else pi
    else:
        raise ValueError(f"no strategy construction for {obj.kind.value}")
    text = format_strategy(strat)
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_transform(args) -> int:
    parsed = _load(args.file)
    if not args.rvi:
        raise ValueError("transform currently only supports --rvi")
    obj = _objective(args, parsed)
    out = rvi(parsed.game, obj.target)
    text = format_game(out, sorted(parsed.targets))
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_simulate(args) -> int:
    parsed = _load(args.file)
    obj = _objective(args, parsed)
    cfg = SimConfig(
        samples=args.samples,
        horizon=args.horizon,
        seed=args.seed,
        buchi_window=args.buchi_window,
    )
    sigma = pi = None
    if args.sigma:
        with open(args.sigma, encoding="utf-8") as handle:
            sigma = parse_strategy(handle.read())
    if args.pi:
        with open(args.pi, encoding="utf-8") as handle:
            pi = parse_strategy(handle.read())
    start = args.from_state or parsed.game.states[0]
    est = sample_plays(parsed.game, start, obj, cfg, sigma=sigma, pi=pi)
    rows = [
        ("mean", est.mean),
        ("half-width-95", est.half_width_95),
        ("decided-fraction", est.decided_fraction),
    ]
    _emit(rows, ("stat", "value"), args.format, sys.stdout)
    return 0


def _cmd_gallery(args) -> int:
    kind = args.kind
    if kind == "fig2":
        built = gallery_mod.build_fig2(args.depth, SinkMode(args.sink))
    elif kind == "fig2u":
        built = gallery_mod.build_fig2_with_u(args.depth, SinkMode(args.sink))
    elif kind == "ladder":
        built = gallery_mod.build_ladder(args.k)
    else:
        built = gallery_mod.build_gamblers_ruin(Fraction(args.p), args.cap)
    members = built.buchi if args.label == "buchi" else built.targets
    text = format_game(built.game, sorted(members))
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_decide(args) -> int:
    parsed = _load(args.file)
    obj = _objective(args, parsed)
    if obj.kind is not ObjectiveKind.REACH:
        raise ValueError("the threshold decision handles reachability objectives")
    verdict = threshold_decide(
        parsed.game, obj.target, Fraction(args.threshold), args.strict, args.from_state
    )
    print(f"winner {verdict.winner}")
    print(f"reason {verdict.reason}")
    if verdict.strategy is not None:
        sys.stdout.write(format_strategy(verdict.strategy))
    return 2 if verdict.winner == "out-of-scope" else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgsolve",
        description="Solve turn-based 2.5-player stochastic games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, objective=True):
        p.add_argument("file", help="game file")
        if objective:
            p.add_argument("--objective", default="reach",
                           help="reach|safety|buchi|cobuchi|reachplus|reach<=N")
            p.add_argument("--target", default="",
                           help="comma-separated target ids (default: file targets)")
        p.add_argument("--format", choices=("lines", "table", "json-lines"),
                       default="lines")

    p = sub.add_parser("validate", help="check the game invariants")
    p.add_argument("file")
    p.set_defaults(run=_cmd_validate)

    p = sub.add_parser("solve", help="per-state objective values")
    add_common(p)
    p.add_argument("--mode", choices=("exact", "iterate"), default="exact")
    p.add_argument("--tol", default="", help="tolerance for --mode iterate, e.g. 1/1000000")
    p.set_defaults(run=_cmd_solve)

    p = sub.add_parser("winning-set", help="almost-sure winning partition")
    add_common(p)
    p.add_argument("--almost-sure", action="store_true", default=True,
                   help="compute the almost-sure partition (default)")
    p.set_defaults(run=_cmd_winning_set)

    p = sub.add_parser("strategy", help="synthesize and export an MD strategy")
    add_common(p)
    p.add_argument("--player", choices=("max", "min"), required=True)
    p.add_argument("--emit", default="", help="output file (default: stdout)")
    p.set_defaults(run=_cmd_strategy)

    p = sub.add_parser("transform", help="value-preserving transformations")
    add_common(p)
    p.add_argument("--rvi", action="store_true",
                   help="remove the minimizer's value-increasing transitions")
    p.add_argument("--emit", default="", help="output file (default: stdout)")
    p.set_defaults(run=_cmd_transform)

    p = sub.add_parser("simulate", help="Monte-Carlo estimate under a strategy pair")
    add_common(p)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--buchi-window", type=int, default=1)
    p.add_argument("--sigma", default="", help="maximizer strategy file")
    p.add_argument("--pi", default="", help="minimizer strategy file")
    p.add_argument("--from", dest="from_state", default="", help="initial state")
    p.set_defaults(run=_cmd_simulate)

    p = sub.add_parser("gallery", help="emit an example game in the text format")
    p.add_argument("kind", choices=("fig2", "ladder", "ruin", "fig2u"))
    p.add_argument("--depth", type=int, default=8, help="truncation depth (fig2, fig2u)")
    p.add_argument("--k", type=int, default=3, help="levels (ladder)")
    p.add_argument("--p", default="3/5", help="win probability (ruin)")
    p.add_argument("--cap", type=int, default=30, help="absorbing cap (ruin)")
    p.add_argument("--sink", choices=("pessimistic", "optimistic"), default="pessimistic")
    p.add_argument("--label", choices=("target", "buchi"), default="target",
                   help="which annotation becomes the file's target lines")
    p.add_argument("--emit", default="", help="output file (default: stdout)")
    p.set_defaults(run=_cmd_gallery)

    p = sub.add_parser("decide", help="threshold reachability decision")
    add_common(p)
    p.add_argument("--threshold", required=True, help="rational threshold p/q")
    p.add_argument("--strict", action="store_true", help="strict inequality")
    p.add_argument("--from", dest="from_state", required=True, help="initial state")
    p.set_defaults(run=_cmd_decide)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.run(args)
    except (GameFormatError, ValueDecreaseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
