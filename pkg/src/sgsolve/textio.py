"""Text format for game files.

One declaration per line, ``#`` starts a comment, ids are whitespace-free
tokens::

    state <id> max|min|rand
    edge <src> <dst>            # edges of owned states
    edge <src> <dst> <p/q>      # edges of random states, exact rational weight
    target <id>                 # default target set, may be overridden on the CLI

Parsing is strict: unknown keywords, duplicate state declarations, edges
touching undeclared states, malformed weights and misplaced weights are hard
errors carrying the offending line number.  Duplicate edges and weight sums
are left to :func:`sgsolve.model.validate`, which reports them as violations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .model import Game, Owner

_RATIONAL = re.compile(r"^\d+(/\d+)?$")


class GameFormatError(ValueError):
    """A hard parse error, with the 1-based line number it occurred on."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class ParsedGame:
    """A parsed game file: the game, its default target set and, for error
    reporting, the line on which each state was declared."""

    game: Game
    targets: frozenset[str]
    state_lines: dict[str, int]


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_game(text: str) -> ParsedGame:
    owner: dict[str, Owner] = {}
    state_lines: dict[str, int] = {}
    edges: list[tuple[int, str, str, Fraction | None]] = []
    targets: list[tuple[int, str]] = []

    for lineno, toks in _tokens(text):
        kw = toks[0]
        if kw == "state":
            if len(toks) != 3:
                raise GameFormatError(lineno, "expected: state <id> max|min|rand")
            sid, kind = toks[1], toks[2]
            if sid in owner:
                raise GameFormatError(lineno, f"duplicate declaration of state {sid!r}")
            try:
                owner[sid] = Owner(kind)
            except ValueError:
                raise GameFormatError(lineno, f"unknown state kind {kind!r}") from None
            state_lines[sid] = lineno
        elif kw == "edge":
            if len(toks) == 3:
                edges.append((lineno, toks[1], toks[2], None))
            elif len(toks) == 4:
                if not _RATIONAL.match(toks[3]):
                    raise GameFormatError(lineno, f"malformed rational weight {toks[3]!r}")
                edges.append((lineno, toks[1], toks[2], Fraction(toks[3])))
            else:
                raise GameFormatError(lineno, "expected: edge <src> <dst> [<p/q>]")
        elif kw == "target":
            if len(toks) != 2:
                raise GameFormatError(lineno, "expected: target <id>")
            targets.append((lineno, toks[1]))
        else:
            raise GameFormatError(lineno, f"unknown keyword {kw!r}")

    succ: dict[str, list[str]] = {s: [] for s in owner}
    prob: dict[str, list[Fraction]] = {s: [] for s, o in owner.items() if o is Owner.RANDOM}
    for lineno, src, dst, weight in edges:
        if src not in owner:
            raise GameFormatError(lineno, f"edge from undeclared state {src!r}")
        if dst not in owner:
            raise GameFormatError(lineno, f"edge to undeclared state {dst!r}")
        if owner[src] is Owner.RANDOM:
            if weight is None:
                raise GameFormatError(lineno, f"edge from random state {src!r} needs a weight")
            prob[src].append(weight)
        elif weight is not None:
            raise GameFormatError(lineno, f"edge from owned state {src!r} must not carry a weight")
        succ[src].append(dst)

    for lineno, sid in targets:
        if sid not in owner:
            raise GameFormatError(lineno, f"target refers to undeclared state {sid!r}")

    game = Game(
        owner,
        {s: tuple(ts) for s, ts in succ.items()},
        {s: tuple(ws) for s, ws in prob.items()},
    )
    return ParsedGame(game, frozenset(t for _, t in targets), state_lines)


def format_game(game: Game, targets=()) -> str:
    """Serialize a game (and optional target set) in the text format."""
    lines = [f"state {s} {game.owner[s].value}" for s in game.states]
    for s in game.states:
        if game.owner[s] is Owner.RANDOM:
            for t, w in game.distribution(s):
                lines.append(f"edge {s} {t} {w.numerator}/{w.denominator}" if w.denominator != 1
                             else f"edge {s} {t} {w.numerator}/1")
        else:
            for t in game.succ[s]:
                lines.append(f"edge {s} {t}")
    for t in targets:
        lines.append(f"target {t}")
    return "\n".join(lines) + "\n"
