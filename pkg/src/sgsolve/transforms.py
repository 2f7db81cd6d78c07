"""Value-preserving game transformations.

``rvi`` deletes every minimizer-controlled transition into a strictly more
valuable state.  At least one successor of equal value always remains, so no
dead ends appear; the exact value vector is unchanged and the operation is
idempotent.
"""

from __future__ import annotations

from .exact import reach_plus_values, solve_reach_exact
from .model import Game, Owner

INCREASING = "increasing"
DECREASING = "decreasing"
PRESERVING = "preserving"


def rvi(game: Game, targets) -> Game:
    """Remove the minimizer's value-increasing transitions w.r.t. reaching
    ``targets``.  Returns a new game; values are preserved."""
    values = solve_reach_exact(game, targets).values
    succ: dict[str, tuple[str, ...]] = {}
    for s in game.states:
        if game.owner[s] is Owner.MIN:
            kept = tuple(t for t in game.succ[s] if values[t] <= values[s])
            assert kept, "a value-preserving successor always remains"
            succ[s] = kept
        else:
            succ[s] = game.succ[s]
    return Game(dict(game.owner), succ, dict(game.prob))


def classify_transitions(game: Game, targets, reach_plus: bool = False) -> dict[tuple[str, str], str]:
    """Classify every edge as increasing, decreasing or preserving.

    With plain reach values this also asserts the ownership facts: an edge
    controlled by the maximizer is never value-increasing and one controlled
    by the minimizer is never value-decreasing.  The facts rest on the values
    being Bellman-consistent at the edge's source, so they are not asserted
    at target states (whose values are pinned) or for revisit values.
    """
    targets = set(targets)
    if reach_plus:
        values = reach_plus_values(game, targets)
    else:
        values = solve_reach_exact(game, targets).values
    out: dict[tuple[str, str], str] = {}
    for s in game.states:
        for t in game.succ[s]:
            if values[s] > values[t]:
                label = DECREASING
            elif values[s] < values[t]:
                label = INCREASING
            else:
                label = PRESERVING
            if not reach_plus and s not in targets:
                if game.owner[s] is Owner.MAX:
                    assert label != INCREASING, f"maximizer edge {s}->{t} increases value"
                if game.owner[s] is Owner.MIN:
                    assert label != DECREASING, f"minimizer edge {s}->{t} decreases value"
            out[(s, t)] = label
    return out
