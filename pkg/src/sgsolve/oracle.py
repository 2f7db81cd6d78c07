"""Independent brute-force and one-player exact oracles.

These deliberately avoid the solver machinery used elsewhere: values come
from enumerating all memoryless deterministic strategy pairs and solving each
induced finite Markov chain (linear solve for reachability, bottom-component
analysis for the tail objectives), so they can referee the optimized paths.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .exact import bellman_combine, chain_reach_values, solve_reach_exact
from .graphs import bottom_components, maximal_end_components
from .model import Game, Owner, swap_roles
from .objectives import Objective, ObjectiveKind
from .values import ValueVector

ONE = Fraction(1)

PAIR_BOUND = 10**6


def chain_buchi_values(game: Game, choice: dict[str, str], buchi_set: set[str]) -> dict[str, Fraction]:
    """Probability of visiting ``buchi_set`` infinitely often in the chain
    fixed by ``choice``: absorption into a bottom component containing a
    Buchi state."""
    winning: set[str] = set()
    for comp in bottom_components(game, choice):
        if any(s in buchi_set for s in comp):
            winning.update(comp)
    return chain_reach_values(game, choice, winning)


def _chain_objective_values(game: Game, choice: dict[str, str], obj: Objective) -> dict[str, Fraction]:
    kind = obj.kind
    target = set(obj.target)
    if kind is ObjectiveKind.REACH:
        return chain_reach_values(game, choice, target)
    if kind is ObjectiveKind.SAFETY:
        reach = chain_reach_values(game, choice, target)
        return {s: ONE - v for s, v in reach.items()}
    if kind is ObjectiveKind.REACH_PLUS:
        reach = chain_reach_values(game, choice, target)
        out = {}
        for s in game.states:
            if game.owner[s] is Owner.RANDOM:
                out[s] = bellman_combine(game, reach, s)
            else:
                out[s] = reach[choice[s]]
        return out
    if kind is ObjectiveKind.BUCHI:
        return chain_buchi_values(game, choice, target)
    if kind is ObjectiveKind.COBUCHI:
        buchi = chain_buchi_values(game, choice, target)
        return {s: ONE - v for s, v in buchi.items()}
    raise ValueError(f"oracle does not handle {kind}")


def md_enumeration_oracle(game: Game, obj: Objective) -> ValueVector:
    """Exact values by exhaustive max-min over all MD strategy pairs.

    Valid because finite games of these objectives have uniformly optimal MD
    strategies on both sides.  Refuses instances whose strategy-pair product
    exceeds ``PAIR_BOUND``.
    """
    max_states = [s for s in game.states if game.owner[s] is Owner.MAX]
    min_states = [s for s in game.states if game.owner[s] is Owner.MIN]
    pairs = 1
    for s in max_states + min_states:
        pairs *= len(game.succ[s])
    if pairs > PAIR_BOUND:
        raise ValueError(f"{pairs} MD pairs exceed the enumeration bound {PAIR_BOUND}")

    best: dict[str, Fraction] | None = None
    for sigma in product(*(game.succ[s] for s in max_states)):
        worst: dict[str, Fraction] | None = None
        for pi in product(*(game.succ[s] for s in min_states)):
            choice = dict(zip(max_states, sigma))
            choice.update(zip(min_states, pi))
            vals = _chain_objective_values(game, choice, obj)
            if worst is None:
                worst = dict(vals)
            else:
                for s in game.states:
                    if vals[s] < worst[s]:
                        worst[s] = vals[s]
        assert worst is not None
        if best is None:
            best = worst
        else:
            for s in game.states:
                if worst[s] > best[s]:
                    best[s] = worst[s]
    assert best is not None
    return ValueVector(best)


def mdp_buchi_exact(game: Game, buchi_set) -> ValueVector:
    """Exact Buchi values when one player is passive.

    With the maximizer active the value is the best probability of reaching
    an end component containing a Buchi state.  With the minimizer active it
    is one minus the best probability of settling in a Buchi-free end
    component (the minimizer maximizes the dual objective).
    """
    buchi_set = set(buchi_set)
    # A player whose states all have single successors makes no choices.
    max_active = any(
        game.owner[s] is Owner.MAX and len(game.succ[s]) > 1 for s in game.states
    )
    min_active = any(
        game.owner[s] is Owner.MIN and len(game.succ[s]) > 1 for s in game.states
    )
    if max_active and min_active:
        raise ValueError("both players are active")
    if not min_active:
        winning: set[str] = set()
        for comp in maximal_end_components(game, game.states):
            if any(s in buchi_set for s in comp):
                winning.update(comp)
        return ValueVector(solve_reach_exact(game, winning).values)
    safe = [s for s in game.states if s not in buchi_set]
    havens: set[str] = set()
    for comp in maximal_end_components(game, safe):
        havens.update(comp)
    escape = solve_reach_exact(swap_roles(game), havens).values
    return ValueVector({s: ONE - escape[s] for s in game.states})
