"""Qualitative winning sets: almost-sure and positive-probability regions.

All three computations return a full partition of the state space together
with per-state removal indices: a state keeps index bottom (``None``) exactly
when it is maximizer-winning, and min-winning states record the peeling round
that eliminated them.  On finite games every fixpoint below converges in
finitely many rounds.

Almost-sure reachability peels with a confined attractor: each round keeps
the least set that can make progress towards the target while random states
never leak outside the surviving region and the minimizer cannot steer
outside it.  States from which the target is unreachable even with maximal
cooperation are discarded up front with index 0.  Removal cascades one
dependency layer per round, which is what the escalation gallery family
exercises.

Almost-sure Buchi peels with exact revisit values: each round removes the
states whose current-subgame value of "visit the Buchi set again after at
least one step" is below one, closes the removal backward under minimizer
and random transitions, and patches maximizer dead ends as losing.  Value
comparisons are exact rational comparisons against 1; floating-point
peeling would be unsound there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import bellman_combine, solve_reach_exact
from .model import Game, Owner
from .transforms import rvi

ONE = Fraction(1)


@dataclass(frozen=True)
class WinningPartition:
    """A strong-determinacy partition with peeling bookkeeping.

    ``index`` maps removed (min-winning) states to the round that removed
    them and maximizer-winning states to ``None``.
    """

    max_wins: frozenset[str]
    min_wins: frozenset[str]
    rounds: int
    index: dict[str, int | None]


def _check_targets(game: Game, targets) -> set[str]:
    targets = set(targets)
    stray = targets - set(game.owner)
    if stray:
        raise ValueError(f"target states not in game: {sorted(stray)}")
    return targets


def _predecessors(game: Game) -> dict[str, list[str]]:
    preds: dict[str, list[str]] = {s: [] for s in game.states}
    for s in game.states:
        for t in game.succ[s]:
            preds[t].append(s)
    return preds


def positive_reach_set(game: Game, targets) -> frozenset[str]:
    """States from which the maximizer forces the target with positive
    probability: the classic attractor (maximizer and random states need one
    successor inside, minimizer states need all)."""
    targets = _check_targets(game, targets)
    return frozenset(_attractor(game, targets, set(game.states), exists=(Owner.MAX, Owner.RANDOM)))


def _attractor(game: Game, base: set[str], alive: set[str], exists: tuple[Owner, ...],
               layer: dict[str, int] | None = None) -> set[str]:
    """Least fixpoint of backward closure inside ``alive``.

    Owners in ``exists`` need one successor in the set, the others need all
    their successors in it.  When ``layer`` is given it records, per added
    state, the closure stage at which it entered (base states get 0).
    """
    preds = _predecessors(game)
    inside = {s for s in base if s in alive}
    if layer is not None:
        for s in inside:
            layer[s] = 0
    # Every inside state is processed exactly once, so counters start at the
    # full successor count.
    missing = {
        s: len(game.succ[s])
        for s in alive
        if game.owner[s] not in exists
    }
    frontier = sorted(inside)
    stage = 0
    while frontier:
        stage += 1
        new: list[str] = []
        for s in frontier:
            for p in preds[s]:
                if p not in alive or p in inside:
                    continue
                if game.owner[p] in exists:
                    inside.add(p)
                    new.append(p)
                else:
                    missing[p] -= 1
                    if missing[p] == 0:
                        inside.add(p)
                        new.append(p)
        if layer is not None:
            for s in new:
                layer[s] = stage
        frontier = new
    return inside


def _confined_attractor(game: Game, targets: set[str], alive: set[str]) -> set[str]:
    """Progress-towards-target set with random confinement.

    Least set containing the live targets and closed backward so that
    maximizer states have a successor inside, minimizer states have all
    successors inside, and random states have all successors in ``alive``
    plus one inside.
    """
    preds = _predecessors(game)
    inside = {s for s in targets if s in alive}
    confined = {
        s
        for s in alive
        if game.owner[s] is not Owner.RANDOM or all(t in alive for t in game.succ[s])
    }
    missing = {
        s: len(game.succ[s])
        for s in alive
        if game.owner[s] is Owner.MIN
    }
    frontier = sorted(inside)
    while frontier:
        new: list[str] = []
        for s in frontier:
            for p in preds[s]:
                if p not in alive or p in inside or p not in confined:
                    continue
                o = game.owner[p]
                if o is Owner.MIN:
                    missing[p] -= 1
                    if missing[p] == 0:
                        inside.add(p)
                        new.append(p)
                else:
                    inside.add(p)
                    new.append(p)
        frontier = new
    return inside


def almost_sure_reach(game: Game, targets) -> WinningPartition:
    """Partition for surely-almost-sure reachability.

    Setup removes the minimizer's value-increasing transitions (value
    preserving) and discards, with index 0, the states that cannot reach the
    target at all.  Each subsequent round shrinks the surviving region to its
    confined attractor; states dropped in round ``k`` get index ``k``.  The
    fixpoint region is exactly the set of states with value one, and the
    complement is min-winning via any optimal minimizing choice.
    """
    targets = _check_targets(game, targets)
    g = rvi(game, targets) if any(o is Owner.MIN for o in game.owner.values()) else game
    index: dict[str, int | None] = {s: None for s in game.states}
    alive = set(_attractor(g, targets, set(g.states), exists=(Owner.MAX, Owner.RANDOM)))
    for s in g.states:
        if s not in alive:
            index[s] = 0
    rounds_with_removal = 0
    while True:
        kept = _confined_attractor(g, targets, alive)
        removed = alive - kept
        if not removed:
            break
        rounds_with_removal += 1
        for s in removed:
            index[s] = rounds_with_removal
        alive = kept
    max_wins = frozenset(alive)
    return WinningPartition(
        max_wins=max_wins,
        min_wins=frozenset(s for s in game.states if s not in max_wins),
        rounds=max(rounds_with_removal, 1),
        index=index,
    )


def almost_sure_safety(game: Game, targets) -> WinningPartition:
    """Partition for almost-sure safety.

    The maximizer wins from exactly the states where the opponent cannot
    touch the target with positive probability, i.e. the complement of the
    opponent's attractor (minimizer and random states need one successor in,
    maximizer states need all).  Indices record attractor layers.
    """
    targets = _check_targets(game, targets)
    layer: dict[str, int] = {}
    attr = _attractor(game, targets, set(game.states), exists=(Owner.MIN, Owner.RANDOM), layer=layer)
    index: dict[str, int | None] = {
        s: (layer[s] if s in attr else None) for s in game.states
    }
    return WinningPartition(
        max_wins=frozenset(s for s in game.states if s not in attr),
        min_wins=frozenset(attr),
        rounds=1,
        index=index,
    )


@dataclass(frozen=True)
class BuchiPeel:
    """Internals of the Buchi peeling, consumed by strategy synthesis."""

    partition: WinningPartition
    min_pick: dict[str, str]  # minimizer choices recorded during removal
    final_alive: tuple[str, ...]


def _patched_subgame(game: Game, alive: set[str], sink: str) -> Game:
    """Subgame on ``alive`` where every edge into a removed state is
    redirected to one absorbing losing sink (merged, weights summed)."""
    owner: dict[str, Owner] = {}
    succ: dict[str, tuple[str, ...]] = {}
    prob: dict[str, tuple[Fraction, ...]] = {}
    for s in game.states:
        if s not in alive:
            continue
        owner[s] = game.owner[s]
        kept: list[str] = []
        weights: list[Fraction] = []
        lost = Fraction(0)
        lost_edge = False
        for i, t in enumerate(game.succ[s]):
            if t in alive:
                kept.append(t)
                if game.owner[s] is Owner.RANDOM:
                    weights.append(game.prob[s][i])
            else:
                lost_edge = True
                if game.owner[s] is Owner.RANDOM:
                    lost += game.prob[s][i]
        if lost_edge:
            kept.append(sink)
            if game.owner[s] is Owner.RANDOM:
                weights.append(lost)
        succ[s] = tuple(kept)
        if game.owner[s] is Owner.RANDOM:
            prob[s] = tuple(weights)
    owner[sink] = Owner.MAX
    succ[sink] = (sink,)
    return Game(owner, succ, prob)


def buchi_peel(game: Game, buchi_set) -> BuchiPeel:
    """Iterated removal of states that cannot force revisits forever.

    Round by round: compute exact values of "reach the live Buchi set after
    at least one step" on the patched subgame; the states below one seed the
    removal, which is closed backward under minimizer and random transitions
    level by level; maximizer states stranded without successors by the
    removal are losing too and removed with the same round index.  Minimizer
    choices witnessing each removal are recorded: optimal minimizing (with an
    off-target escape on target states) for the seed level, a step into the
    previous level for closure states.
    """
    buchi_set = _check_targets(game, buchi_set)
    sink = "lost"
    while sink in game.owner:
        sink += "_"
    alive: list[str] = list(game.states)
    index: dict[str, int | None] = {s: None for s in game.states}
    min_pick: dict[str, str] = {}
    rounds_with_removal = 0
    round_no = 0
    while alive:
        round_no += 1
        alive_set = set(alive)
        sub = _patched_subgame(game, alive_set, sink)
        live_targets = {s for s in alive if s in buchi_set}
        vals = solve_reach_exact(sub, live_targets).values
        revisit = {s: bellman_combine(sub, vals, s) for s in alive}
        seed = [s for s in alive if revisit[s] < ONE]
        if not seed:
            break
        rounds_with_removal += 1
        for s in seed:
            index[s] = round_no
            if game.owner[s] is Owner.MIN:
                min_pick[s] = _min_escape(game, vals, revisit, s, alive_set)
        removed = set(seed)
        level = list(seed)
        while True:
            level_set = set(level)
            nxt = [
                s
                for s in alive
                if s not in removed
                and game.owner[s] in (Owner.MIN, Owner.RANDOM)
                and any(t in level_set for t in game.succ[s])
            ]
            if not nxt:
                break
            for s in nxt:
                index[s] = round_no
                if game.owner[s] is Owner.MIN:
                    min_pick[s] = next(t for t in game.succ[s] if t in level_set)
            removed.update(nxt)
            level = nxt
        alive = [s for s in alive if s not in removed]
        # Maximizer states stranded by the removal lose with this round's index.
        while True:
            alive_set = set(alive)
            dead = [
                s
                for s in alive
                if game.owner[s] is Owner.MAX
                and not any(t in alive_set for t in game.succ[s])
            ]
            if not dead:
                break
            for s in dead:
                index[s] = round_no
            alive = [s for s in alive if s not in set(dead)]

    max_wins = frozenset(alive)
    partition = WinningPartition(
        max_wins=max_wins,
        min_wins=frozenset(s for s in game.states if s not in max_wins),
        rounds=max(rounds_with_removal, 1),
        index=index,
    )
    return BuchiPeel(partition, min_pick, tuple(alive))


def _min_escape(game: Game, vals, revisit, s: str, alive: set[str]) -> str:
    """The recorded minimizer choice at a seed-level state.

    A successor whose patched plain value equals the revisit value; since the
    revisit value is below one, such a successor is never a live Buchi state,
    which on Buchi states gives exactly the required off-target escape.
    Successors already removed from the subgame count as losing (value zero)
    and are legal picks in the original game.
    """
    want = revisit[s]
    for t in game.succ[s]:
        value = vals[t] if t in alive else Fraction(0)
        if value == want:
            return t
    raise AssertionError(f"no minimizing escape at {s}")


def almost_sure_buchi(game: Game, buchi_set) -> WinningPartition:
    """Partition for almost-sure Buchi; see :func:`buchi_peel`."""
    return buchi_peel(game, buchi_set).partition
