"""Strategy representations and memoryless deterministic constructions.

The maximizer constructions all follow one recipe: keep only value-preserving
choices and break ties by a progress rank so that value-preserving cycles
that never cash out are avoided.  The rank is a layered backward closure from
the states where the value resolves (targets, zero states, and random states
whose support straddles value levels), computed over value-preserving edges
with an existential step for maximizer and random states and a universal step
for minimizer states.  Every construction is validated in the test suite by
fixing the strategy and re-solving the residual one-player game exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import winning
from .exact import reach_plus_values, solve_reach_exact
from .model import Game, Owner

ONE = Fraction(1)
ZERO = Fraction(0)


@dataclass(frozen=True)
class MDStrategy:
    """A memoryless deterministic strategy: one successor per owned state."""

    owner: Owner
    choice: dict[str, str]

    def check_total(self, game: Game) -> None:
        for s in game.states:
            if game.owner[s] is self.owner:
                if s not in self.choice:
                    raise ValueError(f"no choice at {s}")
                if self.choice[s] not in game.succ[s]:
                    raise ValueError(f"choice {s} -> {self.choice[s]} is not an edge")


@dataclass(frozen=True)
class TransducerStrategy:
    """A finite-memory randomized strategy as a probabilistic transducer.

    ``update`` maps (mode, observed state) to a distribution over modes and
    may omit pairs, which means the mode is kept.  ``choose`` maps (mode,
    owned state) to a distribution over successors.
    """

    owner: Owner
    modes: tuple[str, ...]
    initial: str
    update: dict[tuple[str, str], dict[str, Fraction]] = field(default_factory=dict)
    choose: dict[tuple[str, str], dict[str, Fraction]] = field(default_factory=dict)

    def check(self, game: Game) -> None:
        if self.initial not in self.modes:
            raise ValueError("initial mode is not a mode")
        for (mode, _), dist in self.update.items():
            if mode not in self.modes or sum(dist.values()) != 1:
                raise ValueError("bad update row")
        for (mode, s), dist in self.choose.items():
            if mode not in self.modes or sum(dist.values()) != 1:
                raise ValueError("bad successor row")
            for t in dist:
                if t not in game.succ[s]:
                    raise ValueError(f"successor row {s} -> {t} is not an edge")


def md_to_transducer(strategy: MDStrategy) -> TransducerStrategy:
    """The one-mode Dirac transducer of an MD strategy."""
    return TransducerStrategy(
        owner=strategy.owner,
        modes=("m0",),
        initial="m0",
        choose={("m0", s): {t: ONE} for s, t in strategy.choice.items()},
    )


def transducer_to_md(strategy: TransducerStrategy) -> MDStrategy:
    """Inverse of :func:`md_to_transducer`; requires one mode and Dirac rows."""
    if len(strategy.modes) != 1:
        raise ValueError("not memoryless")
    choice = {}
    for (_, s), dist in strategy.choose.items():
        if len(dist) != 1 or next(iter(dist.values())) != 1:
            raise ValueError("not deterministic")
        choice[s] = next(iter(dist))
    return MDStrategy(strategy.owner, choice)


def apply_md(game: Game, strategy: MDStrategy) -> Game:
    """Fix one player's moves, leaving a game where only the other plays."""
    strategy.check_total(game)
    succ = {
        s: ((strategy.choice[s],) if game.owner[s] is strategy.owner else game.succ[s])
        for s in game.states
    }
    return Game(dict(game.owner), succ, dict(game.prob))


class ValueDecreaseError(ValueError):
    """The maximizer has value-decreasing transitions; lists the witnesses."""

    def __init__(self, offenders: list[tuple[str, str]]):
        super().__init__(
            "maximizer has value-decreasing transitions: "
            + ", ".join(f"{s}->{t}" for s, t in offenders)
        )
        self.offenders = offenders


def optimal_min_md(game: Game, targets) -> MDStrategy:
    """An MD strategy optimal minimizing in every minimizer state.

    Any value-attaining choice works: fixing it makes the state values a
    supermartingale under every opposing strategy, so the reach probability
    never exceeds the value.  First in list order among the minimizers.
    """
    values = solve_reach_exact(game, set(targets)).values
    choice = {}
    for s in game.states:
        if game.owner[s] is Owner.MIN:
            choice[s] = min(game.succ[s], key=lambda t: (values[t], game.succ[s].index(t)))
    return MDStrategy(Owner.MIN, choice)


def _progress_ranks(game: Game, values, targets: set[str]) -> dict[str, float]:
    """Layers of forced progress within value levels.

    Rank 0 marks the resolution states; elsewhere the rank is one plus the
    best value-preserving successor rank for maximizer and random states and
    one plus the worst for minimizer states (a minimizer stuck without any
    value-preserving move resolves immediately).  Finite on every state with
    positive value: an unranked flat region would deny the maximizer any
    optimal strategy, which cannot happen in a finite game.
    """
    inf = float("inf")
    rank: dict[str, float] = {}
    flat: dict[str, list[str]] = {}
    for s in game.states:
        level = values[s]
        flat[s] = [t for t in game.succ[s] if values[t] == level]
        if s in targets or level == 0:
            rank[s] = 0
        elif game.owner[s] is Owner.RANDOM and len(flat[s]) != len(game.succ[s]):
            rank[s] = 0
        elif game.owner[s] is Owner.MIN and not flat[s]:
            rank[s] = 0
        else:
            rank[s] = inf

    for _ in range(4 * len(game.states) + 8):
        changed = False
        for s in game.states:
            if rank[s] == 0:
                continue
            if game.owner[s] is Owner.MIN:
                new = 1 + max(rank[t] for t in flat[s])
            else:
                new = 1 + min(rank[t] for t in flat[s])
            if new < rank[s]:
                rank[s] = new
                changed = True
        if not changed:
            break
    for s in game.states:
        if values[s] > 0:
            assert rank[s] != inf, f"no progress layer at {s}"
    return rank


def _uniform_max_choice(game: Game, values, targets: set[str]) -> dict[str, str]:
    """Value-preserving maximizer choices, tie-broken by progress rank."""
    rank = _progress_ranks(game, values, targets)
    choice = {}
    for s in game.states:
        if game.owner[s] is not Owner.MAX:
            continue
        if s in targets or values[s] == 0:
            choice[s] = game.succ[s][0]
            continue
        level = values[s]
        flat = [t for t in game.succ[s] if values[t] == level]
        choice[s] = min(flat, key=lambda t: (rank[t], game.succ[s].index(t)))
    return choice


def optimal_max_md(game: Game, targets) -> MDStrategy:
    """An MD strategy optimal maximizing in every state (finite games)."""
    targets = set(targets)
    values = solve_reach_exact(game, targets).values
    return MDStrategy(Owner.MAX, _uniform_max_choice(game, values, targets))


def optimal_max_md_no_decrease(game: Game, targets) -> MDStrategy:
    """The uniformly optimal maximizer MD strategy, requiring that the
    maximizer has no value-decreasing transitions (error with witnesses
    otherwise).

    Transitions leaving a target state are exempt from the requirement: the
    objective is decided there, so their values are pinned rather than
    Bellman-consistent and the choice at them cannot matter.
    """
    targets = set(targets)
    values = solve_reach_exact(game, targets).values
    offenders = [
        (s, t)
        for s in game.states
        if game.owner[s] is Owner.MAX and s not in targets
        for t in game.succ[s]
        if values[t] < values[s]
    ]
    if offenders:
        raise ValueDecreaseError(offenders)
    return MDStrategy(Owner.MAX, _uniform_max_choice(game, values, targets))


def reachplus_min_md(game: Game, targets) -> MDStrategy:
    """Optimal minimizing MD strategy for "visit the target after >= 1 step".

    Off the target this is the plain optimal minimizing choice; a target
    state with revisit value below one steps to an off-target successor of
    exactly that value, which always exists.
    """
    targets = set(targets)
    values = solve_reach_exact(game, targets).values
    vplus = reach_plus_values(game, targets, values)
    choice = {}
    for s in game.states:
        if game.owner[s] is not Owner.MIN:
            continue
        if s not in targets:
            choice[s] = min(game.succ[s], key=lambda t: (values[t], game.succ[s].index(t)))
        elif vplus[s] == 1:
            choice[s] = game.succ[s][0]
        else:
            choice[s] = next(
                t for t in game.succ[s] if t not in targets and values[t] == vplus[s]
            )
    return MDStrategy(Owner.MIN, choice)


def reachplus_max_md(game: Game, targets) -> MDStrategy:
    """Optimal maximizing MD strategy for "visit the target after >= 1 step".

    Requires that the maximizer has no transitions decreasing the revisit
    value.  Off the target this is the uniform plain-reach construction; a
    target state steps into the target again or to a revisit-value-preserving
    successor, preferring the smaller progress rank.
    """
    targets = set(targets)
    values = solve_reach_exact(game, targets).values
    vplus = reach_plus_values(game, targets, values)
    offenders = [
        (s, t)
        for s in game.states
        if game.owner[s] is Owner.MAX and s not in targets
        for t in game.succ[s]
        if vplus[t] < vplus[s]
    ]
    if offenders:
        raise ValueDecreaseError(offenders)
    rank = _progress_ranks(game, values, targets)
    choice = _uniform_max_choice(game, values, targets)
    for s in game.states:
        if game.owner[s] is not Owner.MAX or s not in targets:
            continue
        candidates = [
            t for t in game.succ[s] if t in targets or vplus[t] == vplus[s]
        ]
        assert candidates, f"no revisit-preserving successor at {s}"
        choice[s] = min(candidates, key=lambda t: (rank[t], game.succ[s].index(t)))
    return MDStrategy(Owner.MAX, choice)


def buchi_md_pair(game: Game, buchi_set) -> tuple[MDStrategy, MDStrategy]:
    """The MD pair certifying the almost-sure Buchi partition.

    The maximizer side is the revisit-optimal construction on the final
    surviving subgame, extended first-in-list off it; it never leaves the
    winning region.  The minimizer side replays the choices recorded during
    peeling: the optimal minimizing escape at removal seeds and a step into
    the previous closure level elsewhere.
    """
    peel = winning.buchi_peel(game, set(buchi_set))
    alive = set(peel.final_alive)

    sigma_choice: dict[str, str] = {}
    pi_choice: dict[str, str] = dict(peel.min_pick)
    for s in game.states:
        if game.owner[s] is Owner.MAX and s not in alive:
            sigma_choice[s] = game.succ[s][0]
        if game.owner[s] is Owner.MIN and s not in pi_choice:
            pi_choice[s] = game.succ[s][0]

    if alive:
        owner = {s: game.owner[s] for s in game.states if s in alive}
        succ: dict[str, tuple[str, ...]] = {}
        for s in owner:
            if game.owner[s] is Owner.MAX:
                kept = tuple(t for t in game.succ[s] if t in alive)
                assert kept, "a surviving maximizer state keeps a surviving move"
                succ[s] = kept
            else:
                assert all(t in alive for t in game.succ[s]), \
                    "minimizer and random moves never leave the winning region"
                succ[s] = game.succ[s]
        prob = {s: game.prob[s] for s in owner if game.owner[s] is Owner.RANDOM}
        subgame = Game(owner, succ, prob)
        inner = reachplus_max_md(subgame, {s for s in alive if s in set(buchi_set)})
        sigma_choice.update(inner.choice)

    return MDStrategy(Owner.MAX, sigma_choice), MDStrategy(Owner.MIN, pi_choice)


@dataclass(frozen=True)
class ThresholdVerdict:
    """Outcome of the threshold decision: the winner, a witnessing MD
    strategy when one is produced, and the case tag that decided."""

    winner: str  # "max" | "min" | "out-of-scope"
    strategy: MDStrategy | None
    reason: str


def threshold_decide(game: Game, targets, threshold, strict: bool, start: str) -> ThresholdVerdict:
    """Decide who wins the threshold reachability objective from ``start``.

    Below the value the minimizer wins with an optimal minimizing strategy;
    above it the maximizer wins with the uniformly optimal strategy.  At the
    value: strict thresholds go to the minimizer; otherwise the maximizer
    wins when it has no value-decreasing transitions, when the minimizer has
    no value-increasing transitions (decided on the residual game with the
    decreasing transitions removed), or when the threshold is one.  The one
    remaining configuration is reported as out of scope: determinacy still
    holds but no MD certificate is constructed here.
    """
    c = Fraction(threshold)
    if not 0 <= c <= 1:
        raise ValueError("threshold must be within [0, 1]")
    targets = set(targets)
    values = solve_reach_exact(game, targets).values
    v0 = values[start]

    if v0 < c:
        return ThresholdVerdict("min", optimal_min_md(game, targets), "value<c")
    if v0 > c:
        return ThresholdVerdict("max", optimal_max_md(game, targets), "value>c-finite-horizon")
    if strict:
        return ThresholdVerdict("min", optimal_min_md(game, targets), "case-4")
    if c == 0:
        any_move = MDStrategy(
            Owner.MAX,
            {s: game.succ[s][0] for s in game.states if game.owner[s] is Owner.MAX},
        )
        return ThresholdVerdict("max", any_move, "threshold-vacuous")

    max_decreasing = [
        (s, t)
        for s in game.states
        if game.owner[s] is Owner.MAX and s not in targets
        for t in game.succ[s]
        if values[t] < values[s]
    ]
    if not max_decreasing:
        return ThresholdVerdict(
            "max", optimal_max_md_no_decrease(game, targets), "case-1"
        )
    min_increasing = [
        (s, t)
        for s in game.states
        if game.owner[s] is Owner.MIN and s not in targets
        for t in game.succ[s]
        if values[t] > values[s]
    ]
    if not min_increasing:
        # Residual game without the maximizer's decreasing transitions: value
        # preserving, and the no-decrease construction applies on it.
        bad = set(max_decreasing)
        succ = {
            s: (
                tuple(t for t in game.succ[s] if (s, t) not in bad)
                if game.owner[s] is Owner.MAX
                else game.succ[s]
            )
            for s in game.states
        }
        residual = Game(dict(game.owner), succ, dict(game.prob))
        return ThresholdVerdict(
            "max", optimal_max_md_no_decrease(residual, targets), "case-2"
        )
    if c == 1:
        return ThresholdVerdict("max", optimal_max_md(game, targets), "case-3")
    return ThresholdVerdict("out-of-scope", None, "none-applicable")


def format_strategy(strategy: MDStrategy | TransducerStrategy) -> str:
    """Serialize a strategy; round-trippable and diffable."""
    if isinstance(strategy, MDStrategy):
        lines = [f"strategy {strategy.owner.value} md"]
        lines += [f"choose {s} {t}" for s, t in strategy.choice.items()]
        return "\n".join(lines) + "\n"
    lines = [f"strategy {strategy.owner.value} transducer", f"initial {strategy.initial}"]
    lines += [f"mode {m}" for m in strategy.modes]
    for (mode, s), dist in strategy.update.items():
        for m2, w in dist.items():
            lines.append(f"update {mode} {s} {m2} {w.numerator}/{w.denominator}")
    for (mode, s), dist in strategy.choose.items():
        for t, w in dist.items():
            lines.append(f"choose {mode} {s} {t} {w.numerator}/{w.denominator}")
    return "\n".join(lines) + "\n"


def parse_strategy(text: str) -> MDStrategy | TransducerStrategy:
    lines = [
        (no, raw.split("#", 1)[0].split())
        for no, raw in enumerate(text.splitlines(), start=1)
        if raw.split("#", 1)[0].strip()
    ]
    if not lines or lines[0][1][0] != "strategy" or len(lines[0][1]) != 3:
        raise ValueError("strategy file must start with: strategy max|min md|transducer")
    _, header = lines[0]
    owner = Owner(header[1])
    form = header[2]
    if form == "md":
        choice = {}
        for no, toks in lines[1:]:
            if toks[0] != "choose" or len(toks) != 3:
                raise ValueError(f"line {no}: expected: choose <state> <successor>")
            choice[toks[1]] = toks[2]
        return MDStrategy(owner, choice)
    if form != "transducer":
        raise ValueError(f"unknown strategy form {form!r}")
    modes: list[str] = []
    initial = None
    update: dict[tuple[str, str], dict[str, Fraction]] = {}
    choose: dict[tuple[str, str], dict[str, Fraction]] = {}
    for no, toks in lines[1:]:
        if toks[0] == "initial" and len(toks) == 2:
            initial = toks[1]
        elif toks[0] == "mode" and len(toks) == 2:
            modes.append(toks[1])
        elif toks[0] == "update" and len(toks) == 5:
            update.setdefault((toks[1], toks[2]), {})[toks[3]] = Fraction(toks[4])
        elif toks[0] == "choose" and len(toks) == 5:
            choose.setdefault((toks[1], toks[2]), {})[toks[3]] = Fraction(toks[4])
        else:
            raise ValueError(f"line {no}: malformed transducer row")
    if initial is None:
        raise ValueError("transducer needs an initial mode")
    return TransducerStrategy(owner, tuple(modes), initial, update, choose)
