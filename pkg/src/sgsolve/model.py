"""Turn-based stochastic game graphs.

A finite game has three kinds of states: maximizer states, minimizer states
and random states.  Successor lists are ordered and duplicate-free; every
tie-break elsewhere in the package is "first in list order", so a game's
declaration order fully determines every solver output.

Countable games are represented lazily by a successor generator
(:class:`LazyGame`) and made finite by breadth-first truncation with an
absorbing sink (:func:`truncate`).  Games and truncations are immutable after
construction and safe to share between threads; a lazy game's ``expand``
callback must be pure and reentrant.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction


class Owner(Enum):
    """Who moves at a state."""

    MAX = "max"
    MIN = "min"
    RANDOM = "rand"


def _as_fraction(w) -> Fraction:
    if isinstance(w, Fraction):
        return w
    if isinstance(w, int):
        return Fraction(w)
    if isinstance(w, str):
        return Fraction(w)
    raise TypeError(f"not an exact rational weight: {w!r}")


@dataclass(frozen=True)
class Game:
    """A finite turn-based stochastic game graph.

    ``owner`` maps each state to its kind, ``succ`` to its ordered successor
    list, and ``prob`` gives, for each random state, exact positive rational
    weights aligned with its successor list and summing to one.  State order
    is the insertion order of ``owner``.
    """

    owner: dict[str, Owner]
    succ: dict[str, tuple[str, ...]]
    prob: dict[str, tuple[Fraction, ...]]

    @property
    def states(self) -> tuple[str, ...]:
        return tuple(self.owner)

    def successors(self, s: str) -> tuple[str, ...]:
        return self.succ[s]

    def distribution(self, s: str) -> tuple[tuple[str, Fraction], ...]:
        """Successor/weight pairs of a random state."""
        return tuple(zip(self.succ[s], self.prob[s]))

    def is_absorbing(self, s: str) -> bool:
        return self.succ[s] == (s,)

    @classmethod
    def of(cls, rows: Iterable[Sequence]) -> "Game":
        """Build a game from rows ``(id, owner, successors[, weights])``.

        ``owner`` may be an :class:`Owner` or one of ``"max"/"min"/"rand"``;
        weights are required exactly for random states and may be ints,
        ``Fraction`` values or strings like ``"1/2"``.
        """
        owner: dict[str, Owner] = {}
        succ: dict[str, tuple[str, ...]] = {}
        prob: dict[str, tuple[Fraction, ...]] = {}
        for row in rows:
            sid, who = row[0], row[1]
            who = who if isinstance(who, Owner) else Owner(who)
            if sid in owner:
                raise ValueError(f"duplicate state {sid!r}")
            owner[sid] = who
            succ[sid] = tuple(row[2])
            if who is Owner.RANDOM:
                if len(row) < 4 or row[3] is None:
                    raise ValueError(f"random state {sid!r} needs weights")
                prob[sid] = tuple(_as_fraction(w) for w in row[3])
            elif len(row) >= 4 and row[3] is not None:
                raise ValueError(f"owned state {sid!r} must not carry weights")
        return cls(owner, succ, prob)


def swap_roles(game: Game) -> Game:
    """The same graph with maximizer and minimizer exchanged."""
    flipped = {
        s: (Owner.MIN if o is Owner.MAX else Owner.MAX if o is Owner.MIN else o)
        for s, o in game.owner.items()
    }
    return Game(flipped, dict(game.succ), dict(game.prob))


@dataclass(frozen=True)
class Violation:
    """One structural defect found by :func:`validate`."""

    kind: str  # dead-end | weight-sum | weight-shape | nonpositive-weight | dangling-id | duplicate-edge
    state: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} at {self.state}: {self.detail}"


def validate(game: Game) -> list[Violation]:
    """Check the game invariants; an empty list means the game is well formed.

    Violations are data, not exceptions: dead ends, random weights that do
    not sum to one (or are not positive), successor ids that are not states,
    and duplicate successor entries.
    """
    out: list[Violation] = []
    ids = set(game.owner)
    for s in game.states:
        succs = game.succ.get(s, ())
        if not succs:
            out.append(Violation("dead-end", s, "state has no successor"))
        seen = set()
        for t in succs:
            if t not in ids:
                out.append(Violation("dangling-id", s, f"successor {t!r} is not a state"))
            if t in seen:
                out.append(Violation("duplicate-edge", s, f"successor {t!r} listed twice"))
            seen.add(t)
        if game.owner[s] is Owner.RANDOM:
            weights = game.prob.get(s, ())
            if len(weights) != len(succs):
                out.append(
                    Violation(
                        "weight-shape",
                        s,
                        f"{len(weights)} weights for {len(succs)} successors",
                    )
                )
                continue
            for w in weights:
                if w <= 0:
                    out.append(Violation("nonpositive-weight", s, f"weight {w} is not positive"))
            total = sum(weights, Fraction(0))
            if succs and total != 1:
                out.append(Violation("weight-sum", s, f"weights sum to {total}, expected 1"))
    return out


@dataclass(frozen=True)
class StateInfo:
    """What a lazy game's ``expand`` returns for one state.

    ``labels`` carries per-state objective membership flags (for example
    ``{"target"}`` or ``{"buchi"}``) so objectives can be bound to a
    truncation without materializing the full game.
    """

    owner: Owner
    successors: tuple[str, ...]
    weights: tuple[Fraction, ...] | None = None
    labels: frozenset[str] = frozenset()


@dataclass(frozen=True)
class LazyGame:
    """A countable, finitely branching game given by a successor generator.

    ``expand`` must be deterministic: repeated calls on the same id return
    identical results.  When ``branching_bound`` is set, no expansion may
    return a longer successor list.
    """

    initial: str
    expand: Callable[[str], StateInfo]
    branching_bound: int | None = None


class TruncationError(RuntimeError):
    """Raised when an expansion diverges (empty or over-bound successor list)."""


class SinkMode(Enum):
    """How the truncation sink is labelled.

    The pessimistic sink is absorbing and belongs to no label set; the
    optimistic sink is absorbing and belongs to every label set.  Which sink
    bounds which side of an objective is decided by the objectives module.
    """

    PESSIMISTIC = "pessimistic"
    OPTIMISTIC = "optimistic"


@dataclass(frozen=True)
class Truncation:
    """A finite window of a lazy game with an absorbing sink at the frontier.

    ``game`` contains every state reachable from ``base.initial`` within
    ``depth`` steps plus ``sink``; ``frontier`` holds the ids of the states
    that were replaced by the sink.  ``labels`` maps each label seen during
    expansion to its member set (including the sink in optimistic mode).
    """

    base: LazyGame
    depth: int
    mode: SinkMode
    game: Game
    sink: str
    frontier: frozenset[str]
    labels: dict[str, frozenset[str]] = field(default_factory=dict)

    def label_set(self, label: str) -> frozenset[str]:
        members = self.labels.get(label, frozenset())
        if self.mode is SinkMode.OPTIMISTIC:
            return members | {self.sink}
        return members


def truncate(base: LazyGame, depth: int, mode: SinkMode) -> Truncation:
    """Expand ``base`` breadth-first to ``depth`` steps and close it off.

    Every edge that leaves the expanded set is redirected to a single
    absorbing sink; parallel redirected edges are merged (weights summed for
    random states) to keep successor lists duplicate-free.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    info: dict[str, StateInfo] = {}
    dist = {base.initial: 0}
    queue = deque([base.initial])
    while queue:
        s = queue.popleft()
        st = base.expand(s)
        if not st.successors:
            raise TruncationError(f"expand({s!r}) returned no successors")
        if base.branching_bound is not None and len(st.successors) > base.branching_bound:
            raise TruncationError(
                f"expand({s!r}) returned {len(st.successors)} successors, "
                f"bound is {base.branching_bound}"
            )
        info[s] = st
        if dist[s] == depth:
            continue
        for t in st.successors:
            if t not in dist:
                dist[t] = dist[s] + 1
                queue.append(t)

    sink = "sink"
    while sink in info:
        sink += "_"

    owner: dict[str, Owner] = {}
    succ: dict[str, tuple[str, ...]] = {}
    prob: dict[str, tuple[Fraction, ...]] = {}
    frontier: set[str] = set()
    labels: dict[str, set[str]] = {}
    for s, st in info.items():
        owner[s] = st.owner
        for lab in st.labels:
            labels.setdefault(lab, set()).add(s)
        kept: list[str] = []
        weights: list[Fraction] = []
        sink_mass = Fraction(0)
        sink_edge = False
        for i, t in enumerate(st.successors):
            if t in info:
                kept.append(t)
                if st.owner is Owner.RANDOM:
                    weights.append(st.weights[i])
            else:
                frontier.add(t)
                sink_edge = True
                if st.owner is Owner.RANDOM:
                    sink_mass += st.weights[i]
        if sink_edge:
            kept.append(sink)
            if st.owner is Owner.RANDOM:
                weights.append(sink_mass)
        succ[s] = tuple(kept)
        if st.owner is Owner.RANDOM:
            prob[s] = tuple(weights)
    owner[sink] = Owner.MAX
    succ[sink] = (sink,)

    return Truncation(
        base=base,
        depth=depth,
        mode=mode,
        game=Game(owner, succ, prob),
        sink=sink,
        frontier=frozenset(frontier),
        labels={lab: frozenset(members) for lab, members in labels.items()},
    )
