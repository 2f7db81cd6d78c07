"""Quantitative state values for objectives on finite games.

Exact mode returns rationals from strategy iteration.  Iterative mode runs a
certified two-sided value iteration: the lower sequence climbs from the
target indicator, the upper sequence descends from one on the states that can
reach the target at all (everything else is exactly zero), and end components
without target states are periodically deflated to their best maximizer exit
so the upper sequence cannot stall above the value.  The reported error bound
is the final gap, which is sound in supremum norm.

Values of countable games are certified by interval pairs computed on a
pessimistic and an optimistic truncation of the same depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import winning
from .exact import bellman_combine, can_reach, solve_reach_exact
from .graphs import maximal_end_components
from .model import Game, LazyGame, Owner, SinkMode, swap_roles, truncate
from .objectives import ObjectiveKind, bounding_sinks

_DEFLATE_EVERY = 8
_MAX_SWEEPS = 2_000_000


@dataclass(frozen=True)
class ValueVector:
    """Per-state values in [0, 1].

    ``error_bound`` is ``None`` for exact rational vectors; otherwise it is a
    sound supremum-norm bound on the distance to the true value vector.
    """

    values: dict[str, Fraction] | dict[str, float]
    error_bound: float | None = None

    @property
    def is_exact(self) -> bool:
        return self.error_bound is None

    def __getitem__(self, state: str):
        return self.values[state]


@dataclass(frozen=True)
class IntervalValues:
    """Certified bounds from a pessimistic/optimistic truncation pair."""

    lower: ValueVector
    upper: ValueVector
    depth: int
    initial: str

    def at_initial(self) -> tuple:
        return self.lower[self.initial], self.upper[self.initial]

    def width_at_initial(self):
        lo, hi = self.at_initial()
        return hi - lo


def bellman_step(game: Game, targets, values) -> dict:
    """One Bellman application: targets to 1, max/min/average elsewhere.

    Pointwise monotone in ``values``; works on rationals and floats alike.
    """
    targets = set(targets)
    one = Fraction(1) if not _is_float_vector(values) else 1.0
    return {
        s: one if s in targets else bellman_combine(game, values, s)
        for s in game.states
    }


def _is_float_vector(values) -> bool:
    return any(isinstance(v, float) for v in values.values())


def value_reach(game: Game, targets, mode: str = "exact", tol=None) -> ValueVector:
    """Reach values: the least fixpoint of the Bellman step above the target
    indicator.  ``mode`` is ``"exact"`` or ``"iterate"`` (lower approximant
    within ``tol``)."""
    targets = set(targets)
    if mode == "exact":
        return ValueVector(solve_reach_exact(game, targets).values)
    if mode == "iterate":
        if tol is None or tol <= 0:
            raise ValueError("iterate mode needs a positive tolerance")
        lower, gap = _iterate_reach(game, targets, float(tol))
        return ValueVector(lower, error_bound=gap)
    raise ValueError(f"unknown mode {mode!r}")


def value_safety(game: Game, targets, mode: str = "exact", tol=None) -> ValueVector:
    """Safety values: one minus the opponent's reach value after swapping
    the players' roles.  The iterative form converges from above."""
    inner = value_reach(swap_roles(game), targets, mode=mode, tol=tol)
    one = Fraction(1) if inner.is_exact else 1.0
    return ValueVector(
        {s: one - v for s, v in inner.values.items()},
        error_bound=inner.error_bound,
    )


def value_reach_within(game: Game, targets, steps: int) -> ValueVector:
    """Exact values of reaching the target within ``steps`` steps."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    targets = set(targets)
    v = {s: Fraction(1 if s in targets else 0) for s in game.states}
    for _ in range(steps):
        v = bellman_step(game, targets, v)
    return ValueVector(v)


def epsilon_horizon(game: Game, targets, state: str, eps) -> int:
    """Least horizon whose bounded-reach value at ``state`` exceeds the
    unbounded value minus ``eps``.  Exists on every finite game."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if eps >= 1:
        return 0
    targets = set(targets)
    goal = solve_reach_exact(game, targets).values[state] - eps
    v = {s: Fraction(1 if s in targets else 0) for s in game.states}
    horizon = 0
    while v[state] <= goal:
        v = bellman_step(game, targets, v)
        horizon += 1
    return horizon


def value_buchi(game: Game, buchi_set, mode: str = "exact", tol=None) -> ValueVector:
    """Buchi values on finite games.

    Computed as the reach value of the almost-sure Buchi winning region: on a
    finite game the maximizer wins with exactly the probability of reaching
    the region where it can win outright.  Cross-checked against the
    enumeration oracle in the test suite; not assumed for countable games.
    """
    region = winning.almost_sure_buchi(game, buchi_set).max_wins
    return value_reach(game, region, mode=mode, tol=tol)


def value_cobuchi(game: Game, target, mode: str = "exact", tol=None) -> ValueVector:
    """Co-Buchi values via duality with the role-swapped Buchi game."""
    inner = value_buchi(swap_roles(game), target, mode=mode, tol=tol)
    one = Fraction(1) if inner.is_exact else 1.0
    return ValueVector(
        {s: one - v for s, v in inner.values.items()},
        error_bound=inner.error_bound,
    )


_SOLVERS = {
    ObjectiveKind.REACH: value_reach,
    ObjectiveKind.SAFETY: value_safety,
    ObjectiveKind.BUCHI: value_buchi,
    ObjectiveKind.COBUCHI: value_cobuchi,
}


def interval_values(
    base: LazyGame,
    kind: ObjectiveKind,
    depth: int,
    label: str = "target",
    mode: str = "exact",
    tol=None,
) -> IntervalValues:
    """Certified value bounds for a lazy game at one truncation depth.

    The target set is read from the per-state ``label`` flags produced by the
    generator.  Soundness: the true value at the initial state lies between
    the two bounds by sink monotonicity.
    """
    if kind not in _SOLVERS:
        raise ValueError(f"interval bounds are defined for {sorted(k.value for k in _SOLVERS)}")
    lower_mode, upper_mode = bounding_sinks(kind)
    solver = _SOLVERS[kind]

    def solve(sink_mode: SinkMode) -> ValueVector:
        trunc = truncate(base, depth, sink_mode)
        return solver(trunc.game, trunc.label_set(label), mode=mode, tol=tol)

    return IntervalValues(
        lower=solve(lower_mode),
        upper=solve(upper_mode),
        depth=depth,
        initial=base.initial,
    )


def _iterate_reach(game: Game, targets: set[str], tol: float) -> tuple[dict[str, float], float]:
    reachable = can_reach(game, targets)
    states = game.states
    float_prob = {
        s: tuple(float(w) for w in game.prob[s])
        for s in states
        if game.owner[s] is Owner.RANDOM
    }

    def sweep(v: dict[str, float]) -> dict[str, float]:
        out = {}
        for s in states:
            if s in targets:
                out[s] = 1.0
            elif s not in reachable:
                out[s] = 0.0
            else:
                o = game.owner[s]
                if o is Owner.MAX:
                    out[s] = max(v[t] for t in game.succ[s])
                elif o is Owner.MIN:
                    out[s] = min(v[t] for t in game.succ[s])
                else:
                    out[s] = sum(w * v[t] for w, t in zip(float_prob[s], game.succ[s]))
        return out

    lower = {s: 1.0 if s in targets else 0.0 for s in states}
    upper = {s: 1.0 if s in reachable else 0.0 for s in states}
    for sweep_no in range(1, _MAX_SWEEPS + 1):
        lower = sweep(lower)
        upper = sweep(upper)
        if sweep_no % _DEFLATE_EVERY == 0:
            _deflate(game, targets, reachable, lower, upper)
        gap = max(upper[s] - lower[s] for s in states)
        if gap <= tol:
            return lower, gap
    raise AssertionError("interval iteration did not converge")


def _deflate(game: Game, targets: set[str], reachable: set[str],
             lower: dict[str, float], upper: dict[str, float]) -> None:
    """Cap the upper bound of target-free end components by their best
    maximizer exit.

    Sound because inside such a component the minimizer can refuse to leave,
    so the maximizer's value is at most the best value it can exit to (zero
    if it cannot exit at all).  Minimizer edges are narrowed to the ones
    optimal for the current lower bound so the components found shrink onto
    the ones the minimizer would actually defend.
    """

    def allowed(s: str):
        if game.owner[s] is Owner.MIN:
            best = min(lower[t] for t in game.succ[s])
            return [t for t in game.succ[s] if lower[t] == best]
        return game.succ[s]

    for comp in maximal_end_components(game, [s for s in game.states if s in reachable], allowed):
        members = set(comp)
        if members & targets:
            continue
        cap = 0.0
        for s in comp:
            if game.owner[s] is Owner.MAX:
                for t in game.succ[s]:
                    if t not in members:
                        cap = max(cap, upper[t])
        for s in comp:
            if upper[s] > cap:
                upper[s] = cap
