"""Exact reachability solvers over rationals.

Reach probabilities of a fixed strategy pair are absorption probabilities of
a finite Markov chain and are obtained by Gaussian elimination over
``Fraction``.  Optimal values come from strategy iteration over maximizer
policies, each evaluated by an exact minimizer best response.

The minimizer best response needs one guard: inside the region where the
minimizer can avoid the target outright (the complement of the positive
attractor) its policy is pinned to stay there, because one-step improvement
cannot discover such avoidance on its own (a self-loop looks no better than
the current move).  With that region pinned to its true value zero, a policy
with no strictly improving switch is optimal: any two pinned fixpoints would
have to differ on a recurrent class the minimizer confines, and such a class
lies inside the pinned region.  A maximizer policy with no strictly
improving switch against its best-response values is optimal too: the values
are then a full Bellman fixpoint, hence at least the game value (the least
fixpoint), and they are realized against the actual minimizer, hence at most
it.  Tie-breaks keep the incumbent choice and prefer earlier successors, so
results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import Game, Owner

ZERO = Fraction(0)
ONE = Fraction(1)

# Generous global guard: improvement is strictly monotone, so hitting this
# bound means a broken improvement step rather than a hard instance.
_MAX_ROUNDS = 100_000


def gauss_solve(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a square rational system in place (partial pivoting on != 0)."""
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular system")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def _choice_successors(game: Game, choice: dict[str, str], s: str) -> tuple[tuple[str, Fraction], ...]:
    if game.owner[s] is Owner.RANDOM:
        return game.distribution(s)
    return ((choice[s], ONE),)


def can_reach(game: Game, targets: set[str], choice: dict[str, str] | None = None) -> set[str]:
    """States with some path to ``targets`` (restricted to ``choice`` edges
    at owned states when a choice map is given)."""
    preds: dict[str, list[str]] = {s: [] for s in game.states}
    for s in game.states:
        if choice is not None and game.owner[s] is not Owner.RANDOM:
            preds[choice[s]].append(s)
        else:
            for t in game.succ[s]:
                preds[t].append(s)
    seen = set(t for t in targets if t in game.owner)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for p in preds[s]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


def chain_reach_values(game: Game, choice: dict[str, str], targets: set[str]) -> dict[str, Fraction]:
    """Exact reach probabilities when both players' moves are fixed.

    ``choice`` must cover every owned state.  States that cannot reach the
    target in the induced chain get probability exactly 0; the remaining
    states form a linear system with a unique solution.
    """
    relevant = can_reach(game, targets, choice)
    unknowns = [s for s in game.states if s in relevant and s not in targets]
    index = {s: i for i, s in enumerate(unknowns)}
    n = len(unknowns)
    matrix = [[ZERO] * n for _ in range(n)]
    rhs = [ZERO] * n
    for s in unknowns:
        i = index[s]
        matrix[i][i] += ONE
        for t, w in _choice_successors(game, choice, s):
            if t in targets:
                rhs[i] += w
            elif t in index:
                matrix[i][index[t]] -= w
            # else: successor has reach probability exactly 0
    solution = gauss_solve(matrix, rhs) if n else []
    values = {s: ZERO for s in game.states}
    for t in targets:
        if t in game.owner:
            values[t] = ONE
    for s, i in index.items():
        values[s] = solution[i]
    return values


@dataclass(frozen=True)
class ExactSolution:
    """Exact game values plus the optimal MD pair found by iteration.

    ``max_choice`` is uniformly optimal: fixing it, the minimizer's best
    response still realizes the values at every state.
    """

    values: dict[str, Fraction]
    max_choice: dict[str, str]
    min_choice: dict[str, str]


def positive_attractor(game: Game, targets: set[str],
                       sigma: dict[str, str] | None = None) -> set[str]:
    """States from which the target is reached with positive probability
    against the minimizer (maximizer restricted to ``sigma`` if given)."""
    preds: dict[str, list[str]] = {s: [] for s in game.states}
    for s in game.states:
        if sigma is not None and game.owner[s] is Owner.MAX:
            preds[sigma[s]].append(s)
        else:
            for t in game.succ[s]:
                preds[t].append(s)
    inside = set(targets)
    missing = {
        s: len(game.succ[s])
        for s in game.states
        if game.owner[s] is Owner.MIN and s not in inside
    }
    stack = sorted(inside)
    while stack:
        s = stack.pop()
        for p in preds[s]:
            if p in inside:
                continue
            if game.owner[p] is Owner.MIN:
                missing[p] -= 1
                if missing[p] > 0:
                    continue
            inside.add(p)
            stack.append(p)
    return inside


def min_best_response(game: Game, targets: set[str],
                      sigma: dict[str, str]) -> tuple[dict[str, Fraction], dict[str, str]]:
    """Exact minimizer best response against a fixed maximizer policy.

    Inside the avoidance region (no positive reach against this maximizer)
    the minimizer is pinned to a move that stays there; outside it, strictly
    improving one-step switches iterate to the unique pinned fixpoint.
    """
    attractor = positive_attractor(game, targets, sigma)
    pi: dict[str, str] = {}
    frozen: set[str] = set()
    for s in game.states:
        if game.owner[s] is not Owner.MIN:
            continue
        if s not in attractor:
            # Some successor stays out of the attractor, else s would be in it.
            pi[s] = next(t for t in game.succ[s] if t not in attractor)
            frozen.add(s)
        else:
            pi[s] = game.succ[s][0]
    for _ in range(_MAX_ROUNDS):
        choice = dict(sigma)
        choice.update(pi)
        values = chain_reach_values(game, choice, targets)
        improved = False
        for s in game.states:
            if game.owner[s] is not Owner.MIN or s in frozen or s in targets:
                continue
            best = min(game.succ[s], key=lambda t: (values[t], game.succ[s].index(t)))
            if values[best] < values[s]:
                pi[s] = best
                improved = True
        if not improved:
            return values, pi
    raise AssertionError("minimizer policy iteration did not converge")


def solve_reach_exact(game: Game, targets) -> ExactSolution:
    """Exact reach values and an optimal MD pair.

    Maximizer strategy iteration with exact best-response evaluations: switch
    to a strictly better successor under the current evaluation, re-evaluate,
    stop when no switch is left.  The evaluation sequence is strictly
    increasing, so the loop terminates, and a switch-free policy realizes a
    Bellman fixpoint that is squeezed onto the game value.
    """
    targets = set(targets)
    unknown = targets - set(game.owner)
    if unknown:
        raise ValueError(f"target states not in game: {sorted(unknown)}")
    sigma = {s: game.succ[s][0] for s in game.states if game.owner[s] is Owner.MAX}
    previous: dict[str, Fraction] | None = None
    for _ in range(_MAX_ROUNDS):
        values, pi = min_best_response(game, targets, sigma)
        if previous is not None:
            assert all(values[s] >= previous[s] for s in game.states), "improvement cycle"
        previous = values
        improved = False
        for s in game.states:
            if game.owner[s] is not Owner.MAX or s in targets:
                continue
            best = max(game.succ[s], key=lambda t: (values[t], -game.succ[s].index(t)))
            if values[best] > values[s]:
                sigma[s] = best
                improved = True
        if not improved:
            return ExactSolution(values, sigma, pi)
    raise AssertionError("maximizer strategy iteration did not converge")


def bellman_combine(game: Game, values, s: str) -> Fraction:
    """One Bellman application at ``s`` without the target override."""
    o = game.owner[s]
    if o is Owner.MAX:
        return max(values[t] for t in game.succ[s])
    if o is Owner.MIN:
        return min(values[t] for t in game.succ[s])
    return sum((w * values[t] for t, w in game.distribution(s)), ZERO)


def reach_plus_values(game: Game, targets, values: dict[str, Fraction] | None = None) -> dict[str, Fraction]:
    """Values of "visit the target after at least one step".

    Off target these coincide with plain reach values; on target states the
    value is one owner-appropriate combination of the plain reach values of
    the successors, i.e. a single Bellman application without the target
    override.
    """
    targets = set(targets)
    if values is None:
        values = solve_reach_exact(game, targets).values
    return {s: bellman_combine(game, values, s) for s in game.states}
