"""Shared test helpers: a seeded random-game generator and independent
closed-form oracles (kept free of the solver machinery they referee)."""

from __future__ import annotations

import random
from fractions import Fraction

from sgsolve import Game


def random_game(seed: int, n: int = 8, max_branch: int = 3, owned_branch: int = 2,
                max_targets: int = 2) -> tuple[Game, frozenset[str]]:
    """A seeded random game with no dead ends and exact weights summing to 1.

    Owned branching is kept small so the MD strategy-pair product stays well
    inside the enumeration oracle's bound.
    """
    rng = random.Random(seed)
    ids = [f"s{i}" for i in range(n)]
    rows = []
    for s in ids:
        owner = rng.choice(("max", "min", "rand"))
        width = max_branch if owner == "rand" else owned_branch
        succs = rng.sample(ids, rng.randint(1, min(width, n)))
        if owner == "rand":
            raw = [rng.randint(1, 4) for _ in succs]
            total = sum(raw)
            rows.append((s, owner, succs, [Fraction(x, total) for x in raw]))
        else:
            rows.append((s, owner, succs))
    targets = frozenset(rng.sample(ids, rng.randint(1, max_targets)))
    return Game.of(rows), targets


def ruin_probability(p: Fraction, cap: int, wealth: int) -> Fraction:
    """Closed-form gambler's ruin: probability of hitting 0 before ``cap``
    when winning one unit with probability ``p`` per round."""
    p = Fraction(p)
    q = 1 - p
    if p == q:
        return Fraction(cap - wealth, cap)
    r = q / p
    return (r**wealth - r**cap) / (1 - r**cap)
