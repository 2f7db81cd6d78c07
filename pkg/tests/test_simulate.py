"""Monte-Carlo sampling: reproducibility, consistency, window scoring."""

from fractions import Fraction

import pytest
from conftest import random_game, ruin_probability

from sgsolve import (
    Estimate,
    Game,
    Owner,
    SimConfig,
    buchi,
    optimal_max_md,
    optimal_min_md,
    reach,
    sample_plays,
)
from sgsolve import gallery
from sgsolve.strategies import MDStrategy

HALF = Fraction(1, 2)


def test_deterministic_game_gives_zero_one_mean():
    g = Game.of([("a", "max", ("b",)), ("b", "max", ("t", "b")), ("t", "max", ("t",))])
    sigma = MDStrategy(Owner.MAX, {"a": "b", "b": "t", "t": "t"})
    est = sample_plays(g, "a", reach("t"), SimConfig(samples=50, horizon=10, seed=1), sigma=sigma)
    assert est.mean == 1.0
    assert est.half_width_95 == 0.0
    assert est.decided_fraction == 1.0


def test_reruns_are_bit_identical():
    fig2 = gallery.build_fig2(8)
    cfg = SimConfig(samples=5000, horizon=120, seed=42)
    first = sample_plays(fig2.game, "r3", reach(*fig2.targets), cfg)
    second = sample_plays(fig2.game, "r3", reach(*fig2.targets), cfg)
    assert first == second


def test_fig2_chain_estimate_matches_exact_value():
    fig2 = gallery.build_fig2(8)
    est = sample_plays(
        fig2.game, "r3", reach(*fig2.targets), SimConfig(samples=20000, horizon=150, seed=7)
    )
    assert abs(est.mean - 7 / 8) <= 3 * est.half_width_95 + 1e-3


def test_gambler_estimate_matches_closed_form():
    built = gallery.build_gamblers_ruin(Fraction(3, 5), 20)
    est = sample_plays(
        built.game, "w1", reach(*built.targets), SimConfig(samples=20000, horizon=600, seed=3)
    )
    closed = float(ruin_probability(Fraction(3, 5), 20, 1))
    assert abs(est.mean - closed) <= 3 * est.half_width_95 + 1e-3


def test_strategy_pair_estimate_matches_game_value():
    fig2 = gallery.build_fig2(7)
    from sgsolve.exact import solve_reach_exact

    exact = float(solve_reach_exact(fig2.game, fig2.targets).values["i"])
    est = sample_plays(
        fig2.game,
        "i",
        reach(*fig2.targets),
        SimConfig(samples=20000, horizon=150, seed=5),
        sigma=optimal_max_md(fig2.game, fig2.targets),
        pi=optimal_min_md(fig2.game, fig2.targets),
    )
    assert abs(est.mean - exact) <= 3 * est.half_width_95 + 1e-3


def test_owner_mismatch_errors():
    fig2 = gallery.build_fig2(6)
    pi = optimal_min_md(fig2.game, fig2.targets)
    with pytest.raises(ValueError, match="owner mismatch"):
        sample_plays(
            fig2.game, "i", reach(*fig2.targets),
            SimConfig(samples=10, horizon=10, seed=0), sigma=pi,
        )
    with pytest.raises(ValueError, match="owner mismatch"):
        # Maximizer moves are needed on the upper ladder but no strategy given.
        sample_plays(
            fig2.game, "s0", reach(*fig2.targets),
            SimConfig(samples=10, horizon=10, seed=0), pi=pi,
        )


def test_buchi_window_scores_undecided_cycles():
    g = Game.of([("a", "max", ("b",)), ("b", "max", ("a",))])
    sigma = MDStrategy(Owner.MAX, {"a": "b", "b": "a"})
    est = sample_plays(
        g, "a", buchi("b"), SimConfig(samples=20, horizon=9, seed=0, buchi_window=2),
        sigma=sigma,
    )
    assert est.mean == 1.0
    assert est.decided_fraction == 0.0
    est = sample_plays(
        g, "a", buchi("b"), SimConfig(samples=20, horizon=9, seed=0, buchi_window=1),
        sigma=sigma,
    )
    assert est.decided_fraction == 0.0


def test_config_invariants():
    with pytest.raises(ValueError):
        SimConfig(samples=0, horizon=5, seed=1)
    with pytest.raises(ValueError):
        SimConfig(samples=1, horizon=1, seed=1, buchi_window=2)
    with pytest.raises(ValueError):
        SimConfig(samples=1, horizon=1, seed=1, buchi_window=0)
