"""Game construction, validation, and lazy-game truncation."""

from fractions import Fraction

import pytest

from sgsolve import (
    Game,
    LazyGame,
    Owner,
    SinkMode,
    StateInfo,
    TruncationError,
    swap_roles,
    truncate,
    validate,
)
from sgsolve import gallery

HALF = Fraction(1, 2)


def test_smallest_legal_game_is_valid():
    g = Game.of([("s", "max", ("s",))])
    assert validate(g) == []


def test_weight_sum_violation_reports_actual_sum():
    g = Game.of([
        ("a", "rand", ("t", "z"), (Fraction(1, 2), Fraction(1, 3))),
        ("t", "max", ("t",)),
        ("z", "max", ("z",)),
    ])
    violations = validate(g)
    assert len(violations) == 1
    assert violations[0].kind == "weight-sum"
    assert "5/6" in violations[0].detail


def test_dead_end_dangling_and_duplicate_edges():
    g = Game(
        owner={"a": Owner.MAX, "b": Owner.MAX},
        succ={"a": (), "b": ("ghost", "b", "b")},
        prob={},
    )
    kinds = sorted(v.kind for v in validate(g))
    assert kinds == ["dangling-id", "dead-end", "duplicate-edge"]


def test_nonpositive_weight_and_shape():
    g = Game(
        owner={"a": Owner.RANDOM, "b": Owner.RANDOM, "t": Owner.MAX},
        succ={"a": ("t", "b"), "b": ("t",), "t": ("t",)},
        prob={"a": (Fraction(2), Fraction(-2)), "b": ()},
    )
    kinds = sorted(v.kind for v in validate(g))
    assert kinds == ["nonpositive-weight", "weight-shape", "weight-sum"]


def test_gallery_truncation_validates():
    built = gallery.build_fig2(10)
    assert validate(built.game) == []


def test_swap_roles_involution():
    g, _ = __import__("conftest").random_game(5)
    assert swap_roles(swap_roles(g)).owner == g.owner


def _two_step_lazy():
    def expand(s):
        if s == "a":
            return StateInfo(Owner.MAX, ("b", "c"))
        return StateInfo(Owner.MAX, (s,))

    return LazyGame("a", expand, branching_bound=2)


def test_truncate_depth_zero_keeps_initial_and_sink():
    trunc = truncate(_two_step_lazy(), 0, SinkMode.PESSIMISTIC)
    assert set(trunc.game.states) == {"a", trunc.sink}
    assert trunc.game.succ["a"] == (trunc.sink,)
    assert trunc.frontier == {"b", "c"}


def test_truncate_gambler_depth_five_layers():
    trunc = truncate(gallery.gamblers_ruin_lazy(Fraction(3, 5)), 5, SinkMode.PESSIMISTIC)
    # BFS from wealth 1: w0..w6 are within five steps, w7 is replaced.
    expected = {f"w{i}" for i in range(7)} | {trunc.sink}
    assert set(trunc.game.states) == expected
    assert trunc.frontier == {"w7"}
    assert trunc.game.succ["w6"] == ("w5",) or trunc.sink in trunc.game.succ["w6"]


def test_truncate_merges_parallel_sink_edges():
    trunc = truncate(gallery.gamblers_ruin_lazy(Fraction(3, 5)), 5, SinkMode.PESSIMISTIC)
    for s in trunc.game.states:
        succs = trunc.game.succ[s]
        assert len(succs) == len(set(succs))
    assert validate(trunc.game) == []


def test_truncate_embedding_monotone_in_depth():
    for d in (3, 5, 8):
        small = truncate(gallery.fig2_lazy(), d, SinkMode.PESSIMISTIC)
        big = truncate(gallery.fig2_lazy(), d + 2, SinkMode.PESSIMISTIC)
        small_states = set(small.game.states) - {small.sink}
        big_states = set(big.game.states) - {big.sink}
        assert small_states <= big_states
        for s in small_states:
            assert small.game.owner[s] == big.game.owner[s]
            if small.sink not in small.game.succ[s]:
                assert small.game.succ[s] == big.game.succ[s]


def test_truncate_state_count_bound_and_linear_growth():
    for depth in range(4, 12):
        trunc = truncate(gallery.fig2_lazy(), depth, SinkMode.PESSIMISTIC)
        bound = 1 + sum(2**k for k in range(depth + 1))
        assert len(trunc.game.states) <= bound
        # Two ladders and two chains: linear, not exponential.
        assert len(trunc.game.states) == 4 * depth + 1


def test_truncate_divergence_error():
    def expand(s):
        return StateInfo(Owner.MAX, ("a", "b", "c"))

    with pytest.raises(TruncationError):
        truncate(LazyGame("a", expand, branching_bound=2), 3, SinkMode.PESSIMISTIC)

    def empty(s):
        return StateInfo(Owner.MAX, ())

    with pytest.raises(TruncationError):
        truncate(LazyGame("a", empty), 1, SinkMode.PESSIMISTIC)


def test_expand_is_deterministic_on_gallery_generators():
    lazy = gallery.fig2_lazy()
    for sid in ("i", "s3", "sp2", "r0", "rp4", "t"):
        assert lazy.expand(sid) == lazy.expand(sid)


def test_optimistic_sink_joins_every_label_set():
    pess = truncate(gallery.fig2_lazy(), 5, SinkMode.PESSIMISTIC)
    opt = truncate(gallery.fig2_lazy(), 5, SinkMode.OPTIMISTIC)
    assert pess.sink not in pess.label_set("target")
    assert pess.sink not in pess.label_set("buchi")
    assert opt.sink in opt.label_set("target")
    assert opt.sink in opt.label_set("buchi")
