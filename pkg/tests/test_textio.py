"""The text game-file format: strict parsing, round trips, line numbers."""

import pytest

from sgsolve import GameFormatError, format_game, parse_game
from sgsolve import gallery


def test_round_trip_ladder():
    built = gallery.build_ladder(3)
    text = format_game(built.game, sorted(built.targets))
    parsed = parse_game(text)
    assert parsed.game.owner == built.game.owner
    assert parsed.game.succ == built.game.succ
    assert parsed.game.prob == built.game.prob
    assert parsed.targets == built.targets


def test_comments_and_blank_lines():
    parsed = parse_game(
        """
        # a tiny chain
        state a rand
        state t max   # the goal
        edge a t 1/2
        edge a a 1/2
        edge t t
        target t
        """
    )
    assert parsed.targets == {"t"}
    assert parsed.state_lines["a"] == 3


@pytest.mark.parametrize(
    "text, line, needle",
    [
        ("state a max\nfoo a b\n", 2, "unknown keyword"),
        ("state a max\nstate a min\n", 2, "duplicate"),
        ("state a max\nedge b a\n", 2, "undeclared"),
        ("state a max\nedge a b\n", 2, "undeclared"),
        ("state a rand\nstate b max\nedge a b 0.5\n", 3, "malformed rational"),
        ("state a rand\nstate b max\nedge a b\nedge b b\n", 3, "needs a weight"),
        ("state a max\nstate b max\nedge a b 1/2\n", 3, "must not carry"),
        ("state a weird\n", 1, "unknown state kind"),
        ("state a max\ntarget b\n", 2, "undeclared"),
    ],
)
def test_strict_parse_errors_carry_line_numbers(text, line, needle):
    with pytest.raises(GameFormatError) as err:
        parse_game(text)
    assert err.value.line == line
    assert needle in str(err.value)


def test_duplicate_edges_are_left_to_validation():
    parsed = parse_game("state a max\nedge a a\nedge a a\n")
    from sgsolve import validate

    assert [v.kind for v in validate(parsed.game)] == ["duplicate-edge"]
