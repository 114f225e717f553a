"""Tie-break ladder, dense ranks, and audit replay."""

import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powerwise.errors import ValidationError
from powerwise.pairwise import PairwiseOutcome, PowerwiseTable
from powerwise.power_rating import PowerRatingTable, SolverConfig
from powerwise.synthetic import random_schedule
from powerwise.tiebreak import RankingList, break_ties, rank_season, replay_order


def make_table(points, decided=(), season=2024):
    """Fabricate a tournament table from points and (winner, loser, step) triples."""
    teams = sorted(points)
    outcomes = {}
    for winner, loser, step in decided:
        a, b = sorted((winner, loser))
        outcomes[(a, b)] = PairwiseOutcome(a, b, winner, step, f"{winner} over {loser}")
    full = []
    for i, a in enumerate(teams):
        for b in teams[i + 1 :]:
            full.append(
                outcomes.get((a, b), PairwiseOutcome(a, b, None, "unresolved", "fabricated"))
            )
    zeros = {t: 0 for t in teams}
    return PowerwiseTable(season, dict(points), tuple(full), zeros, zeros, zeros)


def make_ratings(values, season=2024):
    return PowerRatingTable(
        season=season,
        ratings=dict(values),
        hfa_used=0.0,
        iterations=1,
        final_mean_abs_error=0.0,
        converged=True,
        components=(tuple(sorted(values)),),
        config=SolverConfig(),
    )


def test_distinct_points_rank_directly():
    table = make_table({"A": 3, "B": 2, "C": 1, "D": 0})
    ranking = break_ties(table, make_ratings({"A": 3.0, "B": 2.0, "C": 1.0, "D": 0.0}))
    assert ranking.order() == ("A", "B", "C", "D")
    assert [e.rank for e in ranking.entries] == [1, 2, 3, 4]
    assert all(e.tie_group is None for e in ranking.entries)
    assert [e.audit for e in ranking.entries] == [
        (("points", 3.0),),
        (("points", 2.0),),
        (("points", 1.0),),
        (("points", 0.0),),
    ]


def test_two_team_tie_uses_their_pair_outcome():
    # B holds the head-to-head over A despite A's higher rating.
    table = make_table({"A": 2, "B": 2, "C": 0}, [("B", "A", "head_to_head")])
    ranking = break_ties(table, make_ratings({"A": 5.0, "B": 1.0, "C": 0.0}))
    assert ranking.order() == ("B", "A", "C")
    assert [e.rank for e in ranking.entries] == [1, 2, 3]
    b, a, c = ranking.entries
    assert b.audit == (("points", 2.0), ("pair_head_to_head", 1.0))
    assert a.audit == (("points", 2.0), ("pair_head_to_head", 0.0))
    assert (b.tie_group, a.tie_group, c.tie_group) == (1, 1, None)


def test_two_team_tie_unresolved_pair_falls_to_rating():
    table = make_table({"A": 1, "B": 1})
    ranking = break_ties(table, make_ratings({"A": -2.0, "B": 3.5}))
    assert ranking.order() == ("B", "A")
    assert ranking.entries[0].audit == (("points", 1.0), ("power_rating", 3.5))


def test_two_team_tie_equal_ratings_share_rank():
    table = make_table({"A": 1, "B": 1, "C": 0})
    ranking = break_ties(table, make_ratings({"A": 1.25, "B": 1.25, "C": 0.0}))
    assert [e.rank for e in ranking.entries] == [1, 1, 2]
    assert ranking.order() == ("A", "B", "C")  # name order inside a shared rank
    assert ranking.ranks()["C"] == 2  # dense: no gap after the shared rank


def test_three_cycle_falls_to_rating():
    cycle = [("A", "B", "head_to_head"), ("B", "C", "head_to_head"), ("C", "A", "head_to_head")]
    table = make_table({"A": 2, "B": 2, "C": 2}, cycle)
    ranking = break_ties(table, make_ratings({"A": 1.0, "B": 3.0, "C": 2.0}))
    assert ranking.order() == ("B", "C", "A")
    assert ranking.entries[0].audit == (("points", 2.0), ("power_rating", 3.0))


def test_mini_round_robin_splits_then_recurses():
    decided = [
        ("A", "B", "head_to_head"),
        ("A", "C", "common_opponents"),
        ("B", "C", "head_to_head"),
    ]
    table = make_table({"A": 3, "B": 3, "C": 3, "D": 3}, decided)
    ranking = break_ties(table, make_ratings({"A": 0.0, "B": 0.0, "C": 4.0, "D": 9.0}))
    # Intra-group wins: A=2, B=1, C=0, D=0; C vs D is unresolved so rating orders it.
    assert ranking.order() == ("A", "B", "D", "C")
    a, b, d, c = ranking.entries
    assert a.audit == (("points", 3.0), ("mini_round_robin", 2.0))
    assert b.audit == (("points", 3.0), ("mini_round_robin", 1.0))
    assert d.audit == (("points", 3.0), ("mini_round_robin", 0.0), ("power_rating", 9.0))
    assert c.audit == (("points", 3.0), ("mini_round_robin", 0.0), ("power_rating", 4.0))
    assert [e.rank for e in ranking.entries] == [1, 2, 3, 4]
    assert all(e.tie_group == 1 for e in ranking.entries)


def test_nested_recursion_two_level():
    # Six-way tie: E and F beat everyone in-group except each other (E took the
    # pair), the other four split 2/2 into a sub-tie resolved by their pairs.
    decided = [
        ("E", "A", "head_to_head"), ("E", "B", "head_to_head"),
        ("E", "C", "head_to_head"), ("E", "F", "head_to_head"),
        ("F", "A", "head_to_head"), ("F", "C", "head_to_head"),
        ("F", "D", "head_to_head"),
        ("A", "C", "head_to_head"), ("A", "B", "head_to_head"),
        ("C", "B", "head_to_head"), ("C", "D", "head_to_head"),
        ("B", "D", "head_to_head"),
    ]
    points = {t: 7 for t in "ABCDEF"}
    table = make_table(points, decided)
    ranking = break_ties(table, make_ratings({t: float(i) for i, t in enumerate("ABCDEF")}))
    # wins: E=4, F=3, A=2, C=2, B=1, D=0 -> [E],[F],[A,C],[B],[D]; the A-C pair decides.
    assert ranking.order() == ("E", "F", "A", "C", "B", "D")
    entry_a = ranking.entry_for("A")
    assert entry_a.audit == (
        ("points", 7.0),
        ("mini_round_robin", 2.0),
        ("pair_head_to_head", 1.0),
    )


def test_replay_reproduces_order():
    decided = [("A", "B", "head_to_head"), ("B", "C", "head_to_head"), ("C", "A", "head_to_head")]
    table = make_table({"A": 2, "B": 2, "C": 2, "D": 0}, decided)
    ranking = break_ties(table, make_ratings({"A": 1.0, "B": 3.0, "C": 2.0, "D": 0.0}))
    assert replay_order(ranking) == ranking.order()


def test_from_scores_dense_with_ties():
    ranking = RankingList.from_scores(2024, {"A": 0.9, "B": 0.7, "C": 0.7, "D": 0.1})
    assert ranking.order() == ("A", "B", "C", "D")
    assert [e.rank for e in ranking.entries] == [1, 2, 2, 3]
    lower_better = RankingList.from_scores(2024, {"A": 0.9, "B": 0.7}, higher_is_better=False)
    assert lower_better.order() == ("B", "A")
    with pytest.raises(ValidationError, match="empty"):
        RankingList.from_scores(2024, {})
    with pytest.raises(ValidationError, match="unknown team"):
        ranking.entry_for("Z")


@given(st.integers(min_value=0, max_value=4000))
@settings(max_examples=30, deadline=None)
def test_rank_season_invariants(seed):
    ds = random_schedule(seed=seed, n_teams_range=(4, 9))
    ratings, table, ranking = rank_season(ds, SolverConfig(hfa=1.0))
    ranks = [e.rank for e in ranking.entries]
    assert ranks[0] == 1
    assert all(b - a in (0, 1) for a, b in zip(ranks, ranks[1:]))  # dense, descending order
    points = [e.points for e in ranking.entries]
    assert points == sorted(points, reverse=True)
    assert replay_order(ranking) == ranking.order()
    assert set(ranking.order()) == set(ds.teams)


@given(st.integers(min_value=0, max_value=4000), st.sampled_from([-100.0, 3.7, 100.0]))
@settings(max_examples=20, deadline=None)
def test_ranking_order_invariant_to_rating_shifts(seed, shift):
    ds = random_schedule(seed=seed, n_teams_range=(4, 8))
    ratings, table, ranking = rank_season(ds, SolverConfig(hfa=1.0))
    shifted = dataclasses.replace(
        ratings, ratings={t: r + shift for t, r in ratings.ratings.items()}
    )
    assert break_ties(table, shifted).order() == ranking.order()
