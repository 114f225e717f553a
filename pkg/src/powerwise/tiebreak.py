"""Ranking construction: points order, then a tie-break ladder with an audit trail.

Teams are first grouped by pairwise points. Inside a tied group:

  * two teams fall back to their own pairwise outcome;
  * three or more play a mini round robin of the already-decided intra-group
    outcomes, splitting the group by wins and recursing on any sub-tie;
  * groups no step can split order by power rating, and teams with exactly
    equal ratings share a rank.

Every entry carries an audit: the ordered (criterion, value) pairs that placed
it. Sorting entries by their audit value sequences, descending, reproduces the
ranking exactly; that makes any published table independently checkable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import ValidationError
from .ingest import SeasonDataset
from .pairwise import ComparisonConfig, PowerwiseTable, run_tournament
from .power_rating import PowerRatingTable, SolverConfig, solve_power_ratings


@dataclass(frozen=True)
class RankingEntry:
    """One ranked team. ``tie_group`` numbers the tied point-groups, in rank order."""

    rank: int
    team: str
    points: float
    tie_group: int | None
    audit: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class RankingList:
    season: int
    entries: tuple[RankingEntry, ...]

    def order(self) -> tuple[str, ...]:
        return tuple(e.team for e in self.entries)

    def ranks(self) -> dict[str, int]:
        return {e.team: e.rank for e in self.entries}

    def entry_for(self, team: str) -> RankingEntry:
        for e in self.entries:
            if e.team == team:
                return e
        raise ValidationError(f"unknown team {team!r}")

    @classmethod
    def from_scores(
        cls, season: int, scores: Mapping[str, float], higher_is_better: bool = True
    ) -> "RankingList":
        """Dense ranking of a plain score table; exact ties share a rank."""
        if not scores:
            raise ValidationError("empty score table")
        sign = -1.0 if higher_is_better else 1.0
        ordered = sorted(scores, key=lambda t: (sign * scores[t], t))
        entries = []
        rank = 0
        previous = None
        for t in ordered:
            if previous is None or scores[t] != previous:
                rank += 1
                previous = scores[t]
            entries.append(
                RankingEntry(rank=rank, team=t, points=scores[t], tie_group=None, audit=(("score", scores[t]),))
            )
        return cls(season=season, entries=tuple(entries))


def _pair_audit(table: PowerwiseTable, ratings: PowerRatingTable, a: str, b: str):
    """Order a two-team tie by its pairwise outcome; fall through to rating."""
    outcome = table.outcome_for(a, b)
    if outcome.winner is not None:
        step = f"pair_{outcome.deciding_step}"
        loser = outcome.loser()
        return [(outcome.winner, ((step, 1.0),)), (loser, ((step, 0.0),))]
    return _rating_audit(ratings, [a, b])


def _rating_audit(ratings: PowerRatingTable, group) -> list:
    """Last resort: raw rating descending; exactly equal values stay tied."""
    ordered = sorted(group, key=lambda t: (-ratings.rating_of(t), t))
    return [(t, (("power_rating", ratings.rating_of(t)),)) for t in ordered]


def _resolve_group(table: PowerwiseTable, ratings: PowerRatingTable, group: list) -> list:
    """Return [(team, audit_suffix)] in final order for one tied group."""
    if len(group) == 1:
        return [(group[0], ())]
    if len(group) == 2:
        return _pair_audit(table, ratings, *sorted(group))

    wins = {t: 0.0 for t in group}
    members = set(group)
    for o in table.outcomes:
        if o.winner is not None and o.team_a in members and o.team_b in members:
            wins[o.winner] += 1.0
    if len(set(wins.values())) == 1:
        return _rating_audit(ratings, group)
    resolved = []
    for w in sorted(set(wins.values()), reverse=True):
        sub = sorted(t for t in group if wins[t] == w)
        for team, suffix in _resolve_group(table, ratings, sub):
            resolved.append((team, (("mini_round_robin", w),) + suffix))
    return resolved


def break_ties(table: PowerwiseTable, ratings: PowerRatingTable) -> RankingList:
    """Rank every team in ``table`` 1..N densely, applying the tie-break ladder."""
    by_points: dict[int, list] = {}
    for t, p in table.points.items():
        by_points.setdefault(p, []).append(t)

    entries = []
    rank = 0
    tie_group = 0
    previous_audit = None
    for p in sorted(by_points, reverse=True):
        group = sorted(by_points[p])
        group_id = None
        if len(group) > 1:
            tie_group += 1
            group_id = tie_group
        for team, suffix in _resolve_group(table, ratings, group):
            audit = (("points", float(p)),) + suffix
            if previous_audit is None or audit != previous_audit:
                rank += 1
                previous_audit = audit
            entries.append(
                RankingEntry(rank=rank, team=team, points=float(p), tie_group=group_id, audit=audit)
            )
    return RankingList(season=table.season, entries=tuple(entries))


def replay_order(ranking: RankingList) -> tuple[str, ...]:
    """Re-sort entries purely by their audit value sequences, descending.

    An honest ranking satisfies ``replay_order(r) == r.order()`` up to teams
    sharing identical audits, which hold identical ranks anyway.
    """
    def key(e: RankingEntry):
        return tuple(-v for _, v in e.audit)

    return tuple(e.team for e in sorted(ranking.entries, key=lambda e: (key(e), e.team)))


def rank_season(
    dataset: SeasonDataset,
    solver_config: SolverConfig = SolverConfig(),
    comparison_config: ComparisonConfig = ComparisonConfig(),
    *,
    strict: bool = False,
) -> tuple[PowerRatingTable, PowerwiseTable, RankingList]:
    """Full pipeline: solve ratings, run the tournament, break ties."""
    ratings = solve_power_ratings(dataset, solver_config, strict=strict)
    table = run_tournament(dataset, ratings, comparison_config)
    return ratings, table, break_ties(table, ratings)
