"""Ratings Percentage Index: the win-percentage baseline the power ratings are compared against.

RPI(t) = w1 * WP(t) + w2 * OWP(t) + w3 * OOWP(t), defaults (0.25, 0.50, 0.25).

WP is t's own winning percentage (ties count half). OWP averages, over each of
t's games, the opponent's winning percentage with all games against t removed.
OOWP averages the opponents' OWP the same per-game way, so repeat meetings
count each time they occur.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import ValidationError
from .ingest import GameRecord, SeasonDataset, build_season

DEFAULT_WEIGHTS = (0.25, 0.50, 0.25)


@dataclass(frozen=True)
class RpiConfig:
    """Weights for the three RPI terms, in (wp, owp, oowp) order."""

    weights: tuple[float, float, float] = DEFAULT_WEIGHTS

    def __post_init__(self):
        if len(self.weights) != 3:
            raise ValidationError(f"need exactly 3 weights, got {len(self.weights)}")
        if any(w < 0 for w in self.weights):
            raise ValidationError(f"weights must be non-negative, got {self.weights}")
        if sum(self.weights) <= 0:
            raise ValidationError("weights must not all be zero")


@dataclass(frozen=True)
class RpiTable:
    """Per-team RPI with its three components."""

    season: int
    rpi: Mapping[str, float]
    wp: Mapping[str, float]
    owp: Mapping[str, float]
    oowp: Mapping[str, float]

    def order(self) -> tuple[str, ...]:
        """Teams sorted by RPI descending, name ascending on exact ties."""
        return tuple(sorted(self.rpi, key=lambda t: (-self.rpi[t], t)))

    def ranks(self) -> dict[str, int]:
        """Dense 1-based ranks; exactly equal RPI values share a rank."""
        ranks: dict[str, int] = {}
        rank = 0
        previous = None
        for t in self.order():
            if previous is None or self.rpi[t] != previous:
                rank += 1
                previous = self.rpi[t]
            ranks[t] = rank
        return ranks


def win_value(game: GameRecord, team: str) -> float:
    """1.0 for a win, 0.0 for a loss, 0.5 for a tied score."""
    margin = game.margin_for(team)
    if margin > 0:
        return 1.0
    if margin < 0:
        return 0.0
    return 0.5


def winning_percentage(dataset: SeasonDataset, team: str, excluding: str | None = None) -> float:
    """Mean win value of ``team``'s games, optionally excluding one opponent.

    If excluding the opponent leaves no games (the opponent was the team's whole
    schedule), fall back to the unfiltered percentage so the average stays
    defined.
    """
    games = dataset.games_of(team)
    if excluding is not None:
        kept = [g for g in games if not g.involves(excluding)]
        if kept:
            games = kept
    return sum(win_value(g, team) for g in games) / len(games)


def compute_rpi(dataset: SeasonDataset, config: RpiConfig = RpiConfig()) -> RpiTable:
    w1, w2, w3 = config.weights
    wp = {t: winning_percentage(dataset, t) for t in dataset.teams}
    owp = {
        t: sum(winning_percentage(dataset, opp, excluding=t) for opp, _ in dataset.opponents_of[t])
        / len(dataset.opponents_of[t])
        for t in dataset.teams
    }
    oowp = {
        t: sum(owp[opp] for opp, _ in dataset.opponents_of[t]) / len(dataset.opponents_of[t])
        for t in dataset.teams
    }
    rpi = {t: w1 * wp[t] + w2 * owp[t] + w3 * oowp[t] for t in dataset.teams}
    return RpiTable(season=dataset.season, rpi=rpi, wp=wp, owp=owp, oowp=oowp)


@dataclass(frozen=True)
class ScheduleSwapReport:
    """Effect on one team's RPI of replacing its schedule wholesale."""

    team: str
    before: RpiTable
    after: RpiTable
    rpi_before: float
    rpi_after: float
    rank_before: int
    rank_after: int


def schedule_swap_experiment(
    dataset: SeasonDataset,
    team: str,
    replacement_games: list[GameRecord],
    config: RpiConfig = RpiConfig(),
) -> ScheduleSwapReport:
    """Replace every game involving ``team`` with ``replacement_games`` and re-run RPI.

    Used to demonstrate schedule-strength sensitivity: a bottom team that swaps
    its slate for losses against top teams can still climb the RPI table.
    """
    if team not in dataset.opponents_of:
        raise ValidationError(f"unknown team {team!r}")
    if not replacement_games:
        raise ValidationError("replacement schedule is empty")
    for g in replacement_games:
        if not g.involves(team):
            raise ValidationError(
                f"replacement game {g.home_team} vs {g.away_team} does not involve {team!r}"
            )
    kept = [g for g in dataset.games if not g.involves(team)]
    swapped = build_season(kept + list(replacement_games), dataset.season)

    before = compute_rpi(dataset, config)
    after = compute_rpi(swapped, config)
    return ScheduleSwapReport(
        team=team,
        before=before,
        after=after,
        rpi_before=before.rpi[team],
        rpi_after=after.rpi[team],
        rank_before=before.ranks()[team],
        rank_after=after.ranks()[team],
    )
