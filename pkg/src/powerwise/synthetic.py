"""Seeded synthetic season generators for experiments and tests."""

from __future__ import annotations

import datetime
import random
from dataclasses import dataclass
from typing import Mapping

from .errors import ValidationError
from .ingest import GameRecord, SeasonDataset, build_season


@dataclass(frozen=True)
class SyntheticLeague:
    """A generated season together with the latent strengths that produced it."""

    dataset: SeasonDataset
    strengths: Mapping[str, float]
    hfa: float


def _team_names(n: int) -> list[str]:
    width = max(2, len(str(n)))
    return [f"T{i:0{width}d}" for i in range(1, n + 1)]


def _paced_date(season: int, slot: int) -> datetime.date:
    """Deterministic dates inside the default January-May season window."""
    return datetime.date(season, 1, 10) + datetime.timedelta(days=slot % 110)


def _with_game_index(games: list[GameRecord]) -> list[GameRecord]:
    """Assign game_index so repeat meetings on one date stay distinct rows."""
    counts: dict[tuple, int] = {}
    out = []
    for g in games:
        key = (g.date, frozenset((g.home_team, g.away_team)))
        k = counts.get(key, 0)
        counts[key] = k + 1
        out.append(
            GameRecord(g.season, g.date, g.home_team, g.away_team, g.home_score, g.away_score, g.neutral_site, k)
        )
    return out


def synthetic_league(
    n_teams: int,
    *,
    seed: int,
    season: int = 2024,
    games_per_team: int = 10,
    strength_sd: float = 3.0,
    noise_sd: float = 1.5,
    hfa: float = 1.0,
    neutral_fraction: float = 0.2,
) -> SyntheticLeague:
    """Generate a connected league whose scores follow latent team strengths.

    Strengths are normal draws, so mid-table teams cluster tightly. A chain of
    rank-neighbor pairings guarantees one schedule component; remaining games
    pair random teams. Scores are non-negative integers and never tied.
    """
    if n_teams < 2:
        raise ValidationError(f"need at least 2 teams, got {n_teams}")
    rng = random.Random(seed)
    teams = _team_names(n_teams)
    strengths = {t: rng.gauss(0.0, strength_sd) for t in teams}

    by_strength = sorted(teams, key=lambda t: -strengths[t])
    pairings: list[tuple[str, str]] = [
        (by_strength[i], by_strength[i + 1]) for i in range(n_teams - 1)
    ]
    target = max(len(pairings), n_teams * games_per_team // 2)
    while len(pairings) < target:
        a, b = rng.sample(teams, 2)
        pairings.append((a, b))

    games: list[GameRecord] = []
    for slot, (a, b) in enumerate(pairings):
        home, away = (a, b) if rng.random() < 0.5 else (b, a)
        neutral = rng.random() < neutral_fraction
        latent = strengths[home] - strengths[away] + (0.0 if neutral else hfa)
        latent += rng.gauss(0.0, noise_sd)
        margin = round(latent)
        if margin == 0:
            margin = 1 if latent >= 0 else -1
        away_score = rng.randint(4, 12)
        home_score = away_score + margin
        if home_score < 0:
            away_score -= home_score
            home_score = 0
        games.append(
            GameRecord(season, _paced_date(season, slot), home, away, home_score, away_score, neutral)
        )
    dataset = build_season(_with_game_index(games), season)
    return SyntheticLeague(dataset=dataset, strengths=strengths, hfa=hfa)


def random_schedule(
    *,
    seed: int,
    n_teams_range: tuple[int, int] = (4, 12),
    games_per_pair_range: tuple[int, int] = (1, 4),
    margin_range: tuple[int, int] = (0, 15),
    neutral_fraction: float = 0.25,
    pair_fraction: float = 0.5,
    season: int = 2024,
) -> SeasonDataset:
    """Generate a connected schedule with uniform random margins (no strength model).

    Connectivity comes from a random spanning tree; extra team pairs are added
    with probability ``pair_fraction`` and each chosen pair meets a uniform
    number of times with uniform margins.
    """
    rng = random.Random(seed)
    n = rng.randint(*n_teams_range)
    teams = _team_names(n)

    shuffled = teams[:]
    rng.shuffle(shuffled)
    pairs = {frozenset((shuffled[i], shuffled[rng.randrange(i)])) for i in range(1, n)}
    for i in range(n):
        for j in range(i + 1, n):
            pair = frozenset((teams[i], teams[j]))
            if pair not in pairs and rng.random() < pair_fraction:
                pairs.add(pair)

    games: list[GameRecord] = []
    slot = 0
    for pair in sorted(pairs, key=sorted):
        a, b = sorted(pair)
        for _ in range(rng.randint(*games_per_pair_range)):
            home, away = (a, b) if rng.random() < 0.5 else (b, a)
            margin = rng.randint(*margin_range)
            away_score = rng.randint(0, 10)
            games.append(
                GameRecord(
                    season,
                    _paced_date(season, slot),
                    home,
                    away,
                    away_score + margin,
                    away_score,
                    rng.random() < neutral_fraction,
                )
            )
            slot += 1
    return build_season(_with_game_index(games), season)
