"""Goal-differential power ratings.

Each team's rating is defined by the fixed point of

    rating[t] = mean over t's games of (adjusted_margin(t, g) + rating[opponent])

where adjusted_margin is the goal margin from t's perspective, capped at
``goal_cap`` before the home-field adjustment (subtract ``hfa`` when t is home,
add it when t is away, no change at neutral sites). The fixed point is solved
per connected schedule component with Gauss-Seidel sweeps; it is unique up to
an additive constant per component, which the anchor policy pins down.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ComputationError, DataWarning, ValidationError
from .ingest import GameRecord, SeasonDataset

ANCHORS = ("mean-zero", "top-100")


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the rating solve.

    ``hfa`` is either a numeric per-game home advantage in goals or the string
    ``"estimate"`` to fit it as the mean capped home margin of non-neutral
    games. ``goal_cap`` of None disables margin capping.
    """

    goal_cap: int | None = 7
    hfa: float | str = "estimate"
    convergence_tol: float = 1e-9
    max_iterations: int = 10000
    anchor: str = "mean-zero"
    display_offset: float = 0.0

    def __post_init__(self):
        if self.goal_cap is not None and self.goal_cap <= 0:
            raise ValidationError(f"goal_cap must be positive or None, got {self.goal_cap}")
        if isinstance(self.hfa, str):
            if self.hfa != "estimate":
                raise ValidationError(f"hfa must be a number or 'estimate', got {self.hfa!r}")
        elif not isinstance(self.hfa, (int, float)):
            raise ValidationError(f"hfa must be a number or 'estimate', got {type(self.hfa).__name__}")
        if self.convergence_tol <= 0:
            raise ValidationError(f"convergence_tol must be positive, got {self.convergence_tol}")
        if self.max_iterations < 1:
            raise ValidationError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.anchor not in ANCHORS:
            raise ValidationError(f"anchor must be one of {ANCHORS}, got {self.anchor!r}")


@dataclass(frozen=True)
class PowerRatingTable:
    """Solved ratings plus solve diagnostics."""

    season: int
    ratings: Mapping[str, float]
    hfa_used: float
    iterations: int
    final_mean_abs_error: float
    converged: bool
    components: tuple[tuple[str, ...], ...]
    config: SolverConfig = field(compare=False)

    def rating_of(self, team: str) -> float:
        try:
            return self.ratings[team]
        except KeyError:
            raise ValidationError(f"unknown team {team!r}") from None

    def component_of(self, team: str) -> int:
        for i, comp in enumerate(self.components):
            if team in comp:
                return i
        raise ValidationError(f"unknown team {team!r}")

    def order(self) -> tuple[str, ...]:
        """Teams sorted by rating descending, name ascending on exact ties."""
        return tuple(sorted(self.ratings, key=lambda t: (-self.ratings[t], t)))


def capped_margin(home_score: int, away_score: int, cap: int | None) -> int:
    """Home-perspective goal margin clamped to [-cap, +cap]."""
    m = home_score - away_score
    if cap is None:
        return m
    return max(-cap, min(cap, m))


def adjusted_margin(game: GameRecord, team: str, cap: int | None, hfa: float) -> float:
    """Capped margin from ``team``'s perspective with home advantage removed.

    The cap applies to the raw margin before the hfa adjustment.
    """
    m = capped_margin(game.home_score, game.away_score, cap)
    if team == game.home_team:
        return m if game.neutral_site else m - hfa
    if team == game.away_team:
        return -m if game.neutral_site else -m + hfa
    raise ValidationError(f"{team!r} did not play in game {game}")


def estimate_hfa(dataset: SeasonDataset, cap: int | None) -> float:
    """Mean capped home margin over non-neutral games; 0.0 if none exist."""
    margins = [
        capped_margin(g.home_score, g.away_score, cap) for g in dataset.games if not g.neutral_site
    ]
    if not margins:
        warnings.warn(
            "no non-neutral games to estimate home advantage from; using 0.0",
            DataWarning,
            stacklevel=2,
        )
        return 0.0
    return sum(margins) / len(margins)


def solve_power_ratings(
    dataset: SeasonDataset, config: SolverConfig = SolverConfig(), *, strict: bool = False
) -> PowerRatingTable:
    """Solve the rating fixed point for every team in ``dataset``.

    Gauss-Seidel sweeps run per connected component until the largest in-sweep
    rating change is at most ``convergence_tol`` or ``max_iterations`` is hit.
    Non-convergence warns (or raises ComputationError when ``strict``).
    """
    hfa = estimate_hfa(dataset, config.goal_cap) if config.hfa == "estimate" else float(config.hfa)
    components = dataset.components()

    # Precompute each team's (adjusted margin, opponent) terms once.
    terms: dict[str, list[tuple[float, str]]] = {
        t: [(adjusted_margin(g, t, config.goal_cap, hfa), opp) for opp, g in dataset.opponents_of[t]]
        for t in dataset.teams
    }

    ratings: dict[str, float] = {t: 0.0 for t in dataset.teams}
    worst_iterations = 0
    stuck_delta = 0.0
    for comp in components:
        delta = 0.0
        for sweeps in range(1, config.max_iterations + 1):
            delta = 0.0
            for t in comp:
                total = 0.0
                for margin, opp in terms[t]:
                    total += margin + ratings[opp]
                new = total / len(terms[t])
                change = abs(new - ratings[t])
                if change > delta:
                    delta = change
                ratings[t] = new
            if delta <= config.convergence_tol:
                break
        if delta > config.convergence_tol:
            stuck_delta = max(stuck_delta, delta)
        worst_iterations = max(worst_iterations, sweeps)

    converged = stuck_delta == 0.0
    if not converged:
        message = (
            f"rating solve did not converge within {config.max_iterations} sweeps "
            f"(last change {stuck_delta:.3g} > tol {config.convergence_tol:.3g})"
        )
        if strict:
            raise ComputationError(message)
        warnings.warn(message, DataWarning, stacklevel=2)

    # Anchor after the solve: per-component mean zero, then an optional single
    # global shift placing the top team at 100. Both leave residuals intact.
    for comp in components:
        mean = sum(ratings[t] for t in comp) / len(comp)
        for t in comp:
            ratings[t] -= mean
    if config.anchor == "top-100":
        shift = 100.0 - max(ratings.values())
        for t in ratings:
            ratings[t] += shift
    if config.display_offset:
        for t in ratings:
            ratings[t] += config.display_offset

    residual_total = 0.0
    for t in dataset.teams:
        implied = sum(margin + ratings[opp] for margin, opp in terms[t]) / len(terms[t])
        residual_total += abs(ratings[t] - implied)
    final_mean_abs_error = residual_total / len(dataset.teams)

    return PowerRatingTable(
        season=dataset.season,
        ratings=dict(sorted(ratings.items())),
        hfa_used=hfa,
        iterations=worst_iterations,
        final_mean_abs_error=final_mean_abs_error,
        converged=converged,
        components=components,
        config=config,
    )


def rating_difference(table: PowerRatingTable, team_a: str, team_b: str) -> float:
    """rating(a) - rating(b); only meaningful within one schedule component."""
    ca = table.component_of(team_a)
    cb = table.component_of(team_b)
    if ca != cb:
        raise ValidationError(
            f"{team_a!r} (component {ca}) and {team_b!r} (component {cb}) share no "
            "schedule path; their rating difference is not anchored"
        )
    return table.rating_of(team_a) - table.rating_of(team_b)
