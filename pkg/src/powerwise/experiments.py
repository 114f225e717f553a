"""Sensitivity, agreement, and strength-gap experiments.

Three instruments for interrogating a season:

  * flip one game's result and measure how far the rankings move,
  * Kendall tau-b agreement between two rankings (optionally windowed to a
    bubble band of the reference ranking),
  * an offset regression measuring how much better one group of teams performs
    than another against shared external opposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import stats

from .errors import ComputationError, ValidationError
from .ingest import GameRecord, SeasonDataset, build_season
from .pairwise import ComparisonConfig
from .power_rating import SolverConfig
from .rpi import RpiConfig, compute_rpi
from .tiebreak import RankingList, rank_season

RANKING_METHODS = ("power", "rpi")


def flip_game(game: GameRecord) -> GameRecord:
    """Swap the final score, turning the winner into the loser. Self-inverse."""
    return GameRecord(
        season=game.season,
        date=game.date,
        home_team=game.home_team,
        away_team=game.away_team,
        home_score=game.away_score,
        away_score=game.home_score,
        neutral_site=game.neutral_site,
        game_index=game.game_index,
    )


def _ranking_for(
    dataset: SeasonDataset,
    method: str,
    solver_config: SolverConfig,
    rpi_config: RpiConfig,
    comparison_config: ComparisonConfig,
) -> RankingList:
    if method == "power":
        _, _, ranking = rank_season(dataset, solver_config, comparison_config)
        return ranking
    if method == "rpi":
        return RankingList.from_scores(dataset.season, compute_rpi(dataset, rpi_config).rpi)
    raise ValidationError(f"method must be one of {RANKING_METHODS}, got {method!r}")


@dataclass(frozen=True)
class PerturbationReport:
    """Rank movement among the pre-flip top ``top_k`` after one result flips."""

    method: str
    flipped_game: GameRecord
    top_k: int
    rank_changes: tuple[tuple[str, int, int], ...]  # (team, before, after)
    before: RankingList
    after: RankingList

    @property
    def n_changed(self) -> int:
        return len(self.rank_changes)


def perturbation_experiment(
    dataset: SeasonDataset,
    game: GameRecord,
    method: str,
    *,
    solver_config: SolverConfig = SolverConfig(),
    rpi_config: RpiConfig = RpiConfig(),
    comparison_config: ComparisonConfig = ComparisonConfig(),
    top_k: int = 15,
) -> PerturbationReport:
    """Flip ``game`` and report which of the top ``top_k`` teams change rank."""
    if game not in dataset.games:
        raise ValidationError(f"game {game} is not in the season")
    if top_k < 1:
        raise ValidationError(f"top_k must be >= 1, got {top_k}")
    flipped = [flip_game(g) if g == game else g for g in dataset.games]
    after_dataset = build_season(flipped, dataset.season)

    before = _ranking_for(dataset, method, solver_config, rpi_config, comparison_config)
    after = _ranking_for(after_dataset, method, solver_config, rpi_config, comparison_config)
    before_ranks = before.ranks()
    after_ranks = after.ranks()
    changes = tuple(
        (e.team, before_ranks[e.team], after_ranks[e.team])
        for e in before.entries
        if e.rank <= top_k and after_ranks[e.team] != before_ranks[e.team]
    )
    return PerturbationReport(
        method=method,
        flipped_game=game,
        top_k=top_k,
        rank_changes=changes,
        before=before,
        after=after,
    )


def _as_ranks(ranking) -> dict[str, float]:
    if isinstance(ranking, RankingList):
        return {t: float(r) for t, r in ranking.ranks().items()}
    if isinstance(ranking, Mapping):
        return {t: float(r) for t, r in ranking.items()}
    return {t: float(i) for i, t in enumerate(ranking, start=1)}


def kendall_tau(
    ranking_a,
    ranking_b,
    window: tuple[int, int] | None = None,
) -> float:
    """Kendall tau-b between two rankings of the same teams.

    Rankings may be RankingLists, team-to-rank mappings, or ordered team
    sequences. ``window=(lo, hi)`` restricts to teams ranked lo..hi inclusive
    in ``ranking_a``, the reference side.
    """
    ranks_a = _as_ranks(ranking_a)
    ranks_b = _as_ranks(ranking_b)
    if set(ranks_a) != set(ranks_b):
        missing = sorted(set(ranks_a) ^ set(ranks_b))
        raise ValidationError(f"rankings cover different teams, e.g. {missing[:5]}")
    teams = sorted(ranks_a)
    if window is not None:
        lo, hi = window
        if lo > hi or lo < 1:
            raise ValidationError(f"bad rank window {window}")
        teams = [t for t in teams if lo <= ranks_a[t] <= hi]
    if len(teams) < 2:
        raise ValidationError(f"need at least 2 teams to correlate, got {len(teams)}")
    tau = stats.kendalltau(
        [ranks_a[t] for t in teams], [ranks_b[t] for t in teams], variant="b"
    ).statistic
    if math.isnan(tau):
        raise ComputationError("tau undefined: a side has no rank variation in the window")
    return float(tau)


@dataclass(frozen=True)
class LineFit:
    """OLS line with enough sufficient statistics to draw a mean-response band."""

    slope: float
    intercept: float
    n: int
    x_mean: float
    sxx: float
    residual_var: float
    x_range: tuple[float, float]

    def predict(self, x: float) -> float:
        return self.intercept + self.slope * x

    def band_halfwidth(self, x: float, level: float = 0.95) -> float:
        """Half-width of the mean-response confidence interval at ``x``."""
        df = self.n - 2
        if df <= 0 or self.sxx == 0:
            return float("nan")
        t_crit = float(stats.t.ppf(0.5 + level / 2, df))
        se = math.sqrt(self.residual_var * (1 / self.n + (x - self.x_mean) ** 2 / self.sxx))
        return t_crit * se


def _fit_line(samples: Sequence[tuple[float, float]]) -> LineFit:
    xs = np.array([x for x, _ in samples], dtype=float)
    ys = np.array([y for _, y in samples], dtype=float)
    if len(xs) < 3:
        raise ValidationError(f"need at least 3 samples per group to fit, got {len(xs)}")
    if np.ptp(xs) == 0:
        raise ValidationError("cannot fit a slope: all opponent strengths identical")
    design = np.column_stack([np.ones_like(xs), xs])
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    intercept, slope = float(coef[0]), float(coef[1])
    residuals = ys - (intercept + slope * xs)
    df = len(xs) - 2
    return LineFit(
        slope=slope,
        intercept=intercept,
        n=len(xs),
        x_mean=float(xs.mean()),
        sxx=float(((xs - xs.mean()) ** 2).sum()),
        residual_var=float((residuals**2).sum() / df) if df > 0 else 0.0,
        x_range=(float(xs.min()), float(xs.max())),
    )


@dataclass(frozen=True)
class RegressionReport:
    """Two per-group fits of game margin against opponent strength.

    ``group_offset`` is the vertical gap (group A minus group B) between the
    two fitted lines at the midpoint of the shared opponent-strength range;
    ``p_value`` tests that gap with a common-slope dummy-variable model.
    """

    group_a: tuple[str, ...]
    group_b: tuple[str, ...]
    fit_a: LineFit
    fit_b: LineFit
    samples_a: tuple[tuple[float, float], ...]
    samples_b: tuple[tuple[float, float], ...]
    group_offset: float
    midpoint: float
    p_value: float

    @property
    def n_points(self) -> int:
        return len(self.samples_a) + len(self.samples_b)


def _group_samples(
    dataset: SeasonDataset,
    strengths: Mapping[str, float],
    group: Sequence[str],
    excluded: set,
    goal_cap: int | None,
) -> list[tuple[float, float]]:
    samples = []
    for team in sorted(group):
        for opp, g in dataset.opponents_of[team]:
            if opp in excluded or opp not in strengths:
                continue
            margin = g.margin_for(team)
            if goal_cap is not None:
                margin = max(-goal_cap, min(goal_cap, margin))
            samples.append((float(strengths[opp]), float(margin)))
    return samples


def pooled_regression(
    samples_a: Sequence[tuple[float, float]],
    samples_b: Sequence[tuple[float, float]],
    *,
    group_a: tuple[str, ...] = (),
    group_b: tuple[str, ...] = (),
) -> RegressionReport:
    """Offset analysis of two raw (strength, margin) sample clouds.

    Useful directly when samples from several seasons are pooled; the labeled
    entry point below extracts one season's samples first.
    """
    samples_a = list(samples_a)
    samples_b = list(samples_b)
    if not samples_a or not samples_b:
        raise ValidationError("a group has no games against outside opposition")
    fit_a = _fit_line(samples_a)
    fit_b = _fit_line(samples_b)

    lo = max(fit_a.x_range[0], fit_b.x_range[0])
    hi = min(fit_a.x_range[1], fit_b.x_range[1])
    if lo > hi:
        raise ValidationError("groups share no opponent-strength range to compare at")
    midpoint = (lo + hi) / 2
    group_offset = fit_a.predict(midpoint) - fit_b.predict(midpoint)

    xs = np.array([x for x, _ in samples_a + samples_b])
    ys = np.array([y for _, y in samples_a + samples_b])
    dummy = np.array([1.0] * len(samples_a) + [0.0] * len(samples_b))
    design = np.column_stack([np.ones_like(xs), xs, dummy])
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    residuals = ys - design @ coef
    df = len(xs) - 3
    if df <= 0:
        raise ValidationError("too few samples for a significance test")
    sigma2 = float((residuals**2).sum() / df)
    try:
        cov = sigma2 * np.linalg.inv(design.T @ design)
    except np.linalg.LinAlgError:
        raise ComputationError("degenerate design: offset is not identifiable") from None
    se = math.sqrt(max(cov[2, 2], 0.0))
    offset_coef = float(coef[2])
    if se == 0.0:
        # Zero residual variance: the gap is either exactly absent or exact.
        p_value = 1.0 if abs(offset_coef) < 1e-12 else 0.0
    else:
        t_stat = offset_coef / se
        p_value = float(2 * stats.t.sf(abs(t_stat), df))
    return RegressionReport(
        group_a=group_a,
        group_b=group_b,
        fit_a=fit_a,
        fit_b=fit_b,
        samples_a=tuple(samples_a),
        samples_b=tuple(samples_b),
        group_offset=group_offset,
        midpoint=midpoint,
        p_value=p_value,
    )


def strength_regression(
    dataset: SeasonDataset,
    strengths: Mapping[str, float],
    group_a: Iterable[str],
    group_b: Iterable[str],
    *,
    goal_cap: int | None = None,
) -> RegressionReport:
    """Quantify how much better group A fares than group B against shared opposition.

    Samples are (opponent strength, goal margin) points from each group's games
    against teams outside both groups. Each group gets an independent OLS line;
    the reported offset is their gap at the midpoint of the common strength
    range. The p-value comes from the pooled model
    ``margin ~ strength + is_group_a`` (identical groups give exactly 1.0).
    """
    group_a = tuple(sorted(set(group_a)))
    group_b = tuple(sorted(set(group_b)))
    if not group_a or not group_b:
        raise ValidationError("both groups must be non-empty")
    overlap = set(group_a) & set(group_b)
    if overlap:
        raise ValidationError(f"groups overlap: {', '.join(sorted(overlap))}")
    for t in group_a + group_b:
        if t not in dataset.opponents_of:
            raise ValidationError(f"unknown team {t!r}")
    excluded = set(group_a) | set(group_b)
    return pooled_regression(
        _group_samples(dataset, strengths, group_a, excluded, goal_cap),
        _group_samples(dataset, strengths, group_b, excluded, goal_cap),
        group_a=group_a,
        group_b=group_b,
    )
