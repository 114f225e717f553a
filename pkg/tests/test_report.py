"""Exports, text tables, SVG charts, and the run report."""

import xml.etree.ElementTree as ET

import pytest

from powerwise.errors import ParseError, ValidationError
from powerwise.experiments import perturbation_experiment, strength_regression
from powerwise.pairwise import run_tournament
from powerwise.power_rating import SolverConfig, solve_power_ratings
from powerwise.report import (
    RunReport,
    export_pairwise_csv,
    export_points_csv,
    export_ranking_csv,
    export_ratings_csv,
    export_rpi_csv,
    parse_ranking_csv,
    render_decisiveness_text,
    render_perturbation_text,
    render_ranking,
    render_regression_svg,
    render_regression_text,
)
from powerwise.rpi import compute_rpi
from powerwise.tiebreak import RankingEntry, RankingList, rank_season


@pytest.fixture(scope="module")
def pipeline(request):
    mini = request.getfixturevalue("mini2024")
    ratings, table, ranking = rank_season(mini, SolverConfig(hfa=0.0))
    return mini, ratings, table, ranking


def test_ratings_csv(pipeline):
    mini, ratings, _, _ = pipeline
    text = export_ratings_csv(ratings, mini)
    lines = text.splitlines()
    assert lines[0] == "team,rating,component,games_played"
    assert len(lines) == 1 + len(mini.teams)
    yale = next(l for l in lines if l.startswith("Yale,"))
    _, rating, component, games = yale.split(",")
    assert float(rating) == pytest.approx(ratings.ratings["Yale"], abs=1e-6)
    assert component == "0"
    assert games == "3"


def test_rpi_csv(pipeline):
    mini, *_ = pipeline
    table = compute_rpi(mini)
    lines = export_rpi_csv(table).splitlines()
    assert lines[0] == "team,rpi,wp,owp,oowp,rank"
    ranks = table.ranks()
    for line in lines[1:]:
        team, rpi, wp, owp, oowp, rank = line.split(",")
        assert float(rpi) == pytest.approx(table.rpi[team], abs=1e-6)
        assert int(rank) == ranks[team]


def test_pairwise_csv(pipeline):
    _, _, table, _ = pipeline
    lines = export_pairwise_csv(table).splitlines()
    assert lines[0] == "team_a,team_b,winner,deciding_step,evidence"
    assert len(lines) == 1 + len(table.outcomes)
    assert any(",head_to_head," in l for l in lines)


def test_points_csv(pipeline):
    _, _, table, _ = pipeline
    lines = export_points_csv(table).splitlines()
    assert lines[0] == "team,points,h2h_wins,co_wins,pr_wins"
    for line in lines[1:]:
        team, points, h2h, co, pr = line.split(",")
        assert int(points) == table.points[team] == int(h2h) + int(co) + int(pr)


def test_ranking_csv_round_trip(pipeline):
    *_, ranking = pipeline
    text = export_ranking_csv(ranking)
    assert text.startswith("# season=2024\n")
    assert parse_ranking_csv(text) == ranking


def test_ranking_csv_round_trip_awkward_floats():
    entries = (
        RankingEntry(1, "A", 0.1 + 0.2, None, (("score", 0.1 + 0.2),)),
        RankingEntry(1, "B", 0.1 + 0.2, 1, (("score", 0.1 + 0.2), ("power_rating", -1.5))),
        RankingEntry(2, "C", -3.0, 1, ()),
    )
    ranking = RankingList(season=1999, entries=entries)
    assert parse_ranking_csv(export_ranking_csv(ranking)) == ranking


def test_parse_ranking_csv_errors():
    with pytest.raises(ParseError, match="season"):
        parse_ranking_csv("rank,team,points,tie_group,audit\n1,A,1.0,,points=1.0\n")
    with pytest.raises(ParseError, match="header"):
        parse_ranking_csv("# season=2024\n1,A,1.0,,points=1.0\n")
    with pytest.raises(ParseError, match="audit"):
        parse_ranking_csv("# season=2024\nrank,team,points,tie_group,audit\n1,A,1.0,,junk\n")
    with pytest.raises(ParseError, match="header"):
        parse_ranking_csv("")


def test_render_ranking_text(pipeline):
    *_, ranking = pipeline
    text = render_ranking(ranking, "text")
    lines = text.splitlines()
    assert lines[0] == "season 2024"
    assert lines[1].startswith("rank  team")
    assert len(lines) == 2 + len(ranking.entries)
    assert lines[2].lstrip().startswith("1")


def test_render_ranking_formats_dispatch(pipeline):
    *_, ranking = pipeline
    assert render_ranking(ranking, "csv") == export_ranking_csv(ranking)
    assert render_ranking(ranking, "svg").startswith("<svg")
    with pytest.raises(ValidationError, match="unknown ranking format"):
        render_ranking(ranking, "pdf")


def test_render_ranking_svg_well_formed(pipeline):
    *_, ranking = pipeline
    svg = render_ranking(ranking, "svg")
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    bars = [el for el in root.iter() if el.tag.endswith("rect")]
    assert len(bars) == len(ranking.entries)


def test_renders_are_byte_deterministic(pipeline):
    mini, _, table, ranking = pipeline
    again_ratings, again_table, again_ranking = rank_season(mini, SolverConfig(hfa=0.0))
    assert render_ranking(ranking, "svg") == render_ranking(again_ranking, "svg")
    assert export_pairwise_csv(table) == export_pairwise_csv(again_table)
    assert render_ranking(ranking, "text") == render_ranking(again_ranking, "text")


def test_decisiveness_text(pipeline):
    _, _, table, _ = pipeline
    text = render_decisiveness_text(table)
    assert "pairs compared: 21" in text
    assert "head_to_head" in text and "%" in text


def test_perturbation_text(pipeline):
    mini, *_ = pipeline
    report = perturbation_experiment(
        mini, mini.games[0], "power", solver_config=SolverConfig(hfa=0.0), top_k=7
    )
    text = render_perturbation_text(report)
    assert "method: power" in text
    assert f"teams in top 7 changing rank: {report.n_changed}" in text


def regression_report():
    import datetime

    from powerwise.ingest import GameRecord, build_season

    def game(day, team, opp, margin):
        return GameRecord(
            2024, datetime.date(2024, 2, 1 + day), team, opp, 8 + margin, 8, False
        )

    games = [
        game(0, "A1", "E1", 5), game(1, "A1", "E2", 4),
        game(2, "A2", "E2", 4), game(3, "A2", "E3", 2),
        game(4, "B1", "E1", 1), game(5, "B1", "E2", 0),
        game(6, "B2", "E2", -1), game(7, "B2", "E3", -2),
    ]
    ds = build_season(games, 2024)
    strengths = {"E1": 1.0, "E2": 2.0, "E3": 3.0}
    return strength_regression(ds, strengths, ["A1", "A2"], ["B1", "B2"])


def test_regression_svg_well_formed():
    report = regression_report()
    svg = render_regression_svg(report)
    root = ET.fromstring(svg)
    circles = [el for el in root.iter() if el.tag.endswith("circle")]
    assert len(circles) == report.n_points
    polygons = [el for el in root.iter() if el.tag.endswith("polygon")]
    assert len(polygons) == 2  # one confidence band per group
    assert render_regression_svg(report) == svg


def test_regression_text():
    text = render_regression_text(regression_report())
    assert "offset (A - B)" in text
    assert "p-value" in text


def test_run_report_writes_last_and_verifies(tmp_path):
    report = RunReport(season=2024, command="rank")
    report.add_artifact(tmp_path, "ratings/ratings.csv", "team,rating\n")
    report.add_artifact(tmp_path, "pairwise/points.csv", "team,points\n")
    report.summary.append("teams: 7")
    out = report.write(tmp_path)
    assert out.name == "report.txt"
    text = out.read_text()
    assert "command: rank" in text
    assert "ratings/ratings.csv" in text
    assert "generated:" not in text

    stamped = RunReport(season=2024, command="rank", timestamp="2024-05-01T10:00:00")
    assert "generated: 2024-05-01T10:00:00" in stamped.render()


def test_run_report_refuses_missing_artifact(tmp_path):
    report = RunReport(season=2024, command="rank", artifacts=["nowhere.csv"])
    with pytest.raises(ValidationError, match="missing"):
        report.write(tmp_path)
    assert not (tmp_path / "report.txt").exists()
