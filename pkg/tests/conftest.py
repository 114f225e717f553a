import pathlib

import pytest

from powerwise.ingest import build_season, load_games

DATA_DIR = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def mini2024():
    return build_season(load_games(DATA_DIR / "mini2024.csv"), 2024)
