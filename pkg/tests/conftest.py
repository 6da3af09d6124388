import pathlib

import pytest

from wheelsim.level import load_level_file

DATA_DIR = pathlib.Path(__file__).parent / "data"
LEVEL_DIR = pathlib.Path(__file__).resolve().parents[1] / "levels"


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


@pytest.fixture(scope="session")
def level_dir():
    return LEVEL_DIR


@pytest.fixture(scope="session")
def sprint_level():
    return load_level_file(DATA_DIR / "sprint.level.json")


@pytest.fixture(scope="session")
def straight_level():
    return load_level_file(LEVEL_DIR / "straight_corridor.level.json")


@pytest.fixture(scope="session")
def slalom_level():
    return load_level_file(LEVEL_DIR / "slalom.level.json")
