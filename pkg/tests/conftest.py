"""
Pytest configuration and shared fixtures
"""

import os
from pathlib import Path

import pytest

TOY_UNITS = """\
unit_id,population,area_km2,perimeter_km,bbox_minx,bbox_miny,bbox_maxx,bbox_maxy,gov_dem,gov_rep,gov_ind
A,100,100,40,0,10,10,20,60,40,5
B,100,100,40,10,10,20,20,55,45,0
C,100,100,40,20,10,30,20,70,30,10
D,100,100,40,0,0,10,10,20,80,5
E,100,100,40,10,0,20,10,30,70,0
F,100,100,40,20,0,30,10,40,60,10
"""

# 2 x 3 grid of 10 km squares (A B C over D E F) plus a 0.1 km sliver B-D
TOY_ADJACENCY = """\
unit_a,unit_b,shared_perimeter_km
A,B,10
B,C,10
D,E,10
E,F,10
A,D,10
B,E,10
C,F,10
B,D,0.1
"""

TOY_SEED = """\
unit_id,district
A,north
B,north
C,north
D,south
E,south
F,south
"""

PAIR_UNITS = """\
unit_id,population,area_km2,perimeter_km,bbox_minx,bbox_miny,bbox_maxx,bbox_maxy
West,500,100,40,0,0,10,10
East,501,100,40,10,0,20,10
"""

PAIR_ADJACENCY = """\
unit_a,unit_b,shared_perimeter_km
West,East,10
"""

MT_DATA_ENV = "MAPSPLIT_MT_DATA"


@pytest.fixture
def isolated(tmp_path, monkeypatch):
    """
    Run inside tmp_path with no run config reachable through the environment.

    Returns:
        Path: The working directory
    """
    monkeypatch.delenv("MAPSPLIT_CONFIG", raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture
def toy_data(tmp_path):
    """
    Write the 6-unit toy map (units with one contest, borders, a seed plan).

    Returns:
        dict: Paths keyed by "units", "adjacency", "seed" and "dir"
    """
    data = tmp_path / "data"
    data.mkdir()
    (data / "units.csv").write_text(TOY_UNITS)
    (data / "adjacency.csv").write_text(TOY_ADJACENCY)
    (data / "seed.csv").write_text(TOY_SEED)
    return {
        "dir": data,
        "units": data / "units.csv",
        "adjacency": data / "adjacency.csv",
        "seed": data / "seed.csv",
    }


@pytest.fixture
def pair_data(tmp_path):
    """Two adjacent units"""
    data = tmp_path / "pair"
    data.mkdir()
    (data / "units.csv").write_text(PAIR_UNITS)
    (data / "adjacency.csv").write_text(PAIR_ADJACENCY)
    return {"dir": data, "units": data / "units.csv", "adjacency": data / "adjacency.csv"}


@pytest.fixture
def run_config_file(tmp_path, toy_data):
    """
    mapsplit.yaml next to the toy data, using paths relative to itself.

    Returns:
        Path: The config file
    """
    path = tmp_path / "mapsplit.yaml"
    path.write_text(
        """\
data:
  units: data/units.csv
  adjacency: data/adjacency.csv
constraints:
  max_pop_dev: 0.2
chain:
  steps: 20
  rng_seed: 11
  seeds: [data/seed.csv]
output: out
"""
    )
    return path


@pytest.fixture(scope="session")
def mt_data():
    """
    Montana dataset directory (units.csv, adjacency.csv, adopted.csv).

    Skips the test when the data is not present.
    """
    default = Path(__file__).parent / "data" / "mt"
    root = Path(os.getenv(MT_DATA_ENV, default))
    needed = [root / name for name in ("units.csv", "adjacency.csv", "adopted.csv")]
    if not all(p.is_file() for p in needed):
        pytest.skip(f"Montana dataset not found in {root} (set {MT_DATA_ENV})")
    return root


@pytest.fixture
def empty_dir(tmp_path):
    """
    Create an empty temporary directory (no run config).

    Returns:
        Path: Empty directory
    """
    empty = tmp_path / "empty"
    empty.mkdir()
    return empty
