import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wangbars import Domain, Tile, TileGrid, TileSet


@pytest.fixture(scope="session")
def trio() -> TileSet:
    # three tiles whose north/south colors cycle green->yellow->red->green
    # and whose east always equals their own west; the worked mid-size
    # instance used throughout (n=3, m=4)
    return TileSet(
        (
            Tile("t1", "green", "red", "yellow", "red"),
            Tile("t2", "yellow", "blue", "red", "blue"),
            Tile("t3", "red", "yellow", "green", "yellow"),
        )
    )


@pytest.fixture(scope="session")
def trio_column(trio) -> TileGrid:
    # the unique (up to rotation) valid 1x3 torus column, bottom-up;
    # frozen from exhaustive enumeration in test_core
    return TileGrid(Domain.torus(1, 3), (("t1",), ("t3",), ("t2",)))


@pytest.fixture(scope="session")
def one_tile() -> TileSet:
    return TileSet((Tile("t", "c", "c", "c", "c"),))


@pytest.fixture(scope="session")
def two_color_tile() -> TileSet:
    # n=1, m=2, tiles the plane (N=S, E=W)
    return TileSet((Tile("t", "c1", "c2", "c1", "c2"),))


@pytest.fixture(scope="session")
def bad_tile() -> TileSet:
    # n=1, m=2, north != south: tiles nothing
    return TileSet((Tile("t", "a", "b", "b", "a"),))
