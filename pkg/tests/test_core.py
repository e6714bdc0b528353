import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import all_tilesets_two_colors
from wangbars import (
    Bar,
    BarSet,
    Domain,
    Placement,
    Tile,
    TileGrid,
    TileSet,
    Tiling,
    UnknownNameError,
    WangBarsError,
    tile_as_bar,
    tiles_as_bars,
    validate_bar_tiling,
    validate_tile_tiling,
)


def test_tile_as_bar_definitional():
    t = Tile("t", "A", "B", "C", "D")
    b = tile_as_bar(t)
    assert b.length == 1
    assert b.top == ("A",) and b.bottom == ("C",)
    assert b.left == "D" and b.right == "B"
    assert b.name == "t"


def test_tile_as_bar_uniform():
    b = tile_as_bar(Tile("t", "c", "c", "c", "c"))
    assert b.top == b.bottom == ("c",) and b.left == b.right == "c"


def test_tile_as_bar_trio_tile1(trio):
    b = tile_as_bar(trio.tiles[0])
    assert b.top == ("green",)
    assert b.bottom == ("yellow",)
    assert b.left == "red" and b.right == "red"


def test_bar_invariants():
    with pytest.raises(WangBarsError):
        Bar("b", ("a",), ("a", "b"), "c", "c")
    with pytest.raises(WangBarsError):
        Bar("b", (), (), "c", "c")
    with pytest.raises(WangBarsError):
        Bar("b!", ("a",), ("a",), "c", "c")


def test_set_invariants():
    t = Tile("t", "c", "c", "c", "c")
    with pytest.raises(WangBarsError):
        TileSet(())
    with pytest.raises(WangBarsError):
        TileSet((t, t))
    with pytest.raises(WangBarsError):
        BarSet((tile_as_bar(t), tile_as_bar(t)))


def test_validate_single_self_matching_bar():
    b = Bar("b", ("c",), ("c",), "c", "c")
    tiling = Tiling(Domain.torus(1, 1), (Placement("b", 0, 0),))
    assert validate_bar_tiling(BarSet((b,)), tiling).ok


def test_validate_aligners_cannot_stack():
    # a5 tops under a6 bottoms mismatch, so two aligner-like bars
    # stacked vertically must report a v-mismatch
    a = Bar("alg", ("a5",) * 3, ("a6",) * 3, "z", "z")
    tiling = Tiling(
        Domain.free(), (Placement("alg", 0, 0), Placement("alg", 0, 1))
    )
    rep = validate_bar_tiling(BarSet((a,)), tiling)
    assert not rep.ok
    assert {v.kind for v in rep.violations} == {"v-mismatch"}
    assert len(rep.violations) == 3


def test_validate_detects_gap_overlap_oob():
    b = Bar("u", ("c",), ("c",), "c", "c")
    bars = BarSet((b,))
    rep = validate_bar_tiling(
        bars, Tiling(Domain.rect(2, 1), (Placement("u", 0, 0),))
    )
    assert [v.kind for v in rep.violations] == ["gap"]
    rep = validate_bar_tiling(
        bars,
        Tiling(Domain.torus(1, 1), (Placement("u", 0, 0), Placement("u", 0, 0))),
    )
    assert [v.kind for v in rep.violations] == ["overlap"]
    long = Bar("w", ("c", "c"), ("c", "c"), "c", "c")
    rep = validate_bar_tiling(
        BarSet((b, long)),
        Tiling(Domain.rect(2, 1), (Placement("w", 1, 0),)),
    )
    assert "out-of-bounds" in {v.kind for v in rep.violations}


def test_validate_unknown_name():
    b = Bar("u", ("c",), ("c",), "c", "c")
    with pytest.raises(UnknownNameError):
        validate_bar_tiling(
            BarSet((b,)), Tiling(Domain.torus(1, 1), (Placement("v", 0, 0),))
        )


def test_validate_torus_horizontal_wrap():
    left = Bar("l", ("t",), ("t",), "a", "b")
    right = Bar("r", ("t",), ("t",), "b", "a")
    bars = BarSet((left, right))
    ok = Tiling(
        Domain.torus(2, 1),
        (Placement("l", 0, 0), Placement("r", 1, 0)),
    )
    # l.right=b meets r.left=b; wrap: r.right=a meets l.left=a; vertical
    # self-wrap requires top == bottom, which holds
    assert validate_bar_tiling(bars, ok).ok
    bad = Bar("m", ("t",), ("t",), "a", "c")
    rep = validate_bar_tiling(
        BarSet((left, bad)),
        Tiling(Domain.torus(2, 1), (Placement("l", 0, 0), Placement("m", 1, 0))),
    )
    assert any(v.kind == "h-mismatch" for v in rep.violations)


def test_validate_full_width_bar_meets_itself():
    b = Bar("w", ("t", "t"), ("t", "t"), "a", "b")
    rep = validate_bar_tiling(
        BarSet((b,)), Tiling(Domain.torus(2, 1), (Placement("w", 0, 0),))
    )
    assert any(v.kind == "h-mismatch" for v in rep.violations)


def test_validate_tile_tiling_basics(trio, trio_column, one_tile):
    grid = TileGrid(Domain.torus(1, 1), (("t",),))
    assert validate_tile_tiling(one_tile, grid).ok
    assert validate_tile_tiling(trio, trio_column).ok
    # forced vertical mismatch: north=a over south=b
    ts = TileSet((Tile("t", "a", "e", "b", "e"),))
    rep = validate_tile_tiling(ts, TileGrid(Domain.torus(1, 2), (("t",), ("t",))))
    assert not rep.ok
    assert all(v.kind == "v-mismatch" for v in rep.violations)


def test_trio_column_is_derived_from_exhaustive_search(trio, trio_column):
    from oracle import all_torus_solutions

    sols = all_torus_solutions(trio, 1, 3)
    assert ("t1", "t3", "t2") in sols
    assert len(sols) == 3  # the three rotations
    assert tuple(r[0] for r in trio_column.rows) == ("t1", "t3", "t2")


def test_bar_and_tile_validators_agree_exhaustively():
    # every tile set with <= 2 tiles over 2 colors, every torus grid up
    # to 3x3, every assignment: the length-1-bar view and the tile view
    # must return the same verdict and the same mismatch count
    for tiles in all_tilesets_two_colors():
        bars = tiles_as_bars(tiles)
        names = [t.name for t in tiles.tiles]
        for w, h in itertools.product((1, 2, 3), repeat=2):
            for combo in itertools.product(names, repeat=w * h):
                grid = TileGrid(
                    Domain.torus(w, h),
                    tuple(tuple(combo[v * w : (v + 1) * w]) for v in range(h)),
                )
                trep = validate_tile_tiling(tiles, grid)
                placements = tuple(
                    Placement(combo[v * w + u], u, v)
                    for v in range(h)
                    for u in range(w)
                )
                brep = validate_bar_tiling(
                    bars, Tiling(Domain.torus(w, h), placements)
                )
                assert trep.ok == brep.ok
                assert len(trep.violations) == len(brep.violations)


@st.composite
def bar_tilings(draw):
    w = draw(st.integers(1, 4))
    h = draw(st.integers(1, 3))
    colors = ["c0", "c1"]
    bars = []
    for i in range(draw(st.integers(1, 3))):
        length = draw(st.integers(1, min(2, w)))
        bars.append(
            Bar(
                f"b{i}",
                tuple(draw(st.sampled_from(colors)) for _ in range(length)),
                tuple(draw(st.sampled_from(colors)) for _ in range(length)),
                draw(st.sampled_from(colors)),
                draw(st.sampled_from(colors)),
            )
        )
    barset = BarSet(tuple(bars))
    n_pl = draw(st.integers(0, w * h))
    placements = tuple(
        Placement(
            draw(st.sampled_from([b.name for b in bars])),
            draw(st.integers(0, w - 1)),
            draw(st.integers(0, h - 1)),
        )
        for _ in range(n_pl)
    )
    return barset, Tiling(Domain.torus(w, h), placements)


@given(bar_tilings(), st.integers(-5, 5), st.integers(-5, 5))
@settings(max_examples=150, deadline=None)
def test_torus_validity_is_translation_invariant(bt, dx, dy):
    bars, tiling = bt
    shifted = Tiling(
        tiling.domain,
        tuple(Placement(p.item, p.x + dx, p.y + dy) for p in tiling.placements),
    )
    a = validate_bar_tiling(bars, tiling)
    b = validate_bar_tiling(bars, shifted)
    assert a.ok == b.ok
    assert sorted(v.kind for v in a.violations) == sorted(
        v.kind for v in b.violations
    )


@given(bar_tilings())
@settings(max_examples=100, deadline=None)
def test_ok_implies_exact_cover(bt):
    bars, tiling = bt
    rep = validate_bar_tiling(bars, tiling)
    if rep.ok:
        from wangbars import cover_map

        covered = cover_map(bars, tiling)
        W, H = tiling.domain.width, tiling.domain.height
        assert len(covered) == W * H
        total = sum(
            bars.by_name()[p.item].length for p in tiling.placements
        )
        assert total == W * H  # exactly once, by recount
