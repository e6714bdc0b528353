import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import random_tileset
from wangbars import (
    DecodeError,
    Domain,
    Placement,
    Tile,
    TileGrid,
    TileSet,
    Tiling,
    WangBarsError,
    decode_tiling,
    enumerate_colors,
    lattices_equivalent,
    reduce,
    reduce_lattice,
    simulate_tiling,
    solve,
    validate_bar_tiling,
)


def canon(manifest):
    inv = {tok: name for name, tok in manifest.palette.tokens}
    return inv


def test_enumerate_colors_default_and_override(trio, one_tile):
    assert enumerate_colors(one_tile) == ("c",)
    # hand-derived first-occurrence scan: t1 = (green, red, yellow, red)
    assert enumerate_colors(trio) == ("green", "red", "yellow", "blue")
    override = ("red", "green", "blue", "yellow")
    assert enumerate_colors(trio, override) == override
    with pytest.raises(WangBarsError):
        enumerate_colors(trio, ("red", "green", "blue"))
    with pytest.raises(WangBarsError):
        enumerate_colors(trio, ("red", "green", "blue", "pink"))


def test_encoder_worked_example(trio):
    bars, manifest = reduce(trio, ("red", "green", "blue", "yellow"))
    inv = canon(manifest)
    enc = bars.by_name()["encoder"]
    assert enc.length == 27
    assert [inv[c] for c in enc.top[:9]] == [
        "a5", "a3", "a5", "a5", "a1", "a3", "a5", "a5", "a5",
    ]
    assert [inv[c] for c in enc.bottom[:9]] == [
        "a4", "a6", "a6", "a6", "a2", "a6", "a6", "a6", "a4",
    ]
    assert inv[enc.left] == "z" and inv[enc.right] == "z"
    # one marked segment per arm in every section
    for s in range(3):
        sec_top = enc.top[9 * s : 9 * (s + 1)]
        sec_bot = enc.bottom[9 * s : 9 * (s + 1)]
        assert sum(inv[c] == "a3" for c in sec_top[:4]) == 1
        assert sum(inv[c] == "a3" for c in sec_top[5:]) == 1
        assert inv[sec_top[4]] == "a1" and inv[sec_bot[4]] == "a2"
        assert sum(inv[c] == "a4" for c in sec_bot[:4]) == 1
        assert sum(inv[c] == "a4" for c in sec_bot[5:]) == 1


def test_encoder_minimal_instance(one_tile):
    bars, manifest = reduce(one_tile)
    inv = canon(manifest)
    enc = bars.by_name()["encoder"]
    assert [inv[c] for c in enc.top] == ["a3", "a1", "a3"]
    assert [inv[c] for c in enc.bottom] == ["a4", "a2", "a4"]


def test_selector_structure(one_tile, trio):
    for tiles, m in ((one_tile, 1), (trio, 4)):
        bars, manifest = reduce(tiles)
        inv = canon(manifest)
        sel = [bars.by_name()[f"sel{i}"] for i in range(1, 8)]
        assert sel[3].length == 2 * m + 1
        assert inv[sel[0].top[0]] == "a2" and inv[sel[6].bottom[0]] == "a1"
        assert [inv[c] for c in sel[3].top] == ["a7"] * m + ["s3"] + ["a7"] * m
        assert [inv[c] for c in sel[3].bottom] == ["a8"] * m + ["s4"] + ["a8"] * m
        # x on the left and y on the right of exactly bars 2 and 6
        xy = [(inv[b.left], inv[b.right]) for b in sel]
        assert xy[1] == xy[5] == ("x", "y")
        assert xy[3] == ("z", "z")
        for i in (0, 2, 4, 6):
            assert xy[i] == ("zero", "zero")
        # internal segments chain s1..s6 uniquely
        assert [inv[b.bottom[0]] for b in sel[:3]] == ["s1", "s2", "s3"]
        assert [inv[b.top[0]] for b in sel[4:]] == ["s4", "s5", "s6"]


def test_linker_lengths():
    # n=3, m=4 gives long linkers of length 23
    assert (3 - 1) * (2 * 4 + 1) + 4 + 1 == 23
    one = TileSet((Tile("t", "c", "c", "c", "c"),))
    bars, manifest = reduce(one)
    assert manifest.linker_len == 2
    dl = bars.by_name()["link_dl"]
    dr = bars.by_name()["link_dr"]
    inv = canon(manifest)
    assert [inv[c] for c in dr.top] == ["b1", "b3"]
    assert [inv[c] for c in dr.bottom] == ["b4", "b2"]
    assert [inv[c] for c in dl.top] == ["b3", "b1"]
    assert [inv[c] for c in dl.bottom] == ["b2", "b4"]
    assert (inv[dl.left], inv[dl.right]) == ("y", "x")
    assert (inv[dr.left], inv[dr.right]) == ("y", "x")


def test_reduce_counts_trio(trio):
    bars, manifest = reduce(trio)
    assert len(bars) == 29
    lengths = Counter(b.length for b in bars.bars)
    assert lengths == Counter({1: 24, 9: 2, 23: 2, 27: 1})
    assert len(bars.colors()) == 26
    p = manifest.palette
    assert {c for b in bars.bars for c in (b.left, b.right)} == {
        p.x, p.y, p.z, p.zero,
    }


def test_reduce_counts_minimal(one_tile):
    bars, _ = reduce(one_tile)
    lengths = Counter(b.length for b in bars.bars)
    assert lengths == Counter({1: 24, 3: 3, 2: 2})
    assert len(bars.colors()) == 26


def test_palette_disjoint_and_collision_renaming():
    # a tile set that already uses "@a1" forces a renamed palette token
    tiles = TileSet((Tile("t", "@a1", "@a1", "@a1", "@a1"),))
    bars, manifest = reduce(tiles)
    toks = dict(manifest.palette.tokens)
    assert toks["a1"] == "@a1_2"
    assert "@a1" not in {tok for _, tok in manifest.palette.tokens}
    assert not (set(bars.colors()) & set(tiles.colors()))


@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_formula_sweep(n, m, seed):
    m = min(m, 4 * n)  # one tile exposes only four edges
    tiles = random_tileset(random.Random(seed), n, m)
    bars, manifest = reduce(tiles)
    S = 2 * m + 1
    assert len(bars) == 29
    assert bars.by_name()["encoder"].length == n * S
    assert bars.by_name()["link_dl"].length == (n - 1) * S + m + 1
    assert bars.by_name()["link_dr"].length == (n - 1) * S + m + 1
    assert bars.by_name()["sel4"].length == S
    assert bars.by_name()["aligner"].length == S
    assert sum(1 for b in bars.bars if b.length == 1) == 24
    assert len(bars.colors()) == 26
    assert not (set(bars.colors()) & set(tiles.colors()))


def test_reduce_determinism(trio):
    from wangbars.formats import serialize_bars, serialize_manifest

    a = reduce(trio)
    b = reduce(trio)
    assert serialize_bars(a[0]) == serialize_bars(b[0])
    assert serialize_manifest(a[1]) == serialize_manifest(b[1])


def test_simulate_minimal_instances(one_tile, two_color_tile):
    for tiles in (one_tile, two_color_tile):
        bars, manifest = reduce(tiles)
        name = tiles.tiles[0].name
        lat = TileGrid(Domain.torus(1, 1), ((name,),))
        tiling = simulate_tiling(manifest, lat)
        assert validate_bar_tiling(bars, tiling).ok
        assert lattices_equivalent(decode_tiling(manifest, tiling), lat)


def test_simulate_2x2_dimensions(one_tile):
    bars, manifest = reduce(one_tile)
    lat = TileGrid(Domain.torus(2, 2), (("t", "t"), ("t", "t")))
    tiling = simulate_tiling(manifest, lat)
    assert (tiling.domain.width, tiling.domain.height) == (12, 16)
    assert validate_bar_tiling(bars, tiling).ok


def test_simulate_counts_one_selector_and_encoder_per_slot(one_tile):
    _, manifest = reduce(one_tile)
    lat = TileGrid(Domain.torus(2, 2), (("t", "t"), ("t", "t")))
    tiling = simulate_tiling(manifest, lat)
    counts = Counter(p.item for p in tiling.placements)
    slots = 2 * (2 * 2)  # K * J with K = lcm = 2, J = 2*lcm = 4
    assert counts["encoder"] == slots
    assert counts["sel1"] == slots


def test_simulate_backbone_geometry(trio, trio_column):
    # the global pattern's stated geometry: backbone rows every 4, one
    # selector long bar per column pitch 2n(2m+1), consecutive backbone
    # rows shifted by n(2m+1)
    _, manifest = reduce(trio)
    tiling = simulate_tiling(manifest, trio_column)
    W = tiling.domain.width
    nS, pitch = manifest.row_shift, manifest.column_pitch
    enc_rows = sorted({p.y for p in tiling.placements if p.item == "encoder"})
    assert enc_rows == [0, 4, 8, 12, 16, 20]
    centers = {}
    for p in tiling.placements:
        if p.item == "sel4":
            centers.setdefault(p.y, []).append((p.x + manifest.m) % W)
    for row, cols in centers.items():
        cols.sort()
        assert [b - a for a, b in zip(cols, cols[1:])] == [pitch] * (len(cols) - 1)
    for row in enc_rows[:-1]:
        lo, hi = min(centers[row]), min(centers[row + 4])
        assert (hi - lo) % pitch in (nS, pitch - nS)


def test_simulate_rejects_invalid_lattice(trio):
    _, manifest = reduce(trio)
    bad = TileGrid(Domain.torus(1, 1), (("t1",),))  # t1 alone: N != S
    with pytest.raises(WangBarsError):
        simulate_tiling(manifest, bad)


def test_simulate_odd_height_doubling_flag(trio, trio_column):
    _, manifest = reduce(trio)
    with pytest.raises(WangBarsError):
        simulate_tiling(manifest, trio_column, allow_doubling=False)
    tiling = simulate_tiling(manifest, trio_column)
    assert tiling.domain.height == 24  # 8 * lcm(1,3): doubled vertically


def test_trio_roundtrip(trio, trio_column):
    bars, manifest = reduce(trio)
    tiling = simulate_tiling(manifest, trio_column)
    assert validate_bar_tiling(bars, tiling).ok
    decoded = decode_tiling(manifest, tiling)
    assert lattices_equivalent(decoded, trio_column)
    assert decoded == reduce_lattice(trio_column)


@st.composite
def valid_two_tile_lattices(draw):
    """A 2-tile set tiling as alternating columns, plus a valid lattice."""
    c = [f"k{i}" for i in range(4)]
    ns1 = draw(st.sampled_from(c))
    ns2 = draw(st.sampled_from(c))
    e1 = draw(st.sampled_from(c))
    e2 = draw(st.sampled_from(c))
    t1 = Tile("t1", ns1, e1, ns1, e2)
    t2 = Tile("t2", ns2, e2, ns2, e1)
    tiles = TileSet((t1, t2))
    lat = TileGrid(Domain.torus(2, 1), (("t1", "t2"),))
    return tiles, lat


@given(valid_two_tile_lattices())
@settings(max_examples=10, deadline=None)
def test_simulate_decode_roundtrip_two_tiles(pair):
    tiles, lat = pair
    bars, manifest = reduce(tiles)
    tiling = simulate_tiling(manifest, lat)
    assert validate_bar_tiling(bars, tiling).ok
    assert lattices_equivalent(decode_tiling(manifest, tiling), lat)


def test_simulate_checkerboard_two_tiles():
    # two distinct tiles alternating in both directions: slots select
    # different sections, so left- and right-aligner counts both occur
    t1 = Tile("t1", "a", "c", "b", "d")
    t2 = Tile("t2", "b", "d", "a", "c")
    tiles = TileSet((t1, t2))
    lat = TileGrid(Domain.torus(2, 2), (("t1", "t2"), ("t2", "t1")))
    bars, manifest = reduce(tiles)
    tiling = simulate_tiling(manifest, lat)
    assert (tiling.domain.width, tiling.domain.height) == (72, 16)
    assert validate_bar_tiling(bars, tiling).ok
    assert lattices_equivalent(decode_tiling(manifest, tiling), lat)


def test_decode_solver_found_tiling(one_tile):
    bars, manifest = reduce(one_tile)
    res = solve(bars, Domain.torus(6, 8))
    assert res.verdict == "sat"
    decoded = decode_tiling(manifest, res.witness)
    assert decoded.rows == (("t",),)


def test_decode_structure_errors(one_tile):
    bars, manifest = reduce(one_tile)
    # a tiling with no selectors at all: invalid as a tiling, and decode
    # must refuse rather than crash
    with pytest.raises(DecodeError):
        decode_tiling(
            manifest, Tiling(Domain.torus(6, 8), (Placement("aligner", 0, 0),))
        )
    # valid simulate output but torus dims claimed wrong kind
    lat = TileGrid(Domain.torus(1, 1), (("t",),))
    tiling = simulate_tiling(manifest, lat)
    with pytest.raises(DecodeError):
        decode_tiling(manifest, Tiling(Domain.free(), tiling.placements))


def test_reduce_lattice_minimal_periods():
    rows = (("a", "b", "a", "b"), ("a", "b", "a", "b"))
    tiles_dummy = TileGrid(Domain.torus(4, 2), rows)
    red = reduce_lattice(tiles_dummy)
    assert (red.width, red.height) == (2, 1)
    shifted = TileGrid(Domain.torus(4, 2), (("b", "a", "b", "a"),) * 2)
    assert lattices_equivalent(tiles_dummy, shifted)
