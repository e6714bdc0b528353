"""Line-oriented file formats: tiles, bars, placements, manifests, lattices.

All formats are plain text, one record per line, with ``#`` comments and
blank lines ignored on input.  Serializers emit a canonical form (fixed
key order, canonicalized torus coordinates, no comments) so that
parse-then-serialize is byte-identical on canonical files and repeated
runs produce identical bytes.

Tile files restrict color tokens to [A-Za-z0-9_]; the ``@`` prefix is
reserved for generated colors (reduction palettes, cut glue), which can
appear in bar files and manifests.
"""

from __future__ import annotations

import re

from .core import (
    Bar,
    BarSet,
    Domain,
    Placement,
    Tile,
    TileGrid,
    TileSet,
    Tiling,
    WangBarsError,
)
from .reduction import PALETTE_NAMES, Palette, ReductionManifest

MANIFEST_VERSION = 1

_TILE_TOKEN_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class ParseError(WangBarsError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _records(text: str):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield i, line


def _tile_token(i: int, tok: str) -> str:
    if not _TILE_TOKEN_RE.match(tok):
        raise ParseError(i, f"bad token {tok!r} (tile files allow [A-Za-z0-9_])")
    return tok


def parse_tiles(text: str) -> TileSet:
    tiles = []
    for i, line in _records(text):
        parts = line.split()
        if parts[0] != "tile" or len(parts) != 6:
            raise ParseError(i, "expected: tile <name> <N> <E> <S> <W>")
        name, n, e, s, w = (_tile_token(i, p) for p in parts[1:])
        tiles.append(Tile(name, n, e, s, w))
    if not tiles:
        raise ParseError(0, "no tiles in file")
    try:
        return TileSet(tuple(tiles))
    except WangBarsError as exc:
        raise ParseError(0, str(exc)) from None


def serialize_tiles(tiles: TileSet) -> str:
    return "".join(
        f"tile {t.name} {t.north} {t.east} {t.south} {t.west}\n" for t in tiles.tiles
    )


def parse_bars(text: str) -> BarSet:
    bars = []
    for i, line in _records(text):
        parts = line.split()
        if parts[0] != "bar" or len(parts) != 6:
            raise ParseError(
                i, "expected: bar <name> left=<c> right=<c> top=<c,..> bottom=<c,..>"
            )
        name = parts[1]
        kv = {}
        for p in parts[2:]:
            if "=" not in p:
                raise ParseError(i, f"expected key=value, got {p!r}")
            k, v = p.split("=", 1)
            kv[k] = v
        missing = {"left", "right", "top", "bottom"} - kv.keys()
        if missing:
            raise ParseError(i, f"missing fields: {sorted(missing)}")
        try:
            bars.append(
                Bar(
                    name,
                    tuple(kv["top"].split(",")),
                    tuple(kv["bottom"].split(",")),
                    kv["left"],
                    kv["right"],
                )
            )
        except WangBarsError as exc:
            raise ParseError(i, str(exc)) from None
    if not bars:
        raise ParseError(0, "no bars in file")
    try:
        return BarSet(tuple(bars))
    except WangBarsError as exc:
        raise ParseError(0, str(exc)) from None


def serialize_bars(bars: BarSet) -> str:
    return "".join(
        f"bar {b.name} left={b.left} right={b.right} "
        f"top={','.join(b.top)} bottom={','.join(b.bottom)}\n"
        for b in bars.bars
    )


def parse_placements(text: str) -> Tiling:
    domain = None
    placements = []
    for i, line in _records(text):
        parts = line.split()
        if parts[0] == "domain":
            if domain is not None:
                raise ParseError(i, "duplicate domain header")
            if parts[1:] == ["free"]:
                domain = Domain.free()
            elif len(parts) == 4 and parts[1] in ("torus", "rect"):
                try:
                    domain = Domain(parts[1], int(parts[2]), int(parts[3]))
                except (ValueError, WangBarsError) as exc:
                    raise ParseError(i, str(exc)) from None
            else:
                raise ParseError(i, "expected: domain torus|rect <W> <H>, or: domain free")
        elif parts[0] == "place":
            if domain is None:
                raise ParseError(i, "place before domain header")
            if len(parts) != 4:
                raise ParseError(i, "expected: place <name> <x> <y>")
            try:
                x, y = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(i, "coordinates must be integers") from None
            if domain.kind == "torus":
                x, y = x % domain.width, y % domain.height
            placements.append(Placement(parts[1], x, y))
        else:
            raise ParseError(i, f"unknown record {parts[0]!r}")
    if domain is None:
        raise ParseError(0, "missing domain header")
    return Tiling(domain, tuple(placements))


def serialize_placements(tiling: Tiling) -> str:
    d = tiling.domain
    head = f"domain {d.kind}" + ("" if d.kind == "free" else f" {d.width} {d.height}")
    pls = list(tiling.placements)
    if d.kind == "torus":
        pls = [Placement(p.item, p.x % d.width, p.y % d.height) for p in pls]
    pls.sort(key=lambda p: (p.y, p.x, p.item))
    return head + "\n" + "".join(f"place {p.item} {p.x} {p.y}\n" for p in pls)


def parse_lattice(text: str) -> TileGrid:
    dims = None
    rows: dict[int, tuple[str, ...]] = {}
    for i, line in _records(text):
        parts = line.split()
        if parts[0] == "lattice":
            if dims is not None:
                raise ParseError(i, "duplicate lattice header")
            if len(parts) != 3:
                raise ParseError(i, "expected: lattice <P> <Q>")
            try:
                dims = (int(parts[1]), int(parts[2]))
            except ValueError:
                raise ParseError(i, "dimensions must be integers") from None
        elif parts[0] == "row":
            if dims is None:
                raise ParseError(i, "row before lattice header")
            try:
                v = int(parts[1])
            except (IndexError, ValueError):
                raise ParseError(i, "expected: row <v> <name>...") from None
            if v in rows:
                raise ParseError(i, f"duplicate row {v}")
            if len(parts) != 2 + dims[0]:
                raise ParseError(i, f"row must name exactly {dims[0]} tiles")
            rows[v] = tuple(parts[2:])
        else:
            raise ParseError(i, f"unknown record {parts[0]!r}")
    if dims is None:
        raise ParseError(0, "missing lattice header")
    if sorted(rows) != list(range(dims[1])):
        raise ParseError(0, f"expected rows 0..{dims[1] - 1}")
    try:
        return TileGrid(
            Domain.torus(*dims), tuple(rows[v] for v in range(dims[1]))
        )
    except WangBarsError as exc:
        raise ParseError(0, str(exc)) from None


def serialize_lattice(grid: TileGrid) -> str:
    out = [f"lattice {grid.width} {grid.height}"]
    for v, row in enumerate(grid.rows):
        out.append(f"row {v} " + " ".join(row))
    return "\n".join(out) + "\n"


def serialize_manifest(manifest: ReductionManifest) -> str:
    lines = [
        f"format={manifest.version}",
        f"n={manifest.n}",
        f"m={manifest.m}",
        f"section={manifest.section_len}",
        f"encoder_len={manifest.encoder_len}",
        f"linker_len={manifest.linker_len}",
        f"row_pitch={manifest.row_pitch}",
        f"column_pitch={manifest.column_pitch}",
        f"row_shift={manifest.row_shift}",
        "order=" + ",".join(manifest.order),
    ]
    for name, token in manifest.palette.tokens:
        lines.append(f"palette.{name}={token}")
    for k, t in enumerate(manifest.tiles):
        lines.append(f"tile.{k}={t.name},{t.north},{t.east},{t.south},{t.west}")
    for name, role in manifest.roles:
        lines.append(f"role.{name}={role}")
    return "\n".join(lines) + "\n"


def parse_manifest(text: str) -> ReductionManifest:
    kv: list[tuple[str, str, int]] = []
    for i, line in _records(text):
        if "=" not in line:
            raise ParseError(i, "expected key=value")
        k, v = line.split("=", 1)
        kv.append((k, v, i))
    plain = {k: (v, i) for k, v, i in kv}

    def need(key: str) -> str:
        if key not in plain:
            raise ParseError(0, f"missing key {key!r}")
        return plain[key][0]

    def need_int(key: str) -> int:
        v = need(key)
        try:
            return int(v)
        except ValueError:
            raise ParseError(plain[key][1], f"{key} must be an integer") from None

    version = need_int("format")
    if version != MANIFEST_VERSION:
        raise ParseError(plain["format"][1], f"unsupported format version {version}")
    palette_tokens = []
    for name in PALETTE_NAMES:
        palette_tokens.append((name, need(f"palette.{name}")))
    tiles = []
    k = 0
    while f"tile.{k}" in plain:
        v, i = plain[f"tile.{k}"]
        parts = v.split(",")
        if len(parts) != 5:
            raise ParseError(i, "tile entries need name,N,E,S,W")
        try:
            tiles.append(Tile(*parts))
        except WangBarsError as exc:
            raise ParseError(i, str(exc)) from None
        k += 1
    roles = tuple(
        (key[len("role."):], v) for key, v, _ in kv if key.startswith("role.")
    )
    try:
        return ReductionManifest(
            version=version,
            n=need_int("n"),
            m=need_int("m"),
            order=tuple(need("order").split(",")),
            palette=Palette(tuple(palette_tokens)),
            tiles=tuple(tiles),
            roles=roles,
            section_len=need_int("section"),
            encoder_len=need_int("encoder_len"),
            linker_len=need_int("linker_len"),
            row_pitch=need_int("row_pitch"),
            column_pitch=need_int("column_pitch"),
            row_shift=need_int("row_shift"),
        )
    except WangBarsError as exc:
        raise ParseError(0, str(exc)) from None
