"""Wang tiles, Wang bars, and edge-matching validation.

A Wang tile is a unit square with a color on each edge.  A Wang bar is
its 1 x L generalization: one color per unit segment of the top and
bottom sides, plus one color on each end.  A tile is exactly a bar of
length 1.  Tilings place translated copies of bars on the integer grid
(never rotated or reflected); every pair of touching unit segments must
carry equal colors.

All types here are immutable values and all operations are pure, so
they are safe to share across threads.  Validators return reports with
located violations instead of raising; only malformed input (unknown
names, bad tokens) raises.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

# Color tokens are compared by exact string equality; no case folding.
# Tokens generated internally (reduction palettes, cut glue) carry a
# leading "@" so that they can never collide with file-supplied tokens,
# which are restricted to [A-Za-z0-9_].
Color = str

_TOKEN_RE = re.compile(r"[A-Za-z0-9_@]+\Z")


class WangBarsError(Exception):
    """Base class for all errors raised by this package."""


class UnknownNameError(WangBarsError):
    """A placement or grid cell names a tile/bar not present in the set."""


def check_token(token: str) -> str:
    if not isinstance(token, str) or not _TOKEN_RE.match(token):
        raise WangBarsError(f"bad symbol token: {token!r}")
    return token


@dataclass(frozen=True)
class Tile:
    """Unit square with one color per edge."""

    name: str
    north: Color
    east: Color
    south: Color
    west: Color

    def __post_init__(self):
        check_token(self.name)
        for c in (self.north, self.east, self.south, self.west):
            check_token(c)

    def edges(self) -> tuple[Color, Color, Color, Color]:
        """Edge colors in (north, east, south, west) order."""
        return (self.north, self.east, self.south, self.west)


@dataclass(frozen=True)
class TileSet:
    tiles: tuple[Tile, ...]

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(self.tiles))
        if not self.tiles:
            raise WangBarsError("tile set must be non-empty")
        names = [t.name for t in self.tiles]
        if len(set(names)) != len(names):
            raise WangBarsError("tile names must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.tiles)

    def by_name(self) -> dict[str, Tile]:
        return {t.name: t for t in self.tiles}

    def colors(self) -> tuple[Color, ...]:
        """Distinct colors in first-occurrence order, scanning each tile N,E,S,W."""
        seen: dict[Color, None] = {}
        for t in self.tiles:
            for c in t.edges():
                seen.setdefault(c)
        return tuple(seen)


@dataclass(frozen=True)
class Bar:
    """Horizontal 1 x L bar.

    ``top[k]`` / ``bottom[k]`` color the k-th unit segment of the top and
    bottom sides (left to right); ``left`` and ``right`` color the two
    unit-height ends.
    """

    name: str
    top: tuple[Color, ...]
    bottom: tuple[Color, ...]
    left: Color
    right: Color

    def __post_init__(self):
        object.__setattr__(self, "top", tuple(self.top))
        object.__setattr__(self, "bottom", tuple(self.bottom))
        check_token(self.name)
        for c in (*self.top, *self.bottom, self.left, self.right):
            check_token(c)
        if len(self.top) != len(self.bottom) or not self.top:
            raise WangBarsError(
                f"bar {self.name!r}: top and bottom must have equal positive length"
            )

    @property
    def length(self) -> int:
        return len(self.top)


@dataclass(frozen=True)
class BarSet:
    bars: tuple[Bar, ...]

    def __post_init__(self):
        object.__setattr__(self, "bars", tuple(self.bars))
        if not self.bars:
            raise WangBarsError("bar set must be non-empty")
        names = [b.name for b in self.bars]
        if len(set(names)) != len(names):
            raise WangBarsError("bar names must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.bars)

    def by_name(self) -> dict[str, Bar]:
        return {b.name: b for b in self.bars}

    def max_length(self) -> int:
        return max(b.length for b in self.bars)

    def colors(self) -> tuple[Color, ...]:
        seen: dict[Color, None] = {}
        for b in self.bars:
            for c in (*b.top, *b.bottom, b.left, b.right):
                seen.setdefault(c)
        return tuple(seen)


@dataclass(frozen=True)
class Domain:
    """Where a tiling lives.

    torus: coordinates wrap modulo (width, height).
    rect:  placements must lie fully inside [0,width) x [0,height);
           colors facing the boundary are unconstrained.
    free:  unbounded; used for pinned partial configurations.
    """

    kind: str
    width: int | None = None
    height: int | None = None

    def __post_init__(self):
        if self.kind not in ("torus", "rect", "free"):
            raise WangBarsError(f"unknown domain kind {self.kind!r}")
        if self.kind == "free":
            if self.width is not None or self.height is not None:
                raise WangBarsError("free domains have no dimensions")
        else:
            if (
                not isinstance(self.width, int)
                or not isinstance(self.height, int)
                or self.width < 1
                or self.height < 1
            ):
                raise WangBarsError("domain dimensions must be positive integers")

    @classmethod
    def torus(cls, width: int, height: int) -> "Domain":
        return cls("torus", width, height)

    @classmethod
    def rect(cls, width: int, height: int) -> "Domain":
        return cls("rect", width, height)

    @classmethod
    def free(cls) -> "Domain":
        return cls("free")


@dataclass(frozen=True)
class Placement:
    """A named bar with its leftmost cell at (x, y); y is the row."""

    item: str
    x: int
    y: int


@dataclass(frozen=True)
class Tiling:
    domain: Domain
    placements: tuple[Placement, ...]

    def __post_init__(self):
        object.__setattr__(self, "placements", tuple(self.placements))


@dataclass(frozen=True)
class TileGrid:
    """Full assignment of tile names on a rect or torus grid.

    ``rows[v][u]`` names the tile at column u, row v; v grows northward.
    """

    domain: Domain
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        if self.domain.kind == "free":
            raise WangBarsError("tile grids live on rect or torus domains")
        if len(self.rows) != self.domain.height or any(
            len(r) != self.domain.width for r in self.rows
        ):
            raise WangBarsError("grid dimensions do not match the domain")

    @property
    def width(self) -> int:
        return self.domain.width

    @property
    def height(self) -> int:
        return self.domain.height

    def get(self, u: int, v: int) -> str:
        return self.rows[v % self.height][u % self.width]


@dataclass(frozen=True)
class Violation:
    kind: str  # overlap | gap | h-mismatch | v-mismatch | out-of-bounds
    x: int
    y: int
    names: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    def __post_init__(self):
        object.__setattr__(self, "violations", tuple(self.violations))

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self, limit: int = 8) -> str:
        if self.ok:
            return "ok"
        head = ", ".join(
            f"{v.kind}@({v.x},{v.y})" for v in self.violations[:limit]
        )
        more = len(self.violations) - limit
        return head + (f", +{more} more" if more > 0 else "")


def tile_as_bar(tile: Tile) -> Bar:
    """Embed a tile as a length-1 bar: top=north, bottom=south, left=west, right=east."""
    return Bar(
        name=tile.name,
        top=(tile.north,),
        bottom=(tile.south,),
        left=tile.west,
        right=tile.east,
    )


def tiles_as_bars(tiles: TileSet) -> BarSet:
    return BarSet(tuple(tile_as_bar(t) for t in tiles.tiles))


def cover_map(bars: BarSet, tiling: Tiling) -> dict[tuple[int, int], tuple[Bar, int]]:
    """Map each covered cell to (bar, segment offset).

    Torus coordinates are canonicalized.  Raises UnknownNameError for
    unresolved placement names; overlaps are reported by the validator,
    here the later placement silently wins.
    """
    lookup = bars.by_name()
    domain = tiling.domain
    out: dict[tuple[int, int], tuple[Bar, int]] = {}
    for p in tiling.placements:
        bar = lookup.get(p.item)
        if bar is None:
            raise UnknownNameError(f"placement names unknown bar {p.item!r}")
        for k in range(bar.length):
            x, y = p.x + k, p.y
            if domain.kind == "torus":
                x, y = x % domain.width, y % domain.height
            out[(x, y)] = (bar, k)
    return out


def validate_bar_tiling(bars: BarSet, tiling: Tiling) -> ValidationReport:
    """Check single coverage plus horizontal and vertical color matching.

    On rect/torus every domain cell must be covered exactly once; on free
    domains constraints apply only between covered cells.
    """
    lookup = bars.by_name()
    domain = tiling.domain
    W, H = domain.width, domain.height
    torus = domain.kind == "torus"
    violations: list[Violation] = []

    # cell -> index into resolved list
    resolved: list[tuple[str, Bar, int, int]] = []  # (name, bar, x0, y)
    owner: dict[tuple[int, int], int] = {}
    for p in tiling.placements:
        bar = lookup.get(p.item)
        if bar is None:
            raise UnknownNameError(f"placement names unknown bar {p.item!r}")
        idx = len(resolved)
        resolved.append((p.item, bar, p.x, p.y))
        in_bounds = True
        if domain.kind == "rect":
            if not (0 <= p.y < H and 0 <= p.x and p.x + bar.length <= W):
                violations.append(Violation("out-of-bounds", p.x, p.y, (p.item,)))
                in_bounds = False
        for k in range(bar.length):
            x, y = p.x + k, p.y
            if torus:
                x, y = x % W, y % H
            elif domain.kind == "rect":
                if not in_bounds and not (0 <= x < W and 0 <= y < H):
                    continue
            prev = owner.get((x, y))
            if prev is not None:
                violations.append(
                    Violation("overlap", x, y, (resolved[prev][0], p.item))
                )
            else:
                owner[(x, y)] = idx

    if domain.kind in ("rect", "torus"):
        for y in range(H):
            for x in range(W):
                if (x, y) not in owner:
                    violations.append(Violation("gap", x, y))

    def segment(idx: int, x: int) -> tuple[Color, Color]:
        _, bar, x0, _ = resolved[idx]
        k = (x - x0) % W if torus else x - x0
        return bar.top[k], bar.bottom[k]

    # Horizontal: every boundary is some bar's right end meeting the next
    # bar's left end (bars are height 1, so whole-edge matching).
    for idx, (name, bar, x0, y0) in enumerate(resolved):
        xr, y = x0 + bar.length - 1, y0
        nx, ny = xr + 1, y
        if torus:
            xr, y = xr % W, y % H
            nx, ny = nx % W, ny % H
        elif domain.kind == "rect" and not (0 <= nx < W and 0 <= ny < H):
            continue
        other = owner.get((nx, ny))
        if other is None or owner.get((xr, y)) != idx:
            continue
        oname, obar, ox0, _ = resolved[other]
        ok = (nx - ox0) % W == 0 if torus else nx == ox0
        if ok and bar.right != obar.left:
            violations.append(Violation("h-mismatch", xr, y, (name, oname)))

    # Vertical: per unit segment, counted once from below.
    for (x, y), idx in owner.items():
        ny = y + 1
        if torus:
            ny %= H
        elif domain.kind == "rect" and ny >= H:
            continue
        upper = owner.get((x, ny))
        if upper is None:
            continue
        top_here, _ = segment(idx, x)
        _, bottom_above = segment(upper, x)
        if top_here != bottom_above:
            name = resolved[idx][0]
            uname = resolved[upper][0]
            violations.append(Violation("v-mismatch", x, y, (name, uname)))

    violations.sort(key=lambda v: (v.y, v.x, v.kind, v.names))
    return ValidationReport(tuple(violations))


def validate_tile_tiling(tiles: TileSet, grid: TileGrid) -> ValidationReport:
    """Check north/south and east/west matching of a full tile assignment."""
    lookup = tiles.by_name()
    W, H = grid.width, grid.height
    torus = grid.domain.kind == "torus"
    violations: list[Violation] = []
    for v in range(H):
        for u in range(W):
            name = grid.rows[v][u]
            t = lookup.get(name)
            if t is None:
                raise UnknownNameError(f"grid names unknown tile {name!r}")
            if u + 1 < W or torus:
                rname = grid.rows[v][(u + 1) % W]
                r = lookup.get(rname)
                if r is None:
                    raise UnknownNameError(f"grid names unknown tile {rname!r}")
                if t.east != r.west:
                    violations.append(Violation("h-mismatch", u, v, (name, rname)))
            if v + 1 < H or torus:
                aname = grid.rows[(v + 1) % H][u]
                a = lookup.get(aname)
                if a is None:
                    raise UnknownNameError(f"grid names unknown tile {aname!r}")
                if t.north != a.south:
                    violations.append(Violation("v-mismatch", u, v, (name, aname)))
    return ValidationReport(tuple(violations))
