"""Compile a Wang tile set into the fixed 29-bar set, and back.

Given n tiles over m distinct edge colors the compiler emits 29 bars in
six families:

  encoder   one bar of length n(2m+1), one section of length 2m+1 per
            tile; the middle cell of a section (the locator, top a1 /
            bottom a2) splits it into two arms of length m whose single
            marked segment (a3 on top sides, a4 on bottom sides)
            encodes one edge color in unary.
  selector  seven bars forming a plus-shaped assembly whose pointers
            grip one locator from above and one from below, choosing a
            section of each encoder.
  aligner   one bar of length 2m+1 (top a5, bottom a6) that pads
            backbone rows so offsets stay multiples of 2m+1.
  linkers   four bars that carry a marked a4 segment diagonally down to
            a marked a3 segment one backbone row below, at equal arm
            index; this is what transfers edge equality between
            neighboring emulated tiles.
  fillers   sixteen unit bars (two groups of eight) occupying every
            remaining cell.

Arm-to-edge convention: left-arm top = north, right-arm top = east,
left-arm bottom = west, right-arm bottom = south.  The down-left linker
therefore enforces west/east matching and the down-right linker
north/south matching, one backbone row apart with a horizontal shift of
n(2m+1).

simulate_tiling lays out the forced global pattern for any periodic
tile assignment, and decode_tiling recovers the assignment from any
valid bar tiling of a torus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    Bar,
    BarSet,
    Color,
    Domain,
    Placement,
    Tile,
    TileGrid,
    TileSet,
    Tiling,
    WangBarsError,
    cover_map,
    validate_bar_tiling,
    validate_tile_tiling,
)


class DecodeError(WangBarsError):
    """The tiling does not exhibit the forced backbone pattern."""


PALETTE_NAMES = (
    "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8",
    "b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8",
    "s1", "s2", "s3", "s4", "s5", "s6",
    "x", "y", "z", "zero",
)

BAR_ROLES = {
    "encoder": "encoder",
    "sel1": "selector-1",
    "sel2": "selector-2",
    "sel3": "selector-3",
    "sel4": "selector-4",
    "sel5": "selector-5",
    "sel6": "selector-6",
    "sel7": "selector-7",
    "aligner": "aligner",
    "link_down": "linker-small-down",
    "link_up": "linker-small-up",
    "link_dl": "linker-long-dl",
    "link_dr": "linker-long-dr",
    "f1_ta2": "filler1-1",
    "f1_ta4": "filler1-2",
    "f1_ta6": "filler1-3",
    "f1_ta8": "filler1-4",
    "f1_ba1": "filler1-5",
    "f1_ba3": "filler1-6",
    "f1_ba5": "filler1-7",
    "f1_ba7": "filler1-8",
    "f2_a8_b5": "filler2-1",
    "f2_b5_b6_x": "filler2-2",
    "f2_b5_b6_y": "filler2-3",
    "f2_b6_a5": "filler2-4",
    "f2_a6_b7": "filler2-5",
    "f2_b7_b8_x": "filler2-6",
    "f2_b7_b8_y": "filler2-7",
    "f2_b8_a7": "filler2-8",
}


@dataclass(frozen=True)
class Palette:
    """The 26 colors private to a reduced bar set.

    Token scheme: "@" + canonical name, with a numeric suffix appended on
    the (unusual) event of a collision with an input token.
    """

    tokens: tuple[tuple[str, Color], ...]  # (canonical name, token), fixed order

    def __post_init__(self):
        names = tuple(n for n, _ in self.tokens)
        if names != PALETTE_NAMES:
            raise WangBarsError("palette must define exactly the 26 canonical colors")
        toks = [t for _, t in self.tokens]
        if len(set(toks)) != len(toks):
            raise WangBarsError("palette tokens must be pairwise distinct")

    @classmethod
    def fresh(cls, taken: frozenset[str]) -> "Palette":
        used = set(taken)
        out = []
        for name in PALETTE_NAMES:
            token = "@" + name
            k = 2
            while token in used:
                token = f"@{name}_{k}"
                k += 1
            used.add(token)
            out.append((name, token))
        return cls(tuple(out))

    def __getattr__(self, name: str) -> Color:
        for n, tok in self.tokens:
            if n == name:
                return tok
        raise AttributeError(name)

    def mapping(self) -> dict[str, Color]:
        return dict(self.tokens)


@dataclass(frozen=True)
class ReductionManifest:
    """Every parameter of one reduction instance.

    Carries the source tiles as well: simulate/decode need the edge
    colors to position markings, not just counts.
    """

    version: int
    n: int
    m: int
    order: tuple[Color, ...]
    palette: Palette
    tiles: tuple[Tile, ...]
    roles: tuple[tuple[str, str], ...]  # (bar name, role), bar order
    section_len: int
    encoder_len: int
    linker_len: int
    row_pitch: int
    column_pitch: int
    row_shift: int

    def __post_init__(self):
        S = 2 * self.m + 1
        ok = (
            self.section_len == S
            and self.encoder_len == self.n * S
            and self.linker_len == (self.n - 1) * S + self.m + 1
            and self.row_pitch == 4
            and self.column_pitch == 2 * self.n * S
            and self.row_shift == self.n * S
        )
        if not ok:
            raise WangBarsError("manifest geometry does not satisfy the length formulas")

    def tileset(self) -> TileSet:
        return TileSet(self.tiles)

    def role_of(self) -> dict[str, str]:
        return dict(self.roles)

    def bars_of_role(self, role: str) -> tuple[str, ...]:
        return tuple(name for name, r in self.roles if r == role)


def enumerate_colors(
    tiles: TileSet, override: tuple[Color, ...] | None = None
) -> tuple[Color, ...]:
    """Fix the unary encoding order c_1..c_m.

    Default: first occurrence scanning tiles in input order, each tile's
    edges in (north, east, south, west) order.  An override must be a
    permutation of the set's distinct colors.
    """
    found = tiles.colors()
    if override is None:
        return found
    override = tuple(override)
    if sorted(override) != sorted(found):
        raise WangBarsError(
            "order override must be a permutation of the tile set's colors"
        )
    return override


def _unary(index: int, m: int, hit: Color, miss: Color) -> tuple[Color, ...]:
    return tuple(hit if k == index else miss for k in range(m))


def build_encoder(tiles: TileSet, order: tuple[Color, ...], palette: Palette) -> Bar:
    """One section of length 2m+1 per tile, in tile order.

    Section layout: left arm (m cells), locator (top a1, bottom a2),
    right arm (m cells).  Arm markings: a3 among a5 on top sides, a4
    among a6 on bottom sides, positioned at the encoded color's index.
    """
    m = len(order)
    pos = {c: i for i, c in enumerate(order)}
    top: list[Color] = []
    bottom: list[Color] = []
    for t in tiles.tiles:
        try:
            pn, pe, ps, pw = (pos[c] for c in t.edges())
        except KeyError as e:
            raise WangBarsError(f"tile color {e.args[0]!r} missing from order") from None
        top += [*_unary(pn, m, palette.a3, palette.a5), palette.a1,
                *_unary(pe, m, palette.a3, palette.a5)]
        bottom += [*_unary(pw, m, palette.a4, palette.a6), palette.a2,
                   *_unary(ps, m, palette.a4, palette.a6)]
    return Bar("encoder", tuple(top), tuple(bottom), palette.z, palette.z)


def build_selector(m: int, palette: Palette) -> list[Bar]:
    """The 7-bar assembly, top to bottom; the fourth bar is the long one."""
    p = palette
    long_top = (p.a7,) * m + (p.s3,) + (p.a7,) * m
    long_bottom = (p.a8,) * m + (p.s4,) + (p.a8,) * m
    return [
        Bar("sel1", (p.a2,), (p.s1,), p.zero, p.zero),  # top pointer
        Bar("sel2", (p.s1,), (p.s2,), p.x, p.y),
        Bar("sel3", (p.s2,), (p.s3,), p.zero, p.zero),
        Bar("sel4", long_top, long_bottom, p.z, p.z),
        Bar("sel5", (p.s4,), (p.s5,), p.zero, p.zero),
        Bar("sel6", (p.s5,), (p.s6,), p.x, p.y),
        Bar("sel7", (p.s6,), (p.a1,), p.zero, p.zero),  # bottom pointer
    ]


def build_aligner(m: int, palette: Palette) -> Bar:
    p = palette
    S = 2 * m + 1
    return Bar("aligner", (p.a5,) * S, (p.a6,) * S, p.z, p.z)


def build_linkers(n: int, m: int, palette: Palette) -> list[Bar]:
    """Two unit bars and two long bars of length (n-1)(2m+1)+m+1.

    link_dr carries a4 down-and-right to a3 (b1 at its left end);
    link_dl carries a4 down-and-left to a3 (b1 at its right end).
    """
    p = palette
    lam = (n - 1) * (2 * m + 1) + m + 1
    return [
        Bar("link_down", (p.a4,), (p.b1,), p.zero, p.zero),
        Bar("link_up", (p.b2,), (p.a3,), p.zero, p.zero),
        Bar(
            "link_dr",
            (p.b1,) + (p.b3,) * (lam - 1),
            (p.b4,) * (lam - 1) + (p.b2,),
            p.y,
            p.x,
        ),
        Bar(
            "link_dl",
            (p.b3,) * (lam - 1) + (p.b1,),
            (p.b2,) + (p.b4,) * (lam - 1),
            p.y,
            p.x,
        ),
    ]


def build_fillers_g1(palette: Palette) -> list[Bar]:
    """Eight unit bars bridging backbone colors to linker tops/bottoms."""
    p = palette
    out = []
    for top in (p.a2, p.a4, p.a6, p.a8):
        out.append(Bar(f"f1_t{_canon(palette, top)}", (top,), (p.b3,), p.zero, p.zero))
    for bottom in (p.a1, p.a3, p.a5, p.a7):
        out.append(Bar(f"f1_b{_canon(palette, bottom)}", (p.b4,), (bottom,), p.zero, p.zero))
    return out


def build_fillers_g2(palette: Palette) -> list[Bar]:
    """Eight unit bars that only assemble as height-3 stacks.

    Two stack shapes (a8 over a5, and a6 over a7), each in an x-sided
    and a y-sided variant of the middle bar.
    """
    p = palette
    return [
        Bar("f2_a8_b5", (p.a8,), (p.b5,), p.zero, p.zero),
        Bar("f2_b5_b6_x", (p.b5,), (p.b6,), p.x, p.x),
        Bar("f2_b5_b6_y", (p.b5,), (p.b6,), p.y, p.y),
        Bar("f2_b6_a5", (p.b6,), (p.a5,), p.zero, p.zero),
        Bar("f2_a6_b7", (p.a6,), (p.b7,), p.zero, p.zero),
        Bar("f2_b7_b8_x", (p.b7,), (p.b8,), p.x, p.x),
        Bar("f2_b7_b8_y", (p.b7,), (p.b8,), p.y, p.y),
        Bar("f2_b8_a7", (p.b8,), (p.a7,), p.zero, p.zero),
    ]


def _canon(palette: Palette, token: Color) -> str:
    for name, tok in palette.tokens:
        if tok == token:
            return name
    raise WangBarsError(f"token {token!r} is not in the palette")


def reduce(
    tiles: TileSet, order: tuple[Color, ...] | None = None
) -> tuple[BarSet, ReductionManifest]:
    """Compile a tile set into its 29-bar set plus the manifest."""
    order = enumerate_colors(tiles, order)
    n, m = len(tiles), len(order)
    palette = Palette.fresh(frozenset(tiles.colors()))
    bars = (
        [build_encoder(tiles, order, palette)]
        + build_selector(m, palette)
        + [build_aligner(m, palette)]
        + build_linkers(n, m, palette)
        + build_fillers_g1(palette)
        + build_fillers_g2(palette)
    )
    barset = BarSet(tuple(bars))
    roles = tuple((b.name, BAR_ROLES[b.name]) for b in barset.bars)
    S = 2 * m + 1
    manifest = ReductionManifest(
        version=1,
        n=n,
        m=m,
        order=order,
        palette=palette,
        tiles=tiles.tiles,
        roles=roles,
        section_len=S,
        encoder_len=n * S,
        linker_len=(n - 1) * S + m + 1,
        row_pitch=4,
        column_pitch=2 * n * S,
        row_shift=n * S,
    )
    return barset, manifest


def build_barset(manifest: ReductionManifest) -> BarSet:
    """Rebuild the bar set a manifest describes (deterministic)."""
    tiles = manifest.tileset()
    barset, rederived = reduce(tiles, manifest.order)
    if rederived.palette != manifest.palette:
        # hand-edited manifest whose palette tokens cannot have come
        # from these tiles; refusing beats silently mixing color spaces
        raise WangBarsError("manifest palette does not match its tile set")
    return barset


# ---------------------------------------------------------------------------
# The forced tiling pattern.
#
# Backbone rows sit at y = 4j.  Selector assemblies in row 4j are
# centered at x = 2nS*i + nS*j (S = 2m+1); the locator they grip from
# below sits one backbone row up, so the selected locators of row 4j lie
# at L = 2nS*i + nS*(j+1).  Emulated tile slots are indexed by their
# locator: slot (i,j) has its west neighbor at slot (i,j-1) and its
# south neighbor at slot (i+1,j-1), which pins the change of coordinates
# to the square Wang lattice as (u,v) = (i+j, -i).
#
# Between backbone rows R-4 and R, row R-2 carries the long linkers, row
# R-1 the small a4 hooks plus group-1 fillers under row R, and row R-3
# the small a3 hooks plus group-1 fillers over row R-4.  Group-2 stacks
# occupy the columns between a selector stack and the long linker next
# to it: y-sided variants to the right of a stack column, x-sided to the
# left, with the a8/a5 shape under selector arms and the a6/a7 shape
# over them.
# ---------------------------------------------------------------------------


def selector_placements(center_x: int, row: int, m: int) -> list[Placement]:
    """The 7 placements of one selector assembly centered at (center_x, row)."""
    return [
        Placement("sel4", center_x - m, row),
        Placement("sel1", center_x, row + 3),
        Placement("sel2", center_x, row + 2),
        Placement("sel3", center_x, row + 1),
        Placement("sel5", center_x, row - 1),
        Placement("sel6", center_x, row - 2),
        Placement("sel7", center_x, row - 3),
    ]


def pattern_torus(manifest: ReductionManifest, P: int, Q: int) -> tuple[int, int]:
    """Bar-torus dimensions hosting the pattern for a P x Q tile lattice."""
    M = math.lcm(P, Q)
    return manifest.column_pitch * M, 8 * M


def simulate_tiling(
    manifest: ReductionManifest, lattice: TileGrid, allow_doubling: bool = True
) -> Tiling:
    """Lay out the full pattern for a valid periodic tile assignment.

    The output torus is 2n(2m+1)*lcm(P,Q) wide and 8*lcm(P,Q) tall; the
    vertical factor doubles the lattice as needed because consecutive
    backbone rows are offset by n(2m+1), half the column pitch.
    """
    tiles = manifest.tileset()
    if lattice.domain.kind != "torus":
        raise WangBarsError("simulate_tiling needs a torus lattice")
    rep = validate_tile_tiling(tiles, lattice)
    if not rep.ok:
        raise WangBarsError(f"lattice is not a valid tile tiling: {rep.summary()}")
    P, Q = lattice.width, lattice.height
    if Q % 2 == 1 and not allow_doubling:
        raise WangBarsError("lattice height is odd; vertical doubling is required")

    n, m = manifest.n, manifest.m
    S, nS = manifest.section_len, manifest.encoder_len
    M = math.lcm(P, Q)
    K, J = M, 2 * M
    W, H = manifest.column_pitch * M, 4 * J

    order_index = {c: i for i, c in enumerate(manifest.order)}
    tile_index = {t.name: i for i, t in enumerate(tiles.tiles)}
    bars = build_barset(manifest).by_name()
    p = manifest.palette
    g1_by_top = {p.a2: "f1_ta2", p.a4: "f1_ta4", p.a6: "f1_ta6", p.a8: "f1_ta8"}
    g1_by_bottom = {p.a1: "f1_ba1", p.a3: "f1_ba3", p.a5: "f1_ba5", p.a7: "f1_ba7"}

    placements: list[Placement] = []
    cover: dict[tuple[int, int], tuple[Color, Color]] = {}  # cell -> (top, bottom)

    def place(name: str, x: int, y: int) -> None:
        bar = bars[name]
        x, y = x % W, y % H
        for k in range(bar.length):
            cell = ((x + k) % W, y)
            if cell in cover:
                raise WangBarsError(f"internal: overlap at {cell} placing {name}")
            cover[cell] = (bar.top[k], bar.bottom[k])
        placements.append(Placement(name, x, y))

    def place_stack(col: int, row: int, top: str, mid: str, bottom: str) -> None:
        place(top, col, row - 1)
        place(mid, col, row - 2)
        place(bottom, col, row - 3)

    for j in range(J):
        R = 4 * j
        for i in range(K):
            for pl in selector_placements(2 * nS * i + nS * j, R, m):
                place(pl.item, pl.x, pl.y)

    for j in range(J):
        R = 4 * j
        for i in range(K):
            L = 2 * nS * i + nS * (j + 1)
            t = tiles.tiles[tile_index[lattice.get(i + j, -i)]]
            s = tile_index[t.name]
            pn, pe, ps, pw = (order_index[c] for c in t.edges())

            place("encoder", L - s * S - m, R)
            for a in range(n - 1 - s):
                place("aligner", L - nS + m + 1 + a * S, R)
            for a in range(s):
                place("aligner", L + (n - s) * S - m + a * S, R)

            # west edge: down-left to the east arm of slot (i, j-1)
            place("link_down", L - m + pw, R - 1)
            place("link_dl", L - nS + 1 + pw, R - 2)
            place("link_up", L - nS + 1 + pw, R - 3)
            # south edge: down-right to the north arm of slot (i+1, j-1)
            place("link_down", L + 1 + ps, R - 1)
            place("link_dr", L + 1 + ps, R - 2)
            place("link_up", L + nS - m + ps, R - 3)

            for c in range(ps):
                place_stack(L + 1 + c, R, "f2_a6_b7", "f2_b7_b8_y", "f2_b8_a7")
            for c in range(m - 1 - ps):
                place_stack(
                    L + nS - m + ps + 1 + c, R, "f2_a8_b5", "f2_b5_b6_x", "f2_b6_a5"
                )
            for c in range(pw):
                place_stack(L - nS + 1 + c, R, "f2_a8_b5", "f2_b5_b6_y", "f2_b6_a5")
            for c in range(m - 1 - pw):
                place_stack(L - m + pw + 1 + c, R, "f2_a6_b7", "f2_b7_b8_x", "f2_b8_a7")

    # Group-1 fillers take every remaining cell, matched to the backbone
    # color above (rows 4j-1) or below (rows 4j+1).
    for y in range(H):
        phase = y % 4
        if phase == 0 or phase == 2:
            continue
        for x in range(W):
            if (x, y) in cover:
                continue
            if phase == 3:
                above = cover.get((x, (y + 1) % H))
                if above is None:
                    raise WangBarsError("internal: backbone row incomplete")
                place(g1_by_top[above[1]], x, y)
            else:
                below = cover.get((x, (y - 1) % H))
                if below is None:
                    raise WangBarsError("internal: backbone row incomplete")
                place(g1_by_bottom[below[0]], x, y)

    if len(cover) != W * H:
        raise WangBarsError("internal: pattern did not cover the torus")
    tiling = Tiling(Domain.torus(W, H), tuple(placements))
    check = validate_bar_tiling(build_barset(manifest), tiling)
    if not check.ok:
        raise WangBarsError(f"internal: simulated pattern invalid: {check.summary()}")
    return tiling


def decode_tiling(manifest: ReductionManifest, tiling: Tiling) -> TileGrid:
    """Read the emulated tile assignment back out of a valid bar tiling.

    Raises DecodeError when the tiling lacks the forced backbone
    structure (making the violated assumption observable instead of
    crashing downstream).
    """
    if tiling.domain.kind != "torus":
        raise DecodeError("decoding is defined for torus tilings")
    barset = build_barset(manifest)
    rep = validate_bar_tiling(barset, tiling)
    if not rep.ok:
        raise DecodeError(f"tiling is not valid for the reduced bars: {rep.summary()}")

    W, H = tiling.domain.width, tiling.domain.height
    n, m = manifest.n, manifest.m
    S, nS = manifest.section_len, manifest.encoder_len
    if W % (2 * nS) != 0 or H % 4 != 0:
        raise DecodeError("torus dimensions do not fit the backbone pitch")
    K, J = W // (2 * nS), H // 4
    if J % 2 != 0:
        raise DecodeError("backbone needs an even number of rows to close the torus")

    cells = cover_map(barset, tiling)
    slots: list[tuple[int, int, int]] = []  # (locator x, backbone row, tile idx)
    for pl in tiling.placements:
        if pl.item != "sel1":
            continue
        lx, ly = pl.x % W, (pl.y + 1) % H
        got = cells.get((lx, ly))
        if got is None or got[0].name != "encoder":
            raise DecodeError(f"no encoder above the top pointer at ({pl.x},{pl.y})")
        offset = got[1]
        if offset % S != m:
            raise DecodeError(f"pointer at ({pl.x},{pl.y}) does not grip a locator")
        slots.append((lx, ly, offset // S))
    if not slots:
        raise DecodeError("tiling contains no selectors")
    if len(slots) != K * J:
        raise DecodeError(
            f"expected {K * J} selector slots for a {W}x{H} torus, found {len(slots)}"
        )

    slots.sort(key=lambda t: (t[1], t[0]))
    x0, r0, _ = slots[0]
    names = [t.name for t in manifest.tiles]

    # Wang coordinates relative to the first slot: (u, v) = (i + j, -i).
    entries: list[tuple[int, int, str]] = []
    for lx, ly, s in slots:
        if (ly - r0) % 4 != 0:
            raise DecodeError("backbone rows are not 4 apart")
        j = (ly - r0) // 4
        c = (lx - x0 - nS * j) % W
        if c % (2 * nS) != 0:
            raise DecodeError("locator columns do not follow the row shift")
        i = c // (2 * nS)
        entries.append((i + j, -i, names[s]))

    # Fold onto a square torus closed under both wrap translations:
    # A = (K, -K) from the width wrap, B = (J/2, J/2) from the height wrap.
    g = math.gcd(K, J // 2)
    D = (K * J) // g
    grid: dict[tuple[int, int], str] = {}
    work: list[tuple[int, int, str]] = list(entries)
    while work:
        u, v, name = work.pop()
        u, v = u % D, v % D
        old = grid.get((u, v))
        if old is not None:
            if old != name:
                raise DecodeError("pattern is inconsistent under torus translations")
            continue
        grid[(u, v)] = name
        for du, dv in ((K, -K), (-K, K), (J // 2, J // 2), (-(J // 2), -(J // 2))):
            work.append((u + du, v + dv, name))
    if len(grid) != D * D:
        raise DecodeError("decoded slots do not cover the tile lattice")

    rows = tuple(tuple(grid[(u, v)] for u in range(D)) for v in range(D))
    out = TileGrid(Domain.torus(D, D), rows)
    check = validate_tile_tiling(manifest.tileset(), out)
    if not check.ok:
        raise DecodeError(f"decoded assignment is not edge-valid: {check.summary()}")
    return reduce_lattice(out)


def reduce_lattice(grid: TileGrid) -> TileGrid:
    """Shrink to minimal horizontal/vertical periods and canonical shift.

    Two assignments that induce the same bi-periodic tiling up to
    translation reduce to identical grids, which makes round-trip
    comparisons a plain equality check.
    """
    W, H = grid.width, grid.height

    def h_period(d: int) -> bool:
        return all(
            grid.rows[v][u] == grid.rows[v][(u + d) % W]
            for v in range(H)
            for u in range(W)
        )

    def v_period(d: int) -> bool:
        return all(
            grid.rows[v][u] == grid.rows[(v + d) % H][u]
            for v in range(H)
            for u in range(W)
        )

    p = next(d for d in range(1, W + 1) if W % d == 0 and h_period(d))
    q = next(d for d in range(1, H + 1) if H % d == 0 and v_period(d))
    best: tuple[tuple[str, ...], ...] | None = None
    for dv in range(q):
        for du in range(p):
            cand = tuple(
                tuple(grid.rows[(v + dv) % H][(u + du) % W] for u in range(p))
                for v in range(q)
            )
            if best is None or cand < best:
                best = cand
    return TileGrid(Domain.torus(p, q), best)


def lattices_equivalent(a: TileGrid, b: TileGrid) -> bool:
    """True when the two assignments agree up to torus translation."""
    return reduce_lattice(a) == reduce_lattice(b)
