"""Color deficiency, bar cutting, and the machine-checked fact suite.

Color deficiency of a tile set is n(T) - c(T), where c(T) is the
largest number of distinct colors any one edge direction uses.  Cutting
every bar of a reduced set into unit pieces (gluing each cut with a
fresh color on both new vertical sides) turns the 29 bars into a tile
set whose deficiency is exactly 25: the cuts inflate the tile count and
the east/west color count by the same amount, and east/west dominates.

The fact suite machine-checks, at desk scale, the forced-placement
steps behind the global pattern: selectors are mandatory, pointers only
accept locators, marked segments force linkers, linkers only join arms
at equal indices with backbone-aligned offsets, and locators demand
selectors.  Each scenario is frozen data (pins + region + expectation)
and delegates to the solver, so the suite doubles as a regression test.
Scenario geometry is written for single-tile instances (n = 1), which
is what the default n=1,m=1 and n=1,m=2 instances exercise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .core import (
    BarSet,
    Color,
    Domain,
    Placement,
    Tile,
    TileGrid,
    TileSet,
    WangBarsError,
    validate_bar_tiling,
)
from .reduction import (
    ReductionManifest,
    reduce,
    selector_placements,
    simulate_tiling,
)
from .solver import (
    EXHAUSTED,
    SAT,
    UNSAT,
    InconsistentPinsError,
    Region,
    SearchConfig,
    complete_region,
    solve,
)


@dataclass(frozen=True)
class DeficiencyReport:
    n: int
    north: int
    east: int
    south: int
    west: int

    @property
    def c(self) -> int:
        return max(self.north, self.east, self.south, self.west)

    @property
    def cd(self) -> int:
        return self.n - self.c

    def to_kv(self) -> str:
        return (
            f"n={self.n}\nnorth={self.north}\neast={self.east}\n"
            f"south={self.south}\nwest={self.west}\nc={self.c}\ncd={self.cd}\n"
        )


@dataclass(frozen=True)
class CutResult:
    tiles: TileSet
    cuts: int
    fresh_colors: tuple[Color, ...]


@dataclass(frozen=True)
class FactOutcome:
    name: str
    expected: str
    observed: str
    detail: str
    nodes: int
    elapsed: float

    @property
    def passed(self) -> bool:
        return self.observed == self.expected


@dataclass(frozen=True)
class FactReport:
    outcomes: tuple[FactOutcome, ...]

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    def to_text(self) -> str:
        lines = []
        for o in self.outcomes:
            mark = "PASS" if o.passed else "FAIL"
            lines.append(
                f"{mark} {o.name}: expected={o.expected} observed={o.observed}"
                f" nodes={o.nodes} elapsed={o.elapsed:.3f}s"
                + (f" [{o.detail}]" if o.detail else "")
            )
        lines.append(f"suite={'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"

    def to_kv(self) -> str:
        lines = []
        for o in self.outcomes:
            lines.append(f"fact.{o.name}.expected={o.expected}")
            lines.append(f"fact.{o.name}.observed={o.observed}")
        lines.append(f"suite.passed={1 if self.passed else 0}")
        return "\n".join(lines) + "\n"


def color_deficiency(tiles: TileSet) -> DeficiencyReport:
    """Distinct colors per direction; c is their maximum, cd = n - c."""
    return DeficiencyReport(
        n=len(tiles),
        north=len({t.north for t in tiles.tiles}),
        east=len({t.east for t in tiles.tiles}),
        south=len({t.south for t in tiles.tiles}),
        west=len({t.west for t in tiles.tiles}),
    )


def _fresh_namer(taken: set[str], stem: str):
    counter = [0]

    def gen() -> str:
        while True:
            counter[0] += 1
            token = f"@{stem}{counter[0]}"
            if token not in taken:
                taken.add(token)
                return token

    return gen


def cut_bars(bars: BarSet) -> CutResult:
    """Cut every bar into unit tiles, gluing each cut with a fresh color.

    Each length-l bar contributes l tiles chained left to right by l-1
    unique glue colors, so the pieces can only ever reassemble into the
    original bar.  Length-1 bars embed unchanged.
    """
    taken = set()
    for b in bars.bars:
        taken.update(b.top)
        taken.update(b.bottom)
        taken.add(b.left)
        taken.add(b.right)
    fresh = _fresh_namer(taken, "cut")
    tiles: list[Tile] = []
    fresh_colors: list[Color] = []
    cuts = 0
    for b in bars.bars:
        if b.length == 1:
            tiles.append(Tile(b.name, b.top[0], b.right, b.bottom[0], b.left))
            continue
        glue = [fresh() for _ in range(b.length - 1)]
        fresh_colors.extend(glue)
        cuts += b.length - 1
        for k in range(b.length):
            west = b.left if k == 0 else glue[k - 1]
            east = b.right if k == b.length - 1 else glue[k]
            tiles.append(Tile(f"{b.name}_{k}", b.top[k], east, b.bottom[k], west))
    return CutResult(TileSet(tuple(tiles)), cuts, tuple(fresh_colors))


def pad_to_deficiency(tiles: TileSet, target: int) -> TileSet:
    """Append junk tiles until cd reaches ``target``.

    Each junk tile takes a fresh never-reused north color, so nothing can
    sit on top of it and it cannot participate in any tiling; its other
    three edges reuse existing colors, leaving every count except
    north's unchanged.  Requires c - north >= target - cd so that c is
    not disturbed.
    """
    rep = color_deficiency(tiles)
    need = target - rep.cd
    if need < 0:
        raise WangBarsError(f"cannot lower deficiency: cd={rep.cd} > target={target}")
    if need == 0:
        return tiles
    if rep.c - rep.north < need:
        raise WangBarsError(
            f"padding by {need} would disturb c: north={rep.north}, c={rep.c}"
        )
    taken = set(tiles.colors())
    fresh = _fresh_namer(taken, "junk")
    names = {t.name for t in tiles.tiles}
    first_east = tiles.tiles[0].east
    first_south = tiles.tiles[0].south
    first_west = tiles.tiles[0].west
    out = list(tiles.tiles)
    for k in range(need):
        name = f"junk{k + 1}"
        while name in names:
            name += "_"
        names.add(name)
        out.append(Tile(name, fresh(), first_east, first_south, first_west))
    return TileSet(tuple(out))


# ---------------------------------------------------------------------------
# Fact suite.
#
# Scenario geometry, all relative to a selector centered at (0, 0) whose
# pointers grip the locator of an encoder pinned one backbone row up at
# (-m, 4) (section index 0, so its locator is the cell (0, 4)).  With
# n = 1 the long-linker length is lam = m + 1 and the down-left linker
# hanging from the west marking a4 at column -m+pw runs over columns
# [-2m+pw, -m+pw] of row 2, landing on an east marking a3 at column
# -2m+pw of the encoder whose locator sits at -(2m+1).
# ---------------------------------------------------------------------------

REJECTED = "rejected"


@dataclass(frozen=True)
class FactScenario:
    name: str
    kind: str  # exclusion-sweep | completion | enumeration | pattern-witness
    expected: str
    pins: tuple[Placement, ...] = ()
    region: Region | None = None
    exclude: frozenset[str] = frozenset()
    sweep: tuple[tuple[int, int], ...] = ()
    survivors: tuple[tuple[str, int], ...] = ()  # enumeration: (bar, offset)
    target: tuple[int, int] | None = None  # enumeration: cell to cover


def builtin_instance(m: int) -> TileSet:
    """Single-tile instances driving the default suite (m = 1 or 2)."""
    if m == 1:
        return TileSet((Tile("t", "c", "c", "c", "c"),))
    if m == 2:
        return TileSet((Tile("t", "c1", "c2", "c1", "c2"),))
    raise WangBarsError("built-in instances exist for m=1 and m=2 only")


def fact_scenarios(
    tiles: TileSet,
    max_width: int = 12,
    max_height: int = 8,
) -> tuple[BarSet, ReductionManifest, tuple[FactScenario, ...]]:
    """Freeze the scenario table for a single-tile instance."""
    if len(tiles) != 1:
        raise WangBarsError("fact scenarios are defined for single-tile instances")
    t = tiles.tiles[0]
    if t.north != t.south or t.east != t.west:
        raise WangBarsError(
            "fact scenarios need a self-tiling instance (north=south, east=west)"
        )
    bars, manifest = reduce(tiles)
    n, m = manifest.n, manifest.m
    S = manifest.section_len
    lam = manifest.linker_len
    tile = tiles.tiles[0]
    pos = {c: i for i, c in enumerate(manifest.order)}
    pn, pe, ps, pw = (pos[c] for c in tile.edges())

    sel = tuple(selector_placements(0, 0, m))
    e_up = Placement("encoder", -m, 4)
    wlink = (
        Placement("link_down", -m + pw, 3),
        Placement("link_dl", -2 * m + pw, 2),
        Placement("link_up", -2 * m + pw, 1),
    )
    e_dn_legal = Placement("encoder", -S - m, 0)

    selector_names = frozenset(
        name for name, role in manifest.roles if role.startswith("selector-")
    )
    max_len = bars.max_length()
    sweep = tuple(
        (w, h)
        for w in range(max_len, max_width + 1)
        for h in range(1, max_height + 1)
    )

    scenarios = [
        FactScenario(
            name="F1",
            kind="exclusion-sweep",
            expected=UNSAT,
            exclude=selector_names,
            sweep=sweep,
        ),
        FactScenario(
            name="F1-control",
            kind="pattern-witness",
            expected=SAT,
        ),
        FactScenario(
            name="F2",
            kind="enumeration",
            expected="unique",
            pins=sel,
            target=(0, 4),
            region=Region(0, 4, 1, 1),
            survivors=tuple(("encoder", s * S + m) for s in range(n)),
        ),
        FactScenario(
            name="F3",
            kind="completion",
            expected=UNSAT,
            pins=sel + (e_up, Placement("f1_ta4", -m + pw, 3)),
            region=Region(-m + pw, 1, 1, 2),
        ),
        FactScenario(
            name="F4-legal",
            kind="completion",
            expected=SAT,
            pins=sel + (e_up,) + wlink + (e_dn_legal,),
            region=Region(-2 * m + pw, 1, lam, 3),
        ),
        # With one tile per instance an unequal-index join degenerates
        # to the left-arm-to-left-arm join: both violate the
        # multiple-of-(2m+1) offset the backbone needs, which is what
        # the completion refutes.
        FactScenario(
            name="F4-mismatch",
            kind="completion",
            expected=UNSAT,
            pins=(e_up,) + wlink + (Placement("encoder", -2 * m + pw - pn, 0),),
            region=Region(0, 0, 1, 4),
        ),
        FactScenario(
            name="F6",
            kind="completion",
            expected=UNSAT,
            pins=sel + (e_up,) + wlink + (e_dn_legal, Placement("f1_ba1", -S, 1)),
            region=Region(-S, 1, pw + 1, 3),
        ),
    ]
    if m >= 2:
        # A genuine index mismatch pins the a3 hook over an unmarked arm
        # cell, which already contradicts at pin time.
        q = (pw + 1) % m
        scenarios.append(
            FactScenario(
                name="F4-badpin",
                kind="completion",
                expected=REJECTED,
                pins=(e_up,)
                + wlink
                + (Placement("encoder", -3 * m + pw - 1 - q, 0),),
                region=Region(0, 0, 1, 4),
            )
        )
    return bars, manifest, tuple(scenarios)


def run_fact_suite(
    tiles: TileSet | None = None,
    node_budget: int = 5_000_000,
    max_width: int = 12,
    max_height: int = 8,
) -> FactReport:
    """Execute the scenario table; budget exhaustion is reported, never
    converted into a verdict."""
    if tiles is None:
        outcomes: list[FactOutcome] = []
        for m in (1, 2):
            rep = run_fact_suite(builtin_instance(m), node_budget, max_width, max_height)
            prefix = f"n1m{m}/"
            outcomes.extend(
                FactOutcome(prefix + o.name, o.expected, o.observed, o.detail,
                            o.nodes, o.elapsed)
                for o in rep.outcomes
            )
        return FactReport(tuple(outcomes))

    bars, manifest, scenarios = fact_scenarios(tiles, max_width, max_height)
    outcomes = []
    for sc in scenarios:
        t0 = time.perf_counter()
        nodes = 0
        detail = ""
        if sc.kind == "exclusion-sweep":
            observed = UNSAT
            for w, h in sc.sweep:
                res = solve(
                    bars,
                    Domain.torus(w, h),
                    SearchConfig(exclude=sc.exclude, node_budget=node_budget),
                )
                nodes += res.nodes
                if res.verdict != UNSAT:
                    observed = res.verdict
                    detail = f"torus {w}x{h} returned {res.verdict}"
                    break
        elif sc.kind == "pattern-witness":
            lattice = TileGrid(
                Domain.torus(1, 1), ((tiles.tiles[0].name,),)
            )
            tiling = simulate_tiling(manifest, lattice)
            rep = validate_bar_tiling(bars, tiling)
            observed = SAT if rep.ok else UNSAT
            detail = f"pattern torus {tiling.domain.width}x{tiling.domain.height}"
        elif sc.kind == "enumeration":
            found: list[tuple[str, int]] = []
            for b in bars.bars:
                for k in range(b.length):
                    cand = Placement(b.name, sc.target[0] - k, sc.target[1])
                    try:
                        res = complete_region(
                            bars,
                            sc.pins + (cand,),
                            sc.region,
                            SearchConfig(node_budget=node_budget),
                        )
                    except InconsistentPinsError:
                        continue
                    nodes += res.nodes
                    if res.verdict == SAT:
                        found.append((b.name, k))
                    elif res.verdict == EXHAUSTED:
                        detail = f"budget exhausted on candidate {b.name}+{k}"
            if detail:
                observed = EXHAUSTED
            else:
                observed = "unique" if tuple(found) == sc.survivors else "other"
                if observed == "other":
                    detail = f"survivors={found}"
        elif sc.kind == "completion":
            try:
                res = complete_region(
                    bars, sc.pins, sc.region, SearchConfig(node_budget=node_budget)
                )
                observed = res.verdict
                nodes = res.nodes
            except InconsistentPinsError as e:
                observed = REJECTED
                detail = str(e)
        else:
            raise WangBarsError(f"unknown scenario kind {sc.kind!r}")
        outcomes.append(
            FactOutcome(
                sc.name, sc.expected, observed, detail, nodes,
                time.perf_counter() - t0,
            )
        )
    return FactReport(tuple(outcomes))
