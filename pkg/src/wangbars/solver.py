"""Exhaustive search for bar tilings of finite domains, plus CNF export.

The search is scanline backtracking: visit cells column by column
(bottom to top within a column, columns left to right) and, at the
first uncovered cell, try every non-excluded bar at every offset
covering that cell, in (bar order, offset) order.  A placement is
pruned the moment any already-covered neighbor segment mismatches.
Column-major visitation keeps both the left and the below neighbor of
every branch cell covered, which matters: bar sets built by the
reduction carry almost all their information on top/bottom segments, so
filling whole rows first leaves the opening row unconstrained and the
search thrashes.  Torus grids wrap on both axes and bars may wrap
horizontally; a torus narrower than the longest bar is rejected
outright.

Verdicts are three-valued: "unsat" is only reported after the full
space is exhausted, never on a blown budget ("exhausted-budget").

complete_region answers bounded dead-end queries: extend pinned
placements so that every cell of a rectangle is covered, with matching
enforced only between covered cells.  Placed bars may stick out of the
rectangle, so an unsat answer certifies that no tiling of the plane
extends the pins.

export_cnf translates a torus instance to CNF (one variable per
placement); a small DPLL solver is bundled for round-trip checks only.

Every invocation owns its search state, so independent solves can run
concurrently; a single invocation is sequential and deterministic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .core import (
    BarSet,
    Domain,
    Placement,
    Tiling,
    WangBarsError,
    validate_bar_tiling,
)


class InconsistentPinsError(WangBarsError):
    """Pinned placements overlap or mismatch among themselves."""


@dataclass(frozen=True)
class SearchConfig:
    exclude: frozenset[str] = frozenset()
    node_budget: int | None = None
    time_budget: float | None = None  # seconds
    deterministic: bool = True  # engine is sequential; kept for the contract

    def __post_init__(self):
        object.__setattr__(self, "exclude", frozenset(self.exclude))


@dataclass(frozen=True)
class Region:
    """Rectangle of cells [x0, x0+width) x [y0, y0+height)."""

    x0: int
    y0: int
    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise WangBarsError("region dimensions must be positive")

    def cells(self) -> list[tuple[int, int]]:
        return [
            (x, y)
            for y in range(self.y0, self.y0 + self.height)
            for x in range(self.x0, self.x0 + self.width)
        ]


@dataclass(frozen=True)
class SolveResult:
    verdict: str  # sat | unsat | exhausted-budget
    witness: Tiling | None
    nodes: int
    elapsed: float


SAT, UNSAT, EXHAUSTED = "sat", "unsat", "exhausted-budget"


def _prep(bars: BarSet, config: SearchConfig):
    unknown = config.exclude - {b.name for b in bars.bars}
    if unknown:
        raise WangBarsError(f"excluded names not in bar set: {sorted(unknown)}")
    kept = [b for b in bars.bars if b.name not in config.exclude]
    if not kept:
        raise WangBarsError("all bars excluded")
    return kept


class _BoundedEngine:
    """Search state for a rect or torus grid (flat-array occupancy)."""

    def __init__(self, bars: BarSet, domain: Domain, config: SearchConfig):
        self.bars = _prep(bars, config)
        self.tops = [b.top for b in self.bars]
        self.bots = [b.bottom for b in self.bars]
        self.lefts = [b.left for b in self.bars]
        self.rights = [b.right for b in self.bars]
        self.lens = [b.length for b in self.bars]
        self.domain = domain
        self.W, self.H = domain.width, domain.height
        self.torus = domain.kind == "torus"
        if self.torus and self.W < max(self.lens):
            raise WangBarsError(
                f"torus width {self.W} is narrower than the longest bar "
                f"({max(self.lens)})"
            )
        self.owner = [-1] * (self.W * self.H)
        self.placed: list[tuple[int, int, int]] = []  # (bar idx, x0, y)
        self.nodes = 0
        # visit order: column-major, i.e. (0,0),(0,1),..,(0,H-1),(1,0),..
        self.visit = [
            y * self.W + x for x in range(self.W) for y in range(self.H)
        ]

    def _candidates(self, pos: int) -> list[tuple[int, int]]:
        W = self.W
        x = self.visit[pos] % W
        out = []
        if self.torus:
            for b, L in enumerate(self.lens):
                out.extend((b, (x - k) % W) for k in range(L))
        else:
            for b, L in enumerate(self.lens):
                out.extend(
                    (b, x - k) for k in range(L) if 0 <= x - k and x - k + L <= W
                )
        return out

    def _top_at(self, idx: int, x: int) -> str:
        b, x0, _ = self.placed[idx]
        return self.tops[b][(x - x0) % self.W if self.torus else x - x0]

    def _bottom_at(self, idx: int, x: int) -> str:
        b, x0, _ = self.placed[idx]
        return self.bots[b][(x - x0) % self.W if self.torus else x - x0]

    def try_place(self, b: int, x0: int, y: int) -> bool:
        W, H, owner = self.W, self.H, self.owner
        L = self.lens[b]
        top, bot = self.tops[b], self.bots[b]
        torus = self.torus
        row = y * W
        if torus:
            xs = [(x0 + k) % W for k in range(L)]
        else:
            xs = list(range(x0, x0 + L))
        for cx in xs:
            if owner[row + cx] >= 0:
                return False
        if torus and H == 1:
            for k in range(L):
                if top[k] != bot[k]:
                    return False
        else:
            yb, ya = y - 1, y + 1
            if torus:
                yb, ya = yb % H, ya % H
            rb = yb * W if (torus or yb >= 0) else None
            ra = ya * W if (torus or ya < H) else None
            for k in range(L):
                cx = xs[k]
                if rb is not None:
                    o = owner[rb + cx]
                    if o >= 0 and self._top_at(o, cx) != bot[k]:
                        return False
                if ra is not None:
                    o = owner[ra + cx]
                    if o >= 0 and self._bottom_at(o, cx) != top[k]:
                        return False
        if torus and L == W:
            # the bar meets itself around the torus
            if self.lefts[b] != self.rights[b]:
                return False
        else:
            lx = (x0 - 1) % W if torus else x0 - 1
            if torus or lx >= 0:
                o = owner[row + lx]
                if o >= 0 and self.rights[self.placed[o][0]] != self.lefts[b]:
                    return False
            rx = (x0 + L) % W if torus else x0 + L
            if torus or rx < W:
                o = owner[row + rx]
                if o >= 0 and self.lefts[self.placed[o][0]] != self.rights[b]:
                    return False
        idx = len(self.placed)
        self.placed.append((b, x0, y))
        for cx in xs:
            owner[row + cx] = idx
        return True

    def unplace(self) -> None:
        b, x0, y = self.placed.pop()
        W, owner = self.W, self.owner
        row = y * W
        for k in range(self.lens[b]):
            owner[row + ((x0 + k) % W if self.torus else x0 + k)] = -1

    def first_uncovered(self, start: int) -> int | None:
        owner = self.owner
        visit = self.visit
        for pos in range(start, len(visit)):
            if owner[visit[pos]] < 0:
                return pos
        return None

    def cell_of(self, pos: int) -> tuple[int, int]:
        cell = self.visit[pos]
        return cell % self.W, cell // self.W

    def witness(self) -> Tiling:
        pls = tuple(
            Placement(self.bars[b].name, x0 % self.W if self.torus else x0, y)
            for b, x0, y in self.placed
        )
        return Tiling(self.domain, pls)


class _FreeEngine:
    """Search state on the unbounded plane (dict occupancy); covers targets."""

    def __init__(self, bars: BarSet, targets: list[tuple[int, int]], config: SearchConfig):
        self.bars = _prep(bars, config)
        self.tops = [b.top for b in self.bars]
        self.bots = [b.bottom for b in self.bars]
        self.lefts = [b.left for b in self.bars]
        self.rights = [b.right for b in self.bars]
        self.lens = [b.length for b in self.bars]
        self.targets = targets
        self.owner: dict[tuple[int, int], int] = {}
        self.placed: list[tuple[int, int, int]] = []
        self.nodes = 0

    def _candidates(self, pos: int) -> list[tuple[int, int]]:
        x = self.targets[pos][0]
        out = []
        for b, L in enumerate(self.lens):
            out.extend((b, x - k) for k in range(L))
        return out

    def try_place(self, b: int, x0: int, y: int) -> bool:
        owner = self.owner
        L = self.lens[b]
        top, bot = self.tops[b], self.bots[b]
        for k in range(L):
            if (x0 + k, y) in owner:
                return False
        for k in range(L):
            cx = x0 + k
            o = owner.get((cx, y - 1))
            if o is not None:
                ob, ox0, _ = self.placed[o]
                if self.tops[ob][cx - ox0] != bot[k]:
                    return False
            o = owner.get((cx, y + 1))
            if o is not None:
                ob, ox0, _ = self.placed[o]
                if self.bots[ob][cx - ox0] != top[k]:
                    return False
        o = owner.get((x0 - 1, y))
        if o is not None and self.rights[self.placed[o][0]] != self.lefts[b]:
            return False
        o = owner.get((x0 + L, y))
        if o is not None and self.lefts[self.placed[o][0]] != self.rights[b]:
            return False
        idx = len(self.placed)
        self.placed.append((b, x0, y))
        for k in range(L):
            owner[(x0 + k, y)] = idx
        return True

    def unplace(self) -> None:
        b, x0, y = self.placed.pop()
        for k in range(self.lens[b]):
            del self.owner[(x0 + k, y)]

    def first_uncovered(self, start: int) -> int | None:
        owner = self.owner
        for pos in range(start, len(self.targets)):
            if self.targets[pos] not in owner:
                return pos
        return None

    def cell_of(self, pos: int) -> tuple[int, int]:
        return self.targets[pos]

    def witness(self) -> Tiling:
        pls = tuple(Placement(self.bars[b].name, x0, y) for b, x0, y in self.placed)
        return Tiling(Domain.free(), pls)


def _search(engine, config: SearchConfig) -> str:
    node_budget = config.node_budget
    deadline = (
        time.monotonic() + config.time_budget
        if config.time_budget is not None
        else None
    )
    start_pos = engine.first_uncovered(0)
    if start_pos is None:
        return SAT
    base = len(engine.placed)  # pins stay below this mark
    frames: list[list] = [[start_pos, engine._candidates(start_pos), 0]]
    while frames:
        frame = frames[-1]
        pos, cands, i = frame
        y = engine.cell_of(pos)[1]
        advanced = False
        while i < len(cands):
            b, x0 = cands[i]
            i += 1
            if engine.try_place(b, x0, y):
                engine.nodes += 1
                if node_budget is not None and engine.nodes >= node_budget:
                    frame[2] = i
                    return EXHAUSTED
                if deadline is not None and engine.nodes % 256 == 0:
                    if time.monotonic() > deadline:
                        frame[2] = i
                        return EXHAUSTED
                nxt = engine.first_uncovered(pos)
                if nxt is None:
                    frame[2] = i
                    return SAT
                frame[2] = i
                frames.append([nxt, engine._candidates(nxt), 0])
                advanced = True
                break
        if not advanced:
            frames.pop()
            if frames and len(engine.placed) > base:
                engine.unplace()
    return UNSAT


def solve(bars: BarSet, domain: Domain, config: SearchConfig | None = None) -> SolveResult:
    """Decide tileability of a rect or torus domain by exhaustive search."""
    if domain.kind not in ("rect", "torus"):
        raise WangBarsError("solve works on rect or torus domains")
    config = config or SearchConfig()
    engine = _BoundedEngine(bars, domain, config)
    t0 = time.perf_counter()
    verdict = _search(engine, config)
    elapsed = time.perf_counter() - t0
    witness = None
    if verdict == SAT:
        witness = engine.witness()
        check = validate_bar_tiling(bars, witness)
        if not check.ok:  # engine bug guard; hit only if pruning is wrong
            raise WangBarsError(f"internal: sat witness invalid: {check.summary()}")
    return SolveResult(verdict, witness, engine.nodes, elapsed)


def complete_region(
    bars: BarSet,
    pins: list[Placement] | tuple[Placement, ...],
    region: Region,
    config: SearchConfig | None = None,
) -> SolveResult:
    """Cover every cell of ``region`` extending ``pins`` on the free plane.

    Raises InconsistentPinsError when the pins alone are contradictory.
    An unsat verdict is a sound dead-end certificate for the pins: bars
    may extend beyond the region and only covered cells constrain each
    other, so any plane tiling extending the pins would restrict to a
    completion this relaxed search accepts.
    """
    config = config or SearchConfig()
    engine = _FreeEngine(bars, region.cells(), config)
    names = {b.name: i for i, b in enumerate(engine.bars)}
    for p in pins:
        if p.item not in names:
            raise WangBarsError(f"pin names unknown or excluded bar {p.item!r}")
        if not engine.try_place(names[p.item], p.x, p.y):
            raise InconsistentPinsError(
                f"pin {p.item!r} at ({p.x},{p.y}) conflicts with earlier pins"
            )
    t0 = time.perf_counter()
    verdict = _search(engine, config)
    elapsed = time.perf_counter() - t0
    witness = None
    if verdict == SAT:
        witness = engine.witness()
        check = validate_bar_tiling(bars, witness)
        if not check.ok:
            raise WangBarsError(f"internal: sat witness invalid: {check.summary()}")
    return SolveResult(verdict, witness, engine.nodes, elapsed)


# ---------------------------------------------------------------------------
# CNF export and the bundled DPLL (round-trip checks only).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CnfDocument:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    var_map: tuple[tuple[int, str, int, int], ...]  # (var, bar name, x, y)

    def to_dimacs(self) -> str:
        lines = [f"c wang bar torus tiling, {self.num_vars} placements"]
        for var, name, x, y in self.var_map:
            lines.append(f"c var {var} = {name} {x} {y}")
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        for cl in self.clauses:
            lines.append(" ".join(str(lit) for lit in cl) + " 0")
        return "\n".join(lines) + "\n"


def export_cnf(bars: BarSet, width: int, height: int) -> CnfDocument:
    """One variable per (bar, x, y) torus placement.

    Clauses: every cell covered at least once; overlapping placements
    mutually exclusive; adjacent-incompatible placements mutually
    exclusive.  Models and valid tilings correspond exactly.
    """
    blist = list(bars.bars)
    W, H = width, height
    if W < 1 or H < 1:
        raise WangBarsError("torus dimensions must be positive")
    if W < max(b.length for b in blist):
        raise WangBarsError("torus width is narrower than the longest bar")

    var_of: dict[tuple[int, int, int], int] = {}
    var_map = []
    nv = 0
    for bi, b in enumerate(blist):
        for y in range(H):
            for x in range(W):
                nv += 1
                var_of[(bi, x, y)] = nv
                var_map.append((nv, b.name, x, y))

    covers: dict[tuple[int, int], list[int]] = {
        (x, y): [] for y in range(H) for x in range(W)
    }
    for bi, b in enumerate(blist):
        for y in range(H):
            for x0 in range(W):
                v = var_of[(bi, x0, y)]
                for k in range(b.length):
                    covers[((x0 + k) % W, y)].append(v)

    clauses: list[tuple[int, ...]] = []
    for y in range(H):
        for x in range(W):
            clauses.append(tuple(covers[(x, y)]))

    pair_clauses: set[tuple[int, ...]] = set()

    def forbid(a: int, b_: int) -> None:
        if a == b_:
            pair_clauses.add((-a,))
        else:
            pair_clauses.add((-max(a, b_), -min(a, b_)))

    for cell_vars in covers.values():
        for i in range(len(cell_vars)):
            for j in range(i + 1, len(cell_vars)):
                forbid(cell_vars[i], cell_vars[j])

    for bi, b in enumerate(blist):
        for y in range(H):
            for x0 in range(W):
                va = var_of[(bi, x0, y)]
                rx = (x0 + b.length) % W
                for bj, b2 in enumerate(blist):
                    if b.right != b2.left:
                        forbid(va, var_of[(bj, rx, y)])
                ya = (y + 1) % H
                for k in range(b.length):
                    cx = (x0 + k) % W
                    for bj, b2 in enumerate(blist):
                        for k2 in range(b2.length):
                            if b2.bottom[k2] != b.top[k]:
                                forbid(va, var_of[(bj, (cx - k2) % W, ya)])

    clauses.extend(sorted(pair_clauses))
    return CnfDocument(nv, tuple(clauses), tuple(var_map))


def decode_model(
    doc: CnfDocument, model: dict[int, bool], width: int, height: int
) -> Tiling:
    """Turn a satisfying assignment back into a torus tiling."""
    placements = []
    for var, name, x, y in doc.var_map:
        if model.get(var):
            placements.append(Placement(name, x, y))
    return Tiling(Domain.torus(width, height), tuple(placements))


def dpll(num_vars: int, clauses: tuple[tuple[int, ...], ...]) -> dict[int, bool] | None:
    """Minimal iterative DPLL with unit propagation; deterministic order."""
    assign: dict[int, bool] = {}
    trail: list[int] = []  # literals in assignment order
    decisions: list[tuple[int, int, bool]] = []  # (trail mark, var, tried_negation)

    def lit_value(lit: int) -> bool | None:
        v = assign.get(abs(lit))
        if v is None:
            return None
        return v if lit > 0 else not v

    def set_lit(lit: int) -> None:
        assign[abs(lit)] = lit > 0
        trail.append(lit)

    def propagate() -> bool:
        changed = True
        while changed:
            changed = False
            for cl in clauses:
                unit = None
                open_lits = 0
                satisfied = False
                for lit in cl:
                    val = lit_value(lit)
                    if val is True:
                        satisfied = True
                        break
                    if val is None:
                        open_lits += 1
                        unit = lit
                        if open_lits > 1:
                            break
                if satisfied or open_lits > 1:
                    continue
                if open_lits == 0:
                    return False
                set_lit(unit)
                changed = True
        return True

    def backtrack_to(mark: int) -> None:
        while len(trail) > mark:
            del assign[abs(trail.pop())]

    while True:
        if propagate():
            var = next((v for v in range(1, num_vars + 1) if v not in assign), None)
            if var is None:
                return dict(assign)
            decisions.append((len(trail), var, False))
            set_lit(var)
        else:
            while decisions:
                mark, var, tried = decisions.pop()
                backtrack_to(mark)
                if not tried:
                    decisions.append((mark, var, True))
                    set_lit(-var)
                    break
            else:
                return None
