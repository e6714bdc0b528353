"""Deterministic SVG and fixed-width ASCII renderers.

Colors map to hues through a stable md5 hash of the token, so figures
are reproducible byte-for-byte without a palette file.  SVG output uses
a fixed viewBox computed from the content; each unit segment becomes a
labeled rectangle, which for reduced-set tilings makes the backbone
rows, selector stacks, and linker diagonals directly visible.
"""

from __future__ import annotations

import hashlib
import string

from .core import Bar, BarSet, TileSet, Tiling, WangBarsError, cover_map

CELL = 28  # px per grid cell in SVG output


def color_hex(token: str) -> str:
    """Stable token -> #rrggbb via hashed hue (fixed saturation/lightness)."""
    hue = int(hashlib.md5(token.encode("utf-8")).hexdigest()[:8], 16) % 360
    s, lightness = 0.55, 0.72
    c = (1 - abs(2 * lightness - 1)) * s
    hp = hue / 60.0
    xx = c * (1 - abs(hp % 2 - 1))
    r, g, b = (
        (c, xx, 0) if hp < 1 else
        (xx, c, 0) if hp < 2 else
        (0, c, xx) if hp < 3 else
        (0, xx, c) if hp < 4 else
        (xx, 0, c) if hp < 5 else
        (c, 0, xx)
    )
    mm = lightness - c / 2
    return "#%02x%02x%02x" % tuple(round((v + mm) * 255) for v in (r, g, b))


def _svg(width: float, height: float, body: list[str]) -> str:
    head = (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {width:g} {height:g}" width="{width:g}" height="{height:g}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _rect(x: float, y: float, w: float, h: float, fill: str, extra: str = "") -> str:
    return (
        f'<rect x="{x:g}" y="{y:g}" width="{w:g}" height="{h:g}" '
        f'fill="{fill}" stroke="none"{extra}/>'
    )


def _label(x: float, y: float, text: str, size: float) -> str:
    return (
        f'<text x="{x:g}" y="{y:g}" font-size="{size:g}" '
        f'font-family="monospace" text-anchor="middle">{text}</text>'
    )


def _bar_cells(bar: Bar, ox: float, oy: float, labels: bool) -> list[str]:
    out = []
    for k in range(bar.length):
        x = ox + k * CELL
        out.append(_rect(x, oy, CELL, CELL / 2, color_hex(bar.top[k])))
        out.append(_rect(x, oy + CELL / 2, CELL, CELL / 2, color_hex(bar.bottom[k])))
        if labels:
            out.append(_label(x + CELL / 2, oy + CELL * 0.36, bar.top[k], CELL * 0.2))
            out.append(
                _label(x + CELL / 2, oy + CELL * 0.88, bar.bottom[k], CELL * 0.2)
            )
    end = CELL / 6
    out.append(_rect(ox - end, oy, end, CELL, color_hex(bar.left)))
    out.append(_rect(ox + bar.length * CELL, oy, end, CELL, color_hex(bar.right)))
    out.append(
        f'<rect x="{ox:g}" y="{oy:g}" width="{bar.length * CELL:g}" '
        f'height="{CELL:g}" fill="none" stroke="black" stroke-width="1"/>'
    )
    return out


def render_bars_svg(bars: BarSet) -> str:
    gap = CELL // 2
    width = (max(b.length for b in bars.bars) + 2) * CELL + 120
    body = []
    y = gap
    for b in bars.bars:
        body.append(
            f'<text x="{CELL / 2:g}" y="{y + CELL * 0.65:g}" font-size="{CELL * 0.32:g}" '
            f'font-family="monospace">{b.name}</text>'
        )
        body.extend(_bar_cells(b, 120, y, labels=True))
        y += CELL + gap
    return _svg(width, y, body)


def render_tiles_svg(tiles: TileSet) -> str:
    # one square per tile, split into four edge triangles
    side = CELL * 2
    gap = CELL
    body = []
    x = gap
    for t in tiles.tiles:
        cx, cy = x + side / 2, gap + side / 2
        corners = {
            "nw": (x, gap),
            "ne": (x + side, gap),
            "se": (x + side, gap + side),
            "sw": (x, gap + side),
        }
        tris = [
            (t.north, corners["nw"], corners["ne"]),
            (t.east, corners["ne"], corners["se"]),
            (t.south, corners["se"], corners["sw"]),
            (t.west, corners["sw"], corners["nw"]),
        ]
        for color, a, b in tris:
            body.append(
                f'<polygon points="{a[0]:g},{a[1]:g} {b[0]:g},{b[1]:g} {cx:g},{cy:g}" '
                f'fill="{color_hex(color)}" stroke="black" stroke-width="0.5"/>'
            )
        body.append(_label(cx, gap + side + CELL * 0.6, t.name, CELL * 0.32))
        x += side + gap
    return _svg(x, gap + side + CELL, body)


def render_tiling_svg(bars: BarSet, tiling: Tiling) -> str:
    if tiling.domain.kind == "free":
        cells = cover_map(bars, tiling)
        if not cells:
            raise WangBarsError("nothing to render")
        xs = [c[0] for c in cells]
        ys = [c[1] for c in cells]
        x_min, x_max = min(xs), max(xs)
        y_min, y_max = min(ys), max(ys)
    else:
        x_min, y_min = 0, 0
        x_max, y_max = tiling.domain.width - 1, tiling.domain.height - 1
    W = x_max - x_min + 1
    H = y_max - y_min + 1
    lookup = bars.by_name()
    body = [_rect(0, 0, W * CELL, H * CELL, "#ffffff")]
    # y axis points north: row y renders at the (H-1-y)-th band from the top
    torus = tiling.domain.kind == "torus"
    for p in sorted(tiling.placements, key=lambda p: (p.y, p.x, p.item)):
        bar = lookup[p.item]
        py = p.y % tiling.domain.height if torus else p.y
        oy = (y_max - py) * CELL
        for k in range(bar.length):
            x = p.x + k
            if torus:
                x %= tiling.domain.width
            ox = (x - x_min) * CELL
            body.append(_rect(ox, oy, CELL, CELL / 2, color_hex(bar.top[k])))
            body.append(
                _rect(ox, oy + CELL / 2, CELL, CELL / 2, color_hex(bar.bottom[k]))
            )
            body.append(_label(ox + CELL / 2, oy + CELL * 0.36, bar.top[k], CELL * 0.18))
            body.append(
                _label(ox + CELL / 2, oy + CELL * 0.88, bar.bottom[k], CELL * 0.18)
            )
        ox = (p.x - x_min) * CELL
        if not torus or p.x + bar.length <= tiling.domain.width:
            body.append(
                f'<rect x="{ox:g}" y="{oy:g}" width="{bar.length * CELL:g}" '
                f'height="{CELL:g}" fill="none" stroke="black" stroke-width="0.8"/>'
            )
    return _svg(W * CELL, H * CELL, body)


_GLYPHS = string.ascii_uppercase + string.ascii_lowercase + string.digits


def render_bars_ascii(bars: BarSet) -> str:
    lines = []
    for b in bars.bars:
        lines.append("top    | " + " ".join(b.top))
        lines.append(f"bar    | {b.name} left={b.left} right={b.right} len={b.length}")
        lines.append("bottom | " + " ".join(b.bottom))
        lines.append("")
    return "\n".join(lines)


def render_tiles_ascii(tiles: TileSet) -> str:
    lines = ["name N E S W"]
    for t in tiles.tiles:
        lines.append(f"{t.name} {t.north} {t.east} {t.south} {t.west}")
    return "\n".join(lines) + "\n"


def render_tiling_ascii(bars: BarSet, tiling: Tiling) -> str:
    """One glyph per cell keyed by bar, top row printed first, legend below."""
    if len(bars.bars) > len(_GLYPHS):
        raise WangBarsError("too many bars for ascii rendering")
    glyph = {b.name: _GLYPHS[i] for i, b in enumerate(bars.bars)}
    cells = cover_map(bars, tiling)
    if tiling.domain.kind == "free":
        if not cells:
            raise WangBarsError("nothing to render")
        xs = [c[0] for c in cells]
        ys = [c[1] for c in cells]
        x_rng = range(min(xs), max(xs) + 1)
        y_rng = range(min(ys), max(ys) + 1)
    else:
        x_rng = range(tiling.domain.width)
        y_rng = range(tiling.domain.height)
    rows = []
    for y in reversed(y_rng):
        rows.append(
            "".join(
                glyph[cells[(x, y)][0].name] if (x, y) in cells else "."
                for x in x_rng
            )
        )
    legend = [f"# {glyph[b.name]} = {b.name}" for b in bars.bars]
    return "\n".join(rows + legend) + "\n"
