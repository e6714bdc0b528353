"""Command-line surface.

Exit codes: 0 success (or sat), 1 unsat / failed fact suite, 2 usage,
parse, or structure errors, 3 exhausted search budget.  Verdicts travel
only through exit codes; stdout carries report text, stderr diagnostics.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import analysis, formats, reduction, render, solver
from .core import Domain, WangBarsError, validate_bar_tiling

EXIT_OK = 0
EXIT_UNSAT = 1
EXIT_ERROR = 2
EXIT_BUDGET = 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise WangBarsError(f"cannot read {path}: {exc}") from None


def _write(path: str | None, data: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(data)
        return
    try:
        Path(path).write_text(data, encoding="utf-8")
    except OSError as exc:
        raise WangBarsError(f"cannot write {path}: {exc}") from None


def cmd_reduce(args) -> int:
    tiles = formats.parse_tiles(_read(args.tiles))
    order = tuple(args.order.split(",")) if args.order else None
    bars, manifest = reduction.reduce(tiles, order)
    _write(args.out, formats.serialize_bars(bars))
    if args.manifest:
        _write(args.manifest, formats.serialize_manifest(manifest))
    return EXIT_OK


def cmd_solve(args) -> int:
    bars = formats.parse_bars(_read(args.bars))
    domain = Domain(args.mode, args.width, args.height)
    config = solver.SearchConfig(
        exclude=frozenset(args.exclude.split(",")) if args.exclude else frozenset(),
        node_budget=args.budget,
        time_budget=args.time_budget,
    )
    if args.cnf_out:
        if args.mode != "torus":
            raise WangBarsError("CNF export is defined for torus domains")
        doc = solver.export_cnf(bars, args.width, args.height)
        _write(args.cnf_out, doc.to_dimacs())
    result = solver.solve(bars, domain, config)
    print(f"verdict={result.verdict} nodes={result.nodes} elapsed={result.elapsed:.3f}s")
    if result.verdict == solver.SAT and args.witness_out:
        _write(args.witness_out, formats.serialize_placements(result.witness))
    return {
        solver.SAT: EXIT_OK,
        solver.UNSAT: EXIT_UNSAT,
        solver.EXHAUSTED: EXIT_BUDGET,
    }[result.verdict]


def cmd_verify_facts(args) -> int:
    tiles = formats.parse_tiles(_read(args.tiles)) if args.tiles else None
    report = analysis.run_fact_suite(tiles, node_budget=args.budget)
    print(report.to_text(), end="")
    if args.kv:
        print(report.to_kv(), end="")
    return EXIT_OK if report.passed else EXIT_UNSAT


def cmd_cd(args) -> int:
    tiles = formats.parse_tiles(_read(args.tiles))
    print(analysis.color_deficiency(tiles).to_kv(), end="")
    return EXIT_OK


def cmd_cut(args) -> int:
    bars = formats.parse_bars(_read(args.bars))
    result = analysis.cut_bars(bars)
    cd = analysis.color_deficiency(result.tiles).cd
    print(f"tiles={len(result.tiles)} t={result.cuts} cd={cd}")
    if args.out:
        _write(args.out, formats.serialize_tiles(result.tiles))
    return EXIT_OK


def cmd_simulate(args) -> int:
    manifest = formats.parse_manifest(_read(args.manifest))
    lattice = formats.parse_lattice(_read(args.lattice))
    tiling = reduction.simulate_tiling(manifest, lattice)
    _write(args.out, formats.serialize_placements(tiling))
    return EXIT_OK


def cmd_decode(args) -> int:
    manifest = formats.parse_manifest(_read(args.manifest))
    tiling = formats.parse_placements(_read(args.placements))
    lattice = reduction.decode_tiling(manifest, tiling)
    _write(args.out, formats.serialize_lattice(lattice))
    return EXIT_OK


def _sniff(text: str) -> str:
    for _, line in formats._records(text):
        word = line.split()[0]
        if word == "tile":
            return "tiles"
        if word == "bar":
            return "bars"
        if word == "domain":
            return "placements"
        break
    raise WangBarsError("cannot render this file type (expected tiles, bars, or placements)")


def cmd_render(args) -> int:
    text = _read(args.file)
    kind = _sniff(text)
    svg = args.format == "svg"
    if kind == "tiles":
        tiles = formats.parse_tiles(text)
        out = render.render_tiles_svg(tiles) if svg else render.render_tiles_ascii(tiles)
    elif kind == "bars":
        bars = formats.parse_bars(text)
        out = render.render_bars_svg(bars) if svg else render.render_bars_ascii(bars)
    else:
        if not args.bars:
            raise WangBarsError("rendering placements needs --bars for the bar shapes")
        bars = formats.parse_bars(_read(args.bars))
        tiling = formats.parse_placements(text)
        report = validate_bar_tiling(bars, tiling)
        if not report.ok:
            print(f"warning: tiling has violations: {report.summary()}", file=sys.stderr)
        out = (
            render.render_tiling_svg(bars, tiling)
            if svg
            else render.render_tiling_ascii(bars, tiling)
        )
    _write(args.out, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wangbars",
        description="Compile Wang tile sets into 29 Wang bars; search, verify, render.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="compile a tiles file into the 29-bar set")
    p.add_argument("tiles")
    p.add_argument("-o", "--out", default="-", help="bars file (default stdout)")
    p.add_argument("--manifest", help="write the reduction manifest here")
    p.add_argument("--order", help="comma-separated color order override")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="exhaustive tiling search on a finite domain")
    p.add_argument("bars")
    p.add_argument("--mode", choices=("torus", "rect"), default="torus")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--exclude", help="comma-separated bar names to exclude")
    p.add_argument("--budget", type=int, help="node budget")
    p.add_argument("--time-budget", type=float, help="seconds")
    p.add_argument("--cnf-out", help="also export the instance as DIMACS CNF")
    p.add_argument("--witness-out", help="write the witness placements here when sat")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify-facts", help="run the forced-pattern fact suite")
    p.add_argument("tiles", nargs="?", help="single-tile instance (default: built-ins)")
    p.add_argument("--budget", type=int, default=5_000_000)
    p.add_argument("--kv", action="store_true", help="also print the key=value block")
    p.set_defaults(func=cmd_verify_facts)

    p = sub.add_parser("cd", help="color deficiency of a tile set")
    p.add_argument("tiles")
    p.set_defaults(func=cmd_cd)

    p = sub.add_parser("cut", help="cut bars into tiles with fresh glue colors")
    p.add_argument("bars")
    p.add_argument("-o", "--out", help="write the resulting tiles file here")
    p.set_defaults(func=cmd_cut)

    p = sub.add_parser("simulate", help="lay out the forced pattern for a lattice")
    p.add_argument("manifest")
    p.add_argument("lattice")
    p.add_argument("-o", "--out", default="-")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("decode", help="read the tile assignment out of a bar tiling")
    p.add_argument("manifest")
    p.add_argument("placements")
    p.add_argument("-o", "--out", default="-")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("render", help="render tiles, bars, or placements")
    p.add_argument("file")
    p.add_argument("--bars", help="bars file (needed when rendering placements)")
    p.add_argument("--format", choices=("svg", "ascii"), default="svg")
    p.add_argument("-o", "--out", default="-")
    p.set_defaults(func=cmd_render)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except WangBarsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
