"""Wang tiles to 29 Wang bars: an executable, verifiable reduction."""

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
    UnknownNameError,
    ValidationReport,
    Violation,
    WangBarsError,
    cover_map,
    tile_as_bar,
    tiles_as_bars,
    validate_bar_tiling,
    validate_tile_tiling,
)
from .reduction import (
    DecodeError,
    Palette,
    ReductionManifest,
    build_aligner,
    build_encoder,
    build_fillers_g1,
    build_fillers_g2,
    build_linkers,
    build_selector,
    decode_tiling,
    enumerate_colors,
    lattices_equivalent,
    pattern_torus,
    reduce,
    reduce_lattice,
    simulate_tiling,
)
from .solver import (
    CnfDocument,
    InconsistentPinsError,
    Region,
    SearchConfig,
    SolveResult,
    complete_region,
    decode_model,
    dpll,
    export_cnf,
    solve,
)
from .analysis import (
    CutResult,
    DeficiencyReport,
    FactReport,
    builtin_instance,
    color_deficiency,
    cut_bars,
    pad_to_deficiency,
    run_fact_suite,
)

__version__ = "0.1.0"

__all__ = [
    "Bar", "BarSet", "Color", "Domain", "Placement", "Tile", "TileGrid",
    "TileSet", "Tiling", "UnknownNameError", "ValidationReport", "Violation",
    "WangBarsError", "cover_map", "tile_as_bar", "tiles_as_bars",
    "validate_bar_tiling", "validate_tile_tiling",
    "DecodeError", "Palette", "ReductionManifest", "build_aligner",
    "build_encoder", "build_fillers_g1", "build_fillers_g2", "build_linkers",
    "build_selector", "decode_tiling", "enumerate_colors",
    "lattices_equivalent", "pattern_torus", "reduce", "reduce_lattice",
    "simulate_tiling",
    "CnfDocument", "InconsistentPinsError", "Region", "SearchConfig",
    "SolveResult", "complete_region", "decode_model", "dpll", "export_cnf",
    "solve",
    "CutResult", "DeficiencyReport", "FactReport", "builtin_instance",
    "color_deficiency", "cut_bars", "pad_to_deficiency", "run_fact_suite",
]
