"""Sublinear-space s-t reachability for directed grid graphs.

The pipeline cuts the grid into roughly cube-root-sided blocks, summarises
each block's rim-to-rim reachability as a circle graph, transforms it into an
edge-labeled plane gadget graph, stitches the blocks along their seams, and
answers the query with a separator-based recursive leveled search whose
working set is tracked by an explicit word-count ledger.
"""

from .grid import GridGraph, VertexId, bfs_reachable, gen_random, parse_grid, write_grid
from .circle import CircleGraph, build_circle
from .gadget import GadgetEdge, GadgetGraph, GadgetInvariantError, LevelInvariantError, transform
from .ledger import SpaceLedger
from .levels import INF, UNREACHED, ZERO, Label, Level
from .pipeline import SolveConfig, SolveReport, solve, solve_all_pairs
from .separator import SeparatorError, find_separator, reach_boolean, reach_leveled
from .token_eval import TokenEvalError, token_levels, token_reachable

__version__ = "0.1.0"

__all__ = [
    "GridGraph",
    "VertexId",
    "bfs_reachable",
    "gen_random",
    "parse_grid",
    "write_grid",
    "CircleGraph",
    "build_circle",
    "GadgetEdge",
    "GadgetGraph",
    "GadgetInvariantError",
    "LevelInvariantError",
    "transform",
    "SpaceLedger",
    "INF",
    "UNREACHED",
    "ZERO",
    "Label",
    "Level",
    "SolveConfig",
    "SolveReport",
    "solve",
    "solve_all_pairs",
    "SeparatorError",
    "find_separator",
    "reach_boolean",
    "reach_leveled",
    "TokenEvalError",
    "token_levels",
    "token_reachable",
    "__version__",
]
