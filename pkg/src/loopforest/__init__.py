"""Fully dynamic loop nesting forests over reducible control-flow graphs."""

from .dfst import NONE, DepthFirstTree, EdgeClass, RepairReport
from .dominance import DominanceIndex, DomQueryResult
from .errors import (DetachedVertexError, IrreducibleError, LatchedError,
                     MissingEdgeError, StreamSyntaxError, UnknownVertexError)
from .forest import LoopNestingForest, LoopType, UpdateCounters
from .graph import Cfg
from .harness import run_stream, fuzz_case, generate_stream, check_stream
from .maintainer import LATCH, REJECT, LoopForestMaintainer
from .oracle import (DomTree, StaticLoopForest, build_loop_forest,
                     dominator_sets, idoms_from_dominator_sets,
                     iterative_dominators, reducibility_test)
from .stream import UpdateEvent, UpdateStream, format_stream, parse_stream

__all__ = [
    "NONE", "Cfg", "DepthFirstTree", "EdgeClass", "RepairReport",
    "LoopNestingForest", "LoopType", "UpdateCounters",
    "LoopForestMaintainer", "REJECT", "LATCH",
    "StaticLoopForest", "DomTree", "build_loop_forest", "reducibility_test",
    "iterative_dominators", "dominator_sets", "idoms_from_dominator_sets",
    "DominanceIndex", "DomQueryResult",
    "UpdateEvent", "UpdateStream", "parse_stream", "format_stream",
    "run_stream", "fuzz_case", "generate_stream", "check_stream",
    "UnknownVertexError", "MissingEdgeError", "DetachedVertexError",
    "IrreducibleError", "LatchedError", "StreamSyntaxError",
]
