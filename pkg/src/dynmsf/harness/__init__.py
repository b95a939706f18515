"""Oracle, traces, replay and the command line."""
from .fit import fit_affine, fit_scaling
from .oracle import OracleGraph, kruskal
from .runner import ENGINES, BenchReport, run_trace
from .trace import Trace, TraceError, gen_connected_trace, gen_trace, parse_trace

__all__ = ["ENGINES", "BenchReport", "OracleGraph", "Trace", "TraceError", "fit_affine",
           "fit_scaling", "gen_connected_trace", "gen_trace", "kruskal", "parse_trace", "run_trace"]
