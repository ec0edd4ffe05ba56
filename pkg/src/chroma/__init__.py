"""Properly coloured paths and cycles in edge-coloured graphs.

Verified builders (extremal pipeline, absorption, 1-path-cycle rotation),
exact small-instance oracles, seeded generators and an experiment harness.
"""
from .errors import ChromaError
from .graph import AnchoredVertex, EdgeColouredGraph, PcWalk, min_colour_degree, parse, serialize
from .verify import ExtremalWitness, ParamOnePathCycle, check_pc_cycle, check_pc_path

__all__ = [
    "AnchoredVertex",
    "ChromaError",
    "EdgeColouredGraph",
    "ExtremalWitness",
    "ParamOnePathCycle",
    "PcWalk",
    "check_pc_cycle",
    "check_pc_path",
    "min_colour_degree",
    "parse",
    "serialize",
]
__version__ = "0.1.0"
