"""Minimum-cost demand matching of two point sets on a line."""

from .blocks import BlockPartition, GapView, gaps, partition_blocks
from .mm import mm_solve
from .model import (EmptySide, Infeasible, Instance, InstanceError, Matching, NonPositiveDemand,
                    OutOfRange, SolveReport, Violation, check_feasible, cost_of, dump_instance,
                    load_instance, make_instance, verify_matching)
from .ommd import ommd_solve
from .oracles import oracle_enum, oracle_mcf, certify_optimal

__all__ = [
    "BlockPartition", "GapView", "gaps", "partition_blocks", "mm_solve", "EmptySide",
    "Infeasible", "Instance", "InstanceError", "Matching", "NonPositiveDemand", "OutOfRange",
    "SolveReport", "Violation", "check_feasible", "cost_of", "dump_instance", "load_instance",
    "make_instance", "verify_matching", "ommd_solve", "oracle_enum", "oracle_mcf",
    "certify_optimal",
]
