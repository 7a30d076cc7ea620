"""Simulation and analysis toolkit for Gasieniec-Pelc style fault-tolerant rumor spreading."""

from .exectree import NONTERMINATING, Kind, build_tree, export_tree, hgp, hwu
from .seqcore import BitStream, Permutation, Tail, TodoProgression, random_permutation, split_progression
from .simulator import (
    AppendixMode,
    ExecTrace,
    FailureModel,
    PermTable,
    appendix_bits_rgp,
    simulate_gp,
    simulate_rgp,
    simulate_tablegp,
    simulate_wu,
)
from .wakeup import build_wakeup_tree, wu_time_from_path_sums

__version__ = "0.1.0"

__all__ = [
    "AppendixMode",
    "BitStream",
    "ExecTrace",
    "FailureModel",
    "Kind",
    "NONTERMINATING",
    "PermTable",
    "Permutation",
    "Tail",
    "TodoProgression",
    "appendix_bits_rgp",
    "build_tree",
    "build_wakeup_tree",
    "export_tree",
    "hgp",
    "hwu",
    "random_permutation",
    "simulate_gp",
    "simulate_rgp",
    "simulate_tablegp",
    "simulate_wu",
    "split_progression",
    "wu_time_from_path_sums",
]
