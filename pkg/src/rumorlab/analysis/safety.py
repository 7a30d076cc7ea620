"""Sampled (f, 1-delta, T)-safety estimate for a permutation table.

Every failure set of size f cannot be enumerated, so the estimate draws sets
from three generators and reports the worst fraction of table indices whose
run exceeds T. A PASS verdict means "no sampled set broke the table", nothing
stronger.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..batch import alive_matrix, batch_gp_rounds
from ..seqcore import derive_seed
from ..simulator import PermTable
from .bounds import derand_params

EXACT_T_LIMIT = 1 << 16


def uniform_sets(n: int, f: int, count: int, seed: int) -> List[Tuple[int, ...]]:
    rng = np.random.default_rng(derive_seed(seed, 1))
    return [tuple(sorted(int(x) + 1 for x in rng.choice(n - 1, size=f, replace=False))) for _ in range(count)]


def prefix_attack_sets(table: PermTable, f: int, count: int, seed: int) -> List[Tuple[int, ...]]:
    """F = the first f processors pi^r would call, for sampled r (worst case for that r)."""
    rng = np.random.default_rng(derive_seed(seed, 2))
    rs = rng.integers(0, table.t, size=count)
    return [tuple(sorted(int(x) for x in table.perms[r, :f])) for r in rs]


def greedy_early_set(table: PermTable, f: int) -> Tuple[int, ...]:
    """Fail the f processors that most often sit among the first f calls of the table."""
    if f == 0:
        return ()
    counts = np.bincount(table.perms[:, :f].ravel(), minlength=table.size + 1)[1:]
    order = np.lexsort((np.arange(table.size), -counts))  # ties -> smaller id
    return tuple(sorted(int(i) + 1 for i in order[:f]))


@dataclass(frozen=True)
class SafetyReport:
    table: dict
    f: int
    T: float
    delta: float
    generators: Dict[str, int]
    fractions: Tuple[Tuple[str, float], ...] = field(repr=False)
    r_exact: bool = True

    @property
    def worst_fraction(self) -> float:
        return max((x for _, x in self.fractions), default=0.0)

    @property
    def passed(self) -> bool:
        return self.worst_fraction <= self.delta

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_json(self) -> dict:
        return {
            "table": self.table,
            "f": self.f,
            "T": self.T,
            "delta": self.delta,
            "samples": len(self.fractions),
            "generators": self.generators,
            "fractions": [{"generator": g, "fraction": x} for g, x in self.fractions],
            "worst_fraction": self.worst_fraction,
            "r_exact": self.r_exact,
            "verdict": self.verdict,
            "evidence": "sampled",
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"

    def summary(self) -> str:
        return f"worst_fraction={self.worst_fraction:.6g} delta={self.delta:.6g} verdict={self.verdict}"


def violation_fraction(table: PermTable, failed, T: float, r_sample: Optional[np.ndarray] = None) -> float:
    """Fraction of table indices (all, or the sampled ones) whose GP run exceeds T."""
    perms = table.perms if r_sample is None else table.perms[r_sample]
    rounds = batch_gp_rounds(alive_matrix(perms, failed))
    return float(np.mean(rounds > T))


def safety_estimate(
    n: int,
    table: PermTable,
    f: int,
    T: float,
    sample_budget: int,
    seed: int,
    delta: Optional[float] = None,
) -> SafetyReport:
    if table.size != n - 1:
        raise ValueError("table does not match n")
    if not 0 <= f <= n - 1:
        raise ValueError("f must lie in [0, n-1]")
    if sample_budget < 1:
        raise ValueError("sample_budget must be at least 1")
    if delta is None:
        delta = derand_params(n, table.t).delta

    sets: List[Tuple[str, Tuple[int, ...]]] = [("greedy", greedy_early_set(table, f))]
    remaining = sample_budget - 1
    n_prefix = remaining // 2
    sets += [("prefix", F) for F in prefix_attack_sets(table, f, n_prefix, seed)]
    sets += [("uniform", F) for F in uniform_sets(n, f, remaining - n_prefix, seed)]

    r_sample = None
    if table.t > EXACT_T_LIMIT:
        r_sample = np.random.default_rng(derive_seed(seed, 3)).integers(0, table.t, size=EXACT_T_LIMIT)
    fractions = tuple((g, violation_fraction(table, F, T, r_sample)) for g, F in sets)
    generators: Dict[str, int] = {}
    for g, _ in sets:
        generators[g] = generators.get(g, 0) + 1
    return SafetyReport(table.describe(), f, T, delta, generators, fractions, r_sample is None)
