"""Brute-force verification over every failure pattern of small instances."""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from ..exectree import (
    Kind,
    all_patterns,
    check_coupling,
    check_monotone_b,
    check_monotone_k,
    check_splitting,
    hgp,
)
from ..seqcore import BitStream, Tail
from ..simulator import FailureModel, ceil_log2, simulate_gp

N_MAX_GUARD = 14

CHECKS = (
    "coupling",
    "splitting",
    "monotone_k_gp",
    "monotone_k_wu",
    "monotone_b_gp",
    "monotone_b_wu",
    "distribution_equivalence",
    "gp_failure_exact",
    "message_optimality",
)


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    counterexample: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def record(self, ok: bool, **case) -> None:
        self.cases += 1
        if not ok and self.counterexample is None:
            self.counterexample = case


@dataclass
class OracleReport:
    n_max: int
    checks: Dict[str, CheckResult] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def lines(self) -> List[str]:
        out = []
        for name in CHECKS:
            c = self.checks[name]
            line = f"{name}: {'PASS' if c.passed else 'FAIL'} cases={c.cases}"
            if not c.passed:
                line += f" counterexample={json.dumps(c.counterexample, sort_keys=True)}"
            out.append(line)
        return out

    def to_json(self) -> dict:
        return {
            "n_max": self.n_max,
            "passed": self.passed,
            "checks": {
                name: {"passed": c.passed, "cases": c.cases, "counterexample": c.counterexample}
                for name, c in self.checks.items()
            },
        }


def _bits(b) -> str:
    return "".join(map(str, b))


def exhaustive_oracle(n_max: int, guard: int = N_MAX_GUARD) -> OracleReport:
    """Tree lemmas for every k <= n_max and b in {0,1}^k (ones tail); event-level
    checks for every n <= n_max and every failure set F of [1..n-1]."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if n_max > guard:
        raise ValueError(f"n_max={n_max} exceeds the enumeration guard {guard}")
    report = OracleReport(n_max, {name: CheckResult(name) for name in CHECKS})
    ch = report.checks

    for k in range(n_max + 1):
        for b in all_patterns(k):
            s = BitStream.from_prefix(b, Tail.ALL_ONES)
            ch["coupling"].record(check_coupling(k, s), k=k, b=_bits(b))
            ch["splitting"].record(check_splitting(k, s), k=k, b=_bits(b))
            ch["monotone_k_gp"].record(check_monotone_k(k, s, kind=Kind.GP), k=k, b=_bits(b))
            ch["monotone_k_wu"].record(check_monotone_k(k, s, kind=Kind.WU), k=k, b=_bits(b))
            for pos in (i + 1 for i, x in enumerate(b) if x == 0):
                ch["monotone_b_gp"].record(check_monotone_b(k, s, pos, Kind.GP), k=k, b=_bits(b), flip=pos)
                ch["monotone_b_wu"].record(check_monotone_b(k, s, pos, Kind.WU), k=k, b=_bits(b), flip=pos)

    for n in range(1, n_max + 1):
        event: Dict[int, Counter] = {f: Counter() for f in range(n)}
        for mask in range(1 << (n - 1)):
            failed = [i + 1 for i in range(n - 1) if mask >> i & 1]
            trace = simulate_gp(n, FailureModel.adversarial(failed))
            event[len(failed)][trace.termination_round] += 1
            ch["message_optimality"].record(trace.total_requests == n - 1, n=n, failed=failed)
        tree: Dict[int, Counter] = {f: Counter() for f in range(n)}
        for b in itertools.product((0, 1), repeat=n - 1):
            tree[b.count(0)][hgp(n - 1, BitStream.from_prefix(b))] += 1
        for f in range(n):
            ch["distribution_equivalence"].record(
                event[f] == tree[f], n=n, f=f, event=dict(event[f]), tree=dict(tree[f])
            )
            rounds = simulate_gp(n, FailureModel.adversarial(range(1, f + 1))).termination_round
            bound = f + ceil_log2(n - f)
            worst = max(event[f])
            ch["gp_failure_exact"].record(rounds == bound and worst <= bound, n=n, f=f, rounds=rounds, worst=worst)
    return report
