"""Seeded Monte Carlo estimates of Pr[rounds > T] against the matching bound."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from ..batch import alive_matrix, batch_gp_rounds
from ..exectree import NONTERMINATING, hwu
from ..seqcore import BitStream, derive_seed
from ..simulator import PermTable, default_round_cap, random_alive_mask
from .bounds import rgp_runtime_bound, wu_runtime_bound

CHUNK = 2048


class MCProtocol(enum.Enum):
    WU = "wu"
    GP_RANDOM = "gp_random"
    RGP = "rgp"
    TABLEGP = "tablegp"


FAILURE_GENERATORS = ("prefix", "suffix", "stride", "uniform")


def failure_set(n: int, f: int, generator: str, seed: int = 0) -> Tuple[int, ...]:
    """Structured adversarial crash sets of size f inside [1..n-1]."""
    if not 0 <= f <= n - 1:
        raise ValueError("f must lie in [0, n-1]")
    if generator == "prefix":
        return tuple(range(1, f + 1))
    if generator == "suffix":
        return tuple(range(n - f, n))
    if generator == "stride":
        ids = list(range(2, n, 2)) + list(range(1, n, 2))
        return tuple(sorted(ids[:f]))
    if generator == "uniform":
        rng = np.random.default_rng(derive_seed(seed, f))
        return tuple(sorted(int(x) + 1 for x in rng.choice(n - 1, size=f, replace=False)))
    raise ValueError(f"unknown failure generator {generator!r}")


def trial_seed(master: int, i: int) -> int:
    """Seed of trial i; trial i of a campaign replays as a single simulation with this seed."""
    return derive_seed(master, i)


@dataclass(frozen=True)
class TailReport:
    protocol: str
    n: int
    trials: int
    seed: int
    c: float
    failure_spec: dict
    bound_T: float
    empirical_violation_rate: float
    theoretical_bound_probability: float
    quantiles: Dict[str, int]
    histogram: Tuple[Tuple[int, int], ...] = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.empirical_violation_rate <= self.theoretical_bound_probability

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_json(self) -> dict:
        return {
            "protocol": self.protocol,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "c": self.c,
            "failure_spec": self.failure_spec,
            "bound_T": self.bound_T,
            "empirical_violation_rate": self.empirical_violation_rate,
            "theoretical_bound_probability": self.theoretical_bound_probability,
            "quantiles": self.quantiles,
            "verdict": self.verdict,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"

    def histogram_csv(self) -> str:
        lines = ["rounds,count"]
        lines += [f"{r},{c}" for r, c in self.histogram]
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        return (
            f"empirical={self.empirical_violation_rate:.6g} "
            f"theoretical={self.theoretical_bound_probability:.6g} verdict={self.verdict}"
        )


def _wu_rounds(n: int, p: float, seeds: List[int], cap: int) -> np.ndarray:
    out = np.empty(len(seeds), dtype=np.int64)
    for i, s in enumerate(seeds):
        h = hwu(n - 1, BitStream.bernoulli(p, s), cap)
        out[i] = cap + 1 if h is NONTERMINATING else h
    return out


def _gp_random_rounds(n: int, p: float, seeds: List[int]) -> np.ndarray:
    rows = np.array([random_alive_mask(n, p, s) for s in seeds]).reshape(len(seeds), n - 1)
    return batch_gp_rounds(rows)


def _rgp_rounds(n: int, failed, seeds: List[int]) -> np.ndarray:
    orders = np.array([np.random.default_rng(s).permutation(n - 1) + 1 for s in seeds])
    return batch_gp_rounds(alive_matrix(orders.reshape(len(seeds), n - 1), failed))


def _table_rounds(table: PermTable, failed, seeds: List[int]) -> np.ndarray:
    rs = np.array([np.random.default_rng(s).integers(1, table.t + 1) for s in seeds], dtype=np.int64)
    return batch_gp_rounds(alive_matrix(table.perms[rs - 1], failed))


def sample_rounds(
    protocol: MCProtocol,
    n: int,
    trials: int,
    seed: int,
    p: float = 1.0,
    failed: Iterable[int] = (),
    table: Optional[PermTable] = None,
    round_cap: Optional[int] = None,
) -> np.ndarray:
    """Round counts of ``trials`` independent runs, trial i seeded by trial_seed(seed, i).

    WU trial i equals simulate_wu(n, RANDOM(p, s_i)); GP_RANDOM equals
    simulate_gp(n, RANDOM(p, s_i)); RGP equals simulate_rgp(n, F, s_i) with
    explicit lists; TABLEGP equals simulate_tablegp(n, table, F, s_i).
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    failed = frozenset(failed)
    out = []
    for lo in range(0, trials, CHUNK):
        seeds = [trial_seed(seed, i) for i in range(lo, min(trials, lo + CHUNK))]
        if protocol is MCProtocol.WU:
            cap = default_round_cap() if round_cap is None else round_cap
            out.append(_wu_rounds(n, p, seeds, cap))
        elif protocol is MCProtocol.GP_RANDOM:
            out.append(_gp_random_rounds(n, p, seeds))
        elif protocol is MCProtocol.RGP:
            out.append(_rgp_rounds(n, failed, seeds))
        else:
            if table is None:
                raise ValueError("TABLEGP needs a permutation table")
            out.append(_table_rounds(table, failed, seeds))
    return np.concatenate(out)


def _quantiles(rounds: np.ndarray) -> Dict[str, int]:
    q = np.quantile(rounds, [0.5, 0.9, 0.99], method="inverted_cdf")
    return {"p50": int(q[0]), "p90": int(q[1]), "p99": int(q[2]), "max": int(rounds.max())}


def montecarlo_tail(
    protocol: MCProtocol,
    n: int,
    c: float,
    trials: int,
    seed: int,
    p: float = 1.0,
    failed: Iterable[int] = (),
    table: Optional[PermTable] = None,
    round_cap: Optional[int] = None,
) -> TailReport:
    """Empirical Pr[rounds > T] next to the bound's failure probability.

    WU and GP_RANDOM are measured against the wakeup bound at success rate p,
    RGP and TABLEGP against the randomized-GP bound at f = |failed|.
    """
    failed = frozenset(failed)
    if protocol in (MCProtocol.WU, MCProtocol.GP_RANDOM):
        bound = wu_runtime_bound(n, p, c)
        spec = {"p": p}
    else:
        bound = rgp_runtime_bound(n, len(failed), c)
        spec = {"f": len(failed), "failed": sorted(failed)}
        if table is not None:
            spec["table"] = table.describe()
    rounds = sample_rounds(protocol, n, trials, seed, p, failed, table, round_cap)
    values, counts = np.unique(rounds, return_counts=True)
    return TailReport(
        protocol=protocol.value,
        n=n,
        trials=trials,
        seed=seed,
        c=c,
        failure_spec=spec,
        bound_T=bound.T,
        empirical_violation_rate=float(np.mean(rounds > bound.T)),
        theoretical_bound_probability=bound.failure_probability,
        quantiles=_quantiles(rounds),
        histogram=tuple((int(v), int(k)) for v, k in zip(values, counts)),
    )
