"""Round-by-round simulation of GP, WU, randomized GP and permutation-table GP.

Processors are 0..n-1, processor 0 starts with the rumor and the to-do list
(1, ..., n-1). In every round each processor with a nonempty list sends one
request to its list head; on success it hands EVEN(tail) to the new holder and
keeps ODD(tail).
"""

from __future__ import annotations

import enum
import json
import math
import os
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exectree import DEFAULT_ROUND_CAP
from .seqcore import (
    BitStream,
    Permutation,
    TodoProgression,
    derive_seed,
    even_split,
    odd_split,
    random_permutation,
    split_progression,
)

MAX_ROUNDS_ENV = "RUMORLAB_MAX_ROUNDS"


def ceil_log2(x: int) -> int:
    if x < 1:
        raise ValueError("ceil_log2 needs a positive argument")
    return (x - 1).bit_length()


def default_round_cap() -> int:
    raw = os.environ.get(MAX_ROUNDS_ENV)
    if raw is None:
        return DEFAULT_ROUND_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"{MAX_ROUNDS_ENV} must be a positive integer")
    return cap


# --------------------------------------------------------------------------
# Failure models


class FailureKind(enum.Enum):
    NONE = "none"
    ADVERSARIAL_SET = "set"
    RANDOM = "random"


@dataclass(frozen=True)
class FailureModel:
    kind: FailureKind = FailureKind.NONE
    failed: FrozenSet[int] = frozenset()
    p: float = 1.0
    seed: Optional[int] = None

    @classmethod
    def none(cls) -> "FailureModel":
        return cls()

    @classmethod
    def adversarial(cls, failed: Iterable[int]) -> "FailureModel":
        failed = frozenset(int(x) for x in failed)
        if 0 in failed:
            raise ValueError("the start processor 0 cannot fail")
        return cls(FailureKind.ADVERSARIAL_SET, failed)

    @classmethod
    def random(cls, p: float, seed: int) -> "FailureModel":
        if not 0.0 < p <= 1.0:
            raise ValueError(f"success rate must lie in (0, 1], got {p}")
        return cls(FailureKind.RANDOM, p=float(p), seed=int(seed))

    def faulty_set(self, n: int) -> FrozenSet[int]:
        """Processors crashed before the run (initial crash failures)."""
        if self.kind is FailureKind.NONE:
            return frozenset()
        if self.kind is FailureKind.ADVERSARIAL_SET:
            bad = [x for x in self.failed if not 1 <= x <= n - 1]
            if bad:
                raise ValueError(f"failed processors out of range [1..{n - 1}]: {sorted(bad)}")
            return self.failed
        alive = random_alive_mask(n, self.p, self.seed)
        return frozenset(int(i) + 1 for i in np.flatnonzero(~alive))

    def to_json(self) -> dict:
        if self.kind is FailureKind.NONE:
            return {"kind": "none"}
        if self.kind is FailureKind.ADVERSARIAL_SET:
            return {"kind": "set", "failed": sorted(self.failed)}
        return {"kind": "random", "p": self.p, "seed": self.seed}


def random_alive_mask(n: int, p: float, seed: int) -> np.ndarray:
    """Status of processors 1..n-1 under independent crashes with probability 1-p."""
    return np.random.default_rng(seed).random(max(n - 1, 0)) < p


# --------------------------------------------------------------------------
# Traces


@dataclass(frozen=True)
class RoundRecord:
    t: int
    requests: Tuple[Tuple[int, int], ...]
    transfers: Tuple[Tuple[int, int], ...]
    transfer_bits: Tuple[int, ...] = ()

    @property
    def appendix_bits(self) -> int:
        return sum(self.transfer_bits)

    def is_whispering(self) -> bool:
        senders = [s for s, _ in self.requests]
        targets = [t for _, t in self.requests]
        moved = [x for edge in self.transfers for x in edge]
        return (
            len(set(senders)) == len(senders)
            and len(set(targets)) == len(targets)
            and len(set(moved)) == len(moved)
        )

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "requests": [list(e) for e in self.requests],
            "transfers": [list(e) for e in self.transfers],
            "transfer_bits": list(self.transfer_bits),
            "appendix_bits": self.appendix_bits,
        }


class Protocol(enum.Enum):
    GP = "gp"
    WU = "wu"
    RGP = "rgp"
    TABLEGP = "tablegp"


@dataclass(frozen=True)
class ExecTrace:
    protocol: Protocol
    n: int
    rounds: Tuple[RoundRecord, ...]
    informed: FrozenSet[int]
    faulty: FrozenSet[int]
    failure_spec: dict
    seeds: dict = field(default_factory=dict)
    nonterminating: bool = False

    @property
    def termination_round(self) -> int:
        return len(self.rounds)

    @property
    def total_requests(self) -> int:
        return sum(len(r.requests) for r in self.rounds)

    @property
    def total_transfers(self) -> int:
        return sum(len(r.transfers) for r in self.rounds)

    @property
    def total_appendix_bits(self) -> int:
        return sum(r.appendix_bits for r in self.rounds)

    @property
    def max_appendix_bits(self) -> int:
        return max((b for r in self.rounds for b in r.transfer_bits), default=0)

    def request_counts(self) -> Dict[Tuple[int, int], int]:
        """Number of requests sent along each edge."""
        counts: Dict[Tuple[int, int], int] = {}
        for r in self.rounds:
            for edge in r.requests:
                counts[edge] = counts.get(edge, 0) + 1
        return counts

    def to_json(self) -> dict:
        return {
            "protocol": self.protocol.value,
            "n": self.n,
            "seeds": self.seeds,
            "failure_spec": self.failure_spec,
            "rounds": [r.to_json() for r in self.rounds],
            "totals": {
                "requests": self.total_requests,
                "transfers": self.total_transfers,
                "appendix_bits": self.total_appendix_bits,
                "max_appendix_bits": self.max_appendix_bits,
            },
            "termination_round": self.termination_round,
            "nonterminating": self.nonterminating,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"

    def summary(self) -> str:
        line = (
            f"rounds={self.termination_round} requests={self.total_requests} "
            f"max_appendix_bits={self.max_appendix_bits}"
        )
        if self.nonterminating:
            line += " NONTERMINATING"
        return line


# --------------------------------------------------------------------------
# Appendix accounting


def progression_bits(n: int) -> int:
    """First element, length and step exponent of an arithmetic progression."""
    return 3 * (ceil_log2(n) + 1)


def table_index_bits(t: int) -> int:
    return ceil_log2(t) + 1


class AppendixMode(enum.Enum):
    EXPLICIT = "explicit"
    THRESHOLD = "threshold"


def explicit_list_bits(k: int, n: int) -> int:
    """k indices of ceil(log n) bits each plus a (ceil(log n)+1)-bit length field."""
    w = ceil_log2(n)
    return k * w + w + 1


def uses_incidence_vector(k: int, n: int) -> bool:
    """THRESHOLD mode sends the (n-1)-bit incidence vector for long lists.

    Long means k > n / log n, or whenever the explicit encoding would not be
    shorter than the vector.
    """
    if n < 2:
        return False
    over = math.log2(n) > 0 and k > n / math.log2(n)
    return over or explicit_list_bits(k, n) > n - 1


def appendix_bits_rgp(k: int, n: int, mode: AppendixMode = AppendixMode.THRESHOLD) -> int:
    if not 0 <= k <= max(n - 1, 0):
        raise ValueError(f"list length {k} outside [0, {n - 1}]")
    if mode is AppendixMode.THRESHOLD and uses_incidence_vector(k, n):
        return n - 1
    return explicit_list_bits(k, n)


# --------------------------------------------------------------------------
# Permutation tables


@dataclass(frozen=True, eq=False)
class PermTable:
    """t stored permutations of [n-1]; row r-1 holds pi^r."""

    perms: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        perms = np.asarray(self.perms)
        if perms.ndim != 2 or perms.shape[0] < 1:
            raise ValueError("a table needs at least one permutation")
        size = perms.shape[1]
        if not np.array_equal(np.sort(perms, axis=1), np.broadcast_to(np.arange(1, size + 1), perms.shape)):
            raise ValueError("every table entry must be a bijection on [n-1]")
        perms.setflags(write=False)
        object.__setattr__(self, "perms", perms)

    @property
    def t(self) -> int:
        return self.perms.shape[0]

    @property
    def size(self) -> int:
        return self.perms.shape[1]

    def __getitem__(self, r: int) -> Permutation:
        if not 1 <= r <= self.t:
            raise IndexError(f"table index {r} outside [1, {self.t}]")
        return Permutation(tuple(int(x) for x in self.perms[r - 1]))

    @classmethod
    def random(cls, n: int, t: int, seed: int) -> "PermTable":
        rng = np.random.default_rng(seed)
        perms = rng.permuted(np.broadcast_to(np.arange(1, n, dtype=np.int32), (t, n - 1)), axis=1)
        return cls(perms, seed)

    @classmethod
    def from_permutations(cls, perms: Sequence[Permutation]) -> "PermTable":
        return cls(np.array([p.mapping for p in perms], dtype=np.int32).reshape(len(perms), -1))

    def describe(self) -> dict:
        return {"n": self.size + 1, "t": self.t, "seed": self.seed}


# --------------------------------------------------------------------------
# Simulations


def _finish(protocol, n, rounds, informed, faulty, fm_json, seeds, nonterminating=False) -> ExecTrace:
    return ExecTrace(
        protocol=protocol,
        n=n,
        rounds=tuple(rounds),
        informed=frozenset(informed),
        faulty=frozenset(faulty),
        failure_spec=fm_json,
        seeds=seeds,
        nonterminating=nonterminating,
    )


def _run_progressions(n, root_list, faulty, bits_per_transfer):
    """GP over progression lists; shared by GP and permutation-table GP."""
    lists: Dict[int, TodoProgression] = {0: root_list} if root_list.length else {}
    informed = {0}
    rounds = []
    t = 0
    while lists:
        t += 1
        requests, transfers, bits = [], [], []
        nxt: Dict[int, TodoProgression] = {}
        for holder in sorted(lists):
            lst = lists[holder]
            head, keep, give = split_progression(lst)
            target = lst.permutation(head) if lst.permutation is not None else head
            requests.append((holder, target))
            if target in faulty:
                rest = TodoProgression(lst.first + lst.step, lst.length - 1, lst.step_exponent, lst.permutation)
                if rest.length:
                    nxt[holder] = rest
                continue
            transfers.append((holder, target))
            bits.append(bits_per_transfer)
            informed.add(target)
            if keep.length:
                nxt[holder] = keep
            if give.length:
                nxt[target] = give
        rounds.append(RoundRecord(t, tuple(requests), tuple(transfers), tuple(bits)))
        lists = nxt
    return rounds, informed


def simulate_gp(n: int, fm: Optional[FailureModel] = None) -> ExecTrace:
    """Deterministic GP with initial crash failures."""
    if n < 1:
        raise ValueError("n must be at least 1")
    fm = fm or FailureModel.none()
    faulty = fm.faulty_set(n)
    rounds, informed = _run_progressions(n, TodoProgression(1, n - 1, 0), faulty, progression_bits(n))
    seeds = {"failure_seed": fm.seed} if fm.seed is not None else {}
    return _finish(Protocol.GP, n, rounds, informed, faulty, fm.to_json(), seeds)


def simulate_tablegp(
    n: int,
    table: PermTable,
    failed: Iterable[int] = (),
    r_seed: int = 0,
    r: Optional[int] = None,
) -> ExecTrace:
    """GP along pi^r for an index r drawn uniformly from [t] (or given)."""
    if table.size != n - 1:
        raise ValueError(f"table permutes [{table.size}] but n-1 = {n - 1}")
    fm = FailureModel.adversarial(failed)
    faulty = fm.faulty_set(n)
    if r is None:
        r = int(np.random.default_rng(r_seed).integers(1, table.t + 1))
    perm = table[r]
    bits = progression_bits(n) + table_index_bits(table.t)
    rounds, informed = _run_progressions(n, TodoProgression(1, n - 1, 0, perm), faulty, bits)
    seeds = {"r_seed": r_seed, "r": r, "table_seed": table.seed}
    return _finish(Protocol.TABLEGP, n, rounds, informed, faulty, fm.to_json(), seeds)


def simulate_rgp(
    n: int,
    failed: Iterable[int] = (),
    pi_seed: int = 0,
    mode: AppendixMode = AppendixMode.THRESHOLD,
    permutation: Optional[Permutation] = None,
) -> ExecTrace:
    """GP started from the list (pi(1), ..., pi(n-1)) for a uniform pi.

    Lists travel as explicit index lists or, in THRESHOLD mode, as incidence
    vectors; a holder receiving an incidence vector re-permutes its list with
    a seed derived from (pi_seed, holder).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    fm = FailureModel.adversarial(failed)
    faulty = fm.faulty_set(n)
    if permutation is None:
        permutation = random_permutation(n - 1, pi_seed)
    elif permutation.size != n - 1:
        raise ValueError("permutation must act on [n-1]")

    lists: Dict[int, Tuple[int, ...]] = {0: permutation.mapping} if n > 1 else {}
    informed = {0}
    rounds = []
    t = 0
    while lists:
        t += 1
        requests, transfers, bits = [], [], []
        nxt: Dict[int, Tuple[int, ...]] = {}
        for holder in sorted(lists):
            lst = lists[holder]
            target, tail = lst[0], lst[1:]
            requests.append((holder, target))
            if target in faulty:
                if tail:
                    nxt[holder] = tail
                continue
            keep, give = odd_split(tail), even_split(tail)
            transfers.append((holder, target))
            bits.append(appendix_bits_rgp(len(give), n, mode))
            informed.add(target)
            if mode is AppendixMode.THRESHOLD and uses_incidence_vector(len(give), n) and give:
                order = np.random.default_rng(derive_seed(pi_seed, target)).permutation(len(give))
                ordered = sorted(give)
                give = tuple(ordered[i] for i in order)
            if keep:
                nxt[holder] = keep
            if give:
                nxt[target] = give
        rounds.append(RoundRecord(t, tuple(requests), tuple(transfers), tuple(bits)))
        lists = nxt
    seeds = {"pi_seed": pi_seed, "mode": mode.value}
    return _finish(Protocol.RGP, n, rounds, informed, faulty, fm.to_json(), seeds)


def simulate_wu(n: int, fm: FailureModel, round_cap: Optional[int] = None) -> ExecTrace:
    """Wakeup model: a failed request is retried next round; list unchanged.

    Attempt outcomes are read from the Bernoulli(p) stream seeded by the
    failure model, following the same ODD/EVEN view discipline as TWU, so the
    run length equals HWU(n-1, b) for that stream.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if fm.kind is not FailureKind.RANDOM:
        raise ValueError("the wakeup model needs a RANDOM(p, seed) failure model")
    cap = default_round_cap() if round_cap is None else round_cap
    if cap < 1:
        raise ValueError("round_cap must be at least 1")
    root = BitStream.bernoulli(fm.p, fm.seed)

    lists: Dict[int, Tuple[TodoProgression, BitStream]] = {}
    if n > 1:
        lists[0] = (TodoProgression(1, n - 1, 0), root)
    informed = {0}
    rounds: List[RoundRecord] = []
    bits_per_transfer = progression_bits(n)
    nonterminating = False
    t = 0
    while lists:
        if t >= cap:
            nonterminating = True
            break
        t += 1
        requests, transfers, bits = [], [], []
        nxt: Dict[int, Tuple[TodoProgression, BitStream]] = {}
        for holder in sorted(lists):
            lst, stream = lists[holder]
            head, keep, give = split_progression(lst)
            requests.append((holder, head))
            rest = stream.rest()
            if not stream.read(1):
                nxt[holder] = (lst, rest)
                continue
            transfers.append((holder, head))
            bits.append(bits_per_transfer)
            informed.add(head)
            if keep.length:
                nxt[holder] = (keep, rest.odd())
            if give.length:
                nxt[head] = (give, rest.even())
        rounds.append(RoundRecord(t, tuple(requests), tuple(transfers), tuple(bits)))
        lists = nxt
    seeds = {"failure_seed": fm.seed}
    return _finish(Protocol.WU, n, rounds, informed, frozenset(), fm.to_json(), seeds, nonterminating)
