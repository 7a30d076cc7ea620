"""Sequence primitives: ODD/EVEN splitting, failure-pattern bit streams,
arithmetic-progression to-do lists and seeded permutations.

All positions are 1-based.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, TypeVar

import numpy as np

T = TypeVar("T")

BLOCK_SIZE = 4096


def odd_split(s: Sequence[T]) -> Tuple[T, ...]:
    """Elements at odd 1-based positions: ODD((1,2,3,4,5)) == (1,3,5)."""
    return tuple(s[0::2])


def even_split(s: Sequence[T]) -> Tuple[T, ...]:
    """Elements at even 1-based positions: EVEN((1,2,3,4,5)) == (2,4)."""
    return tuple(s[1::2])


def interleave(odd: Sequence[T], even: Sequence[T]) -> Tuple[T, ...]:
    """Inverse of (odd_split, even_split)."""
    if not (len(odd) == len(even) or len(odd) == len(even) + 1):
        raise ValueError("odd/even parts have incompatible lengths")
    out = []
    for i, x in enumerate(odd):
        out.append(x)
        if i < len(even):
            out.append(even[i])
    return tuple(out)


def derive_seed(*words: int) -> int:
    """Deterministic 64-bit seed from a tuple of non-negative integers."""
    state = np.random.SeedSequence([int(w) for w in words]).generate_state(2, np.uint32)
    return (int(state[0]) << 32) | int(state[1])


# --------------------------------------------------------------------------
# Bit streams


class Tail(enum.Enum):
    ALL_ONES = "ones"
    ALL_ZEROS = "zeros"
    BERNOULLI = "bernoulli"


class _BitSource:
    """Underlying infinite 0/1 vector shared by every view of one stream.

    Bernoulli bits are drawn in blocks keyed by (seed, block index), so the
    value at an absolute index does not depend on read order. Filling a block
    is idempotent, which keeps concurrent readers consistent.
    """

    __slots__ = ("prefix", "tail", "p", "seed", "_blocks", "_lock")

    def __init__(self, prefix: Tuple[int, ...], tail: Tail, p: float, seed: int):
        self.prefix = prefix
        self.tail = tail
        self.p = p
        self.seed = seed
        self._blocks: dict = {}
        self._lock = threading.Lock()

    def bit(self, index: int) -> int:
        if index <= len(self.prefix):
            return self.prefix[index - 1]
        if self.tail is Tail.ALL_ONES:
            return 1
        if self.tail is Tail.ALL_ZEROS:
            return 0
        block, offset = divmod(index - 1, BLOCK_SIZE)
        bits = self._blocks.get(block)
        if bits is None:
            rng = np.random.default_rng([self.seed, block])
            drawn = (rng.random(BLOCK_SIZE) < self.p).astype(np.uint8).tobytes()
            with self._lock:
                bits = self._blocks.setdefault(block, drawn)
        return bits[offset]


@dataclass(frozen=True, eq=False)
class BitStream:
    """Infinite failure pattern b = (b_1, b_2, ...): finite prefix + tail policy.

    ``scale``/``offset`` encode the accumulated view: position i of this view
    reads absolute position ``scale * i + offset`` of the underlying vector.
    """

    _source: _BitSource = field(repr=False)
    scale: int = 1
    offset: int = 0

    @classmethod
    def from_prefix(cls, prefix, tail: Tail = Tail.ALL_ONES) -> "BitStream":
        bits = _parse_bits(prefix)
        if tail is Tail.BERNOULLI:
            raise ValueError("use BitStream.bernoulli for random tails")
        return cls(_BitSource(bits, tail, 1.0, 0))

    @classmethod
    def bernoulli(cls, p: float, seed: int, prefix=()) -> "BitStream":
        if not 0.0 < p <= 1.0:
            raise ValueError(f"success rate must lie in (0, 1], got {p}")
        return cls(_BitSource(_parse_bits(prefix), Tail.BERNOULLI, float(p), int(seed)))

    @classmethod
    def ones(cls) -> "BitStream":
        return cls.from_prefix((), Tail.ALL_ONES)

    @classmethod
    def zeros(cls) -> "BitStream":
        return cls.from_prefix((), Tail.ALL_ZEROS)

    @property
    def prefix(self) -> Tuple[int, ...]:
        return self._source.prefix

    @property
    def tail(self) -> Tail:
        return self._source.tail

    def absolute(self, i: int) -> int:
        return self.scale * i + self.offset

    def read(self, i: int) -> int:
        if i < 1:
            raise IndexError("stream positions are 1-based")
        return self._source.bit(self.scale * i + self.offset)

    def window(self, length: int) -> Tuple[int, ...]:
        return tuple(self.read(i) for i in range(1, length + 1))

    def odd(self) -> "BitStream":
        # i -> 2i - 1
        return BitStream(self._source, 2 * self.scale, self.offset - self.scale)

    def even(self) -> "BitStream":
        # i -> 2i
        return BitStream(self._source, 2 * self.scale, self.offset)

    def rest(self, skip: int = 1) -> "BitStream":
        """Drop the first ``skip`` bits: b = b_1..b_skip c  ->  c."""
        return BitStream(self._source, self.scale, self.offset + skip * self.scale)

    def with_bit(self, i: int, value: int) -> "BitStream":
        """Copy of this view (materialized as a base stream) with position i overwritten.

        Only views of non-random tails can be rebuilt this way.
        """
        if self.scale != 1 or self.offset != 0:
            raise ValueError("with_bit is only defined on base streams")
        if self.tail is Tail.BERNOULLI:
            raise ValueError("cannot rebuild a Bernoulli-tailed stream")
        fill = 1 if self.tail is Tail.ALL_ONES else 0
        bits = list(self.prefix) + [fill] * max(0, i - len(self.prefix))
        bits[i - 1] = int(value)
        return BitStream.from_prefix(bits, self.tail)

    def tail_is_constant_from(self, i: int) -> Optional[int]:
        """The constant value of every position >= i, if the tail policy guarantees one."""
        if self.tail is Tail.BERNOULLI:
            return None
        if self.absolute(i) <= len(self.prefix):
            return None
        return 1 if self.tail is Tail.ALL_ONES else 0


def zeros_count(bits: Sequence[int]) -> int:
    return sum(1 for b in bits if not b)


def ones_count(bits: Sequence[int]) -> int:
    return sum(1 for b in bits if b)


def _parse_bits(prefix) -> Tuple[int, ...]:
    if isinstance(prefix, str):
        prefix = [c for c in prefix.strip()]
    bits = tuple(int(b) for b in prefix)
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bit patterns may only contain 0 and 1")
    return bits


# --------------------------------------------------------------------------
# To-do lists and permutations


@dataclass(frozen=True)
class Permutation:
    """Bijection pi on [size]; ``mapping[i - 1] == pi(i)``."""

    mapping: Tuple[int, ...]
    seed: Optional[int] = None

    def __post_init__(self):
        if sorted(self.mapping) != list(range(1, len(self.mapping) + 1)):
            raise ValueError("mapping is not a bijection on [size]")

    @property
    def size(self) -> int:
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(tuple(range(1, size + 1)))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.mapping, dtype=np.int64)


def random_permutation(size: int, seed: int) -> Permutation:
    """Uniform permutation of [size] (Fisher-Yates via numpy), deterministic per seed."""
    if size < 0:
        raise ValueError("size must be non-negative")
    rng = np.random.default_rng(seed)
    mapping = rng.permutation(size) + 1
    return Permutation(tuple(int(x) for x in mapping), seed)


@dataclass(frozen=True)
class TodoProgression:
    """List first, first + 2^m, first + 2*2^m, ... of ``length`` elements.

    When ``permutation`` is set the list holds indices and the processors to
    contact are their images under the permutation.
    """

    first: int
    length: int
    step_exponent: int = 0
    permutation: Optional[Permutation] = field(default=None, compare=False)

    def __post_init__(self):
        if self.length < 0 or self.step_exponent < 0:
            raise ValueError("length and step exponent must be non-negative")

    @property
    def step(self) -> int:
        return 1 << self.step_exponent

    def __len__(self) -> int:
        return self.length

    def elements(self) -> Tuple[int, ...]:
        return tuple(self.first + j * self.step for j in range(self.length))

    def targets(self) -> Tuple[int, ...]:
        if self.permutation is None:
            return self.elements()
        return tuple(self.permutation(j) for j in self.elements())

    def within(self, n: int) -> bool:
        return all(1 <= j <= n - 1 for j in self.elements())


def split_progression(lst: TodoProgression) -> Tuple[int, TodoProgression, TodoProgression]:
    """Split (j1, ..., jk) into j1, ODD(j2..jk) and EVEN(j2..jk)."""
    if lst.length == 0:
        raise ValueError("cannot split an empty to-do list")
    rest = lst.length - 1
    m = lst.step_exponent + 1
    keep = TodoProgression(lst.first + lst.step, (rest + 1) // 2, m, lst.permutation)
    give = TodoProgression(lst.first + 2 * lst.step, rest // 2, m, lst.permutation)
    return lst.first, keep, give
