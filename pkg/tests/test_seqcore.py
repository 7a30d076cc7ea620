import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rumorlab.seqcore import (
    BitStream,
    Permutation,
    Tail,
    TodoProgression,
    even_split,
    interleave,
    odd_split,
    ones_count,
    random_permutation,
    split_progression,
    zeros_count,
)


@pytest.mark.parametrize(
    "seq, odd, even",
    [
        ((1, 2, 3, 4, 5), (1, 3, 5), (2, 4)),
        ((), (), ()),
        ((7, 8), (7,), (8,)),
    ],
)
def test_odd_even_examples(seq, odd, even):
    assert odd_split(seq) == odd
    assert even_split(seq) == even


@given(st.lists(st.integers()))
def test_interleave_reconstructs(seq):
    assert interleave(odd_split(seq), even_split(seq)) == tuple(seq)


@given(st.lists(st.sampled_from([0, 1])))
def test_zero_one_counts(bits):
    assert zeros_count(bits) == len(bits) - ones_count(bits)


def test_stream_read_examples():
    assert BitStream.from_prefix((1, 0, 0, 1), Tail.ALL_ONES).read(3) == 0
    assert BitStream.from_prefix((), Tail.ALL_ZEROS).read(10**6) == 0
    assert BitStream.bernoulli(1.0, 1234, (1, 0)).read(5) == 1
    with pytest.raises(IndexError):
        BitStream.ones().read(0)


def _materialized(stream: BitStream, length: int):
    return [stream.read(i) for i in range(1, length + 1)]


@settings(max_examples=50)
@given(
    st.lists(st.sampled_from([0, 1]), max_size=40),
    st.lists(st.sampled_from(["odd", "even", "rest"]), max_size=5),
    st.integers(min_value=0, max_value=2**32),
)
def test_views_match_materialized_sequences(prefix, path, seed):
    base = BitStream.bernoulli(0.5, seed, prefix)
    ref = _materialized(base, 2000)
    view = base
    for step in path:
        if step == "odd":
            view, ref = view.odd(), odd_split(ref)
        elif step == "even":
            view, ref = view.even(), even_split(ref)
        else:
            view, ref = view.rest(), ref[1:]
    window = min(len(ref), 50)
    assert _materialized(view, window) == list(ref[:window])


def test_bernoulli_reads_are_order_independent():
    a = BitStream.bernoulli(0.3, 99)
    b = BitStream.bernoulli(0.3, 99)
    forward = [a.read(i) for i in range(1, 10000, 7)]
    backward = [b.read(i) for i in reversed(range(1, 10000, 7))][::-1]
    assert forward == backward
    assert [a.read(i) for i in range(1, 10000, 7)] == forward


def test_bernoulli_rate_roughly_p():
    s = BitStream.bernoulli(0.25, 5)
    mean = sum(s.read(i) for i in range(1, 40001)) / 40000
    assert abs(mean - 0.25) < 0.01


def test_concurrent_fill_is_consistent():
    s = BitStream.bernoulli(0.5, 77)
    results = []

    def reader():
        results.append(tuple(s.read(i) for i in range(1, 20000, 13)))

    threads = [threading.Thread(target=reader) for _ in range(4)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert len(set(results)) == 1


def test_with_bit_and_constant_tail():
    s = BitStream.from_prefix("0001")
    assert s.with_bit(1, 1).window(4) == (1, 0, 0, 1)
    assert s.with_bit(6, 0).window(7) == (0, 0, 0, 1, 1, 0, 1)
    assert s.tail_is_constant_from(5) == 1
    assert s.tail_is_constant_from(4) is None
    assert BitStream.zeros().odd().tail_is_constant_from(1) == 0


@pytest.mark.parametrize(
    "lst, head, keep, give",
    [
        (TodoProgression(1, 7, 0), 1, (2, 4, 6), (3, 5, 7)),
        (TodoProgression(5, 1, 2), 5, (), ()),
        (TodoProgression(2, 2, 1), 2, (4,), ()),
    ],
)
def test_split_progression_examples(lst, head, keep, give):
    h, k, g = split_progression(lst)
    assert h == head
    assert k.elements() == keep and g.elements() == give
    assert k.step_exponent == g.step_exponent == lst.step_exponent + 1


def test_split_progression_against_list_split():
    lst = TodoProgression(1, 7, 0)
    elems = lst.elements()
    _, keep, give = split_progression(lst)
    assert keep.elements() == odd_split(elems[1:])
    assert give.elements() == even_split(elems[1:])
    assert (keep.first, keep.length, keep.step_exponent) == (2, 3, 1)
    assert (give.first, give.length, give.step_exponent) == (3, 3, 1)


def test_split_empty_raises():
    with pytest.raises(ValueError):
        split_progression(TodoProgression(1, 0, 0))


@given(st.integers(1, 50), st.integers(1, 60), st.integers(0, 4))
def test_split_preserves_elements(first, length, m):
    lst = TodoProgression(first, length, m)
    head, keep, give = split_progression(lst)
    assert keep.length + give.length + 1 == lst.length
    assert sorted((head,) + keep.elements() + give.elements()) == sorted(lst.elements())
    assert keep.length == -(-(lst.length - 1) // 2)
    assert give.length == (lst.length - 1) // 2


def test_progression_through_permutation():
    perm = Permutation((3, 1, 2))
    lst = TodoProgression(1, 3, 0, perm)
    assert lst.targets() == (3, 1, 2)
    assert lst.within(4)


def test_random_permutation_examples():
    assert random_permutation(0, 1).mapping == ()
    assert random_permutation(1, 1).mapping == (1,)
    a, b = random_permutation(4, 42), random_permutation(4, 42)
    assert a.mapping == b.mapping
    assert sorted(a.mapping) == [1, 2, 3, 4]


@given(st.integers(0, 200), st.integers(0, 2**63))
def test_random_permutation_is_bijection(size, seed):
    perm = random_permutation(size, seed)
    assert sorted(perm.mapping) == list(range(1, size + 1))


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))


def test_random_permutation_uniform_on_s3():
    counts = {}
    for seed in range(6000):
        m = random_permutation(3, seed).mapping
        counts[m] = counts.get(m, 0) + 1
    assert len(counts) == 6
    assert all(abs(c - 1000) < 150 for c in counts.values())
