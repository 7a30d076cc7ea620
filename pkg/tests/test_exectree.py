import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rumorlab.exectree import (
    NONTERMINATING,
    Kind,
    all_patterns,
    build_tree,
    check_coupling,
    check_monotone_b,
    check_monotone_k,
    check_splitting,
    export_tree,
    hgp,
    hwu,
)
from rumorlab.seqcore import BitStream, Tail

bits = st.lists(st.sampled_from([0, 1]), max_size=24)


def naive_h(k, b, wu=False, depth=0, cap=200):
    """Direct transcription of the tree rules on explicit lists; ones beyond the list."""
    if k == 0:
        return 0
    if depth > cap:
        return float("inf")
    head = b[0] if b else 1
    c = list(b[1:])
    if head == 0:
        return 1 + naive_h(k if wu else k - 1, c, wu, depth + 1, cap)
    return 1 + max(
        naive_h(-(-(k - 1) // 2), c[0::2], wu, depth + 1, cap),
        naive_h((k - 1) // 2, c[1::2], wu, depth + 1, cap),
    )


def naive_nodes(k, b, wu=False):
    if k == 0:
        return 1
    head = b[0] if b else 1
    c = list(b[1:])
    if head == 0:
        return 1 + naive_nodes(k if wu else k - 1, c, wu)
    return 1 + naive_nodes(-(-(k - 1) // 2), c[0::2], wu) + naive_nodes((k - 1) // 2, c[1::2], wu)


def stream(pattern, tail=Tail.ALL_ONES):
    return BitStream.from_prefix(pattern, tail)


def test_hgp_examples():
    assert hgp(0, stream("0101")) == 0
    assert hgp(6, BitStream.zeros()) == 6
    assert hgp(4, stream("1001")) == 3
    assert hgp(7, BitStream.ones()) == 3


def test_hwu_examples():
    assert hwu(0, BitStream.zeros(), 5) == 0
    assert hwu(3, BitStream.zeros(), 1000) is NONTERMINATING
    assert hwu(4, stream("1001"), 100) == 4


def test_frozen_values_match_naive_oracle():
    assert naive_h(4, [1, 0, 0, 1]) == 3
    assert naive_h(4, [1, 0, 0, 1], wu=True) == 4
    assert naive_h(7, []) == 3
    assert naive_nodes(4, [1, 0, 0, 1]) == 7


@settings(max_examples=300)
@given(st.integers(0, 30), bits)
def test_hgp_matches_naive(k, b):
    assert hgp(k, stream(b)) == naive_h(k, b)


@settings(max_examples=300)
@given(st.integers(0, 30), bits)
def test_hwu_matches_naive(k, b):
    assert hwu(k, stream(b)) == naive_h(k, b, wu=True)


def test_hwu_cap_marks_nonterminating():
    # (3, 000000 1...) needs 6 retries before the first success
    b = stream("0000001")
    assert hwu(3, b, round_cap=6) is NONTERMINATING
    assert hwu(3, b, round_cap=100) == naive_h(3, [0, 0, 0, 0, 0, 0, 1], wu=True)


def test_hwu_all_zero_tail_detected_without_walking_cap():
    assert hwu(2, stream("1", Tail.ALL_ZEROS), round_cap=10**9) is NONTERMINATING


@given(st.integers(0, 16), st.lists(st.sampled_from([0, 1]), min_size=16, max_size=16), st.integers(1, 30))
def test_hgp_reads_only_first_k_bits(k, b, extra):
    base = hgp(k, stream(b[:k] + [0] * extra, Tail.ALL_ZEROS))
    assert base == hgp(k, stream(b[:k], Tail.ALL_ONES))
    for pos in range(k + 1, k + extra + 1):
        assert hgp(k, stream(b[:k] + [0] * extra, Tail.ALL_ZEROS).with_bit(pos, 1)) == base


@pytest.mark.parametrize("k", range(0, 9))
def test_gp_tree_structure(k):
    for b in all_patterns(k):
        tree = build_tree(k, stream(b))
        # every fail-step and every split consumes one bit: k internal vertices
        internal = [x for x in tree.nodes() if x.children]
        assert len(internal) == k
        assert all(leaf.k == 0 for leaf in tree.leaves())
        assert tree.height == hgp(k, stream(b))
        assert tree.root.consumed == k
        assert len(tree.nodes()) == naive_nodes(k, list(b))


def test_wu_with_ones_tail_terminates():
    for k in range(8):
        for b in all_patterns(k):
            assert hwu(k, stream(b)) is not NONTERMINATING


def test_nonterminating_ordering():
    assert NONTERMINATING > 10**9
    assert not NONTERMINATING < 3
    assert NONTERMINATING == NONTERMINATING
    assert 5 <= NONTERMINATING


def test_check_coupling_examples():
    assert check_coupling(4, stream("1001"))
    assert check_coupling(9, BitStream.zeros(), 1000)
    for k in range(10):
        assert hgp(k, BitStream.ones()) == hwu(k, BitStream.ones())


def test_check_monotone_k_examples():
    assert check_monotone_k(0, stream("0110"))
    assert check_monotone_k(4, stream("1001"))
    assert naive_h(4, [1, 0, 0, 1]) <= naive_h(5, [1, 0, 0, 1])
    assert check_monotone_k(3, BitStream.zeros(), 50, Kind.WU)


def test_check_monotone_b_examples():
    assert check_monotone_b(4, stream("0001"), 1)
    assert naive_h(4, [0, 0, 0, 1]) >= naive_h(4, [1, 0, 0, 1])
    assert check_monotone_b(1, stream("0"), 1)
    assert hgp(1, stream("0")) == 1 and hgp(1, stream("1")) == 1
    assert check_monotone_b(0, stream("0"), 1)
    with pytest.raises(ValueError):
        check_monotone_b(4, stream("1001"), 1)


def test_check_splitting_examples():
    assert check_splitting(0, stream(""))
    for b in all_patterns(4):
        assert check_splitting(1, stream(b))
    b = [1, 1, 0, 1, 0, 0]
    assert naive_h(6, b) >= max(naive_h(3, b[0::2]), naive_h(3, b[1::2]))
    assert check_splitting(6, stream(b))


def test_export_tree_examples():
    single = export_tree(0, stream("1"))
    assert single.count("[label=") == 1 and "->" not in single
    gp = export_tree(4, stream("1001"))
    assert gp.count("[label=") == 7
    assert '"(4; 1001)"' in gp
    wu = export_tree(1, stream("0"), Kind.WU)
    assert wu.count("[label=") == 4
    assert '"(1; 01)"' in wu and '"(1; 1)"' in wu
    assert wu.count("->") == 3


def test_export_refuses_nonterminating():
    with pytest.raises(ValueError):
        export_tree(2, BitStream.zeros(), Kind.WU, cap=100)
    tree = build_tree(2, BitStream.zeros(), Kind.WU, cap=100)
    assert tree.nonterminating and tree.height is NONTERMINATING


def test_wu_tree_cap_cut():
    tree = build_tree(2, stream("0000001"), Kind.WU, cap=3)
    assert tree.nonterminating
