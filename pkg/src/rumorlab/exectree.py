"""Execution trees over configurations (k, b).

GP:  (k, 0c) -> (k-1, c);   (k, 1c) -> (ceil((k-1)/2), ODD(c)), (floor((k-1)/2), EVEN(c))
WU:  (k, 0c) -> (k, c);     split rule identical to GP

The height of the tree is the round complexity of the run it encodes.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from .seqcore import BitStream, Tail

DEFAULT_ROUND_CAP = 10**6


@functools.total_ordering
class _NonTerminating:
    """Height of a WU tree with a self loop: above every finite height."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("NONTERMINATING")

    def __repr__(self):
        return "NONTERMINATING"

    __str__ = __repr__


NONTERMINATING = _NonTerminating()

Height = Union[int, _NonTerminating]


class Kind(enum.Enum):
    GP = "gp"
    WU = "wu"


def _zero_tail_from(source, absolute: int) -> bool:
    return source.tail is Tail.ALL_ZEROS and absolute > len(source.prefix)


def hgp(k: int, b: BitStream) -> int:
    """HGT(TGP(k, b)); reads only the first k bits of b."""
    if k < 0:
        raise ValueError("k must be non-negative")
    src = b._source
    height = 0
    stack = [(k, b.scale, b.offset, 0)]
    while stack:
        k, s, o, d = stack.pop()
        while k > 0 and not src.bit(s + o):
            k -= 1
            o += s
            d += 1
        if k == 0:
            if d > height:
                height = d
            continue
        # successful request: drop the bit, split the remaining k-1 processors
        o += s
        d += 1
        k -= 1
        stack.append(((k + 1) // 2, 2 * s, o - s, d))
        stack.append((k // 2, 2 * s, o, d))
    return height


def hwu(k: int, b: BitStream, round_cap: int = DEFAULT_ROUND_CAP) -> Height:
    """HGT(TWU(k, b)), or NONTERMINATING if some path exceeds ``round_cap`` edges.

    A configuration whose remaining stream is provably all zeros is reported
    as NONTERMINATING without walking the cap.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if round_cap < 1:
        raise ValueError("round_cap must be at least 1")
    src = b._source
    height = 0
    stack = [(k, b.scale, b.offset, 0)]
    while stack:
        k, s, o, d = stack.pop()
        if k == 0:
            if d > height:
                height = d
            continue
        while not src.bit(s + o):
            if _zero_tail_from(src, s + o):
                return NONTERMINATING
            o += s
            d += 1
            if d > round_cap:
                return NONTERMINATING
        o += s
        d += 1
        if d > round_cap:
            return NONTERMINATING
        k -= 1
        stack.append(((k + 1) // 2, 2 * s, o - s, d))
        stack.append((k // 2, 2 * s, o, d))
    return height


def height(kind: Kind, k: int, b: BitStream, round_cap: int = DEFAULT_ROUND_CAP) -> Height:
    if kind is Kind.GP:
        return hgp(k, b)
    return hwu(k, b, round_cap)


# --------------------------------------------------------------------------
# Lemma checks on single instances


def check_coupling(k: int, b: BitStream, cap: int = DEFAULT_ROUND_CAP) -> bool:
    """HGP(k, b) <= HWU(k, b)."""
    return hgp(k, b) <= hwu(k, b, cap)


def check_monotone_k(k: int, b: BitStream, cap: int = DEFAULT_ROUND_CAP, kind: Kind = Kind.GP) -> bool:
    """h(k, b) <= h(k+1, b)."""
    return height(kind, k, b, cap) <= height(kind, k + 1, b, cap)


def check_monotone_b(
    k: int, b: BitStream, flip_pos: int, kind: Kind = Kind.GP, cap: int = DEFAULT_ROUND_CAP
) -> bool:
    """Turning the failed request at ``flip_pos`` into a success never slows the run."""
    if b.read(flip_pos) != 0:
        raise ValueError(f"bit at position {flip_pos} is already 1")
    c = b.with_bit(flip_pos, 1)
    return height(kind, k, b, cap) >= height(kind, k, c, cap)


def check_splitting(k: int, b: BitStream) -> bool:
    """HGP(k, b) >= max(HGP(ceil(k/2), ODD(b)), HGP(floor(k/2), EVEN(b)))."""
    return hgp(k, b) >= max(hgp((k + 1) // 2, b.odd()), hgp(k // 2, b.even()))


# --------------------------------------------------------------------------
# Explicit trees


@dataclass
class TreeNode:
    k: int
    stream: BitStream
    depth: int
    children: List["TreeNode"] = field(default_factory=list)
    consumed: int = 0
    self_loop: bool = False

    def label(self) -> str:
        bits = "".join(str(x) for x in self.stream.window(self.consumed))
        return f"({self.k}; {bits})"


@dataclass
class ConfigTree:
    root: TreeNode
    kind: Kind
    height: Height
    nonterminating: bool

    def nodes(self) -> List[TreeNode]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            out.append(node)
            stack.extend(reversed(node.children))
        return out

    def leaves(self) -> List[TreeNode]:
        return [x for x in self.nodes() if not x.children and not x.self_loop]


def build_tree(k: int, b: BitStream, kind: Kind = Kind.GP, cap: int = DEFAULT_ROUND_CAP) -> ConfigTree:
    """Materialize TGP(k, b) or TWU(k, b).

    A WU path that hits an all-zero tail ends in a node flagged ``self_loop``;
    a path running past ``cap`` edges is cut and marks the tree nonterminating.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    root = TreeNode(k, b, 0)
    nonterminating = False
    stack = [root]
    while stack:
        node = stack.pop()
        if node.k == 0:
            continue
        if node.depth >= cap:
            nonterminating = True
            node.self_loop = True
            continue
        s = node.stream
        if s.read(1) == 0:
            if kind is Kind.WU and s.tail_is_constant_from(1) == 0:
                node.self_loop = True
                nonterminating = True
                continue
            nk = node.k - 1 if kind is Kind.GP else node.k
            node.children = [TreeNode(nk, s.rest(), node.depth + 1)]
        else:
            c = s.rest()
            node.children = [
                TreeNode(node.k // 2, c.odd(), node.depth + 1),  # ceil((k-1)/2)
                TreeNode((node.k - 1) // 2, c.even(), node.depth + 1),
            ]
        stack.extend(node.children)

    tree = ConfigTree(root, kind, NONTERMINATING if nonterminating else 0, nonterminating)
    _fill_consumed(tree)
    if not nonterminating:
        tree.height = max(x.depth for x in tree.leaves())
    return tree


def _fill_consumed(tree: ConfigTree) -> None:
    # post-order: bits of a node's own stream read by its subtree
    for node in reversed(tree.nodes()):
        if node.self_loop:
            node.consumed = 1
        elif not node.children:
            node.consumed = 0
        elif len(node.children) == 1:
            node.consumed = 1 + node.children[0].consumed
        else:
            left, right = node.children
            node.consumed = 1 + max(2 * left.consumed - 1, 2 * right.consumed, 0)


def export_tree(k: int, b: BitStream, kind: Kind = Kind.GP, cap: int = DEFAULT_ROUND_CAP) -> str:
    """DOT digraph of the execution tree, nodes labeled "(k; consumed bits)"."""
    tree = build_tree(k, b, kind, cap)
    if tree.nonterminating:
        raise ValueError("refusing to export a nonterminating execution tree")
    name = "TGP" if kind is Kind.GP else "TWU"
    ids = {id(node): i for i, node in enumerate(tree.nodes())}
    lines = [f"digraph {name} {{", "  node [shape=box];"]
    for node in tree.nodes():
        lines.append(f'  n{ids[id(node)]} [label="{node.label()}"];')
    for node in tree.nodes():
        for child in node.children:
            lines.append(f"  n{ids[id(node)]} -> n{ids[id(child)]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def pattern_stream(pattern: str, tail: Tail = Tail.ALL_ONES, p: Optional[float] = None, seed: int = 0) -> BitStream:
    """Stream from a bit string and a tail flag."""
    if tail is Tail.BERNOULLI:
        if p is None:
            raise ValueError("a Bernoulli tail needs a success rate")
        return BitStream.bernoulli(p, seed, pattern)
    return BitStream.from_prefix(pattern, tail)


def all_patterns(k: int) -> Tuple[Tuple[int, ...], ...]:
    """Every b in {0,1}^k in lexicographic order."""
    return tuple(tuple((x >> (k - 1 - i)) & 1 for i in range(k)) for x in range(1 << k))
