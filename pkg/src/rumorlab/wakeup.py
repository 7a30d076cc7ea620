"""Labeled wakeup tree: leaves are processors, an internal vertex carries the
smaller label of its children and stands for the call from that processor to
the larger one. The round count of a wakeup run is the largest sum of request
counts along a root-to-leaf path.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .seqcore import even_split, odd_split


@dataclass(frozen=True)
class WakeupNode:
    label: int
    children: Tuple[int, ...] = ()  # node ids; empty for a leaf


@dataclass(frozen=True)
class WakeupLabeledTree:
    n: int
    nodes: Tuple[WakeupNode, ...]  # nodes[0] is the root
    req: Mapping[int, int] = field(default_factory=dict)

    def is_leaf(self, x: int) -> bool:
        return not self.nodes[x].children

    def internal(self) -> List[int]:
        return [x for x in range(len(self.nodes)) if not self.is_leaf(x)]

    def call(self, x: int) -> Tuple[int, int]:
        """(k_x, j_x): the caller and the processor it wakes at vertex x."""
        y, z = self.nodes[x].children
        a, b = self.nodes[y].label, self.nodes[z].label
        return min(a, b), max(a, b)

    def leaf_of(self, j: int) -> int:
        for x, node in enumerate(self.nodes):
            if not node.children and node.label == j:
                return x
        raise KeyError(j)

    def path(self, j: int) -> List[int]:
        """Internal vertices on the root-to-leaf path P_j."""
        parent = {c: x for x, node in enumerate(self.nodes) for c in node.children}
        x = self.leaf_of(j)
        out = []
        while x in parent:
            x = parent[x]
            out.append(x)
        return out[::-1]

    def label_path(self, k: int) -> List[int]:
        """Vertices labeled k, root side first."""
        return [x for x in _preorder(self) if self.nodes[x].label == k]

    def targets(self, k: int) -> List[int]:
        """Processors woken by k, in calling order."""
        return [self.call(x)[1] for x in self.label_path(k) if not self.is_leaf(x)]

    def with_requests(self, req: Mapping[Union[int, Tuple[int, int]], int]) -> "WakeupLabeledTree":
        """Attach REQ(x), keyed by vertex id or by the (k_x, j_x) call."""
        by_call = {self.call(x): x for x in self.internal()}
        out: Dict[int, int] = {}
        for key, count in req.items():
            x = by_call[key] if isinstance(key, tuple) else key
            if count < 1:
                raise ValueError("every call needs at least one request")
            out[x] = int(count)
        return replace(self, req=out)


def _preorder(tree: WakeupLabeledTree) -> List[int]:
    out, stack = [], [0]
    while stack:
        x = stack.pop()
        out.append(x)
        stack.extend(reversed(tree.nodes[x].children))
    return out


def build_wakeup_tree(n: int, leaf_order: Optional[Sequence[int]] = None) -> WakeupLabeledTree:
    """Full binary tree with the GP split shape and leaves labeled left to right.

    A holder with m processors under it (itself plus m-1 to inform) is a vertex
    whose left subtree keeps 1 + ceil((m-2)/2) of them and whose right subtree
    receives the other 1 + floor((m-2)/2). With the default order 0..n-1 and
    n=5, processor 0 calls 3, then 2, then 1.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    order = tuple(range(n)) if leaf_order is None else tuple(int(x) for x in leaf_order)
    if len(order) != n or sorted(order) != list(range(n)):
        raise ValueError("leaf_order must list every processor 0..n-1 exactly once")

    nodes: List[Optional[WakeupNode]] = []
    leaves = iter(order)

    def build(m: int) -> int:
        x = len(nodes)
        nodes.append(None)
        if m == 1:
            nodes[x] = WakeupNode(next(leaves))
            return x
        k = m - 1
        left = build(1 + k // 2)  # 1 + ceil((k-1)/2)
        right = build(1 + (k - 1) // 2)
        label = min(nodes[left].label, nodes[right].label)
        nodes[x] = WakeupNode(label, (left, right))
        return x

    build(n)
    return WakeupLabeledTree(n, tuple(nodes))


def gp_leaf_order(n: int) -> Tuple[int, ...]:
    """Leaf order under which the labeled tree reproduces GP's own calls."""

    def order(holder: int, lst: Tuple[int, ...]) -> List[int]:
        if not lst:
            return [holder]
        target, tail = lst[0], lst[1:]
        return order(holder, odd_split(tail)) + order(target, even_split(tail))

    return tuple(order(0, tuple(range(1, n))))


def wu_time_from_path_sums(tree: WakeupLabeledTree) -> int:
    """max over processors j of the summed REQ values along P_j."""
    missing = [x for x in tree.internal() if x not in tree.req]
    if missing:
        raise ValueError(f"REQ missing for internal vertices {missing}")
    best = 0
    stack = [(0, 0)]
    while stack:
        x, acc = stack.pop()
        node = tree.nodes[x]
        if not node.children:
            best = max(best, acc)
            continue
        for c in node.children:
            stack.append((c, acc + tree.req[x]))
    return best
