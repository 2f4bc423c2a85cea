"""Plane merge trees: reconstruction from stem piles and contour walks.

A plane merge tree is rooted at its highest point (a valency-one vertex at
the global maximum), grows downward through binary merge nodes, and ends in
leaves at the local minima.  Children are ordered left to right, matching
the time axis of any function realizing the tree.

A stem pile (a persistence diagram read as reconstruction input: stem, bars,
parent attachments, chiralities) determines the plane tree uniquely: each
bar hangs on its parent's stem at its own death height, on the left when its
minimum precedes its maximum (chirality M), on the right otherwise (F).
The contour walk inverts this: traversing the tree in plane order yields a
piecewise-linear function whose merge tree is the original, with one time
unit per tree edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .diagram import Bar, PersistenceDiagram, StemPile
from .errors import NonGenericError, ParseError, ValidationError
from .series import TimeSeries

__all__ = [
    "PlaneMergeTree",
    "StemPile",
    "reconstruct_tree",
    "contour_walk",
    "plane_isomorphic",
    "tree_to_json_dict",
    "tree_from_json_dict",
]


@dataclass(frozen=True)
class PlaneMergeTree:
    heights: dict[int, float]
    children: dict[int, tuple[int, ...]]
    root: int

    def __post_init__(self):
        object.__setattr__(
            self, "children", {k: tuple(v) for k, v in self.children.items()}
        )
        if self.root not in self.heights:
            raise ValidationError(f"root {self.root} has no height")
        seen = set()
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node in seen:
                raise ValidationError(f"node {node} reachable twice: not a tree")
            seen.add(node)
            for child in self.children.get(node, ()):
                if child not in self.heights:
                    raise ValidationError(f"child {child} has no height")
                if not self.heights[child] < self.heights[node]:
                    raise ValidationError(
                        f"child {child} not strictly below parent {node}"
                    )
                stack.append(child)
        if seen != set(self.heights):
            raise ValidationError("nodes not reachable from root")

    def __len__(self) -> int:
        return len(self.heights)

    def children_of(self, node: int) -> tuple[int, ...]:
        return self.children.get(node, ())

    def is_leaf(self, node: int) -> bool:
        return not self.children.get(node)

    def leaves(self) -> list[int]:
        """Leaves in plane (left-to-right) order."""
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            kids = self.children_of(node)
            if not kids:
                out.append(node)
            else:
                stack.extend(reversed(kids))
        return out

    def subtree_min(self) -> dict[int, float]:
        """Lowest leaf height under every node (iterative post-order)."""
        out: dict[int, float] = {}
        stack: list[tuple[int, bool]] = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            kids = self.children_of(node)
            if not kids:
                out[node] = self.heights[node]
            elif expanded:
                out[node] = min(out[c] for c in kids)
            else:
                stack.append((node, True))
                stack.extend((c, False) for c in kids)
        return out


def reconstruct_tree(pile: StemPile) -> PlaneMergeTree:
    """Unique plane merge tree realizing a stem pile.

    Requires a generic pile: all endpoint values pairwise distinct, every
    finite bar carrying a chirality, every parent strictly straddling its
    child (the diagram constructor already enforces straddling and rules
    out parent cycles).
    """
    endpoints = [pile.stem.birth, pile.stem.death]
    for k, bar in enumerate(pile.bars):
        if bar.chirality is None:
            raise ValidationError(f"bar {k} has no chirality; reconstruction needs one")
        endpoints.extend((bar.birth, bar.death))
    if len(set(endpoints)) != len(endpoints):
        raise NonGenericError("pile endpoint values not pairwise distinct")

    children_of: dict[int | None, list[int]] = {None: []}
    for k in range(len(pile.bars)):
        children_of[k] = []
    for k, bar in enumerate(pile.bars):
        children_of[bar.parent].append(k)

    heights: dict[int, float] = {}
    kids: dict[int, tuple[int, ...]] = {}
    counter = 0

    def new_node(height: float, children: tuple[int, ...] = ()) -> int:
        nonlocal counter
        node = counter
        counter += 1
        heights[node] = height
        kids[node] = children
        return node

    # process children before parents: depth-first order from the stem,
    # reversed, so chain tops are available when the parent chain is built
    order: list[int | None] = []
    frontier: list[int | None] = [None]
    while frontier:
        bar_id = frontier.pop()
        order.append(bar_id)
        frontier.extend(children_of[bar_id])

    chain_top: dict[int | None, int] = {}
    for bar_id in reversed(order):
        bar = pile.stem if bar_id is None else pile.bars[bar_id]
        node = new_node(bar.birth)
        for child_id in sorted(children_of[bar_id], key=lambda c: pile.bars[c].death):
            child = pile.bars[child_id]
            sub = chain_top[child_id]
            pair = (sub, node) if child.chirality == "M" else (node, sub)
            node = new_node(child.death, pair)
        chain_top[bar_id] = node

    root = new_node(pile.stem.death, (chain_top[None],))
    return PlaneMergeTree(heights, kids, root)


def contour_walk(tree: PlaneMergeTree) -> TimeSeries:
    """Height walk traversing the tree in plane order, one time unit per edge.

    Starts at the leftmost leaf, dips through every subtree in left-to-right
    order, ends at the root height.  The walk's merge tree is plane-isomorphic
    to the input.
    """
    heights: list[float] = []
    depths: list[int] = []

    def emit(node: int, depth: int) -> None:
        heights.append(tree.heights[node])
        depths.append(depth)

    # walk(node): leaf -> its height; internal -> children walks separated
    # by the node height (followed by it when there is a single child)
    stack: list[tuple[int, int, int]] = [(tree.root, 0, 0)]  # node, depth, next child
    while stack:
        node, depth, cursor = stack.pop()
        kids = tree.children_of(node)
        if not kids:
            emit(node, depth)
        elif cursor < len(kids):
            if cursor > 0:
                emit(node, depth)
            stack.append((node, depth, cursor + 1))
            stack.append((kids[cursor], depth + 1, 0))
        elif len(kids) == 1:
            emit(node, depth)
    times = np.zeros(len(heights))
    if depths:
        times[1:] = np.cumsum(np.abs(np.diff(np.asarray(depths, dtype=float))))
    return TimeSeries(times, np.asarray(heights))


def plane_isomorphic(a: PlaneMergeTree, b: PlaneMergeTree, tol: float = 0.0) -> bool:
    """Plane isomorphism: same shape, same child order, same heights."""
    stack = [(a.root, b.root)]
    while stack:
        na, nb = stack.pop()
        if abs(a.heights[na] - b.heights[nb]) > tol:
            return False
        ka, kb = a.children_of(na), b.children_of(nb)
        if len(ka) != len(kb):
            return False
        stack.extend(zip(ka, kb))
    return True


# ---------------------------------------------------------------------------
# JSON: {"nodes": [{"id":, "height":}], "root":, "children": {id: [ids]}}
# ---------------------------------------------------------------------------

def tree_to_json_dict(tree: PlaneMergeTree) -> dict:
    return {
        "nodes": [{"id": k, "height": h} for k, h in sorted(tree.heights.items())],
        "root": tree.root,
        "children": {str(k): list(v) for k, v in tree.children.items() if v},
    }


def tree_from_json_dict(doc: dict) -> PlaneMergeTree:
    try:
        heights = {int(n["id"]): float(n["height"]) for n in doc["nodes"]}
        root = int(doc["root"])
        children = {int(k): tuple(int(c) for c in v) for k, v in doc.get("children", {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed tree JSON: {exc}") from exc
    for k in heights:
        children.setdefault(k, ())
    try:
        return PlaneMergeTree(heights, children, root)
    except ValidationError as exc:
        raise ParseError(f"invalid tree: {exc}") from exc


def load_tree(path) -> PlaneMergeTree:
    with open(path, encoding="utf-8") as fh:
        return tree_from_json_dict(json.load(fh))


def save_tree(tree: PlaneMergeTree, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(tree_to_json_dict(tree), fh)
        fh.write("\n")
