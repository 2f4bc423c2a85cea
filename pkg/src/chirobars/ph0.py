"""One-pass barcode engine: bars with chirality and attachments, winding
counts, quadrant queries, merge trees, stem decomposition, stack profiling.

The core walk keeps two stacks, open local minima and open local maxima;
together their tops form the nested family of open birth-death pairs.  When
the walk crosses the value of the innermost pair, that pair pops as a bar.
A bar popped while ascending has its maximum earlier in time (chirality F)
and attaches to the bar of the minimum left on top of the minima stack; a
bar popped while descending is an M and attaches to the bar of the maximum
left on top of the maxima stack.  Both rules reproduce the elder-rule
nesting exactly (tested exhaustively against an independent union-find
sweep).
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .diagram import Bar, PersistenceDiagram
from .errors import CrossingError, ValidationError
from .series import TimeSeries, critical_points, is_augmented
from .tree import PlaneMergeTree

__all__ = [
    "compute_ph0",
    "count_windings",
    "quadrant_content",
    "build_merge_tree",
    "elder_decompose",
    "stack_depth_profile",
]


def _prepared_values(series: TimeSeries, require_augmented: bool) -> tuple[np.ndarray, np.ndarray]:
    """Plateau-collapsed values and their original indices, after genericity
    (distinct extreme values) and shape checks."""
    seq = critical_points(series)  # raises on ties / constant input
    vals, idx = series.collapse_plateaus()
    if require_augmented:
        if not (vals[0] < vals[1:].min() and vals[-1] > vals[:-1].max()):
            raise ValidationError(
                "series must run from its strict global minimum to its strict "
                "global maximum; apply augment() first"
            )
    else:
        if len(vals) < 2 or vals[0] >= vals[1]:
            raise ValidationError("series must start at a local minimum")
        if not vals[-1] > vals[:-1].max():
            raise ValidationError("series must end at its strict global maximum")
    del seq
    return vals, idx


def compute_ph0(series: TimeSeries) -> PersistenceDiagram:
    """All finite bars of the sublevel filtration plus the stem, in one pass.

    Requires a generic, augmented series.  Bars come out in pop order with
    critical sample indices, chirality, parent attachment; the diagram also
    records the maximum combined stack depth.
    """
    vals, idx = _prepared_values(series, require_augmented=True)
    birth_i, death_i, parent, max_depth, _ = _kernels.bars_and_depth(vals)
    bars = []
    for b_i, d_i, p in zip(birth_i, death_i, parent):
        bi, di = int(idx[b_i]), int(idx[d_i])
        bars.append(
            Bar(
                birth=float(vals[b_i]),
                death=float(vals[d_i]),
                birth_index=bi,
                death_index=di,
                chirality="M" if bi < di else "F",
                parent=None if p < 0 else int(p),
            )
        )
    stem = Bar(
        birth=float(vals[0]),
        death=float(vals[-1]),
        birth_index=int(idx[0]),
        death_index=int(idx[-1]),
        chirality="M",
    )
    return PersistenceDiagram(stem=stem, bars=tuple(bars), max_stack_depth=max_depth)


def stack_depth_profile(series: TimeSeries) -> tuple[int, np.ndarray]:
    """Combined size of both stacks after each processed sample, and its
    maximum.  Memory proxy for the one-pass walk."""
    vals, _ = _prepared_values(series, require_augmented=True)
    _, _, _, max_depth, trace = _kernels.bars_and_depth(vals)
    return max_depth, trace


def count_windings(series: TimeSeries, b: float, d: float) -> int:
    """Completed windings around ``[b, d]``: alternating first hits of level
    ``d`` then ``b`` (closed equality), for a series starting below ``b``
    and ending above ``d``."""
    if not b < d:
        raise ValidationError(f"need b < d, got ({b}, {d})")
    v = series.values
    if not (v[0] < b and v[-1] > d):
        raise CrossingError(
            f"series must start below {b} and end above {d} "
            f"(got {v[0]} ... {v[-1]})"
        )
    return _kernels.count_windings(v, b, d)


def quadrant_content(
    diagram: PersistenceDiagram, b: float, d: float, include_stem: bool = False
) -> int:
    """Bars with birth <= b and death >= d (closed inequalities); the stem
    counts only when ``include_stem`` is set."""
    if not b < d:
        raise ValidationError(f"need b < d, got ({b}, {d})")
    count = sum(1 for bar in diagram.bars if bar.straddles(b, d))
    if include_stem and diagram.stem.straddles(b, d):
        count += 1
    return count


def build_merge_tree(series: TimeSeries) -> PlaneMergeTree:
    """Plane merge tree of a generic series ending at its strict global
    maximum (augmented series and contour walks both qualify).

    Leaves sit at local-minimum heights, each interior local maximum becomes
    a binary merge node joining the components to its left and right, and a
    valency-one root sits at the final (global maximum) height.
    """
    vals, _ = _prepared_values(series, require_augmented=False)
    n = len(vals)
    signs = np.sign(np.diff(vals))
    turns = np.flatnonzero(signs[1:] != signs[:-1]) + 1
    minima = [0] + [int(j) for j in turns if signs[j] > 0]
    maxima = [int(j) for j in turns if signs[j] < 0]
    # alternation: minima[i] < maxima[i] < minima[i+1]

    heights: dict[int, float] = {}
    children: dict[int, tuple[int, ...]] = {}
    node_count = 0

    def new_node(height: float, kids: tuple[int, ...] = ()) -> int:
        nonlocal node_count
        node = node_count
        node_count += 1
        heights[node] = height
        children[node] = kids
        return node

    comp_node = [new_node(float(vals[i])) for i in minima]  # leaf per minimum
    parent = list(range(len(minima)))  # union-find over minima ordinals

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for j in sorted(range(len(maxima)), key=lambda j: vals[maxima[j]]):
        left, right = find(j), find(j + 1)
        node = new_node(float(vals[maxima[j]]), (comp_node[left], comp_node[right]))
        parent[right] = left
        comp_node[left] = node

    root = new_node(float(vals[n - 1]), (comp_node[find(0)],))
    return PlaneMergeTree(heights, children, root)


def elder_decompose(tree: PlaneMergeTree) -> PersistenceDiagram:
    """Recursive stem peeling of a plane merge tree.

    Repeatedly take the path from the lowest leaf to the (sub)tree root as a
    bar; subtrees hanging off that path recurse with the hang height as
    their death.  Chirality follows the side: a subtree on the left of its
    parent path is an M, on the right an F.  Yields the same multiset of
    (birth, death, chirality, parent) as :func:`compute_ph0` on any series
    generating the tree.
    """
    sub_min = tree.subtree_min()
    bars: list[Bar] = []
    # (subtree top node, death height, parent bar id, chirality)
    work: list[tuple[int, float, int | None, str]] = [
        (tree.root, tree.heights[tree.root], None, "M")
    ]
    stem: Bar | None = None
    while work:
        top, death, parent_id, side = work.pop()
        bar_id = None if stem is None else len(bars)
        # descend along the lowest-leaf path, queueing hanging subtrees;
        # a subtree left of the path hangs as an M, right of it as an F
        node = top
        while not tree.is_leaf(node):
            kids = tree.children_of(node)
            on_path = min(range(len(kids)), key=lambda i: sub_min[kids[i]])
            for i, child in enumerate(kids):
                if i != on_path:
                    work.append(
                        (child, tree.heights[node], bar_id, "M" if i < on_path else "F")
                    )
            node = kids[on_path]
        birth = tree.heights[node]
        if stem is None:
            stem = Bar(birth=birth, death=death, chirality="M")
        else:
            bars.append(Bar(birth=birth, death=death, chirality=side, parent=parent_id))
    assert stem is not None
    return PersistenceDiagram(stem=stem, bars=tuple(bars), max_stack_depth=None)
