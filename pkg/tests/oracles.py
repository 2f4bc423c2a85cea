"""Independent brute-force oracles.

These deliberately avoid the code paths they check: the barcode oracle is a
union-find sweep over sample values in increasing order (births at minima,
deaths by the elder rule), and the merge-tree oracle is a top-down recursive
split at the highest interior maximum.
"""

from __future__ import annotations

import numpy as np


def ph0_union_find(values):
    """Bars of an augmented generic value sequence by sublevel sweep.

    Returns (stem, bars) where stem is (birth, death, birth_index,
    death_index) and bars are dicts with birth/death values and indices,
    chirality, and parent key; parent is the (birth, death) pair of the
    surviving component's eventual bar, or "stem".
    """
    values = np.asarray(values, dtype=float)
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    comp_min = {}  # root -> sample index of the component's minimum
    active = [False] * n
    raw = []  # (birth_idx, death_idx, parent_min_idx)
    for i in sorted(range(n), key=lambda i: values[i]):
        active[i] = True
        comp_min[i] = i
        for j in (i - 1, i + 1):
            if 0 <= j < n and active[j]:
                ri, rj = find(i), find(j)
                if ri == rj:
                    continue
                young, old = (ri, rj) if values[comp_min[ri]] > values[comp_min[rj]] else (rj, ri)
                if comp_min[young] != i:
                    # merge of two components that predate i: the younger
                    # dies at the local maximum i, elder rule keeps the other
                    raw.append((comp_min[young], i, comp_min[old]))
                # else: i itself joins a neighbor component, no death
                parent[young] = old

    bar_key_of_min = {0: "stem"}
    for b_idx, d_idx, _ in raw:
        bar_key_of_min[b_idx] = (values[b_idx], values[d_idx])
    bars = []
    for b_idx, d_idx, parent_min in raw:
        bars.append(
            {
                "birth": float(values[b_idx]),
                "death": float(values[d_idx]),
                "birth_index": int(b_idx),
                "death_index": int(d_idx),
                "chirality": "M" if b_idx < d_idx else "F",
                "parent": bar_key_of_min[parent_min],
            }
        )
    stem = (float(values[0]), float(values[-1]), 0, n - 1)
    return stem, bars


def merge_tree_split(values):
    """Merge tree by recursive splitting at the highest interior maximum.

    Returns a nested structure: leaf -> ("leaf", height); internal ->
    ("node", height, left, right); root -> ("node", final height, child).
    """
    values = np.asarray(values, dtype=float)

    def rec(i, j):
        if j - i < 2:
            return ("leaf", float(values[i:j + 1].min()))
        interior = np.arange(i + 1, j)
        if len(interior) == 0:
            return ("leaf", float(values[i:j + 1].min()))
        local_max = [
            k for k in interior if values[k] > values[k - 1] and values[k] > values[k + 1]
        ]
        if not local_max:
            return ("leaf", float(values[i:j + 1].min()))
        m = max(local_max, key=lambda k: values[k])
        return ("node", float(values[m]), rec(i, m), rec(m, j))

    n = len(values)
    return ("node", float(values[n - 1]), rec(0, n - 1))


def nested_tuple(tree, node=None):
    """Canonical nested form of a PlaneMergeTree for comparison with
    merge_tree_split output."""
    if node is None:
        node = tree.root
    kids = tree.children_of(node)
    if not kids:
        return ("leaf", tree.heights[node])
    return ("node", tree.heights[node]) + tuple(nested_tuple(tree, c) for c in kids)


def windings_by_hand(values, b, d):
    """Literal alternating first-hit walk of the winding definition."""
    state_seek_d = True
    count = 0
    for v in values:
        if state_seek_d:
            if v >= d:
                state_seek_d = False
        else:
            if v <= b:
                state_seek_d = True
                count += 1
    return count


def walls_by_scan(sigma, l):
    """Left/right walls of position l (1-based) by direct max/min scans."""
    k = len(sigma)
    left = [m for m in range(1, l) if sigma[m - 1] > sigma[l - 1]]
    right = [m for m in range(l + 1, k + 1) if sigma[m - 1] > sigma[l - 1]]
    return (max(left) if left else 0, min(right) if right else k + 1)


def diagram_relation(diagram):
    """Hashable summary of a diagram: bars as (birth, death, chirality) plus
    the parent linkage by value pairs.  Values identify bars uniquely for
    generic input, so multiset comparison is exact."""
    entries = []
    for bar in diagram.bars:
        parent = diagram.stem if bar.parent is None else diagram.bars[bar.parent]
        parent_key = (
            "stem"
            if bar.parent is None
            else (parent.birth, parent.death, parent.chirality)
        )
        entries.append(((bar.birth, bar.death, bar.chirality), parent_key))
    return frozenset(entries), (diagram.stem.birth, diagram.stem.death), len(entries)


def oracle_relation(stem, bars):
    entries = []
    chir_of = {(b["birth"], b["death"]): b["chirality"] for b in bars}
    for b in bars:
        parent_key = (
            "stem" if b["parent"] == "stem" else b["parent"] + (chir_of[b["parent"]],)
        )
        entries.append(((b["birth"], b["death"], b["chirality"]), parent_key))
    return frozenset(entries), (stem[0], stem[1]), len(entries)
