"""Pure NumPy/Python kernels: reference implementations of the hot loops.

Selected at import time by :mod:`chirobars._kernels` when the compiled
extension is unavailable (or disabled via ``CHIROBARS_PURE=1``).  Both
implementations share these contracts:

``bars_and_depth(values)``
    One-pass bar pairing over plateau-free, generic, augmented values
    (``values[0]`` strict global minimum, ``values[-1]`` strict global
    maximum).  Walks the samples once keeping two stacks, one of open local
    minima and one of open local maxima; a bar is emitted whenever the walk
    crosses the value of the innermost open pair, which pops both tops.
    Returns ``(birth_idx, death_idx, parent_id, max_depth, depth_trace)``
    where ``parent_id[k]`` is the pop-order id of the bar the k-th bar is
    attached to (-1 = stem) and ``depth_trace[t]`` is the combined size of
    both stacks after processing sample ``t``.

``count_windings(values, b, d)``
    Number of completed down-up windings around ``[b, d]``: alternating
    first hits of level ``d`` then level ``b`` (closed equality), starting
    from a series that begins below ``b``.  Caller checks preconditions.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "pure"


def bars_and_depth(values: np.ndarray):
    values = np.asarray(values, dtype=np.float64)
    n = len(values)
    min_stack: list[int] = [0]  # sample indices of open minima, values increasing upward
    max_stack: list[int] = []  # open maxima, values decreasing upward

    births: list[int] = []
    deaths: list[int] = []
    # parent reference at pop time: ascending pops attach to the bar of the
    # min left on top, descending pops to the bar of the max left on top
    ref_kind: list[int] = []  # 0 = min index, 1 = max index
    ref_idx: list[int] = []

    depth_trace = np.empty(n, dtype=np.int64)
    depth_trace[0] = 1
    direction = 1

    for t in range(1, n):
        v = values[t]
        prev = values[t - 1]
        if direction == 1 and v < prev:
            max_stack.append(t - 1)
            direction = -1
        elif direction == -1 and v > prev:
            min_stack.append(t - 1)
            direction = 1

        if direction == 1:
            while max_stack and v > values[max_stack[-1]]:
                d_idx = max_stack.pop()
                b_idx = min_stack.pop()
                _check_span(values, b_idx, d_idx, min_stack, max_stack)
                births.append(b_idx)
                deaths.append(d_idx)
                ref_kind.append(0)
                ref_idx.append(min_stack[-1])
        else:
            while len(min_stack) > 1 and v < values[min_stack[-1]]:
                b_idx = min_stack.pop()
                d_idx = max_stack.pop()
                _check_span(values, b_idx, d_idx, min_stack, max_stack)
                births.append(b_idx)
                deaths.append(d_idx)
                if max_stack:
                    ref_kind.append(1)
                    ref_idx.append(max_stack[-1])
                else:
                    ref_kind.append(0)
                    ref_idx.append(0)
        depth_trace[t] = len(min_stack) + len(max_stack)

    if min_stack != [0] or max_stack:
        raise AssertionError("stacks not exhausted; input not augmented or not generic")

    # resolve parent references: each extremum index belongs to exactly one
    # bar; index 0 and the final index belong to the stem (-1)
    bar_of = {0: -1, n - 1: -1}
    for k, (b_idx, d_idx) in enumerate(zip(births, deaths)):
        bar_of[b_idx] = k
        bar_of[d_idx] = k
    parent = np.array([bar_of[i] for i in ref_idx], dtype=np.int64)

    return (
        np.array(births, dtype=np.int64),
        np.array(deaths, dtype=np.int64),
        parent,
        int(depth_trace.max()),
        depth_trace,
    )


def _check_span(values, b_idx, d_idx, min_stack, max_stack):
    # Lemma-span invariant: at a pop the surviving stack tops straddle the
    # popped pair.  A violation means the input was not generic.
    if values[min_stack[-1]] >= values[b_idx]:
        raise AssertionError("span violated on the minima stack; input not generic")
    if max_stack and values[max_stack[-1]] <= values[d_idx]:
        raise AssertionError("span violated on the maxima stack; input not generic")


def count_windings(values: np.ndarray, b: float, d: float) -> int:
    values = np.asarray(values, dtype=np.float64)
    # +1 where at-or-above d, -1 where at-or-below b; a winding completes at
    # every +1 immediately followed by -1 in the compressed crossing sequence
    signs = np.where(values >= d, 1, np.where(values <= b, -1, 0))
    hits = signs[signs != 0]
    if len(hits) < 2:
        return 0
    return int(np.count_nonzero((hits[:-1] == 1) & (hits[1:] == -1)))
