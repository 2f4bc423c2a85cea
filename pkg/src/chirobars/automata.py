"""Level-labeled finite automata and their runs over piecewise-linear series.

States carry real levels.  Every non-absorbing state has exactly one up
transition (to a strictly higher level) and at most one down transition.
A function crossing the span (starting below all working-state levels and
ending above them) induces a symbolic trajectory by first hitting: from a
state the automaton moves to whichever target level the function reaches
first, equality counting as a hit.

Transitions into absorbing states fire when the series runs out while such
a transition is available, never on a literal level hit.  This keeps the
trajectory independent of where the start and absorbing levels are parked
(they are bookkeeping only) and makes the winding count exact: a function
may sail far above the absorbing level and still come back to complete
another winding.  Consequently every transition into an absorbing state
must be an up transition, which validation enforces.

Edge weights are monomials: an optional formal variable (``x``/``y``/...)
times a probability slot supplied at evaluation time.  Path-weight series
are evaluated by solving the incoming-edge linear system; divergence is
detected through the spectral radius of the transient weight block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Optional

import numpy as np

from .errors import CrossingError, DivergenceError, ParseError, ValidationError
from .series import TimeSeries

__all__ = [
    "LevelAutomaton",
    "SymbolicTrajectory",
    "PathWeightSeries",
    "run_automaton",
    "winding_automaton",
    "two_interval_automaton",
    "head_shoulders_automaton",
    "solve_path_weights",
    "pattern_automaton_from_file",
    "count_pattern",
    "automaton_to_json_dict",
    "automaton_from_json_dict",
    "bundled_pattern_path",
]

Edge = tuple[str, str]


@dataclass(frozen=True)
class LevelAutomaton:
    """Finite automaton with real-valued state levels.

    ``transitions`` maps each non-absorbing state to its targets; ``var``
    carries the formal variable marking an edge, if any.  ``flags`` are the
    states whose passages :func:`count_pattern` reports.
    """

    levels: dict[str, float]
    start: str
    absorbing: frozenset[str]
    up: dict[str, str]
    down: dict[str, str]
    var: dict[Edge, Optional[str]]
    flags: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "absorbing", frozenset(self.absorbing))
        object.__setattr__(self, "flags", frozenset(self.flags))
        names = set(self.levels)
        if self.start not in names:
            raise ValidationError(f"unknown start state {self.start!r}")
        if not self.absorbing:
            raise ValidationError("need at least one absorbing state")
        for s in self.absorbing | self.flags:
            if s not in names:
                raise ValidationError(f"unknown state {s!r}")
        if self.start in self.absorbing:
            raise ValidationError("start state cannot be absorbing")
        targets = set()
        for src, maps in (("up", self.up), ("down", self.down)):
            for a, b in maps.items():
                if a not in names or b not in names:
                    raise ValidationError(f"{src} transition {a!r} -> {b!r} uses unknown state")
                if a in self.absorbing:
                    raise ValidationError(f"absorbing state {a!r} has an outgoing transition")
                targets.add(b)
        if self.start in targets:
            raise ValidationError("start state has an incoming transition")
        for a, b in self.up.items():
            if not self.levels[b] > self.levels[a]:
                raise ValidationError(f"up transition {a!r} -> {b!r} does not increase the level")
        for a, b in self.down.items():
            if not self.levels[b] < self.levels[a]:
                raise ValidationError(f"down transition {a!r} -> {b!r} does not decrease the level")
            if b in self.absorbing:
                raise ValidationError(
                    f"transition {a!r} -> {b!r}: absorbing states are reached on "
                    "series exhaustion and must be up targets"
                )
        for s in names - self.absorbing:
            if s not in self.up:
                raise ValidationError(f"non-absorbing state {s!r} has no up transition")
        for edge in self.var:
            if edge not in self.edges():
                raise ValidationError(f"variable attached to unknown edge {edge!r}")
        working = [self.levels[s] for s in self.working_states()]
        if not working:
            raise ValidationError("no working (non-start, non-absorbing) states")

    def working_states(self) -> list[str]:
        return [s for s in self.levels if s != self.start and s not in self.absorbing]

    @property
    def span(self) -> tuple[float, float]:
        """Shortest interval containing the working-state levels."""
        levels = [self.levels[s] for s in self.working_states()]
        return min(levels), max(levels)

    def edges(self) -> list[Edge]:
        return [(a, b) for a, b in self.up.items()] + [(a, b) for a, b in self.down.items()]

    def edge_var(self, edge: Edge) -> Optional[str]:
        return self.var.get(edge)

    def variables(self) -> list[str]:
        return sorted({v for v in self.var.values() if v is not None})


@dataclass(frozen=True)
class SymbolicTrajectory:
    states: tuple[str, ...]
    transitions: tuple[Edge, ...]
    var_counts: dict[str, int]

    def count_state(self, name: str) -> int:
        """Passages through a state (entries, the initial state not counted)."""
        return sum(1 for s in self.states[1:] if s == name)

    def count_edge(self, edge: Edge) -> int:
        return sum(1 for e in self.transitions if e == edge)


def run_automaton(automaton: LevelAutomaton, series: TimeSeries) -> SymbolicTrajectory:
    """Deterministic symbolic trajectory of a series crossing the span.

    First-hitting semantics with closed level equality; within one linear
    segment the walk exits the current corridor through whichever target
    level lies in the segment's direction.
    """
    lo, hi = automaton.span
    v = series.values
    if not (v[0] < lo and v[-1] > hi):
        raise CrossingError(
            f"series must cross the span [{lo}, {hi}]: starts at {v[0]}, ends at {v[-1]}"
        )

    state = automaton.start
    states = [state]
    transitions: list[Edge] = []
    var_counts = {name: 0 for name in automaton.variables()}

    def arrive(target: str) -> None:
        nonlocal state
        edge = (state, target)
        transitions.append(edge)
        var = automaton.edge_var(edge)
        if var is not None:
            var_counts[var] += 1
        state = target
        states.append(target)

    seg = 0
    cur = float(v[0])
    n = len(v)
    while state not in automaton.absorbing:
        up_t = automaton.up[state]
        down_t = automaton.down.get(state)
        up_level = None if up_t in automaton.absorbing else automaton.levels[up_t]
        down_level = automaton.levels[down_t] if down_t is not None else None

        hit = None
        if up_level is not None and cur >= up_level:
            hit = ("up", up_t, up_level)
        elif down_level is not None and cur <= down_level:
            hit = ("down", down_t, down_level)
        else:
            while seg < n - 1:
                nxt = float(v[seg + 1])
                if up_level is not None and nxt >= up_level:
                    hit = ("up", up_t, up_level)
                    break
                if down_level is not None and nxt <= down_level:
                    hit = ("down", down_t, down_level)
                    break
                seg += 1
                cur = nxt
        if hit is None:
            if up_t in automaton.absorbing:
                arrive(up_t)  # series exhausted above the span: absorbed
                break
            raise CrossingError(
                f"series exhausted in state {state!r} with no absorbing exit"
            )
        _, target, level = hit
        cur = level  # continue from the hit point inside the same segment
        arrive(target)

    return SymbolicTrajectory(tuple(states), tuple(transitions), var_counts)


def count_pattern(automaton: LevelAutomaton, flagged: str, series: TimeSeries) -> int:
    """Passages through the flagged state in the symbolic trajectory."""
    if flagged not in automaton.levels:
        raise ValidationError(f"unknown state {flagged!r}")
    return run_automaton(automaton, series).count_state(flagged)


# ---------------------------------------------------------------------------
# Built-in automata
# ---------------------------------------------------------------------------

def winding_automaton(b: float, d: float) -> LevelAutomaton:
    """Four-state counter of windings around [b, d]; the down edge into the
    low state carries the variable x, so the x-count equals the number of
    completed windings.  Start and absorbing levels sit at b-1 and d+1."""
    if not b < d:
        raise ValidationError(f"need b < d, got ({b}, {d})")
    return LevelAutomaton(
        levels={"alpha": b - 1.0, "beta": b, "delta": d, "omega": d + 1.0},
        start="alpha",
        absorbing=frozenset({"omega"}),
        up={"alpha": "delta", "beta": "delta", "delta": "omega"},
        down={"delta": "beta"},
        var={("delta", "beta"): "x"},
    )


def two_interval_automaton(b1: float, d1: float, b2: float, d2: float) -> LevelAutomaton:
    """Joint winding counter for two non-nested intervals [b1,d1], [b2,d2]
    with b1 < b2 and d1 < d2.  Edges completing a winding around the first
    interval carry x, around the second carry y."""
    if not (b1 < d1 and b2 < d2):
        raise ValidationError("intervals must satisfy b < d")
    if b1 < b2 and d2 < d1:
        raise ValidationError("nested intervals are not supported")
    if not (b1 < b2 and d1 < d2):
        raise ValidationError(
            f"need non-nested order b1 < b2 and d1 < d2, got ({b1}, {d1}), ({b2}, {d2})"
        )
    return LevelAutomaton(
        levels={
            "alpha": b1 - 1.0,
            "beta1": b1,
            "beta2": b2,
            "delta1": d1,
            "delta2": d2,
            "omega": d2 + 1.0,
        },
        start="alpha",
        absorbing=frozenset({"omega"}),
        up={
            "alpha": "delta1",
            "beta1": "delta1",
            "delta1": "delta2",
            "beta2": "delta2",
            "delta2": "omega",
        },
        down={"delta1": "beta1", "beta2": "beta1", "delta2": "beta2"},
        var={
            ("delta1", "beta1"): "x",
            ("beta2", "beta1"): "x",
            ("delta2", "beta2"): "y",
        },
    )


def head_shoulders_automaton(neckline: float, shoulder: float, head: float) -> LevelAutomaton:
    """Head-and-shoulders occurrence counter (one fixed reading of the
    pattern, fully expressible in the schema: up-cross the shoulder level,
    retreat to the neckline, up-cross the head level, retreat, up-cross the
    shoulder again, retreat — the final retreat passes the flagged state).

    Peaks are unbounded: a shoulder rise may overshoot the head level.
    After a completed pattern the walk keeps counting, so back-to-back
    patterns each score."""
    if not neckline < shoulder < head:
        raise ValidationError(
            f"need neckline < shoulder < head, got {neckline}, {shoulder}, {head}"
        )
    n, s, h = float(neckline), float(shoulder), float(head)
    return LevelAutomaton(
        levels={
            "start": n - 1.0,
            "left_shoulder_up": s,
            "left_peak_high": h,
            "left_done": n,
            "head_up": h,
            "head_done": n,
            "right_shoulder_up": s,
            "pattern": n,
            "end": h + 1.0,
        },
        start="start",
        absorbing=frozenset({"end"}),
        up={
            "start": "left_shoulder_up",
            "left_shoulder_up": "left_peak_high",
            "left_peak_high": "end",
            "left_done": "head_up",
            "head_up": "end",
            "head_done": "right_shoulder_up",
            "right_shoulder_up": "right_peak_high",
            "pattern": "left_shoulder_up",
        },
        down={
            "left_shoulder_up": "left_done",
            "left_peak_high": "left_done",
            "head_up": "head_done",
            "right_shoulder_up": "pattern",
            "right_peak_high": "pattern",
        },
        var={},
        flags=frozenset({"pattern"}),
    )


# ---------------------------------------------------------------------------
# Path-weight generating functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PathWeightSeries:
    """Evaluated sum over paths between two states of weight(path) z^len."""

    start: str
    target: str
    value: float
    spectral_radius: float


def solve_path_weights(
    automaton: LevelAutomaton,
    probabilities: Optional[Mapping[Edge, float]] = None,
    variables: Optional[Mapping[str, float]] = None,
    z: float = 1.0,
) -> dict[str, PathWeightSeries]:
    """Path-weight series from the start to every absorbing state.

    Each edge weighs probability x variable x z; the incoming-edge recursion
    F_s = [s = start] + sum over edges e: s' -> s of w(e) F_{s'} is solved as
    a linear system.  Divergence (transient spectral radius >= 1) raises
    :class:`DivergenceError` instead of returning garbage.
    """
    probabilities = {} if probabilities is None else dict(probabilities)
    variables = {} if variables is None else dict(variables)
    for edge in probabilities:
        if edge not in automaton.edges():
            raise ValidationError(f"probability for unknown edge {edge!r}")
    for name in variables:
        if name not in automaton.variables():
            raise ValidationError(f"unknown variable {name!r}")

    def weight(edge: Edge) -> float:
        w = probabilities.get(edge, 1.0) * z
        var = automaton.edge_var(edge)
        if var is not None:
            if var not in variables:
                raise ValidationError(f"no value supplied for variable {var!r}")
            w *= variables[var]
        return w

    transient = [s for s in automaton.levels if s not in automaton.absorbing]
    index = {s: i for i, s in enumerate(transient)}
    k = len(transient)
    w_matrix = np.zeros((k, k))
    for a, b in automaton.edges():
        if b in automaton.absorbing:
            continue
        w_matrix[index[a], index[b]] = weight((a, b))

    radius = float(max(abs(np.linalg.eigvals(w_matrix)))) if k else 0.0
    if radius >= 1.0:
        raise DivergenceError(
            f"path-weight series diverges: transient spectral radius {radius:.6g} >= 1"
        )

    rhs = np.zeros(k)
    rhs[index[automaton.start]] = 1.0
    f = np.linalg.solve(np.eye(k) - w_matrix.T, rhs)

    out = {}
    for target in sorted(automaton.absorbing):
        total = sum(
            weight((a, b)) * f[index[a]] for a, b in automaton.edges() if b == target
        )
        out[target] = PathWeightSeries(
            start=automaton.start, target=target, value=float(total), spectral_radius=radius
        )
    return out


# ---------------------------------------------------------------------------
# JSON schema:
# {"states": [{"name":, "level":, "flag": bool}], "start":, "absorbing": [..],
#  "transitions": [{"from":, "to":, "var": "x"|"y"|null}]}
# ---------------------------------------------------------------------------

def automaton_to_json_dict(automaton: LevelAutomaton) -> dict:
    return {
        "states": [
            {"name": s, "level": level, "flag": s in automaton.flags}
            for s, level in automaton.levels.items()
        ],
        "start": automaton.start,
        "absorbing": sorted(automaton.absorbing),
        "transitions": [
            {"from": a, "to": b, "var": automaton.edge_var((a, b))}
            for a, b in automaton.edges()
        ],
    }


def automaton_from_json_dict(doc: dict) -> LevelAutomaton:
    try:
        levels = {str(s["name"]): float(s["level"]) for s in doc["states"]}
        flags = frozenset(str(s["name"]) for s in doc["states"] if s.get("flag"))
        start = str(doc["start"])
        absorbing = frozenset(str(s) for s in doc["absorbing"])
        raw_edges = [
            (str(t["from"]), str(t["to"]), t.get("var")) for t in doc["transitions"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed automaton JSON: {exc}") from exc

    up: dict[str, str] = {}
    down: dict[str, str] = {}
    var: dict[Edge, Optional[str]] = {}
    for a, b, v in raw_edges:
        if a not in levels or b not in levels:
            raise ParseError(f"transition {a!r} -> {b!r} references unknown state")
        if levels[b] > levels[a]:
            kind = up
        elif levels[b] < levels[a]:
            kind = down
        else:
            raise ParseError(f"transition {a!r} -> {b!r} between equal levels")
        if a in kind:
            raise ParseError(
                f"state {a!r} has two {'up' if kind is up else 'down'} transitions"
            )
        kind[a] = b
        if v is not None:
            var[(a, b)] = str(v)
    try:
        return LevelAutomaton(
            levels=levels, start=start, absorbing=absorbing, up=up, down=down,
            var=var, flags=flags,
        )
    except ValidationError as exc:
        raise ParseError(f"invalid automaton: {exc}") from exc


def pattern_automaton_from_file(path) -> LevelAutomaton:
    """Load and validate an automaton from its JSON schema file."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"not valid JSON: {exc}") from exc
    return automaton_from_json_dict(doc)


def save_automaton(automaton: LevelAutomaton, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(automaton_to_json_dict(automaton), fh, indent=2)
        fh.write("\n")


def bundled_pattern_path(name: str = "head_shoulders"):
    """Filesystem path of a pattern spec shipped with the package."""
    return resources.files("chirobars.data").joinpath(f"{name}.json")
