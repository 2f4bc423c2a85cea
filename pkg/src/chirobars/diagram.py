"""Bars and persistence diagrams.

A bar is a birth-death pair of a connected component of the sublevel
filtration, carrying the sample indices of its coupled local minimum and
maximum, its chirality, and the id of the bar it is attached to.  The
diagram holds the finite bars (in the order the one-pass algorithm emits
them), the stem (the longest bar, global minimum to global maximum of the
augmented series), and the maximum combined stack depth the algorithm
observed.

JSON schema::

    {"stem": {...}, "bars": [{"birth":, "death":, "birth_index":,
     "death_index":, "chirality": "M"|"F", "parent": id|null}],
     "max_stack_depth": n}

Bar ids are the positions in the ``bars`` array; ``parent: null`` means the
bar is attached to the stem.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import ParseError, ValidationError

__all__ = ["Bar", "PersistenceDiagram", "diagram_to_json_dict", "diagram_from_json_dict"]

CHIRALITY_MIN_FIRST = "M"  # local minimum precedes the coupled maximum
CHIRALITY_MAX_FIRST = "F"


@dataclass(frozen=True)
class Bar:
    birth: float
    death: float
    birth_index: Optional[int] = None
    death_index: Optional[int] = None
    chirality: Optional[str] = None  # "M" | "F"
    parent: Optional[int] = None  # id of parent bar; None = attached to the stem

    def __post_init__(self):
        if not self.birth < self.death:
            raise ValidationError(f"bar needs birth < death, got ({self.birth}, {self.death})")
        if self.chirality not in (None, "M", "F"):
            raise ValidationError(f"chirality must be 'M' or 'F', got {self.chirality!r}")
        if self.birth_index is not None and self.death_index is not None and self.chirality is not None:
            expected = "M" if self.birth_index < self.death_index else "F"
            if self.chirality != expected:
                raise ValidationError(
                    f"chirality {self.chirality} inconsistent with indices "
                    f"({self.birth_index}, {self.death_index})"
                )

    def straddles(self, b: float, d: float) -> bool:
        """Closed-inequality quadrant membership: birth <= b and death >= d."""
        return self.birth <= b and self.death >= d


@dataclass(frozen=True)
class PersistenceDiagram:
    stem: Bar
    bars: tuple[Bar, ...]
    max_stack_depth: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "bars", tuple(self.bars))
        for k, bar in enumerate(self.bars):
            if bar.parent is None:
                parent = self.stem
            else:
                if not 0 <= bar.parent < len(self.bars) or bar.parent == k:
                    raise ValidationError(f"bar {k}: invalid parent id {bar.parent}")
                parent = self.bars[bar.parent]
            # strict nesting also rules out cycles in the parent relation
            if not (parent.birth < bar.birth and bar.death < parent.death):
                raise ValidationError(
                    f"bar {k} ({bar.birth}, {bar.death}) not straddled by its "
                    f"parent ({parent.birth}, {parent.death})"
                )

    def __len__(self) -> int:
        return len(self.bars)

    def all_bars(self) -> tuple[Bar, ...]:
        return (self.stem,) + self.bars

    def parent_of(self, bar_id: int) -> Bar:
        parent = self.bars[bar_id].parent
        return self.stem if parent is None else self.bars[parent]


# StemPile: same payload as a diagram, read as reconstruction input.
StemPile = PersistenceDiagram


def _bar_to_dict(bar: Bar) -> dict:
    return {
        "birth": bar.birth,
        "death": bar.death,
        "birth_index": bar.birth_index,
        "death_index": bar.death_index,
        "chirality": bar.chirality,
        "parent": bar.parent,
    }


def _bar_from_dict(doc: dict) -> Bar:
    try:
        return Bar(
            birth=float(doc["birth"]),
            death=float(doc["death"]),
            birth_index=None if doc.get("birth_index") is None else int(doc["birth_index"]),
            death_index=None if doc.get("death_index") is None else int(doc["death_index"]),
            chirality=doc.get("chirality"),
            parent=None if doc.get("parent") is None else int(doc["parent"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed bar entry {doc!r}: {exc}") from exc


def diagram_to_json_dict(diagram: PersistenceDiagram) -> dict:
    return {
        "stem": _bar_to_dict(diagram.stem),
        "bars": [_bar_to_dict(b) for b in diagram.bars],
        "max_stack_depth": diagram.max_stack_depth,
    }


def diagram_from_json_dict(doc: dict) -> PersistenceDiagram:
    if not isinstance(doc, dict) or "stem" not in doc or "bars" not in doc:
        raise ParseError('diagram JSON must contain "stem" and "bars"')
    bars = tuple(_bar_from_dict(b) for b in doc["bars"])
    for k, bar in enumerate(bars):
        if bar.parent is not None and not (0 <= bar.parent < len(bars)):
            raise ParseError(f"bar {k}: parent id {bar.parent} out of range")
        if bar.parent == k:
            raise ParseError(f"bar {k}: cannot be its own parent")
    depth = doc.get("max_stack_depth")
    return PersistenceDiagram(
        stem=_bar_from_dict(doc["stem"]),
        bars=bars,
        max_stack_depth=None if depth is None else int(depth),
    )


def load_diagram(path) -> PersistenceDiagram:
    with open(path, encoding="utf-8") as fh:
        return diagram_from_json_dict(json.load(fh))


def save_diagram(diagram: PersistenceDiagram, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(diagram_to_json_dict(diagram), fh)
        fh.write("\n")
