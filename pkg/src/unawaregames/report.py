"""Violation reports shared by all validators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

# Tags that are alternative characterizations of the same property share a class.
TAG_CLASS = {
    "R1": "I6",
    "R2": "I6",
    "L1T": "L1",
}


@dataclass(frozen=True, order=True)
class Violation:
    tag: str
    witness: tuple[str, ...]
    detail: str = field(default="", compare=False)

    @property
    def klass(self) -> str:
        return TAG_CLASS.get(self.tag, self.tag)

    def as_dict(self) -> dict:
        return {"tag": self.tag, "witness": list(self.witness), "detail": self.detail}

    def __str__(self) -> str:
        text = f"[{self.tag}] " + ", ".join(self.witness)
        return f"{text}: {self.detail}" if self.detail else text


class ViolationReport:
    """Sorted, de-duplicated collection of violations.

    Ordering is by tag then witness, so a report never depends on the
    iteration order of the checks that produced it.
    """

    def __init__(self, violations: Iterable[Violation] = ()):
        self._items = tuple(sorted(set(violations)))

    def __iter__(self):
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __eq__(self, other) -> bool:
        return isinstance(other, ViolationReport) and self._items == other._items

    def __add__(self, other: "ViolationReport") -> "ViolationReport":
        return ViolationReport(self._items + tuple(other))

    def __repr__(self) -> str:
        return f"ViolationReport({list(self._items)!r})"

    @property
    def ok(self) -> bool:
        return not self._items

    def tags(self) -> set[str]:
        return {v.tag for v in self._items}

    def classes(self) -> set[str]:
        return {v.klass for v in self._items}

    def only(self, *tags: str) -> "ViolationReport":
        return ViolationReport(v for v in self._items if v.tag in tags)

    def witnesses(self, tag: str) -> list[tuple[str, ...]]:
        return [v.witness for v in self._items if v.tag == tag]

    def to_json(self) -> list[dict]:
        return [v.as_dict() for v in self._items]

    def format(self, limit: int | None = None) -> str:
        items = self._items if limit is None else self._items[:limit]
        lines = [str(v) for v in items]
        if limit is not None and len(self._items) > limit:
            lines.append(f"... {len(self._items) - limit} more")
        return "\n".join(lines)
