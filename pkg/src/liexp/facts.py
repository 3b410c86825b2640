"""Cited exponent facts that cannot be derived from the rules in this package."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Fact:
    space: str          # rendered space expression
    p: int
    lower: int | None
    upper: int | None
    lower_ref: str = ""
    upper_ref: str = ""

    @property
    def key(self) -> tuple[str, int]:
        return (self.space, self.p)


@dataclass(frozen=True)
class FactBase:
    facts: tuple[Fact, ...]

    def get(self, space: str, p: int) -> Fact | None:
        for f in self.facts:
            if f.key == (space, p):
                return f
        return None

    def with_fact(self, space: str, p: int, **changes) -> "FactBase":
        """Copy with one fact's fields replaced (or a new fact added)."""
        old = self.get(space, p)
        new = replace(old, **changes) if old else Fact(space, p, **changes)
        rest = tuple(f for f in self.facts if f.key != (space, p))
        return FactBase(rest + (new,))


def citation_tag(ref: str) -> str:
    return ref.split()[0]


DEFAULT_FACTS = FactBase((
    Fact("B2(3,11)", 3, 6, 6, "BDMi 1.3", "Th1 2.2"),
    Fact("K3", 3, 12, 12, "BDF4 1.6", "Th1 1.2"),
    Fact("W", 5, 30, 31, "Rep 1.1", "Th2 1.2"),
    Fact("B(23,35,47,59)", 7, 29, None, "BDMi 1.4"),
))
