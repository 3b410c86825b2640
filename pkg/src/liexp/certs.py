"""Bound intervals and the certificate trees that justify them."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

INF = math.inf

# External results are tagged by their reference key; "derived" marks
# arithmetic combination steps performed by this package.
CITATIONS = frozenset({
    "CMN", "DS", "DY", "BD", "BDMi", "BH", "Th1", "Th2", "Rep", "BDF4",
    "Harris", "MNT", "Legendre", "derived",
})


@dataclass(frozen=True)
class Certificate:
    rule: str
    citation: str
    statement: str
    value: int
    premises: tuple["Certificate", ...] = ()
    params: tuple[tuple[str, Any], ...] = ()
    extrapolated: bool = False

    def __post_init__(self):
        if self.citation not in CITATIONS:
            raise ValueError(f"citation {self.citation!r} is not whitelisted")
        object.__setattr__(self, "premises", tuple(self.premises))

    @property
    def args(self) -> dict[str, Any]:
        return dict(self.params)

    @cached_property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.premises)

    @cached_property
    def extrapolated_count(self) -> int:
        return int(self.extrapolated) + sum(c.extrapolated_count for c in self.premises)

    def walk(self):
        yield self
        for c in self.premises:
            yield from c.walk()

    def to_dict(self) -> dict[str, Any]:
        return {
            "rule": self.rule,
            "citation": self.citation,
            "statement": self.statement,
            "value": self.value,
            "extrapolated": self.extrapolated,
            "params": {k: list(v) if isinstance(v, tuple) else v for k, v in self.params},
            "premises": [c.to_dict() for c in self.premises],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Certificate":
        return cls(
            rule=d["rule"],
            citation=d["citation"],
            statement=d["statement"],
            value=d["value"],
            premises=tuple(cls.from_dict(c) for c in d.get("premises", [])),
            params=tuple((k, tuple(v) if isinstance(v, list) else v)
                         for k, v in d.get("params", {}).items()),
            extrapolated=d.get("extrapolated", False),
        )

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)


def make_cert(rule: str, citation: str, statement: str, value: int,
              premises=(), extrapolated: bool = False, **params) -> Certificate:
    return Certificate(rule, citation, statement, value, tuple(premises),
                       tuple(sorted(params.items())), extrapolated)


@dataclass(frozen=True)
class BoundInterval:
    """Bounds ``lower <= exp_p(X) <= upper``; ``upper`` may be ``INF``."""

    lower: int
    upper: int | float
    lower_cert: Certificate | None = field(default=None, compare=False)
    upper_cert: Certificate | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.lower < 0:
            raise ValueError(f"negative lower bound {self.lower}")
        if self.lower > self.upper:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")
        if self.upper == INF and self.upper_cert is not None:
            raise ValueError("an infinite upper bound carries no certificate")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def bounded(self) -> bool:
        return self.upper != INF

    def values(self) -> list[int]:
        if not self.bounded:
            raise ValueError("unbounded interval")
        return list(range(self.lower, int(self.upper) + 1))

    def __str__(self):
        if self.exact:
            return f"= {self.lower}"
        hi = "∞" if not self.bounded else str(self.upper)
        return f"∈ [{self.lower}, {hi}]"

    def to_dict(self) -> dict[str, Any]:
        return {
            "lower": self.lower,
            "upper": None if not self.bounded else self.upper,
            "lower_certificate": self.lower_cert.to_dict() if self.lower_cert else None,
            "upper_certificate": self.upper_cert.to_dict() if self.upper_cert else None,
        }
