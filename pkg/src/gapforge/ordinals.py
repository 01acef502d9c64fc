"""Desk-scale ordinals below w^2, the two-sided index order, ladder systems,
and designated limit-point partitions.

Ordinals are pairs (q, r) denoting w*q + r, compared lexicographically.
This is the smallest surrogate that still has genuine limit points with
canonical cofinal sequences, which is all the ladder machinery needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import TableTooShort, UnknownDelta

LT, EQ, GT = -1, 0, 1


@dataclass(frozen=True, order=True)
class Ordinal:
    """The ordinal w*q + r, for naturals q and r."""

    q: int
    r: int

    def __post_init__(self):
        if self.q < 0 or self.r < 0:
            raise ValueError(f"ordinal parts must be naturals, got ({self.q}, {self.r})")

    @property
    def is_zero(self) -> bool:
        return self.q == 0 and self.r == 0

    @property
    def is_limit(self) -> bool:
        return self.r == 0 and self.q >= 1

    def succ(self) -> Ordinal:
        return Ordinal(self.q, self.r + 1)

    def key(self) -> str:
        """Serialized map-key form, "q.r"."""
        return f"{self.q}.{self.r}"

    def to_json(self) -> list[int]:
        return [self.q, self.r]

    @classmethod
    def from_json(cls, data) -> Ordinal:
        if (
            not isinstance(data, (list, tuple))
            or len(data) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in data)
        ):
            raise ValueError(f"bad ordinal encoding: {data!r}")
        return cls(data[0], data[1])

    @classmethod
    def from_key(cls, key: str) -> Ordinal:
        parts = key.split(".")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ValueError(f"bad ordinal key: {key!r}")
        return cls(int(parts[0]), int(parts[1]))

    def __str__(self):
        if self.q == 0:
            return str(self.r)
        head = "w" if self.q == 1 else f"w*{self.q}"
        return head if self.r == 0 else f"{head}+{self.r}"


def fin(n: int) -> Ordinal:
    """The finite ordinal n."""
    return Ordinal(0, n)


OMEGA = Ordinal(1, 0)


def cmp_ordinal(x: Ordinal, y: Ordinal) -> int:
    """Three-way lexicographic comparison: LT, EQ, or GT."""
    if x == y:
        return EQ
    return LT if x < y else GT


@dataclass(frozen=True)
class Index:
    """A point of the two-sided order: an ordinal tagged with side 0 or 1.

    Side 0 is the ascending copy, side 1 the descending copy sitting above
    all of side 0, so that (a,0) < (b,0) < (b,1) < (a,1) whenever a < b.
    """

    ord: Ordinal
    side: int

    def __post_init__(self):
        if self.side not in (0, 1):
            raise ValueError(f"side must be 0 or 1, got {self.side}")

    def to_json(self) -> dict:
        return {"ord": self.ord.to_json(), "side": self.side}

    @classmethod
    def from_json(cls, data) -> Index:
        if not isinstance(data, dict) or set(data) != {"ord", "side"}:
            raise ValueError(f"bad index encoding: {data!r}")
        return cls(Ordinal.from_json(data["ord"]), data["side"])

    def __str__(self):
        return f"<{self.ord},{self.side}>"


def cmp_index(x: Index, y: Index) -> int:
    """Three-way comparison in the two-sided order; total, never incomparable."""
    if x == y:
        return EQ
    if x.side != y.side:
        return LT if x.side == 0 else GT
    if x.side == 0:
        return LT if x.ord < y.ord else GT
    return LT if y.ord < x.ord else GT


def index_sort_key(i: Index) -> tuple:
    """Sort key realizing the two-sided order."""
    if i.side == 0:
        return (0, i.ord.q, i.ord.r)
    return (1, -i.ord.q, -i.ord.r)


@dataclass(frozen=True)
class Ladder:
    """A ladder system: per limit ordinal d, an increasing sequence below d.

    Canonical mode computes c_d(n) = (d.q - 1, n) for every n and every
    limit d.  Explicit mode tabulates finitely many values per d; queries
    past the table raise TableTooShort rather than extrapolating.
    """

    mode: str
    entries: Mapping[Ordinal, tuple[Ordinal, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("canonical", "explicit"):
            raise ValueError(f"ladder mode must be canonical or explicit, got {self.mode!r}")
        if self.mode == "canonical" and self.entries:
            raise ValueError("canonical ladders carry no table")
        for delta, values in self.entries.items():
            if not delta.is_limit:
                raise ValueError(f"ladder domain must consist of limits, got {delta}")
            if any(not v < delta for v in values):
                raise ValueError(f"ladder values at {delta} must stay below {delta}")
            if any(not a < b for a, b in zip(values, values[1:])):
                raise ValueError(f"ladder values at {delta} must strictly increase")

    @classmethod
    def canonical(cls) -> Ladder:
        return cls("canonical")

    @classmethod
    def explicit(cls, entries: Mapping[Ordinal, Sequence[Ordinal]]) -> Ladder:
        return cls("explicit", {d: tuple(vs) for d, vs in entries.items()})

    def has(self, delta: Ordinal) -> bool:
        if self.mode == "canonical":
            return delta.is_limit
        return delta in self.entries

    def value(self, delta: Ordinal, n: int) -> Ordinal:
        """The n-th rung c_delta(n)."""
        if not self.has(delta):
            raise UnknownDelta(f"no ladder at {delta}")
        if self.mode == "canonical":
            return Ordinal(delta.q - 1, n)
        values = self.entries[delta]
        if n >= len(values):
            raise TableTooShort(f"ladder at {delta} tabulates {len(values)} values, index {n} requested")
        return values[n]

    def count_below(self, delta: Ordinal, j: Ordinal) -> int:
        """The number of rungs of c_delta lying strictly below j (j < delta)."""
        if not self.has(delta):
            raise UnknownDelta(f"no ladder at {delta}")
        if not j < delta:
            raise ValueError(f"count_below needs j < delta, got j={j}, delta={delta}")
        if self.mode == "canonical":
            # rungs are (delta.q - 1, n); j < delta forces j.q <= delta.q - 1
            return j.r if j.q == delta.q - 1 else 0
        count = 0
        for v in self.entries[delta]:
            if v < j:
                count += 1
            else:
                return count  # strictly increasing: the scan may stop here
        raise TableTooShort(f"ladder at {delta} never reaches {j} within its table")

    def first_index_above(self, delta: Ordinal, bound: Ordinal) -> int:
        """The least n with c_delta(n) strictly above bound (bound < delta)."""
        if not self.has(delta):
            raise UnknownDelta(f"no ladder at {delta}")
        if not bound < delta:
            raise ValueError(f"first_index_above needs bound < delta, got {bound}, {delta}")
        if self.mode == "canonical":
            if bound.q < delta.q - 1:
                return 0
            return bound.r + 1
        for n, v in enumerate(self.entries[delta]):
            if bound < v:
                return n
        raise TableTooShort(f"ladder at {delta} never exceeds {bound} within its table")

    def to_json(self) -> dict:
        if self.mode == "canonical":
            return {"mode": "canonical"}
        return {
            "mode": "explicit",
            "entries": [
                {"delta": d.to_json(), "values": [v.to_json() for v in self.entries[d]]}
                for d in sorted(self.entries)
            ],
        }

    @classmethod
    def from_json(cls, data) -> Ladder:
        if not isinstance(data, dict) or "mode" not in data:
            raise ValueError(f"bad ladder encoding: {data!r}")
        if data["mode"] == "canonical":
            return cls.canonical()
        if data["mode"] == "explicit":
            entries = {}
            for row in data.get("entries", []):
                delta = Ordinal.from_json(row["delta"])
                if delta in entries:
                    raise ValueError(f"duplicate ladder entry at {delta}")
                entries[delta] = tuple(Ordinal.from_json(v) for v in row["values"])
            return cls.explicit(entries)
        raise ValueError(f"bad ladder mode: {data['mode']!r}")


@dataclass(frozen=True)
class SPartition:
    """Designated finite sets standing in for a stationary set S, its
    complement T, and a club D.  Checkers take these as explicit input;
    no stationarity is modeled or claimed."""

    S: frozenset[Ordinal]
    T: frozenset[Ordinal] = frozenset()
    D: frozenset[Ordinal] = frozenset()

    def __post_init__(self):
        for name, part in (("S", self.S), ("T", self.T)):
            if any(not o.is_limit for o in part):
                raise ValueError(f"{name} must consist of limit ordinals")
        if self.S & self.T:
            raise ValueError("S and T must be disjoint")

    def to_json(self) -> dict:
        return {
            "S": [o.to_json() for o in sorted(self.S)],
            "T": [o.to_json() for o in sorted(self.T)],
            "D": [o.to_json() for o in sorted(self.D)],
        }

    @classmethod
    def from_json(cls, data) -> SPartition:
        if not isinstance(data, dict) or not {"S", "T", "D"} <= set(data):
            raise ValueError(f"bad partition encoding: {data!r}")
        return cls(
            frozenset(Ordinal.from_json(o) for o in data["S"]),
            frozenset(Ordinal.from_json(o) for o in data["T"]),
            frozenset(Ordinal.from_json(o) for o in data["D"]),
        )
