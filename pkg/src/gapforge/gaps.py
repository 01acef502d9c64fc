"""Excess numbers, finite pre-gap diagrams, and the decidable gap predicates.

Sets are plain frozensets of naturals inside a bounded universe [0, M).
Between finite sets almost-inclusion is vacuous, so a diagram carries no
tower laws; everything of interest is measured through the excess number.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, Iterable, Mapping

from .errors import IndexMismatch, UnknownIndex
from .ordinals import Ladder, Ordinal, SPartition


def excess(a: AbstractSet[int], b: AbstractSet[int]) -> int:
    """Least k with a - b contained in [0, k); 0 exactly when a is a subset of b."""
    d = a - b
    return max(d) + 1 if d else 0


def almost_subset(a: AbstractSet[int], b: AbstractSet[int], n: int) -> bool:
    """True when a with its first n naturals removed is contained in b."""
    return all(x in b for x in a if x >= n)


@dataclass(frozen=True)
class GapFragment:
    """A finite pre-gap diagram: index sets I and J with subsets of [0, M).

    The a-map is keyed by I, the b-map by J.  Purely a diagram; which gap
    predicates it satisfies is measured by the checkers below.
    """

    universe: int
    a: Mapping[Ordinal, frozenset[int]]
    b: Mapping[Ordinal, frozenset[int]]

    def __post_init__(self):
        if self.universe < 0:
            raise ValueError("universe bound must be a natural")
        for name, side in (("a", self.a), ("b", self.b)):
            for o, members in side.items():
                if any(not 0 <= x < self.universe for x in members):
                    raise ValueError(f"{name}[{o}] leaves the universe [0, {self.universe})")

    @property
    def I(self) -> tuple[Ordinal, ...]:
        return tuple(sorted(self.a))

    @property
    def J(self) -> tuple[Ordinal, ...]:
        return tuple(sorted(self.b))

    def restrict(self, iset: Iterable[Ordinal], jset: Iterable[Ordinal] | None = None) -> GapFragment:
        """The sub-diagram on I & iset and J & jset (jset defaults to iset)."""
        ikeep = frozenset(iset)
        jkeep = ikeep if jset is None else frozenset(jset)
        return GapFragment(
            self.universe,
            {o: s for o, s in self.a.items() if o in ikeep},
            {o: s for o, s in self.b.items() if o in jkeep},
        )

    def to_json(self) -> dict:
        return {
            "universe": self.universe,
            "I": [o.to_json() for o in self.I],
            "J": [o.to_json() for o in self.J],
            "a": {o.key(): sorted(self.a[o]) for o in self.I},
            "b": {o.key(): sorted(self.b[o]) for o in self.J},
        }

    @classmethod
    def from_json(cls, data) -> GapFragment:
        if not isinstance(data, dict) or not {"universe", "I", "J", "a", "b"} <= set(data):
            raise ValueError(f"bad fragment encoding: {type(data).__name__}")
        iset = [Ordinal.from_json(o) for o in data["I"]]
        jset = [Ordinal.from_json(o) for o in data["J"]]
        a = {Ordinal.from_key(k): frozenset(v) for k, v in data["a"].items()}
        b = {Ordinal.from_key(k): frozenset(v) for k, v in data["b"].items()}
        if set(a) != set(iset) or set(b) != set(jset):
            raise ValueError("index lists do not match the tower maps")
        return cls(data["universe"], a, b)


def special_gap_check(g: GapFragment, n0: int) -> bool:
    """Decide the uniform-threshold pairwise non-inclusion predicate.

    Requires I = J.  True when every a_x minus n0 sits inside b_x, while for
    every x < y the joint set (a_x | a_y) minus n0 escapes b_x & b_y.
    """
    if set(g.a) != set(g.b):
        raise IndexMismatch("the predicate needs one shared index set")
    idx = sorted(g.a)
    if any(not almost_subset(g.a[o], g.b[o], n0) for o in idx):
        return False
    for pos, x in enumerate(idx):
        for y in idx[pos + 1:]:
            joint = {v for v in (g.a[x] | g.a[y]) if v >= n0}
            if joint <= (g.b[x] & g.b[y]):
                return False
    return True


def uniform_interpolation(g: GapFragment, n0: int) -> frozenset[int] | None:
    """A set x with a_i - n0 within x - n0 within b_j for all i, j, or None.

    One exists exactly when every excess(a_i, b_j) is at most n0; the
    canonical witness returned is the union of the truncated a-sets.
    """
    if any(excess(g.a[i], g.b[j]) > n0 for i in g.a for j in g.b):
        return None
    out: set[int] = set()
    for i in g.a:
        out.update(x for x in g.a[i] if x >= n0)
    return frozenset(out)


@dataclass(frozen=True)
class CHWitness:
    """Witness threshold for one (delta, j) query of the ladder predicate.

    n_star is the first rung index whose antecedent is empty; k <= n_star is
    the least threshold from which the excess clause holds up to n_star.
    """

    delta: Ordinal
    j: Ordinal
    k: int
    n_star: int

    def __post_init__(self):
        if not 0 <= self.k <= self.n_star:
            raise ValueError("witness threshold must satisfy 0 <= k <= n_star")

    def to_json(self) -> dict:
        return {"delta": self.delta.to_json(), "j": self.j.to_json(), "k": self.k, "n_star": self.n_star}


def c_hausdorff_check(
    g: GapFragment, ladder: Ladder, part: SPartition
) -> dict[tuple[Ordinal, Ordinal], CHWitness | None]:
    """Evaluate the ladder-threshold gap clause on every queried pair.

    For each designated limit delta in S & D and each j in J at or above
    delta: with n_star the first rung of c_delta clearing max(I & delta),
    find the least k such that for all n in [k, n_star) every i in I lying
    in [c_delta(n), delta) has excess(a_i, b_j) > n.  A pair maps to its
    witness, or to None when only the vacuous k = n_star survives.
    """
    out: dict[tuple[Ordinal, Ordinal], CHWitness | None] = {}
    for delta in sorted(part.S & part.D):
        js = [j for j in g.J if j >= delta]
        if not js:
            continue
        below = [i for i in g.I if i < delta]
        if not below:
            for j in js:
                out[(delta, j)] = CHWitness(delta, j, 0, 0)
            continue
        n_star = ladder.first_index_above(delta, max(below))
        tails = [[i for i in below if i >= ladder.value(delta, n)] for n in range(n_star)]
        for j in js:
            k = 0
            for n in range(n_star):
                if any(excess(g.a[i], g.b[j]) <= n for i in tails[n]):
                    k = n + 1
            if n_star > 0 and k == n_star:
                out[(delta, j)] = None
            else:
                out[(delta, j)] = CHWitness(delta, j, k, n_star)
    return out


def s_hausdorff_profile(
    g: GapFragment, delta: Ordinal, seq: Iterable[Ordinal], j: Ordinal
) -> list[int]:
    """The excess profile (X(a_i, b_j)) along an increasing sequence below delta.

    Divergence is not decidable on finite data, so only the raw profile is
    returned; callers apply their own threshold policies.
    """
    seq = list(seq)
    if any(i not in g.a for i in seq) or j not in g.b:
        raise UnknownIndex("profile indices must carry tower sets in the diagram")
    if any(not x < y for x, y in zip(seq, seq[1:])):
        raise ValueError("profile sequence must be strictly increasing")
    if any(not i < delta for i in seq) or j < delta:
        raise ValueError("profile needs the sequence below delta and j at or above it")
    return [excess(g.a[i], g.b[j]) for i in seq]


def full_inclusion_union(g: GapFragment) -> frozenset[int] | None:
    """Union of the a-sets when it interpolates outright, else None.

    Returns x = union of all a_i exactly when x is a subset of every b_j.
    """
    x: set[int] = set()
    for i in g.a:
        x |= g.a[i]
    xf = frozenset(x)
    if all(xf <= g.b[j] for j in g.b):
        return xf
    return None


def excess_matrix_csv(g: GapFragment) -> str:
    """CSV of the excess matrix X(a_i, b_j), ordinal row and column headers."""
    lines = [",".join([""] + [j.key() for j in g.J])]
    for i in g.I:
        lines.append(",".join([i.key()] + [str(excess(g.a[i], g.b[j])) for j in g.J]))
    return "\n".join(lines) + "\n"
