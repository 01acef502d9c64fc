"""The gap-introducing poset of finite bit-word conditions.

A condition assigns to each ordinal in its finite domain a pair of equal
length bit words (the growing lower set and its upper companion), all words
sharing one length, the condition's height.  Character k of a word is the
membership bit of k, so extending a word as a function means appending
characters.  The extension order additionally demands that every bit newly
granted at an index reappear at every index above it in the two-sided order,
which is what forges the tower structure out of raw bits.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    AgreementFailure,
    HeightMismatch,
    HypothesisFailure,
    InvalidBit,
    SearchTooLarge,
    UnknownIndex,
)
from .ordinals import Index, Ordinal


def bits(word: str) -> frozenset[int]:
    """The subset of positions carrying '1'."""
    return frozenset(k for k, ch in enumerate(word) if ch == "1")


def word_from_bits(members: Iterable[int], length: int) -> str:
    members = set(members)
    if members and (min(members) < 0 or max(members) >= length):
        raise ValueError(f"bits {sorted(members)} do not fit a word of length {length}")
    return "".join("1" if k in members else "0" for k in range(length))


def _ilt(i: tuple[Ordinal, int], j: tuple[Ordinal, int]) -> bool:
    """Strict two-sided order on (ordinal, side) pairs."""
    a, s = i
    b, t = j
    if s == 0:
        return True if t == 1 else a < b
    return b < a if t == 1 else False


@dataclass(eq=True)
class PCondition:
    """height plus a finite map ordinal -> (low word, high word).

    Invariants enforced on construction: every word has length == height,
    and bitwise the low word is contained in the high word.  Both sides of
    an ordinal are always present together because the map is keyed by the
    ordinal itself.  Treat instances as immutable once built.
    """

    height: int
    entries: dict[Ordinal, tuple[str, str]]

    def __post_init__(self):
        if self.height < 0:
            raise ValueError("height must be a natural")
        for o, (w0, w1) in self.entries.items():
            if len(w0) != self.height or len(w1) != self.height:
                raise ValueError(f"words at {o} must have length {self.height}")
            if set(w0) - {"0", "1"} or set(w1) - {"0", "1"}:
                raise ValueError(f"words at {o} must be over the alphabet 01")
            if not bits(w0) <= bits(w1):
                raise ValueError(f"low word at {o} must be bitwise contained in the high word")

    @classmethod
    def empty(cls) -> PCondition:
        return cls(0, {})

    def domain(self) -> tuple[Ordinal, ...]:
        return tuple(sorted(self.entries))

    def word(self, o: Ordinal, side: int) -> str:
        return self.entries[o][side]

    def to_json(self) -> dict:
        return {
            "height": self.height,
            "entries": [
                {"ord": o.to_json(), "a_bits": self.entries[o][0], "b_bits": self.entries[o][1]}
                for o in sorted(self.entries)
            ],
        }

    @classmethod
    def from_json(cls, data) -> PCondition:
        if not isinstance(data, dict) or not {"height", "entries"} <= set(data):
            raise ValueError("bad condition encoding")
        if not isinstance(data["height"], int) or isinstance(data["height"], bool):
            raise ValueError("height must be an integer")
        entries: dict[Ordinal, tuple[str, str]] = {}
        for row in data["entries"]:
            o = Ordinal.from_json(row["ord"])
            if o in entries:
                raise ValueError(f"duplicate entry at {o}")
            if not isinstance(row["a_bits"], str) or not isinstance(row["b_bits"], str):
                raise ValueError(f"bit words at {o} must be strings")
            entries[o] = (row["a_bits"], row["b_bits"])
        return cls(data["height"], entries)


def p_leq(p: PCondition, q: PCondition) -> bool:
    """Extension order: q extends p.

    Requires dom(p) within dom(q), every p-word a prefix of the matching
    q-word, height monotone, and for every pair of p-domain indices i below
    j in the two-sided order, the bits q grants at i beyond p all to appear
    at j.  Only q restricted to dom(p) is ever consulted.
    """
    if p.height > q.height:
        return False
    for o, (w0, w1) in p.entries.items():
        if o not in q.entries:
            return False
        q0, q1 = q.entries[o]
        if not q0.startswith(w0) or not q1.startswith(w1):
            return False
    idx = [(o, s) for o in p.entries for s in (0, 1)]
    qset = {i: bits(q.entries[i[0]][i[1]]) for i in idx}
    grow = {i: qset[i] - bits(p.entries[i[0]][i[1]]) for i in idx}
    for i in idx:
        if not grow[i]:
            continue
        for j in idx:
            if _ilt(i, j) and not grow[i] <= qset[j]:
                return False
    return True


def p_restrict(p: PCondition, keep: Iterable[Ordinal]) -> PCondition:
    """Drop the entries outside `keep`; the height is preserved."""
    keep = set(keep)
    return PCondition(p.height, {o: w for o, w in p.entries.items() if o in keep})


def p_union_agreeing(p: PCondition, q: PCondition) -> PCondition:
    """Map union of two equal-height conditions agreeing on the overlap.

    This is the minimum common extension: neither side gains a single bit
    on its own domain.
    """
    if p.height != q.height:
        raise HeightMismatch(f"heights {p.height} and {q.height} differ")
    for o in p.entries.keys() & q.entries.keys():
        if p.entries[o] != q.entries[o]:
            raise AgreementFailure(f"conditions disagree at {o}")
    return PCondition(p.height, {**p.entries, **q.entries})


def p_join(p: PCondition, q: PCondition) -> PCondition:
    """Canonical join r of p with q, where q dominates on A = dom(q).

    Needs p restricted to A below q, and q at least as tall.  On A the join
    copies q.  Off A each word keeps p's bits and additionally receives, for
    every A-index k of p's domain below it, all bits q granted at k at or
    above p's height.  That bulk transfer is exactly what makes r extend p:
    a bit new at i came from some k below i, and k sits below every j above
    i as well.  Guarantees r >= p, r >= q and r restricted to A equal to q.
    """
    a_dom = set(q.entries)
    if q.height < p.height or not p_leq(p_restrict(p, a_dom), q):
        raise HypothesisFailure("join needs p restricted to dom(q) below q, and q at least as tall")
    m = p.height
    shared = [(o, s) for o in p.entries if o in a_dom for s in (0, 1)]
    payload = {i: frozenset(k for k in bits(q.entries[i[0]][i[1]]) if k >= m) for i in shared}
    entries = dict(q.entries)
    for o in sorted(p.entries.keys() - a_dom):
        words = []
        for s in (0, 1):
            got = set(bits(p.entries[o][s]))
            for k_idx, extra in payload.items():
                if _ilt(k_idx, (o, s)):
                    got |= extra
            words.append(word_from_bits(got, q.height))
        entries[o] = (words[0], words[1])
    r = PCondition(q.height, entries)
    assert p_leq(p, r) and p_leq(q, r) and p_restrict(r, a_dom) == q
    return r


def p_join_from_core(p1: PCondition, p2: PCondition) -> PCondition:
    """Join two conditions whose shared core is comparable, p1 on top.

    With C the common domain, needs p2 restricted to C below p1 restricted
    to C and p1 at least as tall; then the join with A = dom(p1) extends
    both.
    """
    core = p1.entries.keys() & p2.entries.keys()
    if p1.height < p2.height or not p_leq(p_restrict(p2, core), p_restrict(p1, core)):
        raise HypothesisFailure("core-ordered join needs p2 below p1 on the shared core and p1 at least as tall")
    return p_join(p2, p1)


def p_compatible_oracle(p: PCondition, q: PCondition, max_free_bits: int = 24) -> PCondition | None:
    """Exact bounded compatibility decision.

    Searches all conditions on dom(p) | dom(q) of height max(heights) whose
    words refine both inputs; any common extension restricted to that domain
    and truncated to that height is still one, so the search space is
    complete.  Returns the lexicographically least witness found, or None.
    Raises SearchTooLarge past the free-bit cap.
    """
    height = max(p.height, q.height)
    dom = sorted(set(p.entries) | set(q.entries))
    fixed: dict[tuple[Ordinal, int], str] = {}
    for o in dom:
        for s in (0, 1):
            wp = p.entries[o][s] if o in p.entries else ""
            wq = q.entries[o][s] if o in q.entries else ""
            lo, hi = (wp, wq) if len(wp) <= len(wq) else (wq, wp)
            if not hi.startswith(lo):
                return None  # the words themselves admit no common refinement
            fixed[(o, s)] = hi
    slots = [(o, s, k) for o in dom for s in (0, 1) for k in range(len(fixed[(o, s)]), height)]
    if len(slots) > max_free_bits:
        raise SearchTooLarge(f"{len(slots)} free bits exceed the {max_free_bits}-bit cap")
    for choice in itertools.product("01", repeat=len(slots)):
        words = {key: list(val) + ["0"] * (height - len(val)) for key, val in fixed.items()}
        for (o, s, k), ch in zip(slots, choice):
            words[(o, s)][k] = ch
        try:
            cand = PCondition(height, {o: ("".join(words[(o, 0)]), "".join(words[(o, 1)])) for o in dom})
        except ValueError:
            continue
        if p_leq(p, cand) and p_leq(q, cand):
            return cand
    return None


def p_extend(
    p: PCondition,
    target_height: int,
    new_ordinals: Iterable[Ordinal] = (),
    forced_bits: Iterable[tuple[Index, int]] = (),
) -> PCondition:
    """Minimal-style extension: zero-fill new columns, then force bits.

    New ordinals receive all-zero word pairs.  Each forced bit (i, k) with
    k in [height(p), target_height) is set at i and propagated to every
    domain index above i in the two-sided order, which keeps both the
    pairing containment and the extension clauses intact (bits are only
    ever added, so no conflict can arise).
    """
    if target_height < p.height:
        raise ValueError("target height may not shrink the condition")
    dom = set(p.entries) | set(new_ordinals)
    forced = sorted(forced_bits, key=lambda f: (f[0].ord, f[0].side, f[1]))
    for idx, k in forced:
        if not p.height <= k < target_height:
            raise InvalidBit(f"forced bit {k} must lie in [{p.height}, {target_height})")
        if idx.ord not in dom:
            raise UnknownIndex(f"forced index {idx} is outside the extension domain")
    grid = {
        (o, s): set(bits(p.entries[o][s])) if o in p.entries else set()
        for o in dom
        for s in (0, 1)
    }
    for idx, k in forced:
        src = (idx.ord, idx.side)
        grid[src].add(k)
        for tgt in grid:
            if _ilt(src, tgt):
                grid[tgt].add(k)
    entries = {
        o: (word_from_bits(grid[(o, 0)], target_height), word_from_bits(grid[(o, 1)], target_height))
        for o in sorted(dom)
    }
    out = PCondition(target_height, entries)
    assert p_leq(p, out)
    return out


def delta_system_refine(family: Sequence[PCondition]) -> tuple[list[PCondition], frozenset[Ordinal]]:
    """Pick an agreeing sunflower subfamily of one height.

    Keeps the plurality height, then tries the most frequent pairwise domain
    intersections (plus the empty set) as candidate cores; for each, members
    matching one core restriction are collected greedily under the rule that
    petals never overlap.  Every pair of the result unions via
    p_union_agreeing, and any finite subset has the iterated union as a
    common upper bound.
    """
    family = list(family)
    if not family:
        return [], frozenset()
    by_height = Counter(p.height for p in family)
    height = min(by_height, key=lambda h: (-by_height[h], h))
    group = [p for p in family if p.height == height]
    if len(group) == 1:
        return group, frozenset()
    doms = [frozenset(p.entries) for p in group]
    inter = Counter()
    for x in range(len(group)):
        for y in range(x + 1, len(group)):
            inter[doms[x] & doms[y]] += 1
    candidates = sorted(inter, key=lambda c: (-inter[c], len(c), tuple(sorted(c))))[:32]
    if frozenset() not in candidates:
        candidates.append(frozenset())
    best: list[PCondition] = []
    best_core: frozenset[Ordinal] = frozenset()
    for core in candidates:
        groups: dict[tuple, list[tuple[PCondition, frozenset[Ordinal]]]] = {}
        for p, d in zip(group, doms):
            if core <= d:
                sig = tuple((o, p.entries[o]) for o in sorted(core))
                groups.setdefault(sig, []).append((p, d))
        for members in groups.values():
            chosen: list[PCondition] = []
            used: set[Ordinal] = set()
            for p, d in members:
                petals = d - core
                if petals & used:
                    continue
                used |= petals
                chosen.append(p)
            if len(chosen) > len(best):
                best, best_core = chosen, core
    return best, best_core
