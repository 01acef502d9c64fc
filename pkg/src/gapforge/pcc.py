"""Finite-scale laboratory for the polarized chain-condition mechanism.

Two families of pair conditions are indexed along increasing ordinal lists;
the lab builds their compatibility matrix, derives the meet/join profiles
of their upper tower sets, hunts for an order-respecting compatible pair
through a numeric witness, and searches for large order-respecting all-true
rectangles.  No stationarity is modeled: "large" means large within the
finite index lists, nothing more.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .gaps import GapFragment
from .ordinals import Ladder, Ordinal, SPartition
from .poset_q import QCondition, QContext, q_compatible, q_restrict


@dataclass(frozen=True)
class CompatMatrix:
    """Pairwise compatibility of two indexed condition families.

    cells[x][y] records whether rows[x] and cols[y] admit a common
    extension.  Matrices loaded from CSV carry empty condition tuples.
    """

    row_index: tuple[Ordinal, ...]
    col_index: tuple[Ordinal, ...]
    cells: tuple[tuple[bool, ...], ...]
    rows: tuple[QCondition, ...] = ()
    cols: tuple[QCondition, ...] = ()

    def to_csv(self) -> str:
        lines = [",".join([""] + [o.key() for o in self.col_index])]
        for x, o in enumerate(self.row_index):
            lines.append(",".join([o.key()] + ["1" if v else "0" for v in self.cells[x]]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> CompatMatrix:
        lines = [ln for ln in text.split("\n") if ln]
        if not lines:
            raise ValueError("empty matrix file")
        header = lines[0].split(",")
        col_index = tuple(Ordinal.from_key(k) for k in header[1:])
        row_index = []
        cells = []
        for ln in lines[1:]:
            parts = ln.split(",")
            if len(parts) != len(col_index) + 1:
                raise ValueError("ragged matrix row")
            row_index.append(Ordinal.from_key(parts[0]))
            if any(v not in ("0", "1") for v in parts[1:]):
                raise ValueError("matrix cells must be 0 or 1")
            cells.append(tuple(v == "1" for v in parts[1:]))
        return cls(tuple(row_index), col_index, tuple(cells))


def build_compat_matrix(
    ctx: QContext,
    fam1: Sequence[tuple[Ordinal, QCondition]],
    fam2: Sequence[tuple[Ordinal, QCondition]],
) -> CompatMatrix:
    """Evaluate compatibility on all pairs of the two indexed families."""
    for fam in (fam1, fam2):
        idx = [o for o, _ in fam]
        if any(not a < b for a, b in zip(idx, idx[1:])):
            raise ValueError("family indices must strictly increase")
    cells = tuple(
        tuple(q_compatible(ctx, p, q) is not None for _, q in fam2) for _, p in fam1
    )
    return CompatMatrix(
        tuple(o for o, _ in fam1),
        tuple(o for o, _ in fam2),
        cells,
        tuple(p for _, p in fam1),
        tuple(q for _, q in fam2),
    )


@dataclass(frozen=True)
class PccInstance:
    """Two condition families in the split shape the pair-finder exploits.

    Working hypotheses, validated on construction: below gamma every
    condition restricts to one shared core; each condition's domain (w and
    s together) avoids [gamma, its own index); along the merged index order
    the part of each domain at or beyond gamma stays below the next index,
    so the upper domains are strictly increasing and separated; upper s
    members sit above their own index with rung counts below them strictly
    bounded by k.  Under this shape a numeric witness n >= k certifies
    compatibility of an order-respecting pair.
    """

    ctx: QContext
    gamma: Ordinal
    t1: tuple[Ordinal, ...]
    t2: tuple[Ordinal, ...]
    fam1: dict[Ordinal, QCondition]
    fam2: dict[Ordinal, QCondition]
    k: int

    def __post_init__(self):
        for t, fam in ((self.t1, self.fam1), (self.t2, self.fam2)):
            if any(not a < b for a, b in zip(t, t[1:])):
                raise ValueError("index lists must strictly increase")
            if set(t) != set(fam):
                raise ValueError("family keys must match the index list")
            if any(d in self.ctx.part.S for d in t):
                raise ValueError("family indices must avoid the designated set S")
        if set(self.t1) & set(self.t2):
            raise ValueError("the two index lists must be disjoint")
        merged = sorted(
            [(d, self.fam1[d]) for d in self.t1] + [(d, self.fam2[d]) for d in self.t2]
        )
        core = None
        for pos, (delta, p) in enumerate(merged):
            self.ctx.check_condition(p)
            dom = p.w | p.s
            if any(x < delta and not x < self.gamma for x in dom):
                raise ValueError(f"domain of the condition at {delta} meets [gamma, {delta})")
            low = q_restrict(p, self.gamma)
            if core is None:
                core = low
            elif low != core:
                raise ValueError("all conditions must share one core below gamma")
            upper = [x for x in dom if not x < self.gamma]
            if pos + 1 < len(merged):
                fence = merged[pos + 1][0]
                if any(not x < fence for x in upper):
                    raise ValueError(f"upper domain at {delta} must stay below the next index {fence}")
            for alpha in p.s:
                if not alpha < self.gamma:
                    if not delta < alpha:
                        raise ValueError(f"upper s member {alpha} must lie above its index {delta}")
                    if not self.ctx.ladder.count_below(alpha, delta) < self.k:
                        raise ValueError(f"k={self.k} does not bound the rung count of {alpha} below {delta}")


def pcc_ab_profiles(
    inst: PccInstance,
) -> tuple[dict[Ordinal, frozenset[int]], dict[Ordinal, frozenset[int]]]:
    """Per index: meet of family-1 upper a-sets, join of family-2 upper b-sets.

    The empty meet is the full universe, the empty join is empty.
    """
    universe = frozenset(range(inst.ctx.g.universe))
    meets: dict[Ordinal, frozenset[int]] = {}
    for delta in inst.t1:
        acc = universe
        for i in inst.fam1[delta].w:
            if not i < inst.gamma:
                acc = acc & inst.ctx.g.a[i]
        meets[delta] = acc
    joins: dict[Ordinal, frozenset[int]] = {}
    for delta in inst.t2:
        acc: frozenset[int] = frozenset()
        for j in inst.fam2[delta].w:
            if not j < inst.gamma:
                acc = acc | inst.ctx.g.b[j]
        joins[delta] = acc
    return meets, joins


def find_compatible_pair(inst: PccInstance) -> tuple[Ordinal, Ordinal, int] | None:
    """First order-respecting pair carrying a witness n >= k, or None.

    Scans index pairs delta1 < delta2 in increasing order; a witness is the
    least n >= k in the meet profile of delta1 minus the join profile of
    delta2.  On success the pair is asserted compatible, which the split
    shape of the instance guarantees.
    """
    meets, joins = pcc_ab_profiles(inst)
    for d1 in inst.t1:
        for d2 in inst.t2:
            if not d1 < d2:
                continue
            witnesses = sorted(n for n in meets[d1] - joins[d2] if n >= inst.k)
            if witnesses:
                assert q_compatible(inst.ctx, inst.fam1[d1], inst.fam2[d2]) is not None
                return d1, d2, witnesses[0]
    return None


def verify_rectangle(m: CompatMatrix, rows: Sequence[int], cols: Sequence[int]) -> bool:
    """Cell-by-cell check: every row-below-column pair must be compatible."""
    return all(
        m.cells[x][y]
        for x in rows
        for y in cols
        if m.row_index[x] < m.col_index[y]
    )


def _violations(m: CompatMatrix, rows: set[int], cols: set[int]) -> list[tuple[int, int]]:
    return [
        (x, y)
        for x in sorted(rows)
        for y in sorted(cols)
        if m.row_index[x] < m.col_index[y] and not m.cells[x][y]
    ]


def _exact_rectangle(m: CompatMatrix) -> tuple[tuple[int, ...], tuple[int, ...]]:
    nr, nc = len(m.row_index), len(m.col_index)
    bad = [
        {x for x in range(nr) if m.row_index[x] < m.col_index[y] and not m.cells[x][y]}
        for y in range(nc)
    ]
    best: tuple[tuple[int, ...], tuple[int, ...]] = ((), ())
    best_score = -1
    for mask in range(1 << nr):
        rows = {x for x in range(nr) if mask >> x & 1}
        cols = [y for y in range(nc) if not rows & bad[y]]
        score = len(rows) + len(cols)
        if score > best_score:
            best = (tuple(sorted(rows)), tuple(cols))
            best_score = score
    return best


def _greedy_rectangle(m: CompatMatrix, budget: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    rows = set(range(len(m.row_index)))
    cols = set(range(len(m.col_index)))
    for _ in range(budget):
        viol = _violations(m, rows, cols)
        if not viol:
            break
        count: Counter = Counter()
        for x, y in viol:
            count[("row", x)] += 1
            count[("col", y)] += 1
        kind, pos = max(sorted(count), key=lambda key: count[key])
        (rows if kind == "row" else cols).discard(pos)
    # if the budget ran out first, clear the leftovers by dropping rows
    for x, _ in _violations(m, rows, cols):
        rows.discard(x)
    # one augmentation pass: re-admit whatever fits now
    for x in range(len(m.row_index)):
        if x not in rows and all(
            m.cells[x][y] for y in cols if m.row_index[x] < m.col_index[y]
        ):
            rows.add(x)
    for y in range(len(m.col_index)):
        if y not in cols and all(
            m.cells[x][y] for x in rows if m.row_index[x] < m.col_index[y]
        ):
            cols.add(y)
    return tuple(sorted(rows)), tuple(sorted(cols))


def max_order_rectangle(
    m: CompatMatrix, budget: int = 4096
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Large row/column subsets whose order-respecting cells are all true.

    Exhaustive over row subsets while 2^rows fits the budget (optimal for a
    fixed row set: every admissible column joins for free), greedy deletion
    plus one augmentation pass beyond that.  The result is verified cell by
    cell before being returned; positions index into the matrix.
    """
    if 1 << len(m.row_index) <= budget:
        rows, cols = _exact_rectangle(m)
    else:
        rows, cols = _greedy_rectangle(m, budget)
    assert verify_rectangle(m, rows, cols)
    return rows, cols


def generate_pcc_instance(
    seed: int, t1_size: int = 30, t2_size: int = 30, universe: int = 32
) -> PccInstance:
    """Seeded instance in the split shape, rich enough for the pair hunt.

    Indices alternate between the two families along a chain of regions;
    each region contributes upper w members on both sides of its own limit
    and usually that limit as an upper s member.  Family-1 a-sets mostly
    carry a shared high pool (a few lean ones do not), family-2 b-sets stay
    low, so witnesses beyond k exist for most order-respecting pairs while
    some cells still fail.
    """
    if universe < 16:
        raise ValueError("the generator needs a universe of at least 16")
    rng = random.Random(seed)
    gamma = Ordinal(2, 0)
    core_w = frozenset(Ordinal(0, r) for r in sorted(rng.sample(range(8), 3)))
    core_s = frozenset({Ordinal(1, 0)})
    pool = range(universe - 8, universe)
    low = range(universe - 8)

    kinds: list[int] = []
    left1, left2 = t1_size, t2_size
    while left1 or left2:
        if left1 and (not left2 or len(kinds) % 2 == 0):
            kinds.append(1)
            left1 -= 1
        else:
            kinds.append(2)
            left2 -= 1

    t1: list[Ordinal] = []
    t2: list[Ordinal] = []
    fam1: dict[Ordinal, QCondition] = {}
    fam2: dict[Ordinal, QCondition] = {}
    limits = set(core_s)
    a_map: dict[Ordinal, frozenset[int]] = {}
    b_map: dict[Ordinal, frozenset[int]] = {}
    counts: list[int] = []

    def random_set(space, prob) -> frozenset[int]:
        return frozenset(v for v in space if rng.random() < prob)

    for o in core_w:
        a_map[o] = random_set(range(universe), 0.4)
        b_map[o] = random_set(range(universe), 0.6)

    for m, kind in enumerate(kinds):
        base = 3 * (m + 1)
        delta = Ordinal(base, rng.randint(1, 6))
        limit = Ordinal(base + 1, 0)
        limits.add(limit)
        lowers = {Ordinal(base, delta.r + 1 + t) for t in range(rng.randint(1, 2))}
        uppers = {Ordinal(base + 2, 1 + t) for t in range(rng.randint(1, 2))}
        w_extra = lowers | uppers
        s_extra = frozenset({limit}) if rng.random() < 0.8 else frozenset()
        if s_extra:
            counts.append(delta.r)  # rungs of c_limit below delta
        lean = kind == 1 and rng.random() < 0.3
        for o in sorted(w_extra):
            if kind == 1:
                got = random_set(low, 0.4)
                if not lean:
                    got |= frozenset(pool) - frozenset(rng.sample(pool, rng.randint(0, 1)))
                a_map[o] = got
                b_map[o] = frozenset(got | random_set(range(universe), 0.3))
            else:
                a_map[o] = random_set(range(universe), 0.3)
                b_map[o] = random_set(low, 0.5) | {rng.choice(list(low))}
        cond = QCondition(frozenset(core_w | w_extra), frozenset(core_s | s_extra))
        if kind == 1:
            t1.append(delta)
            fam1[delta] = cond
        else:
            t2.append(delta)
            fam2[delta] = cond

    k = max(counts, default=-1) + 1
    part = SPartition(S=frozenset(limits), T=frozenset(), D=frozenset(limits))
    frag = GapFragment(universe, a_map, b_map)
    ctx = QContext(frag, Ladder.canonical(), part)
    return PccInstance(ctx, gamma, tuple(t1), tuple(t2), fam1, fam2, k)
