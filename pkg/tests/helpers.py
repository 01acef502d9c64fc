"""Shared generators and enumerators for the test suite."""

from __future__ import annotations

import itertools
import random

from gapforge import (
    GapFragment,
    Index,
    Ladder,
    Ordinal,
    PCondition,
    QCondition,
    QContext,
    SPartition,
    fin,
    p_extend,
    word_from_bits,
)


def word_pairs(height: int) -> list[tuple[str, str]]:
    """All valid (low, high) word pairs of the given length."""
    out = []
    for hi in itertools.product("01", repeat=height):
        hi_word = "".join(hi)
        hi_bits = [k for k, ch in enumerate(hi_word) if ch == "1"]
        for take in itertools.chain.from_iterable(
            itertools.combinations(hi_bits, n) for n in range(len(hi_bits) + 1)
        ):
            out.append((word_from_bits(take, height), hi_word))
    return out


def enumerate_conditions(ordinals, heights) -> list[PCondition]:
    """Every condition with domain inside `ordinals` and height in `heights`."""
    ordinals = sorted(ordinals)
    out = []
    for height in heights:
        pairs = word_pairs(height)
        for size in range(len(ordinals) + 1):
            for dom in itertools.combinations(ordinals, size):
                for assignment in itertools.product(pairs, repeat=size):
                    out.append(PCondition(height, dict(zip(dom, assignment))))
    return out


def random_word_pair(rng: random.Random, height: int) -> tuple[str, str]:
    hi = [k for k in range(height) if rng.random() < 0.5]
    lo = [k for k in hi if rng.random() < 0.5]
    return word_from_bits(lo, height), word_from_bits(hi, height)


def random_pcondition(rng: random.Random, pool, height: int, max_dom: int = 4) -> PCondition:
    dom = rng.sample(sorted(pool), rng.randint(0, min(max_dom, len(pool))))
    return PCondition(height, {o: random_word_pair(rng, height) for o in dom})


def random_extension(rng: random.Random, p: PCondition, pool, extra_height: int = 2) -> PCondition:
    """A random proper-or-equal extension of p built through p_extend."""
    target = p.height + rng.randint(0, extra_height)
    fresh = [o for o in pool if o not in p.entries]
    new = rng.sample(fresh, rng.randint(0, min(2, len(fresh))))
    dom = sorted(set(p.entries) | set(new))
    forced = []
    for _ in range(rng.randint(0, 3)):
        if target == p.height or not dom:
            break
        o = rng.choice(dom)
        forced.append((Index(o, rng.randint(0, 1)), rng.randint(p.height, target - 1)))
    return p_extend(p, target, new, forced)


def random_fragment(rng: random.Random, universe: int, pool, n_idx: int) -> GapFragment:
    idx = sorted(rng.sample(sorted(pool), n_idx))
    a = {o: frozenset(v for v in range(universe) if rng.random() < 0.45) for o in idx}
    b = {o: frozenset(v for v in range(universe) if rng.random() < 0.55) for o in idx}
    return GapFragment(universe, a, b)


def small_context(rng: random.Random, universe: int = 6) -> QContext:
    """A small bound context with limits inside the index set."""
    pool = [fin(1), fin(3), Ordinal(1, 0), Ordinal(1, 2), Ordinal(2, 0), Ordinal(2, 1)]
    n_idx = rng.randint(2, 4)
    frag = random_fragment(rng, universe, pool, n_idx)
    limits = frozenset({Ordinal(1, 0), Ordinal(2, 0)})
    part = SPartition(S=limits, T=frozenset(), D=limits)
    return QContext(frag, Ladder.canonical(), part)


def conditions_in(ctx: QContext, max_w: int = 2, max_s: int = 2) -> list[QCondition]:
    """Every condition over the context with bounded component sizes."""
    idx = sorted(ctx.g.a)
    s_pool = sorted(ctx.part.S)
    out = []
    for wn in range(min(max_w, len(idx)) + 1):
        for w in itertools.combinations(idx, wn):
            for sn in range(min(max_s, len(s_pool)) + 1):
                for s in itertools.combinations(s_pool, sn):
                    out.append(QCondition(frozenset(w), frozenset(s)))
    return out
