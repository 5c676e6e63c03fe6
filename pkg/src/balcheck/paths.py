"""Constructive move sequences between profiles in restricted regimes.

Two regimes are mechanized.  In the *tops* regime every move is either a
paired transposition or a reordering below one individual's top, and every
profile along the way must have non-unanimous tops.  In the *top-2* regime
moves are paired transpositions or reorderings that keep one individual's
top-2 set fixed, and every profile must keep at least three alternatives
spread across the individuals' top two ranks.  Each builder drives an
arbitrary start profile to a fixed canonical target; a rule that ignores
information below the regime's statistic and is invariant under paired
transpositions is therefore constant across the regime's subdomain, which
is exactly what a validated path certifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .prefs import (
    Ordering,
    Profile,
    TranspositionPair,
    apply_pair,
    default_labels,
    top_k_set,
    tops_set,
)


class Regime(Enum):
    TOPS = "tops"
    TOP2 = "top2"


@dataclass(frozen=True)
class PairMove:
    pair: TranspositionPair


@dataclass(frozen=True)
class TopPreservingReorder:
    """Replace one individual's ordering without changing their top."""

    individual: int
    ordering: Ordering


@dataclass(frozen=True)
class Top2PreservingReorder:
    """Replace one individual's ordering without changing their top-2 set."""

    individual: int
    ordering: Ordering


Move = PairMove | TopPreservingReorder | Top2PreservingReorder


@dataclass(frozen=True)
class PathStep:
    move: Move
    profile: Profile


@dataclass(frozen=True)
class ProfilePath:
    start: Profile
    steps: tuple[PathStep, ...]
    regime: Regime

    @property
    def final(self) -> Profile:
        return self.steps[-1].profile if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class PathCheck:
    """Validation outcome; falsy with the first offending step and reason."""

    ok: bool
    step: int | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_non_unanimous(profile: Profile) -> bool:
    """True when at least two distinct alternatives are ranked on top."""
    return len(tops_set(profile)) >= 2


def has_spread_top2(profile: Profile) -> bool:
    """True when at least three alternatives occur in the top two ranks
    over all individuals (equivalently, the top-2 sets are not all equal)."""
    if profile.m < 3:
        raise ValueError("top-2 spread needs at least three alternatives")
    union: set[int] = set()
    for ordering in profile.orderings:
        union.update(ordering[:2])
        if len(union) >= 3:
            return True
    return False


_REGIME_PREDICATE = {Regime.TOPS: is_non_unanimous, Regime.TOP2: has_spread_top2}
_REGIME_REORDER = {Regime.TOPS: TopPreservingReorder, Regime.TOP2: Top2PreservingReorder}


def _reorder_keeps_statistic(regime: Regime, old: Ordering, new: Ordering) -> bool:
    if regime is Regime.TOPS:
        return old[0] == new[0]
    return top_k_set(old, 2) == top_k_set(new, 2)


def validate_path(path: ProfilePath) -> PathCheck:
    """Recheck every step's legality, chaining, and subdomain membership."""
    predicate = _REGIME_PREDICATE[path.regime]
    reorder_kind = _REGIME_REORDER[path.regime]
    if not predicate(path.start):
        return PathCheck(False, 0, "start profile outside the regime's subdomain")
    previous = path.start
    for number, step in enumerate(path.steps, start=1):
        move = step.move
        if isinstance(move, PairMove):
            if not move.pair.is_valid_at(previous):
                return PathCheck(False, number, "transposition pair invalid at predecessor")
            expected = apply_pair(previous, move.pair)
        elif isinstance(move, (TopPreservingReorder, Top2PreservingReorder)):
            if not isinstance(move, reorder_kind):
                return PathCheck(False, number, f"{type(move).__name__} not allowed in {path.regime.value} regime")
            if not 1 <= move.individual <= previous.n:
                return PathCheck(False, number, f"individual {move.individual} out of range")
            old = previous.ordering(move.individual)
            if tuple(sorted(move.ordering)) != tuple(range(previous.m)):
                return PathCheck(False, number, "reorder target is not a permutation")
            if not _reorder_keeps_statistic(path.regime, old, move.ordering):
                return PathCheck(False, number, "reorder changes the protected statistic")
            expected = previous.with_ordering(move.individual, move.ordering)
        else:
            return PathCheck(False, number, f"unknown move type {type(move).__name__}")
        if step.profile != expected:
            return PathCheck(False, number, "recorded profile does not match the move result")
        if not predicate(step.profile):
            return PathCheck(False, number, "profile leaves the regime's subdomain")
        previous = step.profile
    return PathCheck(True)


# ---------------------------------------------------------------------------
# Canonical targets


def tops_target(m: int, n: int, a: int = 0, b: int = 1) -> Profile:
    """Canonical destination with tops (a, b, b, ..., b): individual 1 ranks
    ``a`` first, everyone else ranks ``b`` first, remaining ids ascending."""
    if a == b:
        raise ValueError("the two anchor alternatives must differ")
    for alt in (a, b):
        if not 0 <= alt < m:
            raise ValueError(f"alternative id {alt} out of range 0..{m - 1}")
    first = (a, *sorted(set(range(m)) - {a}))
    rest = (b, *sorted(set(range(m)) - {b}))
    return Profile((first,) + (rest,) * (n - 1))


def top2_target(m: int, n: int) -> Profile:
    """Canonical destination with id 2 on every top, id 0 second for
    individual 1 and id 1 second for everyone else, rest ascending."""
    if m < 4 or n < 3:
        raise ValueError("top-2 target needs m >= 4 and n >= 3")
    c, a, b = 2, 0, 1
    first = (c, a, *sorted(set(range(m)) - {c, a}))
    rest = (c, b, *sorted(set(range(m)) - {c, b}))
    return Profile((first,) + (rest,) * (n - 1))


# ---------------------------------------------------------------------------
# Ordering edits (pure helpers; legality is asserted by the builder)


def _move_to_rank(ordering: Ordering, alt: int, rank: int) -> Ordering:
    rest = [x for x in ordering if x != alt]
    rest.insert(rank - 1, alt)
    return tuple(rest)


def _move_above(ordering: Ordering, alt: int, anchor: int) -> Ordering:
    rest = [x for x in ordering if x != alt]
    rest.insert(rest.index(anchor), alt)
    return tuple(rest)


def _front_block(ordering: Ordering, block: Sequence[int]) -> Ordering:
    rest = [x for x in ordering if x not in set(block)]
    return tuple(block) + tuple(rest)


class _Builder:
    """Accumulates validated steps; any illegal step is a builder defect."""

    def __init__(self, start: Profile, regime: Regime, budget: int) -> None:
        if not _REGIME_PREDICATE[regime](start):
            raise ValueError(f"start profile outside the {regime.value} regime's subdomain")
        self.start = start
        self.current = start
        self.regime = regime
        self.steps: list[PathStep] = []
        self.budget = budget

    def _push(self, move: Move, profile: Profile) -> None:
        if not _REGIME_PREDICATE[self.regime](profile):
            raise RuntimeError(f"builder defect: left the {self.regime.value} subdomain")
        self.steps.append(PathStep(move, profile))
        self.current = profile
        if len(self.steps) > self.budget:
            raise RuntimeError(f"builder defect: step budget {self.budget} exceeded")

    def reorder(self, individual: int, ordering: Ordering) -> None:
        old = self.current.ordering(individual)
        if tuple(ordering) == old:
            return
        if not _reorder_keeps_statistic(self.regime, old, ordering):
            raise RuntimeError("builder defect: reorder changes the protected statistic")
        move = _REGIME_REORDER[self.regime](individual, tuple(ordering))
        self._push(move, self.current.with_ordering(individual, ordering))

    def pair(self, x: int, y: int, i: int, j: int) -> None:
        pair = TranspositionPair(x, y, i, j)
        self._push(PairMove(pair), apply_pair(self.current, pair))

    def done(self) -> ProfilePath:
        return ProfilePath(self.start, tuple(self.steps), self.regime)


def _default_budget(m: int, n: int) -> int:
    import math

    return 10 * m * n * math.factorial(m)


# ---------------------------------------------------------------------------
# Tops regime


def build_tops_path(
    u: Profile, a: int = 0, b: int = 1, *, budget: int | None = None
) -> ProfilePath:
    """Drive a non-unanimous profile to :func:`tops_target` using only
    below-top reorders and paired transpositions, never leaving the
    non-unanimous subdomain.  Needs m >= 3 and n >= 3."""
    m, n = u.m, u.n
    if m < 3:
        raise ValueError("the tops construction needs at least three alternatives")
    if n < 3:
        raise ValueError("the tops construction needs at least three individuals")
    if a == b:
        raise ValueError("the two anchor alternatives must differ")
    if not is_non_unanimous(u):
        raise ValueError("start profile has a unanimous top")
    target = tops_target(m, n, a, b)
    builder = _Builder(u, Regime.TOPS, budget or _default_budget(m, n))

    def tops() -> list[int]:
        return [o[0] for o in builder.current.orderings]

    def settled() -> bool:
        current = tops()
        return current[0] == a and all(t == b for t in current[1:])

    while not settled():
        current = builder.current
        top_list = tops()
        present = set(top_list)
        if present == {a, b}:
            if top_list[0] == b:
                # Flip individual 1 to `a` against the lowest `a`-top holder.
                i = next(k for k in range(2, n + 1) if top_list[k - 1] == a)
                builder.reorder(1, _move_to_rank(current.ordering(1), a, 2))
                builder.reorder(i, _move_to_rank(builder.current.ordering(i), b, 2))
                builder.pair(a, b, i, 1)
            else:
                # Convert one later `a`-top to `b` via a third alternative.
                j = next(k for k in range(2, n + 1) if top_list[k - 1] == a)
                i = next(k for k in range(1, n + 1) if top_list[k - 1] == b)
                c = min(set(range(m)) - {a, b})
                builder.reorder(j, _move_to_rank(current.ordering(j), c, 2))
                builder.reorder(i, _move_above(builder.current.ordering(i), c, a))
                builder.pair(a, c, j, i)
                mid = builder.current
                builder.reorder(1, _front_block(mid.ordering(1), (a, b, c)))
                builder.reorder(j, _move_to_rank(builder.current.ordering(j), b, 2))
                builder.pair(b, c, 1, j)
        elif a in present and b in present:
            # Strip one top that is neither anchor.
            i = next(k for k in range(1, n + 1) if top_list[k - 1] not in (a, b))
            c = top_list[i - 1]
            j = next(k for k in range(1, n + 1) if top_list[k - 1] == a)
            builder.reorder(i, _move_to_rank(current.ordering(i), b, 2))
            builder.reorder(j, _move_above(builder.current.ordering(j), b, c))
            builder.pair(b, c, j, i)
        elif a in present or b in present:
            # Introduce the missing anchor on some non-anchor top.
            have = a if a in present else b
            missing = b if a in present else a
            i = next(k for k in range(1, n + 1) if top_list[k - 1] == have)
            j = next(k for k in range(1, n + 1) if top_list[k - 1] not in (a, b))
            c = top_list[j - 1]
            builder.reorder(j, _move_to_rank(current.ordering(j), missing, 2))
            builder.reorder(i, _move_above(builder.current.ordering(i), missing, c))
            builder.pair(missing, c, i, j)
        else:
            # Neither anchor on top anywhere: plant `a` on the lowest top.
            i = 1
            c = top_list[0]
            j = next(k for k in range(2, n + 1) if top_list[k - 1] != c)
            builder.reorder(i, _move_to_rank(current.ordering(i), a, 2))
            builder.reorder(j, _move_above(builder.current.ordering(j), a, c))
            builder.pair(a, c, j, i)
    for individual in range(1, n + 1):
        builder.reorder(individual, target.ordering(individual))
    return builder.done()


# ---------------------------------------------------------------------------
# Top-2 regime


def _top2(profile: Profile, individual: int) -> frozenset[int]:
    return top_k_set(profile.ordering(individual), 2)


def build_top2_path(u: Profile, *, budget: int | None = None) -> ProfilePath:
    """Drive a profile with spread top-2 ranks to :func:`top2_target` using
    only top-2-preserving reorders and paired transpositions, staying inside
    the spread subdomain.  Needs m >= 4 and n >= 3."""
    m, n = u.m, u.n
    if m < 4:
        raise ValueError("the top-2 construction needs at least four alternatives")
    if n < 3:
        raise ValueError("the top-2 construction needs at least three individuals")
    if not has_spread_top2(u):
        raise ValueError("start profile has identical top-2 sets everywhere")
    c = 2
    builder = _Builder(u, Regime.TOP2, budget or _default_budget(m, n))

    def lacking() -> list[int]:
        return [k for k in range(1, n + 1) if c not in _top2(builder.current, k)]

    while True:
        missing = lacking()
        if not missing:
            break
        holders = [k for k in range(1, n + 1) if k not in missing]
        # Normalize: the common alternative sits on top for every holder.
        for g in holders:
            builder.reorder(g, _move_to_rank(builder.current.ordering(g), c, 1))
        current = builder.current
        if not holders:
            # Nobody holds c yet: spread guarantees a second top-2 pattern.
            x, y = current.ordering(1)[:2]
            h2 = next(
                k for k in range(2, n + 1) if not _top2(current, k) <= {x, y}
            )
            z = min(_top2(current, h2) - {x, y})
            w = next(iter(_top2(current, h2) - {z}))
            builder.reorder(h2, _front_block(current.ordering(h2), (w, z, c)))
            builder.reorder(1, _front_block(builder.current.ordering(1), (x, y, c, z)))
            builder.pair(c, z, 1, h2)
            continue
        seconds = {g: current.ordering(g)[1] for g in holders}
        spread_pool = set().union(*(_top2(current, h) for h in missing))
        hook = next((g for g in holders if seconds[g] in spread_pool), None)
        if hook is not None:
            # The common alternative can enter one more top-2 directly.
            x = seconds[hook]
            h = next(k for k in missing if x in _top2(current, k))
            t = next(iter(_top2(current, h) - {x}))
            builder.reorder(h, _front_block(current.ordering(h), (t, x, c)))
            builder.pair(c, x, hook, h)
            continue
        shared = None
        seen: dict[int, int] = {}
        for g in holders:
            if seconds[g] in seen:
                shared = (seen[seconds[g]], g)
                break
            seen[seconds[g]] = g
        h = missing[0]
        y = current.ordering(h)[1]
        if shared is not None:
            # Two holders agree on a second; trade it into h's top-2.
            _, g2 = shared
            t = seconds[g2]
            builder.reorder(g2, _front_block(current.ordering(g2), (c, t, y)))
            builder.reorder(h, _front_block(builder.current.ordering(h), (*current.ordering(h)[:2], t)))
            builder.pair(t, y, g2, h)
            continue
        if len(holders) >= 2:
            g1, g2 = holders[0], holders[1]
            s, t = seconds[g1], seconds[g2]
            builder.reorder(g1, _front_block(current.ordering(g1), (c, s, t, y)))
            builder.reorder(h, _front_block(builder.current.ordering(h), (*current.ordering(h)[:2], t)))
            builder.pair(t, y, g1, h)
            continue
        g = holders[0]
        s = seconds[g]
        patterns = {_top2(current, k) for k in missing}
        if len(patterns) > 1:
            h1 = missing[0]
            base = _top2(current, h1)
            h2 = next(k for k in missing if _top2(current, k) != base)
            z = min(_top2(current, h2) - base)
            w = next(iter(_top2(current, h2) - {z}))
            builder.reorder(h2, _front_block(current.ordering(h2), (w, z, c)))
            builder.reorder(h1, _front_block(builder.current.ordering(h1), (*current.ordering(h1)[:2], c, z)))
            builder.pair(c, z, h1, h2)
        else:
            h1 = missing[0]
            x, y1 = current.ordering(h1)[:2]
            builder.reorder(g, _front_block(current.ordering(g), (c, s, y1)))
            builder.reorder(h1, _front_block(builder.current.ordering(h1), (x, y1, s)))
            builder.pair(s, y1, g, h1)
    # Everyone now carries the common alternative in the top two ranks.
    for individual in range(1, n + 1):
        builder.reorder(individual, _move_to_rank(builder.current.ordering(individual), c, 1))
    _lift_reduced_tops_path(builder, c)
    return builder.done()


def _lift_reduced_tops_path(builder: _Builder, c: int) -> None:
    """Run the tops construction on the universe without ``c`` (everyone has
    ``c`` on top, so ranks 2..m form a reduced profile with non-unanimous
    tops) and replay each reduced move on the full profiles."""
    current = builder.current
    m = current.m
    originals = sorted(set(range(m)) - {c})
    to_original = {reduced: orig for reduced, orig in enumerate(originals)}
    reduced_rows = tuple(
        tuple(originals.index(alt) for alt in ordering if alt != c)
        for ordering in current.orderings
    )
    reduced = Profile(reduced_rows, default_labels(m - 1))
    reduced_path = build_tops_path(reduced, 0, 1, budget=builder.budget)
    for step in reduced_path.steps:
        move = step.move
        if isinstance(move, PairMove):
            pair = move.pair
            builder.pair(to_original[pair.x], to_original[pair.y], pair.i, pair.j)
        else:
            lifted = (c, *(to_original[alt] for alt in move.ordering))
            builder.reorder(move.individual, lifted)
