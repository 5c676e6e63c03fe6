"""Exhaustive and sampled property checks over the profile space.

The checks decide balance under paired transpositions, tops-only and
top-k-only dependence, and per-individual effectiveness.  Exhaustive scans
are deterministic: the lexicographically first violation is always the one
reported, independent of how the scan is partitioned across workers.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .prefs import (
    DEFAULT_PROFILE_CAP,
    CapExceededError,
    Profile,
    TranspositionPair,
    apply_pair,
    default_labels,
    enumerate_orderings,
    enumerate_profiles,
    profile_count,
    profile_from_index,
    valid_pairs,
)
from .rules import Rule, evaluate, pareto_set, validate_rule_for


class Status(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PairWitness:
    """A move that changes the choice set: apply ``pair`` at ``profile``."""

    profile: Profile
    pair: TranspositionPair
    before: frozenset[int]
    after: frozenset[int]


@dataclass(frozen=True)
class TwinWitness:
    """Two profiles agreeing on the grouped statistic but not on the outcome."""

    profile: Profile
    other: Profile
    before: frozenset[int]
    after: frozenset[int]


@dataclass(frozen=True)
class Verdict:
    status: Status
    searched: int
    witness: PairWitness | TwinWitness | None = None

    def __post_init__(self) -> None:
        if (self.status is Status.FAILS) != (self.witness is not None):
            raise ValueError("a failing verdict carries a witness, a passing one does not")

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def failed(self) -> bool:
        return self.status is Status.FAILS


def _require_mode(trials: int | None, seed: int | None) -> bool:
    """True for sampled mode; both arguments are mandatory there."""
    if trials is None and seed is None:
        return False
    if trials is None or seed is None:
        raise ValueError("sampled mode needs both seed and trials; no hidden defaults")
    if trials < 1:
        raise ValueError("trials must be positive")
    return True


def _cached_evaluator(rule: Rule):
    cache: dict[tuple, frozenset[int]] = {}

    def run(profile: Profile) -> frozenset[int]:
        key = profile.orderings
        found = cache.get(key)
        if found is None:
            found = cache[key] = evaluate(rule, profile)
        return found

    return run


def _balance_partition(
    rule: Rule, m: int, n: int, worker: int, workers: int, cap: int | None
) -> tuple[int, tuple[int, int] | None]:
    """Scan one residue class of profile indices; return move count and the
    first hit as (profile index, position within that profile's move list)."""
    run = _cached_evaluator(rule)
    moves = 0
    index = worker
    for profile in enumerate_profiles(m, n, cap=cap, worker=worker, workers=workers):
        before = run(profile)
        for position, pair in enumerate(valid_pairs(profile)):
            moves += 1
            if run(apply_pair(profile, pair)) != before:
                return moves, (index, position)
        index += workers
    return moves, None


def _moves_before(m: int, n: int, hit: tuple[int, int]) -> int:
    """Serial-order move count up to and including a hit, counted without
    evaluating the rule (keeps ``searched`` identical for every worker split)."""
    profile_index, position = hit
    total = 0
    for index in range(profile_index):
        total += len(valid_pairs(profile_from_index(m, n, index)))
    return total + position + 1


def _pair_witness(rule: Rule, profile: Profile, pair: TranspositionPair) -> PairWitness:
    before = evaluate(rule, profile)
    after = evaluate(rule, apply_pair(profile, pair))
    if before == after:
        raise RuntimeError("witness failed re-validation; checker defect")
    return PairWitness(profile, pair, before, after)


def check_balanced(
    rule: Rule,
    m: int,
    n: int,
    *,
    trials: int | None = None,
    seed: int | None = None,
    cap: int | None = DEFAULT_PROFILE_CAP,
    workers: int = 1,
) -> Verdict:
    """Decide invariance of the choice set under every transposition pair.

    Exhaustive mode scans the whole profile space and reports the
    lexicographically first violating move, or HOLDS.  Sampled mode draws
    ``trials`` uniform (profile, move) pairs from the given ``seed`` and
    reports the first violation found, or INCONCLUSIVE.
    """
    labels = default_labels(m)
    validate_rule_for(rule, m, n, labels)
    if _require_mode(trials, seed):
        return _sample_balance(rule, m, n, trials, seed)
    total = profile_count(m, n)
    if cap is not None and total > cap:
        raise CapExceededError(f"profile space {total} exceeds cap {cap}")
    if workers < 1:
        raise ValueError("workers must be positive")
    if workers == 1:
        moves, hit = _balance_partition(rule, m, n, 0, 1, cap)
        if hit is None:
            return Verdict(Status.HOLDS, moves)
        profile = profile_from_index(m, n, hit[0])
        pair = valid_pairs(profile)[hit[1]]
        return Verdict(Status.FAILS, moves, _pair_witness(rule, profile, pair))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(
            pool.map(
                _balance_partition,
                [rule] * workers,
                [m] * workers,
                [n] * workers,
                range(workers),
                [workers] * workers,
                [cap] * workers,
            )
        )
    hits = [hit for _, hit in results if hit is not None]
    if not hits:
        return Verdict(Status.HOLDS, sum(moves for moves, _ in results))
    first = min(hits)
    profile = profile_from_index(m, n, first[0])
    pair = valid_pairs(profile)[first[1]]
    return Verdict(Status.FAILS, _moves_before(m, n, first), _pair_witness(rule, profile, pair))


def _sample_balance(rule: Rule, m: int, n: int, trials: int, seed: int) -> Verdict:
    rng = random.Random(seed)
    total = profile_count(m, n)
    moves = 0
    for _ in range(trials):
        profile = profile_from_index(m, n, rng.randrange(total))
        pairs = valid_pairs(profile)
        if not pairs:
            continue
        pair = pairs[rng.randrange(len(pairs))]
        moves += 1
        before = evaluate(rule, profile)
        after = evaluate(rule, apply_pair(profile, pair))
        if before != after:
            return Verdict(Status.FAILS, moves, PairWitness(profile, pair, before, after))
    return Verdict(Status.INCONCLUSIVE, moves)


def _grouped_check(
    rule: Rule,
    m: int,
    n: int,
    key_of,
    resample,
    trials: int | None,
    seed: int | None,
    cap: int | None,
) -> Verdict:
    labels = default_labels(m)
    validate_rule_for(rule, m, n, labels)
    if _require_mode(trials, seed):
        rng = random.Random(seed)
        total = profile_count(m, n)
        for trial in range(trials):
            profile = profile_from_index(m, n, rng.randrange(total))
            twin = resample(profile, rng)
            before = evaluate(rule, profile)
            after = evaluate(rule, twin)
            if before != after:
                return Verdict(Status.FAILS, trial + 1, TwinWitness(profile, twin, before, after))
        return Verdict(Status.INCONCLUSIVE, trials)
    groups: dict[tuple, tuple[Profile, frozenset[int]]] = {}
    searched = 0
    for profile in enumerate_profiles(m, n, cap=cap):
        searched += 1
        outcome = evaluate(rule, profile)
        key = key_of(profile)
        seen = groups.get(key)
        if seen is None:
            groups[key] = (profile, outcome)
        elif seen[1] != outcome:
            return Verdict(Status.FAILS, searched, TwinWitness(seen[0], profile, seen[1], outcome))
    return Verdict(Status.HOLDS, searched)


def check_tops_only(
    rule: Rule,
    m: int,
    n: int,
    *,
    trials: int | None = None,
    seed: int | None = None,
    cap: int | None = DEFAULT_PROFILE_CAP,
) -> Verdict:
    """Does the outcome depend only on each individual's top alternative?"""

    def key_of(profile: Profile) -> tuple:
        return tuple(o[0] for o in profile.orderings)

    def resample(profile: Profile, rng: random.Random) -> Profile:
        rows = []
        for ordering in profile.orderings:
            rest = list(ordering[1:])
            rng.shuffle(rest)
            rows.append((ordering[0], *rest))
        return Profile(tuple(rows), profile.labels)

    return _grouped_check(rule, m, n, key_of, resample, trials, seed, cap)


def check_top_k_only(
    rule: Rule,
    m: int,
    n: int,
    k: int,
    *,
    trials: int | None = None,
    seed: int | None = None,
    cap: int | None = DEFAULT_PROFILE_CAP,
) -> Verdict:
    """Does the outcome depend only on each individual's top-k set?"""
    if not 1 <= k < m:
        raise ValueError(f"k={k} out of range 1..{m - 1}")

    def key_of(profile: Profile) -> tuple:
        return tuple(tuple(sorted(o[:k])) for o in profile.orderings)

    def resample(profile: Profile, rng: random.Random) -> Profile:
        rows = []
        for ordering in profile.orderings:
            head, tail = list(ordering[:k]), list(ordering[k:])
            rng.shuffle(head)
            rng.shuffle(tail)
            rows.append(tuple(head + tail))
        return Profile(tuple(rows), profile.labels)

    return _grouped_check(rule, m, n, key_of, resample, trials, seed, cap)


@dataclass(frozen=True)
class IndividualReport:
    """Effectiveness classification for one individual."""

    individual: int
    effective: bool
    examined: int
    witness: TwinWitness | None

    def statement(self) -> str:
        if self.effective:
            return (
                f"individual {self.individual} is effective: changing only their "
                f"ordering can change the outcome"
            )
        return (
            f"individual {self.individual} is ineffective: all {self.examined} profiles "
            f"(every ordering in every context of the others) give identical outcomes"
        )


@dataclass(frozen=True)
class EffectivenessReport:
    m: int
    n: int
    individuals: tuple[IndividualReport, ...]

    def ineffective(self) -> tuple[int, ...]:
        return tuple(r.individual for r in self.individuals if not r.effective)


def check_effectiveness(
    rule: Rule, m: int, n: int, *, cap: int | None = DEFAULT_PROFILE_CAP
) -> EffectivenessReport:
    """Classify every individual by full enumeration over one-coordinate changes."""
    labels = default_labels(m)
    validate_rule_for(rule, m, n, labels)
    total = profile_count(m, n)
    if cap is not None and total * n > cap:
        raise CapExceededError(f"effectiveness scan of {total * n} profiles exceeds cap {cap}")
    orderings = enumerate_orderings(m)
    reports = []
    for individual in range(1, n + 1):
        witness: TwinWitness | None = None
        examined = 0
        for context in itertools.product(orderings, repeat=n - 1):
            first_profile: Profile | None = None
            first_outcome: frozenset[int] | None = None
            for own in orderings:
                rows = context[: individual - 1] + (own,) + context[individual - 1 :]
                profile = Profile(rows, labels)
                examined += 1
                outcome = evaluate(rule, profile)
                if first_outcome is None:
                    first_profile, first_outcome = profile, outcome
                elif outcome != first_outcome:
                    witness = TwinWitness(first_profile, profile, first_outcome, outcome)
                    break
            if witness is not None:
                break
        reports.append(IndividualReport(individual, witness is not None, examined, witness))
    return EffectivenessReport(m, n, tuple(reports))


def _adjacent_swaps(source: tuple[int, ...], target: tuple[int, ...]):
    """Bubble-sort ``source`` into ``target``; yield (upper, lower, result)
    for each adjacent transposition, where ``upper`` sat just above ``lower``."""
    goal = {alt: pos for pos, alt in enumerate(target)}
    current = list(source)
    changed = True
    while changed:
        changed = False
        for pos in range(len(current) - 1):
            if goal[current[pos]] > goal[current[pos + 1]]:
                upper, lower = current[pos], current[pos + 1]
                current[pos], current[pos + 1] = lower, upper
                changed = True
                yield upper, lower, tuple(current)


def _insert_above(ordering: tuple[int, ...], alt: int, anchor: int) -> tuple[int, ...]:
    rest = [a for a in ordering if a != alt]
    rest.insert(rest.index(anchor), alt)
    return tuple(rest)


def ineffectiveness_witness(
    rule: Rule, m: int, n: int, individual: int, *, cap: int | None = DEFAULT_PROFILE_CAP
) -> PairWitness:
    """Turn an ineffective individual into a verified balance violation.

    Finds two profiles with different outcomes, walks a chain of single
    adjacent transpositions (never touching ``individual``) between them,
    and lifts the first outcome-changing step into a paired transposition
    through ``individual``.  The returned move is re-verified to change the
    choice set; a constant rule or an individual that is in fact effective
    raises instead.
    """
    labels = default_labels(m)
    validate_rule_for(rule, m, n, labels)
    if not 1 <= individual <= n:
        raise ValueError(f"individual {individual} out of range 1..{n}")
    base = base_outcome = None
    other = other_outcome = None
    for profile in enumerate_profiles(m, n, cap=cap):
        outcome = evaluate(rule, profile)
        if base is None:
            base, base_outcome = profile, outcome
        elif outcome != base_outcome:
            other, other_outcome = profile, outcome
            break
    if other is None:
        raise ValueError(
            "the correspondence is constant over this domain; "
            "no outcome change exists to turn into a violation"
        )
    # The target may be realigned on the allegedly ineffective coordinate.
    other = other.with_ordering(individual, base.ordering(individual))
    if evaluate(rule, other) != other_outcome or other == base:
        raise ValueError(f"individual {individual} is effective for {rule.spec()}")
    current, current_outcome = base, base_outcome
    for mover in range(1, n + 1):
        if mover == individual:
            continue
        for upper, lower, next_ordering in _adjacent_swaps(
            current.ordering(mover), other.ordering(mover)
        ):
            stepped = current.with_ordering(mover, next_ordering)
            outcome = evaluate(rule, stepped)
            if outcome != current_outcome:
                lifted = current.with_ordering(
                    individual, _insert_above(current.ordering(individual), lower, upper)
                )
                pair = TranspositionPair(upper, lower, mover, individual)
                before = evaluate(rule, lifted)
                after = evaluate(rule, apply_pair(lifted, pair))
                if before == after:
                    raise ValueError(
                        f"individual {individual} is effective for {rule.spec()}"
                    )
                return PairWitness(lifted, pair, before, after)
            current, current_outcome = stepped, outcome
    raise RuntimeError("chain ended without an outcome change; checker defect")


def respects_pareto(
    rule: Rule, m: int, n: int, *, cap: int | None = DEFAULT_PROFILE_CAP
) -> bool:
    """True when every choice set is contained in the undominated set."""
    labels = default_labels(m)
    validate_rule_for(rule, m, n, labels)
    for profile in enumerate_profiles(m, n, cap=cap):
        if not evaluate(rule, profile) <= pareto_set(profile):
            return False
    return True
