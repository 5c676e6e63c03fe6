"""Social choice correspondences behind a single evaluation entry point.

Every correspondence maps a profile to a non-empty set of alternative ids.
Scoring rules follow the low-score-wins convention: weights are
non-decreasing in rank and the winners are the alternatives with the
*lowest* total, so Borda uses weights ``1, 2, ..., m``.  Scores are exact
rationals throughout; a weight written ``3.1`` means exactly ``31/10``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .prefs import Profile, tops_set

ChoiceSet = frozenset[int]

RULE_KINDS = (
    "borda",
    "scoring",
    "plurality",
    "kapproval",
    "copeland",
    "topcycle",
    "pareto",
    "maximin",
    "dictator",
    "uniontops",
    "constant",
    "topsunan",
)


@dataclass(frozen=True)
class Weights:
    """Non-decreasing rank weights with at least two distinct values."""

    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        values = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) < 2:
            raise ValueError("a scoring system needs at least two weights")
        if any(a > b for a, b in zip(values, values[1:])):
            raise ValueError(f"weights must be non-decreasing: {self}")
        if len(set(values)) < 2:
            raise ValueError("all weights equal: the constant scoring system is rejected")

    @classmethod
    def of(cls, *values: Fraction | int | str) -> "Weights":
        return cls(tuple(Fraction(v) for v in values))

    @classmethod
    def borda(cls, m: int) -> "Weights":
        return cls(tuple(Fraction(k) for k in range(1, m + 1)))

    @classmethod
    def parse(cls, text: str) -> "Weights":
        """Parse ``1,2,31/10`` style weight lists; decimals are exact."""
        tokens = [t.strip() for t in text.split(",") if t.strip()]
        if not tokens:
            raise ValueError(f"no weights in {text!r}")
        try:
            return cls.of(*tokens)
        except (ValueError, ZeroDivisionError) as exc:
            if "weights" in str(exc):
                raise
            raise ValueError(f"bad weight list {text!r}") from None

    def at(self, rank: int) -> Fraction:
        """Weight of a 1-based rank."""
        if not 1 <= rank <= len(self.values):
            raise ValueError(f"rank {rank} out of range 1..{len(self.values)}")
        return self.values[rank - 1]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.values)


@dataclass(frozen=True)
class Rule:
    """A correspondence spec: a kind plus the parameters that kind needs."""

    kind: str
    weights: Weights | None = None
    k: int | None = None
    individual: int | None = None
    members: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in RULE_KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}")
        wanted = {
            "scoring": "weights",
            "kapproval": "k",
            "dictator": "individual",
            "constant": "members",
            "topsunan": "members",
        }.get(self.kind)
        for name in ("weights", "k", "individual", "members"):
            value = getattr(self, name)
            if name == wanted:
                if value is None:
                    raise ValueError(f"rule {self.kind!r} needs parameter {name!r}")
            elif value is not None:
                raise ValueError(f"rule {self.kind!r} takes no parameter {name!r}")
        if self.members is not None:
            members = tuple(sorted(set(self.members)))
            if not members:
                raise ValueError(f"rule {self.kind!r} needs a non-empty set of labels")
            object.__setattr__(self, "members", members)
        if self.k is not None and self.k < 1:
            raise ValueError("k must be at least 1")
        if self.individual is not None and self.individual < 1:
            raise ValueError("dictator index is 1-based")

    def spec(self) -> str:
        """Round-trippable spec string (see :func:`parse_rule`)."""
        if self.kind == "scoring":
            return f"scoring:{self.weights}"
        if self.kind == "kapproval":
            return f"kapproval:{self.k}"
        if self.kind == "dictator":
            return f"dictator:{self.individual}"
        if self.kind in ("constant", "topsunan"):
            return f"{self.kind}:{','.join(self.members)}"
        return self.kind

    def __str__(self) -> str:
        return self.spec()


def parse_rule(text: str) -> Rule:
    """Parse a rule spec string such as ``borda`` or ``scoring:1,2,31/10``."""
    kind, _, arg = text.strip().partition(":")
    kind = kind.strip()
    if kind not in RULE_KINDS:
        raise ValueError(f"unknown rule kind {kind!r} in {text!r}")
    if kind == "scoring":
        return Rule("scoring", weights=Weights.parse(arg))
    if kind == "kapproval":
        try:
            return Rule("kapproval", k=int(arg))
        except ValueError:
            raise ValueError(f"kapproval needs an integer k, got {arg!r}") from None
    if kind == "dictator":
        try:
            return Rule("dictator", individual=int(arg))
        except ValueError:
            raise ValueError(f"dictator needs an integer index, got {arg!r}") from None
    if kind in ("constant", "topsunan"):
        members = tuple(t.strip() for t in arg.split(",") if t.strip())
        return Rule(kind, members=members)
    if arg:
        raise ValueError(f"rule {kind!r} takes no argument, got {arg!r}")
    return Rule(kind)


def validate_rule_for(rule: Rule, m: int, n: int, labels: Sequence[str]) -> None:
    """Check rule parameters against a universe before a long scan."""
    if rule.kind == "scoring" and len(rule.weights) != m:
        raise ValueError(f"scoring rule has {len(rule.weights)} weights but m={m}")
    if rule.kind == "kapproval" and not 1 <= rule.k < m:
        raise ValueError(f"kapproval k={rule.k} out of range 1..{m - 1}")
    if rule.kind == "dictator" and not 1 <= rule.individual <= n:
        raise ValueError(f"dictator index {rule.individual} out of range 1..{n}")
    if rule.members is not None:
        for label in rule.members:
            if label not in labels:
                raise ValueError(f"unknown label {label!r}; universe is {tuple(labels)}")


# ---------------------------------------------------------------------------
# Scoring rules


def scoring_scores(profile: Profile, weights: Weights) -> dict[int, Fraction]:
    """Exact score table: each alternative's sum of rank weights."""
    if len(weights) != profile.m:
        raise ValueError(f"need {profile.m} weights, got {len(weights)}")
    totals = {alt: Fraction(0) for alt in range(profile.m)}
    for ordering in profile.orderings:
        for rank, alt in enumerate(ordering):
            totals[alt] += weights.values[rank]
    return totals

def _scoring_argmin(profile: Profile, weights: Weights) -> ChoiceSet:
    # Integer fast path over a common denominator; argmin is denominator-free.
    if len(weights) != profile.m:
        raise ValueError(f"need {profile.m} weights, got {len(weights)}")
    common = math.lcm(*(w.denominator for w in weights.values))
    scaled = [w.numerator * (common // w.denominator) for w in weights.values]
    totals = [0] * profile.m
    for ordering in profile.orderings:
        for rank, alt in enumerate(ordering):
            totals[alt] += scaled[rank]
    best = min(totals)
    return frozenset(alt for alt, total in enumerate(totals) if total == best)


def scoring(profile: Profile, weights: Weights) -> ChoiceSet:
    """Alternatives with the lowest total score."""
    return _scoring_argmin(profile, weights)


def borda(profile: Profile) -> ChoiceSet:
    return _scoring_argmin(profile, Weights.borda(profile.m))


def k_approval(profile: Profile, k: int) -> ChoiceSet:
    """Alternatives most frequently ranked within the top ``k``."""
    if not 1 <= k < profile.m:
        raise ValueError(f"k={k} out of range 1..{profile.m - 1}")
    counts = [0] * profile.m
    for ordering in profile.orderings:
        for alt in ordering[:k]:
            counts[alt] += 1
    best = max(counts)
    return frozenset(alt for alt, count in enumerate(counts) if count == best)


def plurality(profile: Profile) -> ChoiceSet:
    return k_approval(profile, 1)


# ---------------------------------------------------------------------------
# Majority-relation rules


def majority_counts(profile: Profile) -> list[list[int]]:
    """Pairwise support: ``counts[x][y]`` individuals rank x above y."""
    m = profile.m
    counts = [[0] * m for _ in range(m)]
    for ordering in profile.orderings:
        for upper_rank, x in enumerate(ordering):
            row = counts[x]
            for y in ordering[upper_rank + 1 :]:
                row[y] += 1
    return counts


def copeland(profile: Profile) -> ChoiceSet:
    """Maximize strict pairwise wins minus losses."""
    counts = majority_counts(profile)
    m = profile.m
    scores = [0] * m
    for x in range(m):
        for y in range(x + 1, m):
            if counts[x][y] > counts[y][x]:
                scores[x] += 1
                scores[y] -= 1
            elif counts[x][y] < counts[y][x]:
                scores[x] -= 1
                scores[y] += 1
    best = max(scores)
    return frozenset(alt for alt, score in enumerate(scores) if score == best)


def top_cycle(profile: Profile) -> ChoiceSet:
    """Maximal set of the transitive closure of weak majority voting."""
    counts = majority_counts(profile)
    m = profile.m
    reach = [[counts[x][y] >= counts[y][x] for y in range(m)] for x in range(m)]
    for x in range(m):
        reach[x][x] = True
    for via in range(m):
        for x in range(m):
            if reach[x][via]:
                row, via_row = reach[x], reach[via]
                for y in range(m):
                    if via_row[y]:
                        row[y] = True
    return frozenset(
        x
        for x in range(m)
        if all(reach[x][y] or not reach[y][x] for y in range(m))
    )


def pareto_set(profile: Profile) -> ChoiceSet:
    """Alternatives not unanimously beaten by any other alternative."""
    counts = majority_counts(profile)
    n = profile.n
    return frozenset(
        x
        for x in range(profile.m)
        if all(counts[y][x] < n for y in range(profile.m) if y != x)
    )


def maximin(profile: Profile) -> ChoiceSet:
    """Egalitarian rule: best worst rank over the individuals."""
    worst = [0] * profile.m
    for ordering in profile.orderings:
        for rank, alt in enumerate(ordering):
            if rank > worst[alt]:
                worst[alt] = rank
    best = min(worst)
    return frozenset(alt for alt, rank in enumerate(worst) if rank == best)


# ---------------------------------------------------------------------------
# Tops-based rules


def dictatorship(profile: Profile, individual: int) -> ChoiceSet:
    return frozenset({profile.top(individual)})


def union_of_tops(profile: Profile) -> ChoiceSet:
    return tops_set(profile)


def tops_unanimity(profile: Profile, fallback: frozenset[int]) -> ChoiceSet:
    """Common top on unanimous-top profiles, a fixed set everywhere else."""
    tops = tops_set(profile)
    if len(tops) == 1:
        return tops
    return fallback


def _resolve_members(rule: Rule, profile: Profile) -> frozenset[int]:
    return frozenset(profile.id_of(label) for label in rule.members)


def evaluate(rule: Rule, profile: Profile) -> ChoiceSet:
    """Evaluate any rule spec; always returns a non-empty set of ids."""
    kind = rule.kind
    if kind == "borda":
        return borda(profile)
    if kind == "scoring":
        return scoring(profile, rule.weights)
    if kind == "plurality":
        return plurality(profile)
    if kind == "kapproval":
        return k_approval(profile, rule.k)
    if kind == "copeland":
        return copeland(profile)
    if kind == "topcycle":
        return top_cycle(profile)
    if kind == "pareto":
        return pareto_set(profile)
    if kind == "maximin":
        return maximin(profile)
    if kind == "dictator":
        return dictatorship(profile, rule.individual)
    if kind == "uniontops":
        return union_of_tops(profile)
    if kind == "constant":
        return _resolve_members(rule, profile)
    if kind == "topsunan":
        return tops_unanimity(profile, _resolve_members(rule, profile))
    raise ValueError(f"unknown rule kind {kind!r}")
