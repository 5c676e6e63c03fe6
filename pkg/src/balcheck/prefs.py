"""Strict orderings, profiles, and paired-transposition moves.

Alternatives are dense integer ids ``0..m-1``.  Display labels are short
lowercase strings assigned to ids in sorted order, so id order and label
order always agree.  Individuals and ranks are 1-based in every public
signature; an ordering itself is a plain tuple whose index 0 holds the
top-ranked alternative.  Everything here is an immutable value, so all
operations are reentrant and safe to call from any number of workers.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

Ordering = tuple[int, ...]

#: Exhaustive enumerations refuse to start above this many profiles.
DEFAULT_PROFILE_CAP = 100_000_000

_LABEL_RE = re.compile(r"[a-z][a-z0-9]*\Z")


class CapExceededError(ValueError):
    """The requested exhaustive enumeration exceeds the configured cap."""


def default_labels(m: int) -> tuple[str, ...]:
    """Return ``m`` canonical labels in ascending order (``a``, ``b``, ...)."""
    if m < 0:
        raise ValueError("label count must be non-negative")
    if m <= 26:
        return tuple(chr(ord("a") + i) for i in range(m))
    width = len(str(m - 1))
    return tuple(f"a{i:0{width}d}" for i in range(m))


@dataclass(frozen=True, slots=True)
class Profile:
    """One strict ordering per individual over a common set of alternatives.

    ``orderings[i]`` is individual ``i+1``'s ranking, best to worst. The
    ``labels`` tuple must be strictly ascending; omitting it selects the
    canonical labels for the universe size.
    """

    orderings: tuple[Ordering, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if len(self.orderings) < 2:
            raise ValueError("a profile needs at least two individuals")
        orderings = tuple(tuple(o) for o in self.orderings)
        object.__setattr__(self, "orderings", orderings)
        m = len(orderings[0])
        if m < 2:
            raise ValueError("a profile needs at least two alternatives")
        ideal = tuple(range(m))
        for pos, ordering in enumerate(orderings, start=1):
            if tuple(sorted(ordering)) != ideal:
                raise ValueError(
                    f"ordering of individual {pos} is not a permutation of 0..{m - 1}: "
                    f"{ordering!r}"
                )
        labels = tuple(self.labels) or default_labels(m)
        object.__setattr__(self, "labels", labels)
        if len(labels) != m:
            raise ValueError(f"expected {m} labels, got {len(labels)}")
        for label in labels:
            if not _LABEL_RE.match(label):
                raise ValueError(f"bad label {label!r}: want [a-z][a-z0-9]*")
        if any(a >= b for a, b in zip(labels, labels[1:])):
            raise ValueError("labels must be strictly ascending")

    @property
    def m(self) -> int:
        return len(self.orderings[0])

    @property
    def n(self) -> int:
        return len(self.orderings)

    def ordering(self, individual: int) -> Ordering:
        """Ordering of a 1-based individual."""
        if not 1 <= individual <= self.n:
            raise ValueError(f"individual {individual} out of range 1..{self.n}")
        return self.orderings[individual - 1]

    def top(self, individual: int) -> int:
        return self.ordering(individual)[0]

    def with_ordering(self, individual: int, ordering: Sequence[int]) -> "Profile":
        """Copy of this profile with one individual's ordering replaced."""
        self.ordering(individual)  # range check
        rows = list(self.orderings)
        rows[individual - 1] = tuple(ordering)
        return Profile(tuple(rows), self.labels)

    def id_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown label {label!r}; universe is {self.labels}") from None

    def label_of(self, alternative: int) -> str:
        return self.labels[alternative]

    def label_set(self, alternatives: Sequence[int]) -> tuple[str, ...]:
        """Labels of a set of ids, in ascending (= alphabetical) order."""
        return tuple(self.labels[a] for a in sorted(set(alternatives)))


def profile_from_rows(rows: Sequence[Sequence[str]]) -> Profile:
    """Build a profile from label rows (best to worst per individual)."""
    if not rows:
        raise ValueError("no orderings given")
    labels = tuple(sorted(set(rows[0])))
    index = {label: i for i, label in enumerate(labels)}
    try:
        orderings = tuple(tuple(index[label] for label in row) for row in rows)
    except KeyError as exc:
        raise ValueError(f"unknown label {exc.args[0]!r} in ordering rows") from None
    return Profile(orderings, labels)


@lru_cache(maxsize=32)
def _orderings(m: int) -> tuple[Ordering, ...]:
    return tuple(itertools.permutations(range(m)))


def enumerate_orderings(m: int) -> tuple[Ordering, ...]:
    """All ``m!`` strict orderings in lexicographic order of rank tuples."""
    if m < 1:
        raise ValueError("empty universe: need at least one alternative")
    return _orderings(m)


def profile_count(m: int, n: int) -> int:
    """Size of the profile space, ``(m!)**n``."""
    return math.factorial(m) ** n


def profile_from_index(m: int, n: int, index: int, labels: tuple[str, ...] = ()) -> Profile:
    """Profile at a lexicographic position, individual 1 most significant."""
    total = profile_count(m, n)
    if not 0 <= index < total:
        raise ValueError(f"profile index {index} out of range 0..{total - 1}")
    orderings = _orderings(m)
    base = len(orderings)
    digits = []
    for _ in range(n):
        index, digit = divmod(index, base)
        digits.append(digit)
    rows = tuple(orderings[d] for d in reversed(digits))
    return Profile(rows, labels)


def enumerate_profiles(
    m: int,
    n: int,
    *,
    labels: tuple[str, ...] = (),
    cap: int | None = DEFAULT_PROFILE_CAP,
    worker: int = 0,
    workers: int = 1,
) -> Iterator[Profile]:
    """Stream the profile space in lexicographic order.

    The stream is deterministic and restartable (call again for a fresh
    pass).  With ``workers > 1`` the stream yields the indices congruent to
    ``worker`` modulo ``workers``, which range-partitions the space without
    coordination.
    """
    if m < 2 or n < 2:
        raise ValueError("profile space needs m >= 2 and n >= 2")
    if workers < 1 or not 0 <= worker < workers:
        raise ValueError(f"bad partition: worker {worker} of {workers}")
    total = profile_count(m, n)
    if cap is not None and total > cap:
        raise CapExceededError(
            f"profile space {total} exceeds cap {cap}; use sampled mode or raise the cap"
        )
    if workers == 1:
        labels = labels or default_labels(m)
        for rows in itertools.product(_orderings(m), repeat=n):
            yield Profile(rows, labels)
        return
    for index in range(worker, total, workers):
        yield profile_from_index(m, n, index, labels)


def top_k_set(ordering: Sequence[int], k: int) -> frozenset[int]:
    """Unordered set of the alternatives in the top ``k`` ranks (1-based k)."""
    if not 1 <= k <= len(ordering):
        raise ValueError(f"k={k} out of range 1..{len(ordering)}")
    return frozenset(ordering[:k])


def tops_set(profile: Profile) -> frozenset[int]:
    """Union of all individuals' top alternatives."""
    return frozenset(o[0] for o in profile.orderings)


@dataclass(frozen=True, slots=True)
class TranspositionPair:
    """One balancedness move: ``x`` just above ``y`` for individual ``i``
    while ``y`` is just above ``x`` for individual ``j``; applying the move
    swaps the two alternatives in both orderings."""

    x: int
    y: int
    i: int
    j: int

    def __post_init__(self) -> None:
        if self.x == self.y:
            raise ValueError("transposition needs two distinct alternatives")
        if self.i == self.j:
            raise ValueError("transposition needs two distinct individuals")
        if self.i < 1 or self.j < 1:
            raise ValueError("individuals are 1-based")

    def mirror(self) -> "TranspositionPair":
        """The same move written from the other individual's side."""
        return TranspositionPair(self.y, self.x, self.j, self.i)

    def is_valid_at(self, profile: Profile) -> bool:
        try:
            _check_pair(profile, self)
        except ValueError:
            return False
        return True


def _check_adjacent(profile: Profile, individual: int, upper: int, lower: int) -> None:
    ordering = profile.ordering(individual)
    pos = ordering.index(upper)
    if pos + 1 >= len(ordering) or ordering[pos + 1] != lower:
        raise ValueError(
            f"alternative {profile.label_of(upper)} is not immediately above "
            f"{profile.label_of(lower)} for individual {individual}"
        )


def _check_pair(profile: Profile, pair: TranspositionPair) -> None:
    for individual in (pair.i, pair.j):
        if not 1 <= individual <= profile.n:
            raise ValueError(f"individual {individual} out of range 1..{profile.n}")
    for alt in (pair.x, pair.y):
        if not 0 <= alt < profile.m:
            raise ValueError(f"alternative id {alt} out of range 0..{profile.m - 1}")
    _check_adjacent(profile, pair.i, pair.x, pair.y)
    _check_adjacent(profile, pair.j, pair.y, pair.x)


def valid_pairs(profile: Profile) -> list[TranspositionPair]:
    """All moves available at a profile, one representative per move.

    Emitted in lexicographic order of (i, j, rank of x in i's ordering),
    keeping only the ``i < j`` representative of each move (its mirror
    describes the same move).
    """
    positions = [{alt: pos for pos, alt in enumerate(o)} for o in profile.orderings]
    pairs: list[TranspositionPair] = []
    n = profile.n
    for i in range(1, n + 1):
        oi = profile.orderings[i - 1]
        for j in range(i + 1, n + 1):
            pos_j = positions[j - 1]
            for rank in range(len(oi) - 1):
                x, y = oi[rank], oi[rank + 1]
                if pos_j[x] == pos_j[y] + 1:
                    pairs.append(TranspositionPair(x, y, i, j))
    return pairs


def apply_pair(profile: Profile, pair: TranspositionPair) -> Profile:
    """Profile after a transposition-pair move; the input is untouched."""
    _check_pair(profile, pair)
    result = profile
    for individual in (pair.i, pair.j):
        ordering = list(result.ordering(individual))
        a, b = ordering.index(pair.x), ordering.index(pair.y)
        ordering[a], ordering[b] = ordering[b], ordering[a]
        result = result.with_ordering(individual, ordering)
    return result


def parse_profile(text: str) -> Profile:
    """Parse the profile text format.

    Line 1 is ``m n``; the next ``n`` lines each hold a whitespace-separated
    permutation of the ``m`` labels, best to worst.  Ids are assigned to
    labels in sorted order.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ValueError("line 1: empty profile text")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"line 1: expected 'm n', got {lines[0]!r}")
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError:
        raise ValueError(f"line 1: expected two integers, got {lines[0]!r}") from None
    if len(lines) - 1 != n:
        raise ValueError(f"line {len(lines)}: expected {n} ordering lines, got {len(lines) - 1}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if len(tokens) != m:
            raise ValueError(f"line {lineno}: expected {m} labels, got {len(tokens)}")
        for token in tokens:
            if not _LABEL_RE.match(token):
                raise ValueError(f"line {lineno}: bad label {token!r}")
        rows.append(tokens)
    label_set = set(rows[0])
    for lineno, row in enumerate(rows, start=2):
        if set(row) != label_set or len(row) != len(set(row)):
            raise ValueError(f"line {lineno}: not a permutation of the labels on line 2")
    try:
        return profile_from_rows(rows)
    except ValueError as exc:
        raise ValueError(f"line 2: {exc}") from None


def format_profile(profile: Profile) -> str:
    """Serialize a profile; exact inverse of :func:`parse_profile`."""
    lines = [f"{profile.m} {profile.n}"]
    for ordering in profile.orderings:
        lines.append(" ".join(profile.labels[a] for a in ordering))
    return "\n".join(lines) + "\n"
