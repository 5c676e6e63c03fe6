"""Which scoring weights survive the balance requirement.

Exact machinery for the small-electorate analysis: weight normalization,
witness constructions for degenerate and deviating weight systems, score
tables as affine forms in unknown weights, and the constraint derivation
showing that at the supported sizes balance pins the weights to the Borda
values ``1, 2, ..., m`` (while at m = n = 3 it does not).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .checker import PairWitness, Verdict, check_balanced
from .prefs import Profile, TranspositionPair, apply_pair, profile_from_rows
from .rules import Rule, Weights, evaluate, scoring_scores


def normalize_weights(weights: Weights) -> Weights:
    """Affine image of the weights with the first two anchored at 1 and 2.

    Order-preserving (positive slope); requires the first two weights to be
    distinct, which any balanced non-constant system must satisfy (see
    :func:`tied_weights_witness`).
    """
    first, second = weights.values[0], weights.values[1]
    if first == second:
        raise ValueError("first two weights are equal; normalization target unreachable")
    slope = 1 / (second - first)
    shift = 1 - slope * first
    return Weights(tuple(shift + slope * value for value in weights.values))


def tied_weights_witness(weights: Weights, m: int, n: int) -> PairWitness:
    """Balance violation for a scoring system whose two best ranks tie.

    Builds the profile where individuals ``1..n-1`` rank alternative 1 first
    and alternative 0 second while individual ``n`` holds alternative 0 at
    the last tied rank, just above alternative 1.  The returned move drops
    alternative 0 from the choice set and brings alternative 1 in; both
    sides are re-verified through the generic evaluator.
    """
    if m < 3:
        raise ValueError("the tied-weights construction needs at least three alternatives")
    if n < 2:
        raise ValueError("need at least two individuals")
    if len(weights) != m:
        raise ValueError(f"need {m} weights, got {len(weights)}")
    values = weights.values
    if values[0] != values[1]:
        raise ValueError("weights do not tie at the top ranks; nothing to witness")
    k = 1
    while values[k] == values[0]:
        k += 1
    # Ranks are 1-based: ranks 1..k share the lowest weight, rank k+1 is bigger.
    x, y = 0, 1
    others = [alt for alt in range(m) if alt not in (x, y)]
    leader = (y, x, *others)
    tail_rows = others[: k - 1] + [x, y] + others[k - 1 :]
    profile = Profile((leader,) * (n - 1) + (tuple(tail_rows),))
    pair = TranspositionPair(y, x, 1, n)
    rule = Rule("scoring", weights=weights)
    before = evaluate(rule, profile)
    after = evaluate(rule, apply_pair(profile, pair))
    if not (x in before and y not in before and x not in after and y in after):
        raise RuntimeError("tied-weights construction failed re-verification")
    return PairWitness(profile, pair, before, after)


# ---------------------------------------------------------------------------
# Symbolic scores


@dataclass(frozen=True)
class SymbolicScore:
    """Affine form ``constant + sum(multiplier * s_k)`` over unknown weights."""

    constant: Fraction
    coefficients: tuple[tuple[int, Fraction], ...]

    def substitute(self, values: Mapping[int, Fraction | int]) -> Fraction:
        total = self.constant
        for index, multiplier in self.coefficients:
            total += multiplier * Fraction(values[index])
        return total

    def __str__(self) -> str:
        parts = [str(self.constant)] if self.constant or not self.coefficients else []
        for index, multiplier in self.coefficients:
            term = f"s{index}" if multiplier == 1 else f"{multiplier}*s{index}"
            parts.append(term)
        return " + ".join(parts) if parts else "0"


def _form(constant: Fraction, coefficients: dict[int, Fraction]) -> SymbolicScore:
    packed = tuple(sorted((k, v) for k, v in coefficients.items() if v))
    return SymbolicScore(constant, packed)


def symbolic_scores(profile: Profile, unknowns: Iterable[int]) -> dict[int, SymbolicScore]:
    """Score table as affine forms; ranks outside ``unknowns`` contribute
    their Borda value (rank index), so substituting the Borda values for the
    unknowns reproduces the numeric Borda table exactly."""
    unknown_set = set(unknowns)
    for index in unknown_set:
        if not 1 <= index <= profile.m:
            raise ValueError(f"unknown weight index {index} out of range 1..{profile.m}")
    constants = {alt: Fraction(0) for alt in range(profile.m)}
    coefficients: dict[int, dict[int, Fraction]] = {alt: {} for alt in range(profile.m)}
    for ordering in profile.orderings:
        for position, alt in enumerate(ordering):
            rank = position + 1
            if rank in unknown_set:
                bucket = coefficients[alt]
                bucket[rank] = bucket.get(rank, Fraction(0)) + 1
            else:
                constants[alt] += rank
    return {alt: _form(constants[alt], coefficients[alt]) for alt in range(profile.m)}


@dataclass(frozen=True)
class WeightConstraint:
    """Equality between two affine score forms, forced by balance."""

    left: SymbolicScore
    right: SymbolicScore

    def as_affine(self) -> tuple[Fraction, dict[int, Fraction]]:
        """Left minus right as (constant, coefficients); the constraint is
        that this affine form equals zero."""
        constant = self.left.constant - self.right.constant
        coefficients = dict(self.left.coefficients)
        for index, multiplier in self.right.coefficients:
            coefficients[index] = coefficients.get(index, Fraction(0)) - multiplier
        return constant, {k: v for k, v in coefficients.items() if v}

    def __str__(self) -> str:
        return f"{self.left} = {self.right}"


def solve_constraints(constraints: Sequence[WeightConstraint]) -> dict[int, Fraction]:
    """Unique exact solution of the affine equalities; raises when the
    system is under- or over-determined."""
    unknowns = sorted(
        {index for constraint in constraints for index, _ in constraint.left.coefficients}
        | {index for constraint in constraints for index, _ in constraint.right.coefficients}
    )
    rows = []
    for constraint in constraints:
        constant, coefficients = constraint.as_affine()
        rows.append([coefficients.get(index, Fraction(0)) for index in unknowns] + [-constant])
    width = len(unknowns)
    pivot_row = 0
    pivots = []
    for column in range(width):
        found = next((r for r in range(pivot_row, len(rows)) if rows[r][column]), None)
        if found is None:
            continue
        rows[pivot_row], rows[found] = rows[found], rows[pivot_row]
        factor = rows[pivot_row][column]
        rows[pivot_row] = [value / factor for value in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][column]:
                scale = rows[r][column]
                rows[r] = [v - scale * p for v, p in zip(rows[r], rows[pivot_row])]
        pivots.append(column)
        pivot_row += 1
    for row in rows[pivot_row:]:
        if row[-1]:
            raise ValueError("constraints are inconsistent")
    if len(pivots) < width:
        raise ValueError("constraints do not pin the unknown weights uniquely")
    return {unknowns[column]: rows[r][-1] for r, column in enumerate(pivots)}


# ---------------------------------------------------------------------------
# Profile families


def forcing_profile(n: int) -> Profile:
    """Three-alternative profile whose balance constraint pins the third
    weight; defined for 4, 5, or 6 individuals."""
    if n == 4:
        rows = [["x", "y", "z"], ["z", "y", "x"]] * 2
    elif n == 5:
        rows = [
            ["x", "y", "z"],
            ["z", "y", "x"],
            ["y", "x", "z"],
            ["x", "z", "y"],
            ["z", "y", "x"],
        ]
    elif n == 6:
        rows = [["y", "x", "z"], ["z", "x", "y"]] * 3
    else:
        raise ValueError(f"no forcing profile for n={n}; supported sizes are 4, 5, 6")
    return profile_from_rows(rows)


def paradox_pad(profile: Profile, blocks: int) -> Profile:
    """Append ``blocks`` three-voter cycles; every alternative gains the
    same score under any weighting, so score gaps are unchanged."""
    if profile.m != 3:
        raise ValueError("paradox padding is defined for exactly three alternatives")
    if blocks < 0:
        raise ValueError("block count must be non-negative")
    cycle = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
    return Profile(profile.orderings + cycle * blocks, profile.labels)


_BASIS_ROWS_4X3 = (
    ("a", "y", "x", "b"),
    ("b", "a", "x", "y"),
    ("x", "y", "b", "a"),
)


def _basis_profile_4x3() -> Profile:
    return profile_from_rows(_BASIS_ROWS_4X3)


def _couple_moves(profile: Profile, couples: Sequence[tuple[int, int]]) -> list[TranspositionPair]:
    """The x/y swap written as valid moves for successive voter couples."""
    x, y = profile.id_of("x"), profile.id_of("y")
    moves = []
    current = profile
    for i, j in couples:
        ordering = current.ordering(i)
        upper, lower = (x, y) if ordering.index(x) + 1 == ordering.index(y) else (y, x)
        pair = TranspositionPair(upper, lower, i, j)
        current = apply_pair(current, pair)
        moves.append(pair)
    return moves


def derive_weight_constraints(m: int, n: int) -> tuple[tuple[WeightConstraint, ...], Weights]:
    """Build the forcing profiles, apply their transposition moves, extract
    the balance-forced score equalities, and solve them exactly.

    Supported sizes: m=3 with n >= 4 (sizes beyond 6 reduce by paradox
    padding) and (m, n) = (4, 3).  The solution always comes out as the
    Borda weights.
    """
    if m == 3 and n >= 4:
        base = 4 + (n - 4) % 3
        profile = paradox_pad(forcing_profile(base), (n - base) // 3)
        couples = [(1, 2), (3, 4), (5, 6)][: base - 3]
        moves = _couple_moves(profile, couples)
        end = profile
        for move in moves:
            end = apply_pair(end, move)
        forms = symbolic_scores(profile, {3})
        if sorted(map(str, forms.values())) != sorted(map(str, symbolic_scores(end, {3}).values())):
            raise RuntimeError("moves failed to permute the score forms; derivation defect")
        order: list[SymbolicScore] = []
        for alt in range(profile.m):
            if forms[alt] not in order:
                order.append(forms[alt])
        constraints = tuple(WeightConstraint(form, order[0]) for form in order[1:])
        solution = solve_constraints(constraints)
        solved = Weights.of(1, 2, solution[3])
        return constraints, solved
    if (m, n) == (4, 3):
        u = _basis_profile_4x3()
        first, = _couple_moves(u, [(1, 2)])
        v = apply_pair(u, first)
        second, = _couple_moves(v, [(2, 3)])
        v2 = apply_pair(v, second)
        a, x = u.id_of("a"), u.id_of("x")
        u_forms = symbolic_scores(u, {3, 4})
        v2_forms = symbolic_scores(v2, {3, 4})
        constraints = (
            WeightConstraint(u_forms[a], u_forms[x]),
            WeightConstraint(v2_forms[x], v2_forms[a]),
        )
        solution = solve_constraints(constraints)
        solved = Weights.of(1, 2, solution[3], solution[4])
        return constraints, solved
    raise ValueError(f"no derivation for (m, n) = ({m}, {n})")


# ---------------------------------------------------------------------------
# Insertion witnesses


@dataclass(frozen=True)
class InsertionWitness:
    weights: Weights
    witness: PairWitness


def _insertion_profile_n3(m: int) -> Profile:
    rows = [list(row) for row in _BASIS_ROWS_4X3]
    if m == 4:
        return profile_from_rows(rows)
    # Stack fillers into the post-swap shape: each new alternative goes just
    # above b for voter 1, just below b for voter 2, at the bottom for voter 3.
    rows = [["a", "x", "y", "b"], ["b", "a", "y", "x"], ["x", "y", "b", "a"]]
    for stage in range(1, m - 3):
        filler = f"c{stage}"
        rows[0].insert(rows[0].index("b"), filler)
        rows[1].insert(rows[1].index("b") + 1, filler)
        rows[2].append(filler)
    return profile_from_rows(rows)


def _insertion_profile_small_m(n: int, m: int) -> Profile:
    base = forcing_profile(n)
    rows = [[base.label_of(alt) for alt in ordering] for ordering in base.orderings]
    for stage in range(1, m - 2):
        filler = f"a{stage}"
        rows[0].insert(rows[0].index("z"), filler)
        rows[1].insert(rows[1].index("z") + 1, filler)
        for row in rows[2:]:
            row.append(filler)
    return profile_from_rows(rows)


def insertion_witness(m: int, n: int, top_weight: Fraction | int | str) -> InsertionWitness:
    """Balance violation for weights ``1, 2, ..., m-1, w`` with ``w != m``.

    Extends the small base profiles one alternative at a time, keeping the
    crucial x/y adjacency for voters 1 and 2, and returns the final profile,
    the move, and both choice sets (recomputed by direct evaluation and
    re-verified as a violation).
    """
    if m < 4:
        raise ValueError("the insertion construction needs at least four alternatives")
    if n not in (3, 4, 5, 6):
        raise ValueError(f"no insertion construction for n={n}; supported sizes are 3..6")
    w = Fraction(top_weight)
    if w == m:
        raise ValueError("top weight equal to m gives the Borda weights; no witness exists")
    if w < m - 1:
        raise ValueError(f"top weight {w} below {m - 1} violates the non-decreasing weights")
    weights = Weights.of(*range(1, m), w)
    profile = _insertion_profile_n3(m) if n == 3 else _insertion_profile_small_m(n, m)
    x, y = profile.id_of("x"), profile.id_of("y")
    ordering = profile.ordering(1)
    upper, lower = (x, y) if ordering.index(x) + 1 == ordering.index(y) else (y, x)
    pair = TranspositionPair(upper, lower, 1, 2)
    rule = Rule("scoring", weights=weights)
    before = evaluate(rule, profile)
    after = evaluate(rule, apply_pair(profile, pair))
    if before == after:
        raise RuntimeError("insertion construction failed re-verification")
    return InsertionWitness(weights, PairWitness(profile, pair, before, after))


# ---------------------------------------------------------------------------
# Characterization verdicts


@dataclass(frozen=True)
class Characterization:
    m: int
    n: int
    forced: bool
    weights: Weights
    constraints: tuple[WeightConstraint, ...]
    verification: Verdict | None = None


def characterize(m: int, n: int) -> Characterization:
    """Is balance enough to force the Borda weights at this size?

    At (3, 3) it is not: the weights ``1, 2, 31/10`` are returned together
    with their exhaustive balance verification.  At the supported larger
    sizes the derived constraints and their unique (Borda) solution are
    returned.
    """
    if (m, n) == (3, 3):
        weights = Weights.of(1, 2, Fraction(31, 10))
        verdict = check_balanced(Rule("scoring", weights=weights), 3, 3)
        if not verdict.holds:
            raise RuntimeError("counterexample weights failed their balance verification")
        return Characterization(m, n, False, weights, (), verdict)
    constraints, solved = derive_weight_constraints(m, n)
    return Characterization(m, n, True, solved, constraints)


def balanced_weight_sweep(
    m: int, n: int, candidates: Iterable[Weights]
) -> list[Weights]:
    """Exploration helper: which candidate weight systems pass an exhaustive
    balance check at this size.  Makes no claim beyond the sizes scanned."""
    return [
        weights
        for weights in candidates
        if check_balanced(Rule("scoring", weights=weights), m, n).holds
    ]
