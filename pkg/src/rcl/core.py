"""Disallowed-difference sets and the combs they induce.

A set Q of disallowed differences (largest element q) determines a unique
comb: a length-(q+1) tile whose cell i is a tooth cell exactly when i is 0,
q, or an element of Q.  Everything else in the engine (the tiling oracles,
the metatile digraph, the recurrence families) is driven by the structural
parameters computed here: the tooth/gap profile, the first/last tooth widths
l and r, and the allowed differences p_1 < ... < p_a below q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

# Node labels and the theta bit string must fit comfortably in one machine
# word; larger q is rejected up front rather than silently misbehaving.
MAX_Q = 30


class LimitError(ValueError):
    """A size guard was exceeded (q or n too large for the chosen path)."""


@dataclass(frozen=True)
class DifferenceSet:
    """The set Q of disallowed pairwise differences.

    ``elements`` is strictly increasing; ``q`` is the largest element (0 for
    the empty set).  ``theta`` packs Q into an integer: bit j-1 is set iff
    j is in Q, so bit 1 of theta corresponds to difference 1 (1-indexed
    bits, fixed convention repo-wide).
    """

    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        elems = tuple(sorted(set(self.elements)))
        if elems and elems[0] < 1:
            raise ValueError("differences must be positive integers")
        if elems and elems[-1] > MAX_Q:
            raise LimitError(f"largest difference {elems[-1]} exceeds supported maximum {MAX_Q}")
        object.__setattr__(self, "elements", elems)

    @property
    def q(self) -> int:
        return self.elements[-1] if self.elements else 0

    @property
    def theta(self) -> int:
        bits = 0
        for j in self.elements:
            bits |= 1 << (j - 1)
        return bits

    def __contains__(self, j: int) -> bool:
        return j in set(self.elements)

    def __str__(self) -> str:
        return "{" + ",".join(str(j) for j in self.elements) + "}"


def parse_differences(spec: str) -> DifferenceSet:
    """Parse a comma-separated list of positive integers, e.g. "1,2,4".

    The empty string and "0" both denote the empty set (the q=0 case).
    """
    spec = spec.strip()
    if spec in ("", "0"):
        return DifferenceSet(())
    try:
        values = tuple(int(part) for part in spec.split(","))
    except ValueError as exc:
        raise ValueError(f"cannot parse difference set {spec!r}: {exc}") from None
    if any(v < 1 for v in values):
        raise ValueError(f"differences must be positive: {spec!r}")
    return DifferenceSet(values)


@dataclass(frozen=True)
class CombShape:
    """The unique comb induced by a difference set.

    ``occupancy`` is an integer whose bit i gives the state of comb cell i
    (1 = tooth cell), for cells 0..q.  ``teeth`` and ``gaps`` are the run
    widths; all are positive, which makes the profile unique.
    """

    differences: DifferenceSet
    teeth: tuple[int, ...]
    gaps: tuple[int, ...]
    occupancy: int

    @property
    def q(self) -> int:
        return self.differences.q

    @property
    def length(self) -> int:
        return self.q + 1

    @property
    def l(self) -> int:  # noqa: E741 - paper-facing parameter name
        return self.teeth[0]

    @property
    def r(self) -> int:
        return self.teeth[-1]

    @property
    def allowed(self) -> tuple[int, ...]:
        return allowed_differences(self.differences)

    @property
    def a(self) -> int:
        return len(self.allowed)

    @property
    def gapless(self) -> bool:
        return not self.gaps

    def profile(self) -> tuple[int, ...]:
        """Interleaved (w1, g1, w2, ..., wt) profile."""
        out: list[int] = []
        for i, w in enumerate(self.teeth):
            out.append(w)
            if i < len(self.gaps):
                out.append(self.gaps[i])
        return tuple(out)

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.profile()) + ")-comb"


def comb_from_differences(diffs: DifferenceSet) -> CombShape:
    """Build the unique comb for Q: cells 0 and q filled, cell i filled iff i in Q."""
    q = diffs.q
    filled = {0, q} | set(diffs.elements)
    occupancy = 0
    for cell in filled:
        occupancy |= 1 << cell
    teeth: list[int] = []
    gaps: list[int] = []
    run = 0
    in_tooth = True  # cell 0 is always a tooth cell
    for cell in range(q + 1):
        cell_filled = cell in filled
        if cell_filled == in_tooth:
            run += 1
        else:
            (teeth if in_tooth else gaps).append(run)
            in_tooth = cell_filled
            run = 1
    teeth.append(run)  # cell q is filled, so the final run is a tooth
    return CombShape(diffs, tuple(teeth), tuple(gaps), occupancy)


def differences_from_occupancy(occupancy: int, q: int) -> DifferenceSet:
    """Invert comb_from_differences (round-trip check helper)."""
    if q == 0:
        return DifferenceSet(())
    elems = [j for j in range(1, q) if occupancy >> j & 1]
    elems.append(q)
    return DifferenceSet(tuple(elems))


def allowed_differences(diffs: DifferenceSet) -> tuple[int, ...]:
    """The elements p_1 < ... < p_a of {1..q} - Q (empty iff Q = {1..q})."""
    members = set(diffs.elements)
    return tuple(j for j in range(1, diffs.q + 1) if j not in members)


def is_well_based(diffs: DifferenceSet) -> bool:
    """True iff the elements of Q form a well-based sequence.

    Uses the decomposition form: for every m in Q and every d = 1..m-1,
    either d or m-d lies in Q.  (Equivalent to no pairwise sum of allowed
    differences landing in Q; the agreement of the two forms is property
    tested.)
    """
    members = set(diffs.elements)
    for m in diffs.elements:
        for d in range(1, m):
            if d not in members and m - d not in members:
                return False
    return True


def is_well_based_by_sums(diffs: DifferenceSet) -> bool:
    """Alternative well-based test: p_i + p_j never lands in Q (a=0 is vacuous)."""
    members = set(diffs.elements)
    allowed = allowed_differences(diffs)
    return all(pi + pj not in members for pi in allowed for pj in allowed)


def all_difference_sets(q: int) -> Iterable[DifferenceSet]:
    """All Q with largest element exactly q (q >= 1): 2^(q-1) sets."""
    inner = range(1, q)
    for mask in range(1 << (q - 1)):
        elems = tuple(j for j in inner if mask >> (j - 1) & 1) + (q,)
        yield DifferenceSet(elems)
