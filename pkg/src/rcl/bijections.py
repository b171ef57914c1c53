"""Constructive bijections and their brute-force verifiers.

Three families: subsets with no disallowed pairwise difference map to
restricted-overlap tilings of an (n+q)-board (comb at board cell i iff i is
in the subset); two classes of strongly restricted permutations count the
same subsets (with excedances / exchanged pairs tracking subset size); and
binary-subword occurrence classes match the subsets for the difference set
read off the subword's self-overlaps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CombShape, DifferenceSet, LimitError, comb_from_differences
from .oracles import subset_count_oracle, subword_class_oracle

PERM_MAX = 13


@dataclass(frozen=True)
class TilingWitness:
    """A restricted-overlap tiling as a replayable placement list.

    ``placements`` holds (leftmost board cell, tile kind) in increasing cell
    order; ``coverage`` counts how many tiles cover each board cell (index 0
    is board cell 1).
    """

    board_length: int
    placements: tuple[tuple[int, str], ...]
    coverage: tuple[int, ...]


def subset_to_tiling(subset, n: int, diffs: DifferenceSet) -> TilingWitness:
    """Comb at board cell i for each subset element, squares elsewhere.

    Raises ValueError if the replay finds a comb whose leftmost cell is
    already occupied, which happens exactly when the subset contains a
    disallowed difference.
    """
    comb = comb_from_differences(diffs)
    q = diffs.q
    board = n + q
    chosen = sorted(set(subset))
    if chosen and not 1 <= chosen[0] <= chosen[-1] <= n:
        raise ValueError(f"subset must lie within 1..{n}")
    coverage = [0] * board
    placements: list[tuple[int, str]] = []
    for i in chosen:
        if coverage[i - 1]:
            raise ValueError(
                f"cell {i} already covered: subset has a disallowed difference"
            )
        for cell in range(comb.length):
            if comb.occupancy >> cell & 1:
                coverage[i - 1 + cell] += 1
        placements.append((i, "C"))
    for cell in range(board):
        if coverage[cell] == 0:
            coverage[cell] = 1
            placements.append((cell + 1, "S"))
    placements.sort()
    return TilingWitness(board, tuple(placements), tuple(coverage))


def tiling_to_subset(witness: TilingWitness) -> tuple[int, ...]:
    return tuple(pos for pos, kind in witness.placements if kind == "C")


def is_allowed_subset(subset, diffs: DifferenceSet) -> bool:
    members = set(diffs.elements)
    chosen = sorted(set(subset))
    return all(
        y - x not in members for i, x in enumerate(chosen) for y in chosen[i + 1 :]
    )


@dataclass(frozen=True)
class PermutationCounts:
    """Counts of restricted permutations refined by a size statistic."""

    size: int
    by_k: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.by_k)

    def k(self, k: int) -> int:
        return self.by_k[k] if 0 <= k < len(self.by_k) else 0


def perm_count_jm(n: int, m: int, j: int) -> PermutationCounts:
    """Permutations of {1..n+jm} with pi(i)-i in {-m, 0, jm}, by excedance count.

    Backtracking over image assignments.  The excedance refinement matches
    the subset-size refinement for Q = {m, 2m, ..., jm}.
    """
    if m < 1 or j < 1 or n < 0:
        raise ValueError("need m >= 1, j >= 1, n >= 0")
    size = n + j * m
    if size > PERM_MAX:
        raise LimitError(f"permutation enumeration limited to n+jm <= {PERM_MAX}")
    counts = [0] * (size + 1)
    used = [False] * (size + 1)

    def assign(i: int, excedances: int) -> None:
        if i > size:
            counts[excedances] += 1
            return
        for image in (i - m, i, i + j * m):
            if 1 <= image <= size and not used[image]:
                used[image] = True
                assign(i + 1, excedances + (image > i))
                used[image] = False

    assign(1, 0)
    return PermutationCounts(size, tuple(counts))


def perm_count_1m(n: int, m: int) -> PermutationCounts:
    """Permutations of {1..n+1} made of k non-overlapping adjacent swaps whose
    every window of m consecutive images spans at most m, by k.

    Matches the subset-size refinement for Q = {1, m}.
    """
    if m < 2 or n < 0:
        raise ValueError("need m >= 2, n >= 0")
    size = n + 1
    if size > PERM_MAX + 1:
        raise LimitError(f"permutation enumeration limited to n <= {PERM_MAX}")
    counts: dict[int, int] = {}

    def window_ok(pi: list[int]) -> bool:
        for i in range(size - m + 1):
            window = pi[i : i + m]
            if max(window) - min(window) > m:
                return False
        return True

    def build(swaps: list[int]) -> list[int]:
        pi = list(range(1, size + 1))
        for i in swaps:
            pi[i - 1], pi[i] = pi[i], pi[i - 1]
        return pi

    def choose(start: int, swaps: list[int]) -> None:
        if window_ok(build(swaps)):
            counts[len(swaps)] = counts.get(len(swaps), 0) + 1
        for i in range(start, size):
            choose(i + 2, swaps + [i])  # i+2 keeps the swapped pairs disjoint

    choose(1, [])
    top = max(counts, default=0)
    return PermutationCounts(size, tuple(counts.get(k, 0) for k in range(top + 1)))


def subword_to_differences(omega: str) -> DifferenceSet:
    """Read the difference set off the self-overlaps of a binary subword.

    A shift j is disallowed exactly when omega disagrees with itself shifted
    j places: the low l-j bits of omega differ from its high l-j bits.
    """
    if not omega or any(c not in "01" for c in omega):
        raise ValueError("omega must be a nonempty binary string")
    ell = len(omega)
    w = int(omega, 2)
    elems = tuple(
        j for j in range(1, ell) if w % (1 << (ell - j)) != w >> j
    )
    return DifferenceSet(elems)


def subword_self_overlap_differences(omega: str) -> DifferenceSet:
    """String-form overlap test (independent check of the arithmetic one)."""
    ell = len(omega)
    elems = tuple(j for j in range(1, ell) if omega[j:] != omega[: ell - j])
    return DifferenceSet(elems)


@dataclass(frozen=True)
class SubwordReportRow:
    n: int
    brute_total: int
    predicted_total: int
    brute_by_size: dict[int, int]
    predicted_by_size: dict[int, int]

    @property
    def match(self) -> bool:
        return (
            self.brute_total == self.predicted_total
            and self.brute_by_size == self.predicted_by_size
        )


@dataclass(frozen=True)
class SubwordReport:
    omega: str
    differences: DifferenceSet
    rows: tuple[SubwordReportRow, ...]

    @property
    def all_match(self) -> bool:
        return all(row.match for row in self.rows)

    def to_json(self) -> dict:
        return {
            "omega": self.omega,
            "differences": list(self.differences.elements),
            "all_match": self.all_match,
            "rows": [
                {
                    "n": row.n,
                    "brute_total": row.brute_total,
                    "predicted_total": row.predicted_total,
                    "brute_by_size": row.brute_by_size,
                    "predicted_by_size": row.predicted_by_size,
                    "match": row.match,
                }
                for row in self.rows
            ],
        }

    def to_text(self) -> str:
        lines = [
            f"omega={self.omega}  Q={self.differences}",
            f"{'n':>4} {'classes':>10} {'predicted':>10}  match",
        ]
        for row in self.rows:
            lines.append(
                f"{row.n:>4} {row.brute_total:>10} {row.predicted_total:>10}  "
                + ("yes" if row.match else "NO")
            )
        return "\n".join(lines)


def verify_subword_theorem(omega: str, n_max: int) -> SubwordReport:
    """Compare subword occurrence-class counts against S_{n-l+1} for the
    difference set read off omega, for n = l .. n_max.

    Discrepancies are reported, not raised: subwords whose occurrence sets
    can force an occurrence at an unlisted position (e.g. 00) genuinely
    disagree with the predicted counts.
    """
    diffs = subword_to_differences(omega)
    ell = len(omega)
    rows = []
    s_table = subset_count_oracle(diffs, max(n_max - ell + 1, 0))
    for n in range(ell, n_max + 1):
        classes = subword_class_oracle(omega, n)
        ns = n - ell + 1
        predicted_by = {
            k: v
            for k in range(ns + 1)
            if (v := s_table.by(ns, k)) != 0
        }
        brute_by = classes.count_by_size()
        rows.append(
            SubwordReportRow(
                n, classes.count, s_table.total(ns), brute_by, predicted_by
            )
        )
    return SubwordReport(omega, diffs, tuple(rows))
