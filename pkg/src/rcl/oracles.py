"""Brute-force ground truth for every fast path in the engine.

Three independent oracles:

* ``subset_count_oracle`` enumerates all subsets of {1..n} and keeps the
  ones with no disallowed pairwise difference, using the shifted-AND test
  (a subset s is valid iff s & (s >> d) == 0 for every d in Q) and the
  fact that a subset valid for N_n stays valid for every larger n.
* ``tiling_count_oracle`` enumerates restricted-overlap tilings of an
  n-board by recursive placement at the leftmost empty cell.
* ``subword_class_oracle`` groups binary words by the occurrence set of a
  fixed subword.

Counts are exact integers throughout; numpy is used only to vectorise the
subset sweep (counts stay far below 2^63 at the supported sizes).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import CombShape, DifferenceSet, LimitError, comb_from_differences

SUBSET_MAX_N = 32  # word-width guard, same limit as a 32-bit enumeration
TILING_MAX_N = 40
SUBWORD_MAX_N = 24


@dataclass(frozen=True)
class CountTable:
    """Exact counts indexed by n (and optionally by subset/comb size k).

    ``totals[n]`` is the total count for boards/ground sets of size n and
    ``by_size[n][k]`` the size-k refinement.  Queries outside the computed
    triangle return 0, which encodes the boundary conventions
    (counts vanish for n < 0, k < 0, and k > n).
    """

    label: str
    n_max: int
    totals: tuple[int, ...]
    by_size: tuple[tuple[int, ...], ...] | None = None

    def total(self, n: int) -> int:
        if n < 0:
            return 0
        if n > self.n_max:
            raise IndexError(f"{self.label}_{n} not computed (n_max={self.n_max})")
        return self.totals[n]

    def by(self, n: int, k: int) -> int:
        if self.by_size is None:
            raise ValueError("table was computed without the size refinement")
        if n < 0 or k < 0 or k > n:
            return 0
        if n > self.n_max:
            raise IndexError(f"{self.label}_{n},{k} not computed (n_max={self.n_max})")
        row = self.by_size[n]
        return row[k] if k < len(row) else 0

    def row(self, n: int) -> tuple[int, ...]:
        if self.by_size is None:
            raise ValueError("table was computed without the size refinement")
        return self.by_size[n]


def shift_to_subsets(b_table: CountTable, q: int) -> CountTable:
    """Convert a B table to an S table via S_n = B_{n+q} (index shift)."""
    n_max = b_table.n_max - q
    if n_max < 0:
        raise ValueError("B table too short for the index shift")
    totals = tuple(b_table.totals[n + q] for n in range(n_max + 1))
    by_size = None
    if b_table.by_size is not None:
        by_size = tuple(
            tuple(b_table.by(n + q, k) for k in range(n + 1)) for n in range(n_max + 1)
        )
    return CountTable("S", n_max, totals, by_size)


def format_table(table: CountTable) -> str:
    """Triangle text form: one line per n, entries up to the last nonzero.

    Matches a reference enumeration program that prints row entries
    space-separated and stops at the first zero count (the feasible k are
    contiguous from 0, so nothing is lost).
    """
    lines = []
    for n in range(table.n_max + 1):
        row = table.row(n)
        cut = len(row)
        for k, v in enumerate(row):
            if v == 0:
                cut = k
                break
        lines.append(" ".join(str(v) for v in row[:cut]))
    return "\n".join(lines)


def format_totals(table: CountTable) -> str:
    return " ".join(str(v) for v in table.totals)


def subset_count_oracle(
    diffs: DifferenceSet, n_max: int, want_triangle: bool = True
) -> CountTable:
    """Count subsets of {1..n} with no pairwise difference in Q, for n <= n_max.

    Sweeps subsets in increasing numeric order of their bit representation.
    A subset is attributed to its minimum viable n (its largest element) and
    then counts for every larger n as well.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if n_max > SUBSET_MAX_N:
        raise LimitError(f"subset oracle limited to n <= {SUBSET_MAX_N}")

    # new[n][k]: valid subsets whose largest element is exactly n.
    new = [[0] * (n + 1) for n in range(n_max + 1)]
    new[0][0] = 1  # the empty subset
    chunk = 1 << 22
    for n in range(1, n_max + 1):
        lo, hi = 1 << (n - 1), 1 << n
        counts = np.zeros(n + 1, dtype=np.int64)
        for start in range(lo, hi, chunk):
            s = np.arange(start, min(start + chunk, hi), dtype=np.uint64)
            valid = np.ones(s.shape, dtype=bool)
            for d in diffs.elements:
                valid &= (s & (s >> np.uint64(d))) == 0
            kept = s[valid]
            counts += np.bincount(np.bitwise_count(kept).astype(np.int64), minlength=n + 1)
        for k in range(n + 1):
            new[n][k] = int(counts[k])

    by_size = []
    running = [0] * (n_max + 1)
    totals = []
    for n in range(n_max + 1):
        for k in range(n + 1):
            running[k] += new[n][k]
        by_size.append(tuple(running[: n + 1]))
        totals.append(sum(by_size[-1]))
    return CountTable(
        "S", n_max, tuple(totals), tuple(by_size) if want_triangle else None
    )


def tiling_count_oracle(diffs: DifferenceSet, n_max: int) -> CountTable:
    """Count restricted-overlap tilings of n-boards with squares and the Q-comb.

    Recursive placement: find the leftmost empty cell, place either a square
    or a comb with its leftmost cell there (the comb's other cells may
    overlap already-filled cells), and recurse.  A tiling is identified by
    its sequence of (position, tile) placements, so the recursion counts
    each tiling exactly once.
    """
    if n_max > TILING_MAX_N:
        raise LimitError(f"tiling oracle limited to n <= {TILING_MAX_N}")
    comb = comb_from_differences(diffs)
    occ_comb = comb.occupancy
    width = comb.length

    totals = []
    by_size = []
    for n in range(n_max + 1):
        full = (1 << n) - 1

        @lru_cache(maxsize=None)
        def count(occ: int, n=n, full=full) -> tuple[int, ...]:
            """Counts by number of combs used to finish the board from state occ."""
            if occ == full:
                return (1,)
            i = lowest_zero(occ)
            acc = list(count(occ | (1 << i)))
            if i + width <= n:
                sub = count(occ | (occ_comb << i))
                if len(acc) < len(sub) + 1:
                    acc.extend([0] * (len(sub) + 1 - len(acc)))
                for k, v in enumerate(sub):
                    acc[k + 1] += v
            return tuple(acc)

        poly = count(0)
        row = tuple(poly[k] if k < len(poly) else 0 for k in range(n + 1))
        by_size.append(row)
        totals.append(sum(row))
    return CountTable("B", n_max, tuple(totals), tuple(by_size))


def lowest_zero(occ: int) -> int:
    """Index of the lowest clear bit of occ."""
    return (~occ & (occ + 1)).bit_length() - 1


@dataclass(frozen=True)
class SubwordClasses:
    """Occurrence-set classes of a subword among all binary words of length n."""

    omega: str
    n: int
    classes: frozenset[tuple[int, ...]]

    @property
    def count(self) -> int:
        return len(self.classes)

    def count_by_size(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for cls in self.classes:
            out[len(cls)] = out.get(len(cls), 0) + 1
        return out


def subword_class_oracle(omega: str, n: int) -> SubwordClasses:
    """Group all length-n binary words by the positions where omega occurs.

    Positions are 1-indexed from the left.  Two words are equivalent iff
    omega occurs at exactly the same set of positions in both.
    """
    if not omega or any(c not in "01" for c in omega):
        raise ValueError("omega must be a nonempty binary string")
    ell = len(omega)
    if not ell <= n <= SUBWORD_MAX_N:
        raise LimitError(f"subword oracle needs len(omega) <= n <= {SUBWORD_MAX_N}")
    classes = set()
    for word in range(1 << n):
        bits = format(word, f"0{n}b")
        occ = tuple(
            pos + 1 for pos in range(n - ell + 1) if bits[pos : pos + ell] == omega
        )
        classes.add(occ)
    return SubwordClasses(omega, n, frozenset(classes))
