"""Subset/tiling, permutation, and subword bijections."""

from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rcl.core import DifferenceSet, LimitError, parse_differences
from rcl.bijections import (
    is_allowed_subset,
    perm_count_1m,
    perm_count_jm,
    subset_to_tiling,
    subword_self_overlap_differences,
    subword_to_differences,
    tiling_to_subset,
    verify_subword_theorem,
)
from rcl.oracles import subset_count_oracle, tiling_count_oracle


def all_allowed_subsets(d: DifferenceSet, n: int):
    for size in range(n + 1):
        for subset in combinations(range(1, n + 1), size):
            if is_allowed_subset(subset, d):
                yield subset


@pytest.mark.parametrize("spec", ["1", "2", "1,3", "1,2,4", "1,4"])
def test_subset_tiling_round_trip(spec):
    d = parse_differences(spec)
    n = 9
    seen = set()
    for subset in all_allowed_subsets(d, n):
        witness = subset_to_tiling(subset, n, d)
        assert witness.board_length == n + d.q
        assert all(c >= 1 for c in witness.coverage)
        assert tiling_to_subset(witness) == subset
        seen.add(witness.placements)
    # distinct subsets gave distinct tilings, and the count is B_{n+q}
    oracle = tiling_count_oracle(d, n + d.q)
    assert len(seen) == oracle.total(n + d.q)


def test_disallowed_subset_rejected():
    d = parse_differences("1,2,4")
    with pytest.raises(ValueError):
        subset_to_tiling((3, 7), 9, d)  # difference 4 is disallowed
    with pytest.raises(ValueError):
        subset_to_tiling((0, 2), 9, d)  # out of range
    assert not is_allowed_subset((3, 7), d)
    assert is_allowed_subset((3, 6), d)


def test_perm_jm_simple_case():
    # m=1, j=1: pi(i)-i in {-1,0,1}, counts subsets avoiding difference 1
    counts = perm_count_jm(4, 1, 1)
    oracle = subset_count_oracle(parse_differences("1"), 4)
    assert counts.total == oracle.total(4) == 8
    for k in range(5):
        assert counts.k(k) == oracle.by(4, k)


def test_perm_jm_excedance_refinement():
    for m in (1, 2):
        for j in (1, 2):
            q = DifferenceSet(tuple(m * i for i in range(1, j + 1)))
            for n in range(0, 11 - j * m):
                counts = perm_count_jm(n, m, j)
                oracle = subset_count_oracle(q, n)
                assert counts.total == oracle.total(n), (n, m, j)
                for k in range(n + 1):
                    assert counts.k(k) == oracle.by(n, k), (n, m, j, k)


def test_perm_jm_guards():
    with pytest.raises(LimitError):
        perm_count_jm(13, 2, 1)
    with pytest.raises(ValueError):
        perm_count_jm(4, 0, 1)


def test_perm_1m_matches_q1m():
    for m in (2, 3, 4):
        q = DifferenceSet((1, m))
        for n in range(10):
            counts = perm_count_1m(n, m)
            oracle = subset_count_oracle(q, n)
            assert counts.total == oracle.total(n), (n, m)
            for k in range(n + 1):
                assert counts.k(k) == oracle.by(n, k), (n, m, k)


def test_perm_1m_guards():
    with pytest.raises(ValueError):
        perm_count_1m(4, 1)
    with pytest.raises(LimitError):
        perm_count_1m(20, 2)


def test_subword_differences_example():
    assert subword_to_differences("10110").elements == (1, 2, 4)
    assert subword_to_differences("00").elements == ()  # 00 overlaps itself at shift 1
    assert subword_to_differences("01").elements == (1,)
    assert subword_to_differences("0").elements == ()
    with pytest.raises(ValueError):
        subword_to_differences("012")


def test_subword_arithmetic_equals_string_form():
    for ell in range(1, 11):
        for w in range(1 << ell):
            omega = format(w, f"0{ell}b")
            assert subword_to_differences(omega) == subword_self_overlap_differences(
                omega
            ), omega


def test_subword_theorem_10110():
    report = verify_subword_theorem("10110", 12)
    assert report.differences.elements == (1, 2, 4)
    assert report.all_match
    assert report.rows[0].n == 5


def test_subword_discrepancy_00_reported():
    report = verify_subword_theorem("00", 4)
    row = report.rows[-1]
    assert row.n == 4
    assert row.brute_total == 7
    assert row.predicted_total == 8
    assert not row.match
    assert not report.all_match
    text = report.to_text()
    assert "NO" in text
    assert report.to_json()["all_match"] is False


@given(
    st.sets(st.integers(min_value=1, max_value=6), max_size=4),
    st.sets(st.integers(min_value=1, max_value=8), max_size=5),
)
def test_is_allowed_matches_definition(q_elems, subset):
    d = DifferenceSet(tuple(q_elems))
    expected = all(
        abs(x - y) not in d for x in subset for y in subset if x != y
    )
    assert is_allowed_subset(tuple(subset), d) == expected
