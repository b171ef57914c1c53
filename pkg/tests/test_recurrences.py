"""Recurrence synthesis, closed-form families, and generating functions."""

from math import comb as binom

import pytest

from rcl.core import all_difference_sets, comb_from_differences, parse_differences
from rcl.digraph import (
    analyze_cycles,
    build_digraph,
    count_via_transfer,
    enumerate_metatiles,
)
from rcl.oracles import shift_to_subsets, subset_count_oracle
from rcl.recurrences import (
    FamilyError,
    RationalGF,
    Recurrence,
    classify,
    evaluate_recurrence,
    evaluate_totals,
    f_bonacci,
    family_four_l,
    family_min1arc,
    family_p2,
    family_t_finite,
    family_well_based,
    format_recurrence,
    from_common_node,
    from_finite_metatiles,
    gf_from_recurrence,
    gf_well_based,
    recurrence_for,
    series_expand,
)


def oracle_matches(rec: Recurrence, spec: str, n_max: int = 20) -> bool:
    d = parse_differences(spec)
    table = shift_to_subsets(evaluate_recurrence(rec, n_max + d.q), d.q)
    oracle = subset_count_oracle(d, n_max)
    return table.totals == oracle.totals and all(
        table.by(n, k) == oracle.by(n, k) for n in range(n_max + 1) for k in range(n + 1)
    )


def test_recurrence_canonicalises_terms():
    rec = Recurrence(((0, 0, 1),), ((1, 0, 1), (1, 0, 1), (2, 1, 1), (2, 1, -1)))
    assert rec.b_terms == ((1, 0, 2),)
    with pytest.raises(ValueError):
        Recurrence(((0, 0, 1),), ((0, 0, 1),))


def test_domino_finite_recurrence():
    dg = build_digraph(comb_from_differences(parse_differences("1")))
    rec = from_finite_metatiles(enumerate_metatiles(dg, 8))
    assert rec.b_terms == ((1, 0, 1), (2, 1, 1))
    assert evaluate_totals(rec, 10) == (1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89)


def test_from_finite_requires_complete():
    dg = build_digraph(comb_from_differences(parse_differences("1,3")))
    with pytest.raises(ValueError):
        from_finite_metatiles(enumerate_metatiles(dg, 10))


def test_t_finite_closed_form_simple():
    # Q={2}: B_n = delta + B_{n-1} + B_{n-3} + B_{n-4}
    rec = family_t_finite(parse_differences("2"))
    assert rec.b_terms == ((1, 0, 1), (3, 1, 1), (4, 2, 1))
    assert oracle_matches(rec, "2")


def test_t_finite_full_q_block():
    # Q = {1..q}: only metatiles are S and the (q+1)-omino
    rec = family_t_finite(parse_differences("1,2,3"))
    assert rec.b_terms == ((1, 0, 1), (4, 1, 1))
    assert oracle_matches(rec, "1,2,3")


def test_t_finite_enumerated_fallback():
    # (1,1,1,1,3)-comb: finite family (2r >= q) but two gaps, so no
    # bonacci closed form; the enumerated metatile list is used instead
    d = parse_differences("2,4,5,6")
    rec = family_t_finite(d)
    assert oracle_matches(rec, "2,4,5,6")


def test_t_finite_rejects_infinite():
    with pytest.raises(FamilyError):
        family_t_finite(parse_differences("1,4"))


def test_f_bonacci_identity():
    # sum_i C(j-(l-1)i, i) counts square/l-omino tilings of a j-board
    for l in range(1, 5):  # noqa: E741
        f = f_bonacci(l, 15)
        for j in range(16):
            assert f[j] == sum(
                binom(j - (l - 1) * i, i) for i in range(j // l + 1)
            )


def test_well_based_family():
    rec = family_well_based(parse_differences("1,3,5"))
    assert oracle_matches(rec, "1,3,5")
    with pytest.raises(FamilyError):
        family_well_based(parse_differences("1,3,4"))


def test_min1arc_family():
    rec = family_min1arc(parse_differences("2,4"))
    assert oracle_matches(rec, "2,4")
    with pytest.raises(FamilyError):
        family_min1arc(parse_differences("1"))


def test_four_l_family():
    # Q={3}: l=1, allowed (1,2), single inner cycle C[2]
    rec = family_four_l(parse_differences("3"))
    assert oracle_matches(rec, "3")
    # case (b), q < 4l-1
    rec = family_four_l(parse_differences("1,3,5,6"))
    assert oracle_matches(rec, "1,3,5,6")
    with pytest.raises(FamilyError):
        family_four_l(parse_differences("1"))


def test_p2_family():
    rec = family_p2(parse_differences("1,4"))
    assert oracle_matches(rec, "1,4")
    # case (ii) with q > 2l
    rec = family_p2(parse_differences("1,3,4,6"))
    assert oracle_matches(rec, "1,3,4,6")
    with pytest.raises(FamilyError):
        family_p2(parse_differences("2,4"))


def test_p2_equals_synthesis_for_14():
    d = parse_differences("1,4")
    from rcl.digraph import sigma_state

    comb = comb_from_differences(d)
    analysis = analyze_cycles(build_digraph(comb), common_node=sigma_state(comb, 1))
    assert family_p2(d) == from_common_node(analysis)


def test_classify_examples():
    cases = {
        "1": "well_based",  # a=0: the domino
        "1,2,3": "well_based",  # (q+1)-omino
        "2": "t_finite",  # (1,1,1)-comb, r >= l
        "1,3": "well_based",  # (2,1,1)-comb, l > r
        "2,3": "t_finite",  # (1,1,2)-comb, r >= l
        "3": "four_l",
        "2,4": "min1arc",
        "1,4": "p2",
        "1,3,4,6": "p2",
        "2,4,5,6": "t_finite",
        "1,4,5": "min1arc",
        "1,5": "general",
    }
    for spec, tag in cases.items():
        assert classify(parse_differences(spec)) == tag, spec


def test_recurrence_for_paths():
    assert recurrence_for(parse_differences("1"))[0] == "well_based"
    assert recurrence_for(parse_differences("1,4"))[0] == "p2"
    tag, rec = recurrence_for(parse_differences("1,5"))
    assert tag == "none" and rec is None


def test_totals_equal_triangle_sums():
    for spec in ("1", "2", "1,4", "1,3,5", "2,4"):
        _, rec = recurrence_for(parse_differences(spec))
        table = evaluate_recurrence(rec, 30)
        assert evaluate_totals(rec, 30) == table.totals


def test_gf_q1():
    _, rec = recurrence_for(parse_differences("1"))
    gf = gf_from_recurrence(rec, 1)
    assert gf.numerator == (1, 1)
    assert gf.denominator == (1, -1, -1)
    assert gf.series(8) == (1, 2, 3, 5, 8, 13, 21, 34, 55)


def test_gf_well_based_closed_form():
    d = parse_differences("1,3,5")
    gf = gf_well_based(d)
    assert gf.numerator == (1, 1, 0, 1, 0, 1)
    oracle = subset_count_oracle(d, 18, want_triangle=False)
    assert gf.series(18) == oracle.totals
    # the Lemma-1 conversion of the family recurrence gives the same series
    gf2 = gf_from_recurrence(family_well_based(d), d.q)
    assert gf2.series(18) == oracle.totals


def test_gf_rejects_nonunit_constant():
    with pytest.raises(ValueError):
        series_expand(RationalGF((1,), (2, 1)), 5)
    with pytest.raises(ValueError):
        RationalGF((1,), ())


def test_rational_gf_normalisation():
    gf = RationalGF((2, 2), (-2, 2))
    assert gf.numerator == (-1, -1)
    assert gf.denominator == (1, -1)


def test_a263710_totals_via_p2():
    # OEIS A263710 counts the Q={1,4} permutations of section test_bijections;
    # its recursion follows from the p2 family
    from rcl.bijections import perm_count_1m

    rec = family_p2(parse_differences("1,4"))
    d = parse_differences("1,4")
    totals = evaluate_totals(rec, 9 + d.q)
    for n in range(10):
        assert perm_count_1m(n, 4).total == totals[n + d.q]


def test_format_recurrence():
    rec = Recurrence(((0, 0, 1), (2, 1, -1)), ((1, 0, 1), (2, 1, 1), (4, 2, -3)))
    text = format_recurrence(rec)
    assert text.startswith("B_{n,k} = δ_{n,0}δ_{k,0} - δ_{n,2}δ_{k,1}")
    assert "+ B_{n-1,k}" in text and "- 3B_{n-4,k-2}" in text
    totals = format_recurrence(rec, triangle=False)
    assert totals.startswith("B_n = ")
    assert "B_{n-4}" in totals
