"""Metatile digraph construction, cycle analysis, and the transfer DP."""

import pytest

from rcl.core import (
    LimitError,
    all_difference_sets,
    comb_from_differences,
    parse_differences,
)
from rcl.digraph import (
    analysis_to_json,
    analyze_cycles,
    build_digraph,
    common_node_candidates,
    count_via_transfer,
    enumerate_metatiles,
    find_common_node,
    has_inner_cycle,
    is_finite_family,
    label_str,
    sigma_state,
    to_dot,
)
from rcl.oracles import shift_to_subsets, subset_count_oracle, tiling_count_oracle


def dg_for(spec: str):
    return build_digraph(comb_from_differences(parse_differences(spec)))


def test_domino_digraph():
    dg = dg_for("1")
    assert dg.nodes == (0,)
    square, comb = dg.arcs[0]
    assert (square.tile, square.length) == ("S", 1)
    assert (comb.tile, comb.length) == ("C", 2)
    enum = enumerate_metatiles(dg, 8)
    assert enum.complete
    assert enum.items == ((1, 0, 1), (2, 1, 1))


def test_label_str():
    assert label_str(0) == "0"
    # cell 0 first: bits 0 and 2 set reads 101
    assert label_str(0b101) == "101"
    assert label_str(0b10) == "01"


def test_l1r_digraph_with_inner_cycle():
    # (2,1,1)-comb, Q={1,3}: inner cycle C[q-r], common node 01^r,
    # common circuit C[q+1]S, outer S[1]
    comb = comb_from_differences(parse_differences("1,3"))
    dg = build_digraph(comb)
    analysis = analyze_cycles(dg)
    assert label_str(analysis.common_node) == "01"
    assert [(c.symbol(), c.length) for c in analysis.inner] == [("C[2]", 2)]
    assert [(c.symbol(), c.length) for c in analysis.outer] == [("S[1]", 1)]
    assert [(c.symbol(), c.length) for c in analysis.common_circuits] == [("C[4]S", 4)]


def test_out_degree_two_everywhere():
    for q in range(1, 11):
        for d in all_difference_sets(q):
            dg = build_digraph(comb_from_differences(d))
            for node in dg.nodes:
                arcs = dg.arcs[node]
                assert len(arcs) == 2
                assert arcs[0].tile == "S" and arcs[1].tile == "C"


def test_finite_family_iff_no_inner_cycle():
    for q in range(1, 13):
        for d in all_difference_sets(q):
            comb = comb_from_differences(d)
            dg = build_digraph(comb)
            assert is_finite_family(comb) == (not has_inner_cycle(dg)), d
            # 2r >= q is the comb-shape form of the same criterion
            assert is_finite_family(comb) == (comb.gapless or 2 * comb.r >= comb.q)


def test_metatile_enumeration_incomplete_when_infinite():
    dg = dg_for("1,3")
    enum = enumerate_metatiles(dg, 12)
    assert not enum.complete
    assert all(ln <= 12 for ln, _, _ in enum.items)


def test_transfer_dp_matches_tiling_oracle():
    for q in range(1, 7):
        for d in all_difference_sets(q):
            dg = build_digraph(comb_from_differences(d))
            dp = count_via_transfer(dg, 14)
            oracle = tiling_count_oracle(d, 14)
            assert dp.totals == oracle.totals, d
            for n in range(15):
                for k in range(n + 1):
                    assert dp.by(n, k) == oracle.by(n, k), (d, n, k)


def test_transfer_dp_matches_subset_oracle_after_shift():
    d = parse_differences("1,2,4")
    dp = shift_to_subsets(count_via_transfer(build_digraph(comb_from_differences(d)), 20 + d.q), d.q)
    oracle = subset_count_oracle(d, 20)
    assert dp == oracle


def test_sigma_states():
    comb = comb_from_differences(parse_differences("1,3,4,6"))
    # sigma_1 is the comb with leading teeth dropped; sigma_a ends as 01^r
    assert label_str(sigma_state(comb, 1)) == "01101"
    assert label_str(sigma_state(comb, 2)) == "01"


def test_common_node_candidates():
    dg = dg_for("1,4")
    cands = common_node_candidates(dg)
    assert len(cands) == 2  # both sigma nodes lie on every inner cycle
    assert find_common_node(dg) == min(cands)
    assert find_common_node(dg_for("1")) is None  # no inner cycles at all


def test_common_node_override_validated():
    dg = dg_for("1,3")
    with pytest.raises(ValueError):
        analyze_cycles(dg, common_node=0)
    with pytest.raises(ValueError):
        analyze_cycles(dg_for("1"), common_node=1)


def test_common_node_choice_does_not_change_counts():
    from rcl.recurrences import evaluate_recurrence, from_common_node

    dg = dg_for("1,4")
    tables = []
    for node in common_node_candidates(dg):
        rec = from_common_node(analyze_cycles(dg, common_node=node))
        tables.append(evaluate_recurrence(rec, 25))
    assert tables[0] == tables[1]


def test_pathological_cycle_enumeration_is_capped():
    # Q={9} has exponentially many cycles and no common node; full
    # enumeration refuses rather than hanging
    with pytest.raises(LimitError):
        analyze_cycles(dg_for("9"))
    assert find_common_node(dg_for("9")) is None  # the cheap test still works


def test_to_dot_and_json():
    dg = dg_for("1,3")
    dot = to_dot(dg)
    assert dot.startswith("digraph metatiles {")
    assert '"0" -> "0" [label="S[1]"];' in dot
    assert '"01" -> "01" [label="C[2]"];' in dot
    data = analysis_to_json(analyze_cycles(dg))
    assert data["common_node"] == "01"
    assert data["inner"][0]["symbol"] == "C[2]"
