import itertools
import random

import pytest

import linematch.ommd as om
from linematch.blocks import partition_blocks
from linematch.mm import mm_solve
from linematch.model import INF, S, T, Infeasible, make_instance, verify_matching
from linematch.ommd import (CannotSatisfyLocally, DemandCostTable, RoundState, case_a_step,
                            cross_partition_satisfy, demand_round_match, leftward_cost, ommd_solve,
                            separating_scan, tail_demand_dp)
from linematch.oracles import oracle_enum, oracle_mcf


def test_forced_example():
    assert ommd_solve(make_instance([0], [1, 2], [2], [1, 1])).cost == 3


def test_example_with_double_demand():
    rep = ommd_solve(make_instance([0, 10], [4, 6], [1, 1], [2, 1]))
    assert rep.cost == 14
    assert rep.matching.pairs == {(0, 0), (1, 0), (1, 1)}


def test_infeasible_propagates():
    with pytest.raises(Infeasible):
        ommd_solve(make_instance([0], [1, 2], [3], [1, 1]))


def test_report_fields():
    inst = make_instance([0, 5, 9], [1, 2, 7], [2, 1, 3], [3, 1, 2])
    rep = ommd_solve(inst)
    assert rep.algorithm == "ommd" and rep.n == 6 and rep.steps > 0
    assert rep.counters["blocks"] == len(partition_blocks(inst))
    assert verify_matching(inst, rep.matching) == rep.cost


@pytest.mark.parametrize("seed", range(300))
def test_matches_flow_oracle(seed, rand):
    inst = rand(seed, max_n=40, max_demand=5, coord_range=200)
    rep = ommd_solve(inst)
    assert verify_matching(inst, rep.matching) == rep.cost == oracle_mcf(inst).cost


@pytest.mark.parametrize("seed", range(100))
def test_matches_enumeration(seed, rand):
    inst = rand(seed, max_n=8, max_demand=2, max_pairs=16)
    assert ommd_solve(inst).cost == oracle_enum(inst).cost


def test_python_engine_agrees(monkeypatch, rand):
    monkeypatch.setattr(om, "KERNEL_SPAN_LIMIT", 0)
    for seed in range(80):
        inst = rand(seed, max_n=25, max_demand=4)
        rep = ommd_solve(inst)
        assert rep.counters.get("engine_python") or rep.counters.get("engine_two-block")
        assert verify_matching(inst, rep.matching) == rep.cost == oracle_mcf(inst).cost


def test_huge_coordinates_exact():
    inst = make_instance([-(2**63), 2**63 - 1], [0, 5], [2, 1], [1, 2])
    assert ommd_solve(inst).cost == oracle_mcf(inst).cost == 3 * 2**63 - 1


def test_mm_reduction(rand):
    for seed in range(200):
        inst = rand(seed, max_n=60, max_demand=1, coord_range=500)
        assert ommd_solve(inst).cost == mm_solve(inst).cost


def _neg(inst):
    return make_instance([-x for x in inst.s_coords], [-x for x in inst.t_coords],
                         inst.s_demands, inst.t_demands)


def test_translation_and_reflection(rand):
    for seed in range(100):
        inst = rand(seed, max_n=30, max_demand=4)
        c = ommd_solve(inst).cost
        moved = make_instance([x + 12345 for x in inst.s_coords], [x + 12345 for x in inst.t_coords],
                              inst.s_demands, inst.t_demands)
        assert ommd_solve(moved).cost == c
        assert ommd_solve(_neg(inst)).cost == c


def test_demand_monotonicity(rand):
    for seed in range(100):
        inst = rand(seed, max_n=20, max_demand=3)
        c = ommd_solve(inst).cost
        r = random.Random(seed)
        i = r.randrange(inst.y)
        if inst.s_demands[i] < inst.z:
            sd = list(inst.s_demands)
            sd[i] += 1
            assert ommd_solve(inst.with_demands(sd, inst.t_demands)).cost >= c


# --- demand rounds on two blocks ----------------------------------------------


def _two_blocks(inst):
    part = partition_blocks(inst)
    assert len(part) == 2
    A = [(part[0].side, i) for i in part[0].indices]
    B = [(part[1].side, i) for i in part[1].indices]
    return RoundState(inst, A + B), A, B


def test_round_fan_example():
    inst = make_instance([0], [1, 2])
    st, A, B = _two_blocks(inst)
    assert demand_round_match(st, A, B, 0) == 3
    assert st.pairs == {(0, 0), (0, 1)} and st.k == 1


def test_round_orientation_does_not_matter():
    inst = make_instance([0, 1], [2, 3])
    st, A, B = _two_blocks(inst)
    assert demand_round_match(st, A, B, 0) == 4


def test_round_needs_big_enough_blocks():
    inst = make_instance([0], [1, 2, 3], [1], [1, 2, 1])
    st, A, B = _two_blocks(inst)
    demand_round_match(st, A, B, 0)
    with pytest.raises(CannotSatisfyLocally):
        demand_round_match(st, A, B, 1)


def test_round_order_is_checked():
    st, A, B = _two_blocks(make_instance([0], [1, 2]))
    with pytest.raises(ValueError):
        demand_round_match(st, A, B, 1)


@pytest.mark.parametrize("seed", range(150))
def test_rounds_match_restricted_enumeration(seed):
    r = random.Random(seed)
    s, t = r.randint(1, 4), r.randint(1, 4)
    a = sorted(r.sample(range(0, 50), s))
    b = sorted(r.sample(range(50, 100), t))
    inst = make_instance(a, b, [r.randint(1, t) for _ in a], [r.randint(1, s) for _ in b])
    st, A, B = _two_blocks(inst)
    for k in range(inst.max_demand()):
        demand_round_match(st, A, B, k)
        capped = inst.with_demands([min(d, k + 1) for d in inst.s_demands],
                                   [min(d, k + 1) for d in inst.t_demands])
        verify_matching(capped, st.pairs)
        assert st.cost() == oracle_enum(capped).cost


# --- separating scan ----------------------------------------------------------------


def _exhaustive(G, e, t):
    s = len(G) - 1
    out = []
    for i in range(1, t + 1):
        vals = [G[h] + max(0, i - (s - h)) * e for h in range(s + 1)]
        out.append(vals.index(min(vals)))
    return out


def test_scan_reduces_to_block_pair_costs(rand):
    from linematch.mm import mm_table
    checked = 0
    for seed in range(200):
        tab = mm_table(rand(seed, max_n=14, max_demand=1))
        for st in tab.columns[1:]:
            g = st.g
            hs = separating_scan(st.G, g.e[-1], g.t)
            for i, h in enumerate(hs, 1):
                cost = st.G[h] + max(0, i - (g.s - h)) * g.e[-1] + g.fsum(1, i)
                assert cost == st.c[i]
                checked += 1
    assert checked > 200


def test_scan_stays_at_last_point():
    # h = s: the whole of A_w is covered from the left and b_1 hangs off a_s;
    # later b_i keep that split
    assert separating_scan([100, 90, 5], 1, 4) == [2, 2, 2, 2]


@pytest.mark.parametrize("seed", range(300))
def test_scan_matches_exhaustive_and_is_monotone(seed):
    r = random.Random(seed)
    s, t = r.randint(1, 8), r.randint(1, 10)
    G = [r.choice([INF, r.randint(0, 30), r.randint(0, 30)]) for _ in range(s + 1)]
    G[r.randrange(s + 1)] = r.randint(0, 30)
    e = r.randint(0, 6)
    hs = separating_scan(G, e, t)
    assert hs == _exhaustive(G, e, t)
    assert all(x >= y for x, y in zip(hs, hs[1:]))


# --- case A ---------------------------------------------------------------------------


def _prefix_oracle(inst, q, j):
    sub = om.prefix_instance(inst, q, j)
    if not sub.s_coords or not sub.t_coords:
        return INF
    try:
        return oracle_mcf(sub).cost
    except Infeasible:
        return INF


def test_case_a0_label_and_value():
    inst = make_instance([0, 1], [2, 3, 4], [1, 2], [2, 1, 1])
    tab = DemandCostTable(inst)
    res = case_a_step(tab, 0, 3, 1)
    assert res.subcase == "A.0"
    assert res.value == ommd_solve(inst).cost == tab.final()


def test_case_a1_single_point():
    inst = make_instance([0, 5], [3, 7, 8])     # blocks {0} {3} {5} {7, 8}
    res = case_a_step(DemandCostTable(inst), 2, 2, 0)
    assert res.subcase == "A.1"
    assert res.value == _prefix_oracle(inst, (T, 2), 1)


def test_case_a_hypothesis_enforced():
    inst = make_instance([0, 5], [3, 7, 8], [1, 1], [1, 2, 1])
    with pytest.raises(CannotSatisfyLocally):
        case_a_step(DemandCostTable(inst), 2, 2, 1)


@pytest.mark.parametrize("seed", range(120))
def test_case_a_matches_restricted_oracle(seed, rand):
    inst = rand(seed, max_n=12, max_demand=3)
    part = partition_blocks(inst)
    tab = DemandCostTable(inst)
    for w in range(len(part) - 1):
        for i in range(1, len(part[w + 1]) + 1):
            for k in range(3):
                try:
                    res = case_a_step(tab, w, i, k)
                except CannotSatisfyLocally:
                    continue
                b = part[w + 1]
                j = min(k + 1, b.demands[i - 1])
                assert res.value == _prefix_oracle(inst, (b.side, b.indices[i - 1]), j)
    assert tab.final() == ommd_solve(inst).cost


# --- cross-partition planning -----------------------------------------------------------


def test_cross_not_needed_when_block_is_big_enough():
    inst = make_instance([0, 1, 2], [10], [1, 1, 1], [3])
    part = partition_blocks(inst)
    plan = cross_partition_satisfy(inst, part, (T, 0), -1)
    assert (plan.target, plan.skipped, plan.fan) == (0, [], [])
    assert ommd_solve(inst).cost == oracle_enum(inst).cost == 27


def test_cross_infeasible():
    inst = make_instance([0], [1, 2], [3], [1, 1])
    with pytest.raises(Infeasible):
        cross_partition_satisfy(inst, partition_blocks(inst), (S, 0), 1)


def test_cross_within_adjacent_block():
    inst = make_instance([0, 6], [2, 3], [2, 1], [1, 1])
    plan = cross_partition_satisfy(inst, partition_blocks(inst), (S, 0), 1)
    assert plan.target == 1 and plan.skipped == []
    assert ommd_solve(inst).cost == oracle_enum(inst).cost


def test_cross_skips_small_blocks():
    inst = make_instance([0, 2, 4], [1, 3, 5], [3, 1, 1], [1, 1, 1])
    part = partition_blocks(inst)
    plan = cross_partition_satisfy(inst, part, (S, 0), 1)
    assert plan.target == 5 and plan.skipped == [1, 3]
    assert plan.fan == [(0, 0), (0, 1)]
    assert cross_partition_satisfy(inst, part, (S, 0), -1).target is None
    with pytest.raises(ValueError):
        cross_partition_satisfy(inst, part, (S, 0), 0)
    assert ommd_solve(inst).counters["cross_partition_points"] == 1


# --- tail DP ----------------------------------------------------------------------------


def _compositions(costs, k):
    best = INF
    n = len(costs)
    for split in itertools.product(range(k + 1), repeat=n):
        if sum(split) == k and split[0] >= 1:
            best = min(best, sum(costs[i][c] for i, c in enumerate(split)))
    return best


def test_tail_dp_k1_single_option():
    costs = [[0, 4], [0, 3], [0, 9]]
    C = tail_demand_dp(costs, 1)
    assert [c[1] for c in C] == [4, 4, 4]


def test_tail_dp_hand_example():
    costs = [[0, 2, 7], [0, 1, 3], [0, 5, 6]]
    C = tail_demand_dp(costs, 2)
    assert C[2][2] == _compositions(costs, 2) == 3
    with pytest.raises(ValueError):
        tail_demand_dp([[0, 1]], 2)


@pytest.mark.parametrize("seed", range(80))
def test_tail_dp_matches_restricted_enumeration(seed):
    r = random.Random(seed)
    left = sorted(r.sample(range(0, 40), r.randint(1, 4)))
    block = sorted(r.sample(range(50, 90), r.randint(1, 3)))
    inst = make_instance(block, left)          # block is S, left points are T
    part = partition_blocks(inst)
    w = len(part) - 1
    k = r.randint(1, 3)
    costs = [[leftward_cost(inst, part, w, p, u) for u in range(k + 1)] for p in range(len(block))]
    C = tail_demand_dp(costs, k)
    # k distinct (block point, left point) pairs, the first block point used at least once
    pairs = [(i, j) for i in range(len(block)) for j in range(len(left))]
    best = INF
    for sub in itertools.combinations(pairs, k):
        if any(i == 0 for i, _ in sub):
            best = min(best, sum(block[i] - left[j] for i, j in sub))
    assert C[-1][k] == best
