"""Acceptance criteria C1-C8 at full counts; see the summary section of the run."""

import random
import time

import pytest
from conftest import record

from linematch.blocks import gaps, partition_blocks
from linematch.cli import run_cli
from linematch.harness import TrialSpec, bench_run
from linematch.invariants import crossing_violations, skip_edge_violations
from linematch.mm import case0_cost, mm_solve
from linematch.model import Infeasible, check_feasible, cost_of, make_instance, verify_matching
from linematch.ommd import ommd_solve
from linematch.oracles import oracle_enum, oracle_mcf

SIZES = [2**e for e in range(10, 16)]


def test_c1_oracle_cross_agreement():
    spec = TrialSpec(101, max_n=16, max_demand=2, coord_range=100, max_pairs=16)
    t0 = time.perf_counter()
    bad = sum(oracle_enum(inst := spec.instance(k)).cost != oracle_mcf(inst).cost for k in range(5000))
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 60
    record("C1", ok, f"enum vs mcf: 5000 instances (y*z<=16), {bad} mismatches, {dt:.1f}s (limit 60s)")
    assert ok


@pytest.fixture(scope="module")
def c2_run():
    spec = TrialSpec(202, max_n=60, max_demand=5, coord_range=1000)
    t0 = time.perf_counter()
    bad, witnesses = 0, []
    for k in range(10_000):
        inst = spec.instance(k)
        rep = ommd_solve(inst)
        if verify_matching(inst, rep.matching) != rep.cost or rep.cost != oracle_mcf(inst).cost:
            bad += 1
        witnesses.append((inst, rep.matching))
    return bad, time.perf_counter() - t0, witnesses


def test_c2_ommd_correctness(c2_run):
    bad, dt, _ = c2_run
    ok = bad == 0 and dt < 300
    record("C2", ok, f"ommd vs mcf: 10000 instances (n<=60, demand<=5), {bad} mismatches "
                     f"or invalid witnesses, {dt:.1f}s (limit 300s)")
    assert ok


@pytest.fixture(scope="module")
def c3_run():
    t0 = time.perf_counter()
    small = TrialSpec(303, max_n=12, shape="ones")
    big = TrialSpec(304, max_n=200, shape="ones", coord_range=10_000)
    bad_enum = bad_ommd = 0
    witnesses = []
    for k in range(10_000):
        inst = small.instance(k)
        rep = mm_solve(inst)
        verify_matching(inst, rep.matching)
        bad_enum += rep.cost != oracle_enum(inst, limit=36).cost
        witnesses.append((inst, rep.matching))
    for k in range(10_000):
        inst = big.instance(k)
        rep, other = mm_solve(inst), ommd_solve(inst)
        bad_ommd += rep.cost != other.cost
        witnesses += [(inst, rep.matching), (inst, other.matching)]
    return bad_enum, bad_ommd, time.perf_counter() - t0, witnesses


def test_c3_mm_correctness(c3_run):
    bad_enum, bad_ommd, dt, _ = c3_run
    ok = bad_enum == 0 and bad_ommd == 0 and dt < 120
    record("C3", ok, f"mm vs enum (n<=12): {bad_enum} mismatches; mm vs ommd (n<=200): "
                     f"{bad_ommd} mismatches; 20000 instances, {dt:.1f}s (limit 120s)")
    assert ok


def test_c4_case0_closed_forms():
    rng = random.Random(404)
    bad = within = beyond = 0
    for _ in range(1000):
        s, t = rng.randint(1, 5), rng.randint(1, 4)
        left = sorted(rng.sample(range(0, 50), s))
        right = sorted(rng.sample(range(50, 101), t))
        flip = rng.random() < 0.5
        inst = make_instance(right, left) if flip else make_instance(left, right)
        g = gaps(partition_blocks(inst), 0)
        for i in range(1, t + 1):
            sub = make_instance(right[:i], left) if flip else make_instance(left, right[:i])
            bad += case0_cost(g, i) != oracle_enum(sub).cost
            within += i <= s
            beyond += i > s
    ok = bad == 0 and within > 0 and beyond > 0
    record("C4", ok, f"Case 0 formulas vs enum: 1000 two-block instances ({within} i<=s and "
                     f"{beyond} i>s entries), {bad} mismatches")
    assert ok


def _c5_counts(c2_run, c3_run):
    wit = c2_run[2] + c3_run[3]
    cross = sum(bool(crossing_violations(inst, m)) for inst, m in wit)
    skip = sum(bool(skip_edge_violations(inst, m)) for inst, m in wit)
    return len(wit), cross, skip


@pytest.fixture(scope="module")
def c5_counts(c2_run, c3_run):
    return _c5_counts(c2_run, c3_run)


def test_c5_crossing_closure(c5_counts):
    n, cross, skip = c5_counts
    record("C5", cross == 0 and skip == 0,
           f"structural invariants on {n} witnesses: crossing closure {cross} violating, "
           f"literal skip-edge fan {skip} violating (fan law is false as stated; see README)")
    assert cross == 0


@pytest.mark.xfail(strict=True, reason="the literal skip-edge fan law fails on unique optima "
                                       "spanning five or more blocks")
def test_c5_skip_edge_closure(c5_counts):
    assert c5_counts[2] == 0


def test_c6_scaling():
    t0 = time.perf_counter()
    lin = bench_run(SIZES, "ommd", seed=1, scale="linear", reps=3)
    ones = bench_run(SIZES, "ommd", seed=1, scale="const", reps=3)
    dt = time.perf_counter() - t0
    ok = lin.step_slope <= 2.3 and ones.step_slope <= 1.3 and dt < 600
    record("C6", ok, f"step slope demand~n {lin.step_slope:.3f} (<=2.3), all-ones "
                     f"{ones.step_slope:.3f} (<=1.3); time slopes {lin.time_slope:.2f}/"
                     f"{ones.time_slope:.2f}; bench {dt:.0f}s (limit 600s)")
    assert ok


def test_c7_exchange_identity():
    rng = random.Random(707)
    bad = 0
    for _ in range(1000):
        a, a2, b, b2 = sorted(rng.sample(range(-10**9, 10**9), 4))
        if rng.random() < 0.2:
            b = a2                      # the a' = b boundary
        inst = make_instance([a, a2], [b, b2])
        bad += cost_of(inst, [(0, 0), (1, 1)]) != cost_of(inst, [(0, 1), (1, 0)])
    record("C7", bad == 0, f"exchange identity on 1000 quadruples, {bad} failures")
    assert bad == 0


def test_c8_feasibility_and_exit_codes(tmp_path, capsys):
    spec = TrialSpec(808, max_n=20, max_demand=3, guarantee_feasible=False)
    bad = infeasible = 0
    for k in range(2000):
        inst = spec.instance(k)
        verdict = check_feasible(inst) is None
        try:
            oracle_mcf(inst)
            flow = True
        except Infeasible:
            flow = False
        bad += verdict != flow
        infeasible += not verdict
    inst_f = tmp_path / "ok.json"
    inst_f.write_text('{"s":[{"x":0,"demand":1},{"x":10,"demand":1}],"t":[{"x":4,"demand":2}]}')
    inf_f = tmp_path / "inf.json"
    inf_f.write_text('{"s":[{"x":0,"demand":2}],"t":[{"x":1,"demand":1}]}')
    short = tmp_path / "m.json"
    short.write_text('{"algorithm":"x","cost":4,"pairs":[[0,0]]}')
    out = tmp_path / "out.json"
    cases = [
        (["solve", "--algo", "ommd", "--input", str(inst_f), "--output", str(out)], 0),
        (["verify", "--input", str(inst_f), "--matching", str(out)], 0),
        (["verify", "--input", str(inst_f), "--matching", str(short)], 1),
        (["solve", "--algo", "ommd", "--input", str(inf_f)], 3),
        (["solve", "--algo", "ommd"], 2),
        (["compare", "--algos", "ommd,mcf", "--trials", "3", "--max-n", "5"], 2),
        (["compare", "--algos", "ommd,mcf", "--trials", "20", "--max-n", "8", "--seed", "1"], 0),
    ]
    wrong = [argv[0] for argv, code in cases if run_cli(argv) != code]
    capsys.readouterr()
    ok = bad == 0 and 0 < infeasible < 2000 and not wrong
    record("C8", ok, f"check_feasible vs mcf on 2000 instances ({infeasible} infeasible), "
                     f"{bad} disagreements; CLI exit codes {len(cases) - len(wrong)}/{len(cases)} as specified")
    assert ok
