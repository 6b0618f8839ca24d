"""Seeded instance generation, differential comparison and scaling benchmarks."""

from __future__ import annotations

import csv
import random
import statistics
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .mm import mm_solve
from .model import (Infeasible, Instance, LinematchError, SolveReport, dump_instance,
                    load_instance, make_instance, verify_matching)
from .ommd import ommd_solve
from .oracles import oracle_enum, oracle_mcf

SHAPES = ("uniform", "ones", "heavy")


class SpecError(LinematchError, ValueError):
    pass


@dataclass(frozen=True)
class GenSpec:
    seed: int
    y: int
    z: int
    coord_range: int = 100          # coordinates drawn from [0, coord_range]
    max_demand: int = 1
    shape: str = "uniform"
    guarantee_feasible: bool = True

    def validate(self) -> None:
        if self.y < 1 or self.z < 1:
            raise SpecError("both sets need at least one point")
        if self.coord_range < 0:
            raise SpecError("coord_range must be >= 0")
        if self.max_demand < 1:
            raise SpecError("max_demand must be >= 1")
        if self.shape not in SHAPES:
            raise SpecError(f"unknown demand shape {self.shape!r}")


def _demand(rng: random.Random, shape: str, top: int) -> int:
    if shape == "ones":
        return 1
    if shape == "heavy":
        return min(top, int(rng.paretovariate(1.2)))
    return rng.randint(1, top)


def gen_instance(spec: GenSpec) -> Instance:
    """Deterministic in ``spec``; with ``guarantee_feasible`` every demand is
    clamped to the size of the opposite set."""
    spec.validate()
    rng = random.Random(spec.seed)
    s = [rng.randint(0, spec.coord_range) for _ in range(spec.y)]
    t = [rng.randint(0, spec.coord_range) for _ in range(spec.z)]
    sd = [_demand(rng, spec.shape, spec.max_demand) for _ in s]
    td = [_demand(rng, spec.shape, spec.max_demand) for _ in t]
    if spec.guarantee_feasible:
        sd = [min(d, spec.z) for d in sd]
        td = [min(d, spec.y) for d in td]
    return make_instance(s, t, sd, td)


# --- solvers by name -------------------------------------------------------------

Solver = Callable[[Instance], Any]


def _mm(inst: Instance):
    return mm_solve(inst)


ALGOS: dict[str, Solver] = {
    "ommd": ommd_solve,
    "mm": _mm,
    "mcf": oracle_mcf,
    "enum": oracle_enum,
}


def run_algo(algo: str | Solver, inst: Instance) -> tuple[int, Any]:
    """Cost and witness; the witness is verified before returning."""
    fn = ALGOS[algo] if isinstance(algo, str) else algo
    res = fn(inst)
    check = inst.with_demands([1] * inst.y, [1] * inst.z) if algo == "mm" else inst
    verify_matching(check, res.matching)
    return res.cost, res.matching


# --- differential comparison -------------------------------------------------------


@dataclass(frozen=True)
class TrialSpec:
    seed: int
    max_n: int
    max_demand: int = 1
    coord_range: int = 100
    max_pairs: int | None = None      # cap on y*z (enumeration oracle)
    shape: str = "uniform"
    guarantee_feasible: bool = True

    def instance(self, trial: int) -> Instance:
        rng = random.Random(f"{self.seed}:{trial}")
        while True:
            n = rng.randint(2, max(2, self.max_n))
            y = rng.randint(1, n - 1)
            if self.max_pairs is None or y * (n - y) <= self.max_pairs:
                break
        return gen_instance(GenSpec(rng.getrandbits(48), y, n - y, self.coord_range,
                                    self.max_demand, self.shape, self.guarantee_feasible))


@dataclass
class Mismatch:
    trial: int
    instance: dict
    results: dict[str, Any]

    def to_doc(self) -> dict:
        return asdict(self)


@dataclass
class CompareReport:
    algos: list[str]
    trials: int
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _outcome(algo, inst: Instance) -> Any:
    try:
        return run_algo(algo, inst)[0]
    except Infeasible:
        return "infeasible"
    except LinematchError as exc:
        return f"error: {type(exc).__name__}: {exc}"


def _algo_name(a) -> str:
    return a if isinstance(a, str) else getattr(a, "__name__", repr(a))


def run_trial(algos: Sequence, inst: Instance, trial: int = 0) -> Mismatch | None:
    res = {_algo_name(a): _outcome(a, inst) for a in algos}
    if len(set(map(repr, res.values()))) > 1:
        return Mismatch(trial, dump_instance(inst), res)
    return None


def _trial_job(args):
    algos, spec, trial = args
    return run_trial(algos, spec.instance(trial), trial)


def compare(algos: Sequence[str | Solver], spec: TrialSpec, trials: int,
            jobs: int = 1, stop_at_first: bool = False) -> CompareReport:
    """Run every algorithm on ``trials`` generated instances and collect
    disagreements (cost, feasibility verdict or invalid witness)."""
    if len(algos) < 2:
        raise SpecError("compare needs at least two algorithms")
    if "mm" in algos and spec.shape != "ones":
        spec = TrialSpec(**{**asdict(spec), "shape": "ones", "max_demand": 1})
    rep = CompareReport([_algo_name(a) for a in algos], trials)
    work = ((list(algos), spec, k) for k in range(trials))
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = ex.map(_trial_job, work, chunksize=64)
            for m in results:
                if m is not None:
                    rep.mismatches.append(m)
    else:
        for args in work:
            m = _trial_job(args)
            if m is not None:
                rep.mismatches.append(m)
                if stop_at_first:
                    break
    rep.mismatches.sort(key=lambda m: m.trial)
    return rep


def replay(algos: Sequence[str | Solver], mismatch: Mismatch | dict) -> Mismatch | None:
    doc = mismatch.to_doc() if isinstance(mismatch, Mismatch) else mismatch
    return run_trial(algos, load_instance(doc["instance"]), doc["trial"])


# --- benchmarks ----------------------------------------------------------------


@dataclass(frozen=True)
class BenchRecord:
    n: int
    algo: str
    seed: int
    steps: int | None
    millis: float
    cost: int


@dataclass
class BenchResult:
    records: list[BenchRecord]
    time_slope: float
    step_slope: float | None

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "algo", "seed", "steps", "millis", "cost"])
            for r in self.records:
                w.writerow([r.n, r.algo, r.seed, "" if r.steps is None else r.steps,
                            f"{r.millis:.3f}", r.cost])


def demand_cap(n: int, scale: str) -> int:
    """Largest demand of the bench families: n/256 (linear) or 1 (const)."""
    if scale == "linear":
        return max(1, n // 256)
    if scale == "const":
        return 1
    raise SpecError(f"unknown demand scale {scale!r}")


def bench_instance(n: int, seed: int, scale: str = "linear") -> Instance:
    y = n // 2
    return gen_instance(GenSpec(seed * 1_000_003 + n, y, n - y, 4 * n, demand_cap(n, scale),
                                "ones" if scale == "const" else "uniform"))


def loglog_slope(ns: Sequence[float], vals: Sequence[float]) -> float:
    return float(np.polyfit(np.log(ns), np.log(vals), 1)[0])


def bench_run(sizes: Sequence[int], algo: str | Solver = "ommd", seed: int = 0,
              scale: str = "linear", reps: int = 3,
              make: Callable[[int, int], Instance] | None = None) -> BenchResult:
    """Median-of-``reps`` wall time and the step counter per size, with
    least-squares log-log slopes of both against n."""
    if list(sizes) != sorted(sizes):
        raise SpecError("sizes must be ascending")
    fn = ALGOS[algo] if isinstance(algo, str) else algo
    make = make or (lambda n, s: bench_instance(n, s, scale))
    recs = []
    if sizes:
        fn(make(sizes[0], seed))   # warm-up: JIT loading is not part of the timing
    for n in sizes:
        inst = make(n, seed)
        times, rep = [], None
        for _ in range(reps):
            t0 = time.perf_counter()
            rep = fn(inst)
            times.append(time.perf_counter() - t0)
        steps = rep.steps if isinstance(rep, SolveReport) else None
        recs.append(BenchRecord(n, _algo_name(algo), seed, steps,
                                statistics.median(times) * 1000, rep.cost))
    ns = [r.n for r in recs]
    tslope = loglog_slope(ns, [max(r.millis, 1e-6) for r in recs])
    sslope = (loglog_slope(ns, [max(r.steps, 1) for r in recs])
              if all(r.steps is not None for r in recs) else None)
    return BenchResult(recs, tslope, sslope)
