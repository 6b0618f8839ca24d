"""Exact solver for the demand version, organised in demand rounds.

Round k raises every point's working demand to min(demand, k) and then
repairs each deficit, left to right, with one shortest augmenting path in
the graph of alternating "add an unused pair" / "drop a used pair" moves.
Per-point radii act as LP duals and keep every reduced cost nonnegative,
so each path is found with Dijkstra and the final matching satisfies
complementary slackness, i.e. it is optimal.

Two engines share the same rules: the compiled kernel in ``_kernel`` for
normal use, and ``RoundEngine`` below, a plain-Python version used for
two-block rounds, prefix tables and coordinates too wide for int64 math.
"""

from __future__ import annotations

import heapq
import itertools
import time
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .blocks import BlockPartition, partition_blocks
from .model import (INF, S, T, Infeasible, Instance, LinematchError, Matching,
                    SolveReport, check_feasible, require_feasible)

# the kernel keeps x +- r and path lengths in int64
KERNEL_SPAN_LIMIT = 2**60

Point = tuple[int, int]  # (side, sorted index)


class CannotSatisfyLocally(LinematchError):
    """A round cannot be completed between two adjacent blocks alone."""


def _prio(n: int) -> np.ndarray:
    # fixed treap priorities; the solver output does not depend on them
    return np.random.default_rng(0x5EED).random(n)


def _kernel_solve(inst: Instance):
    pts = inst.merged()
    lo = pts[0][0]
    xs = np.array([p[0] - lo for p in pts], dtype=np.int64)
    typ = np.array([p[1] for p in pts], dtype=np.int64)
    dem = np.array([inst.demands(p[1])[p[2]] for p in pts], dtype=np.int64)
    from ._kernel import solve_rounds
    out, steps, cnt, _ = solve_rounds(xs, typ, dem, _prio(len(pts)))
    pairs = [(pts[a][2], pts[b][2]) for a, b in out.tolist()]
    counters = {"augmentations": int(cnt[0]), "settled": int(cnt[1]),
                "longest_path": int(cnt[2]), "radius_updates": int(cnt[3])}
    return pairs, int(steps), counters


@dataclass
class RoundState:
    """Matching, degrees and radii carried from one demand round to the next.

    ``k`` is the number of completed rounds.  Only points in ``universe``
    take part; the state is valid (dual feasible, complementary slack) for
    the sub-instance they form.
    """

    inst: Instance
    universe: list[Point]
    k: int = 0
    pairs: set[tuple[int, int]] = field(default_factory=set)
    radius: dict[Point, int] = field(default_factory=dict)
    deg: dict[Point, int] = field(default_factory=dict)
    steps: int = 0
    augmentations: int = 0

    def __post_init__(self):
        key = {(p[1], p[2]): (p[0], p[1], p[2]) for p in self.inst.merged()}
        self.universe = sorted(self.universe, key=key.__getitem__)
        for p in self.universe:
            self.radius.setdefault(p, 0)
            self.deg.setdefault(p, 0)

    @classmethod
    def whole(cls, inst: Instance) -> RoundState:
        return cls(inst, [(S, i) for i in range(inst.y)] + [(T, j) for j in range(inst.z)])

    def x(self, p: Point) -> int:
        return self.inst.coords(p[0])[p[1]]

    def demand(self, p: Point) -> int:
        return self.inst.demands(p[0])[p[1]]

    def need(self, p: Point, k: int) -> int:
        return min(self.demand(p), k)

    def used(self, p: Point, q: Point) -> bool:
        return (_pair(p, q)) in self.pairs

    def pending(self, block_points: Sequence[Point], k: int) -> list[Point]:
        """Points still short of their round-k working demand."""
        return [p for p in block_points if self.deg[p] < self.need(p, k)]

    def cost(self) -> int:
        sc, tc = self.inst.s_coords, self.inst.t_coords
        return sum(abs(sc[i] - tc[j]) for i, j in self.pairs)


def _pair(p: Point, q: Point) -> tuple[int, int]:
    return (p[1], q[1]) if p[0] == S else (q[1], p[1])


class RoundEngine:
    """Plain-Python augmenting-path engine over a RoundState's universe."""

    def __init__(self, state: RoundState):
        self.st = state
        self.by_side = {S: [p for p in state.universe if p[0] == S],
                        T: [p for p in state.universe if p[0] == T]}

    def _augment(self, p: Point, k: int) -> None:
        st = self.st
        r, deg = st.radius, st.deg
        sgn = p[0]
        dist = {p: 0}
        prev: dict[Point, Point] = {}
        done = set()
        order = []
        heap = [(0, 0, p)]
        tie = itertools.count(1)
        best, tgt = None, None
        while heap:
            d, _, u = heapq.heappop(heap)
            if best is not None and d >= best:
                break
            if u in done:
                continue
            done.add(u)
            order.append(u)
            st.steps += 1
            xu = st.x(u)
            if u[0] == sgn:
                if u != p and deg[u] > st.need(u, k):
                    if best is None or d < best:
                        best, tgt = d, u
                    continue
                for q in self.by_side[1 - sgn]:
                    st.steps += 1
                    if q in done or st.used(u, q):
                        continue
                    nd = d + abs(xu - st.x(q)) - r[u] - r[q]
                    if nd < dist.get(q, INF):
                        dist[q], prev[q] = nd, u
                        heapq.heappush(heap, (nd, next(tie), q))
            else:
                short = deg[u] < st.need(u, k)
                tc = d if short else d + r[u]
                if best is None or tc < best:
                    best, tgt = tc, u
                if short:
                    continue
                for q in self.by_side[sgn]:
                    st.steps += 1
                    if q in done or not st.used(u, q):
                        continue
                    nd = d + r[u] + r[q] - abs(xu - st.x(q))
                    if nd < dist.get(q, INF):
                        dist[q], prev[q] = nd, u
                        heapq.heappush(heap, (nd, next(tie), q))
        if tgt is None:
            raise Infeasible(f"no augmenting path from {p}")
        for u in order:
            dl = best - dist[u]
            if dl > 0:
                r[u] += dl if u[0] == sgn else -dl
        v = tgt
        deg[v] += 1 if v[0] != sgn else -1
        while v != p:
            u = prev[v]
            if u[0] == sgn:
                st.pairs.add(_pair(u, v))
            else:
                st.pairs.discard(_pair(u, v))
            v = u
        deg[p] += 1
        st.augmentations += 1

    def run_round(self, k: int, points: Sequence[Point] | None = None) -> None:
        """Bring every point (or just ``points``) up to min(demand, k)."""
        for p in (self.st.universe if points is None else points):
            while self.st.deg[p] < self.st.need(p, k):
                self._augment(p, k)


def demand_round_match(state: RoundState, A: Sequence[Point], B: Sequence[Point], k: int) -> int:
    """Satisfy the (k+1)-th demand unit of every point in two adjacent blocks.

    ``state`` must describe exactly the sub-instance A + B after k completed
    rounds.  Returns the cost added by the round; the resulting matching is
    optimal for demands capped at k+1.
    """
    for side, mine, other in ((A, A, B), (B, B, A)):
        for p in mine:
            if state.demand(p) >= k + 1 and len(other) < k + 1:
                raise CannotSatisfyLocally(
                    f"{p} needs {k + 1} partners but the adjacent block has {len(other)}")
    if state.k != k:
        raise ValueError(f"state has completed {state.k} rounds, not {k}")
    before = state.cost()
    RoundEngine(state).run_round(k + 1, list(A) + list(B))
    state.k = k + 1
    return state.cost() - before


def _solve_two_blocks(inst: Instance, part: BlockPartition):
    A = [(part[0].side, i) for i in part[0].indices]
    B = [(part[1].side, i) for i in part[1].indices]
    st = RoundState(inst, A + B)
    for k in range(inst.max_demand()):
        demand_round_match(st, A, B, k)
    return st


def ommd_solve(inst: Instance) -> SolveReport:
    """Minimum-cost matching meeting every demand (deg >= demand)."""
    require_feasible(inst)
    t0 = time.perf_counter()
    part = partition_blocks(inst)
    counters: dict[str, int] = {"blocks": len(part)}
    span = max(inst.s_coords[-1], inst.t_coords[-1]) - min(inst.s_coords[0], inst.t_coords[0])
    if len(part) == 2:
        st = _solve_two_blocks(inst, part)
        pairs, steps = st.pairs, st.steps
        counters["augmentations"] = st.augmentations
        engine = "two-block"
    elif span >= KERNEL_SPAN_LIMIT:
        st = RoundState.whole(inst)
        eng = RoundEngine(st)
        for k in range(1, inst.max_demand() + 1):
            eng.run_round(k)
        pairs, steps = st.pairs, st.steps
        counters["augmentations"] = st.augmentations
        engine = "python"
    else:
        pairs, steps, more = _kernel_solve(inst)
        counters.update(more)
        engine = "kernel"
    m = Matching.build(inst, pairs)
    counters["cross_partition_points"] = len(cross_partition_points(inst, part))
    rep = SolveReport("ommd", m.total_cost, m, time.perf_counter() - t0, inst.n,
                      steps=steps, counters=counters)
    rep.counters["engine_" + engine] = 1
    return rep


# --- prefix tables -------------------------------------------------------


def prefix_instance(inst: Instance, q: Point, j: int) -> Instance:
    """The points up to and including q, with q's demand replaced by j."""
    pts = inst.merged()
    stop = next(k for k, p in enumerate(pts) if (p[1], p[2]) == q)
    keep = pts[:stop + 1]
    s_idx = [p[2] for p in keep if p[1] == S]
    t_idx = [p[2] for p in keep if p[1] == T]
    sd = [inst.s_demands[i] for i in s_idx]
    td = [inst.t_demands[i] for i in t_idx]
    if q[0] == S:
        sd[-1] = j
    else:
        td[-1] = j
    return Instance(tuple(inst.s_coords[i] for i in s_idx), tuple(sd),
                    tuple(inst.t_coords[i] for i in t_idx), tuple(td),
                    tuple(range(len(s_idx))), tuple(range(len(t_idx))))


@dataclass
class DemandCostTable:
    """C(q, j): optimum over the prefix {p <= q} with j demand units of q.

    Every earlier point keeps its full demand.  Entries are computed on
    first use by the exact engine; an infeasible prefix gives INF.
    """

    inst: Instance
    cache: dict[tuple[Point, int], float] = field(default_factory=dict)

    def value(self, q: Point, j: int) -> float:
        key = (q, j)
        if key not in self.cache:
            sub = prefix_instance(self.inst, q, j)
            if not sub.s_coords or not sub.t_coords or check_feasible(sub) is not None:
                self.cache[key] = INF
            else:
                st = RoundState.whole(sub)
                eng = RoundEngine(st)
                for k in range(1, sub.max_demand() + 1):
                    eng.run_round(k)
                self.cache[key] = st.cost()
        return self.cache[key]

    def final(self) -> float:
        last = self.inst.merged()[-1]
        q = (last[1], last[2])
        return self.value(q, self.inst.demands(q[0])[q[1]])


@dataclass
class CaseA:
    value: float
    subcase: str


def case_a_step(table: DemandCostTable, w: int, i: int, k: int) -> CaseA:
    """C(b_i, k+1) for b_i in A_{w+1}, valid under the Case A hypothesis.

    The hypothesis |A_w| >= min(k+1, max(beta_1..beta_i)) says the round
    can be served by the adjacent block; otherwise CannotSatisfyLocally.
    """
    part = partition_blocks(table.inst)
    if not 0 <= w < len(part) - 1:
        raise IndexError(w)
    A, B = part[w], part[w + 1]
    if not 1 <= i <= len(B):
        raise IndexError(i)
    s = len(A)
    top = max(B.demands[:i])
    if s < min(k + 1, top):
        raise CannotSatisfyLocally(f"|A_{w}|={s} < min({k + 1}, {top})")
    if w == 0:
        sub = "A.0"
    elif s == 1:
        sub = "A.1"
    elif i == 1:
        sub = "A.2"
    else:
        sub = "A.3"
    q = (B.side, B.indices[i - 1])
    return CaseA(table.value(q, min(k + 1, B.demands[i - 1])), sub)


# --- tail DP over a block ------------------------------------------------------


def leftward_cost(inst: Instance, part: BlockPartition, w: int, pos: int, units: int) -> float:
    """Cost of serving ``units`` demand of A_w's point ``pos`` (0-based) from
    opposite points left of the block: the ``units`` nearest ones."""
    blk = part[w]
    x = blk.coords[pos]
    other = [c for v in range(w) if part[v].side != blk.side for c in part[v].coords]
    if units > len(other):
        return INF
    other.sort(key=lambda c: x - c)
    return sum(x - c for c in other[:units])


def tail_demand_dp(costs: Sequence[Sequence[float]], k: int) -> list[list[float]]:
    """Column DP C(a_i, k') = min_{j=1..k'} C(a_{i-1}, j) + Cost(a_i, k'-j).

    ``costs[i][r]`` is Cost(a_{i+1}, r) for r = 0..k.  Returns ``C`` with
    C[i][k'] for k' = 0..k (C[0] is a_1 alone, so C[0][k'] = Cost(a_1, k')).
    """
    if not costs:
        return []
    for row in costs:
        if len(row) < k + 1:
            raise ValueError("each cost row needs entries for 0..k units")
    col = [costs[0][r] for r in range(k + 1)]
    out = [col]
    for row in costs[1:]:
        nxt = [INF] * (k + 1)
        for kk in range(1, k + 1):
            nxt[kk] = min(col[j] + row[kk - j] for j in range(1, kk + 1))
        out.append(nxt)
        col = nxt
    return out


# --- separating scan --------------------------------------------------------


def separating_scan(G: Sequence[float], e_s: int, t: int) -> list[int]:
    """Split points h*(i), i = 1..t, for the block-pair recurrence

        T_i(h) = G(h) + max(0, i - (s - h)) * e_s,   h = 0..s

    (G(h) = C(a_h) + E(h+1..s)).  Ties go to the smaller h.  Since
    T_{i+1} - T_i is nondecreasing in h, h*(i) never increases, so each
    step only looks left of the previous answer and the scan is O(s + t).
    """
    s = len(G) - 1
    pre = []                    # prefix argmin of G, ties -> smaller h
    best = (INF, -1)
    for h, v in enumerate(G):
        if v < best[0]:
            best = (v, h)
        pre.append(best)
    # h in (s-i, hi] pays the overflow term: minimise G(h) + h*e_s there.
    # The window grows on the left and shrinks on the right; the deque
    # holds candidates with values falling towards the right end.
    win: deque[int] = deque()
    out = []
    hi = s
    nxt = s                     # next h to enter the window
    for i in range(1, t + 1):
        while nxt > s - i and nxt >= 0:
            if nxt <= hi:
                val = G[nxt] + nxt * e_s
                while win and G[win[0]] + win[0] * e_s >= val:
                    win.popleft()
                win.appendleft(nxt)
            nxt -= 1
        while win and win[-1] > hi:
            win.pop()
        cand = []
        if min(s - i, hi) >= 0:
            cand.append(pre[min(s - i, hi)])
        if win:
            h = win[-1]
            cand.append((G[h] + (h + i - s) * e_s, h))
        v = min(c[0] for c in cand)
        h = min(c[1] for c in cand if c[0] == v)
        out.append(h)
        hi = h
    return out


# --- cross-partition planning -------------------------------------------------


@dataclass
class CrossPlan:
    point: Point
    direction: int
    target: int | None              # block that finally covers the demand
    skipped: list[int]              # opposite-set blocks crossed on the way
    fan: list[tuple[int, int]]      # pairs to every point of the skipped blocks


def cross_partition_satisfy(inst: Instance, part: BlockPartition, p: Point,
                            direction: int, demand: int | None = None) -> CrossPlan:
    """Scan opposite-set blocks away from p until ``demand`` partners exist.

    Direction -1 looks left (A_{w-1}, A_{w-3}, ...), +1 right.  ``target``
    is None when the scan runs out of blocks (that side alone cannot serve
    the demand).  ``fan`` lists the pairs from p to every point of the
    fully crossed blocks; these are candidates, not forced edges: an
    optimum need not contain them when the span covers five or more blocks.
    """
    if direction not in (-1, 1):
        raise ValueError("direction must be -1 or +1")
    need = inst.demands(p[0])[p[1]] if demand is None else demand
    if need > (inst.z if p[0] == S else inst.y):
        raise Infeasible(f"{p} needs {need} partners")
    w = part.block_of(*p)
    got = 0
    skipped: list[int] = []
    v = w + direction
    while 0 <= v < len(part):
        got += len(part[v])
        if got >= need:
            fan = []
            for b in skipped:
                for q in part[b].indices:
                    fan.append((p[1], q) if p[0] == S else (q, p[1]))
            return CrossPlan(p, direction, v, skipped, fan)
        skipped.append(v)
        v += 2 * direction
    return CrossPlan(p, direction, None, skipped, [])


def cross_partition_points(inst: Instance, part: BlockPartition | None = None) -> list[Point]:
    """Points whose demand exceeds both adjacent opposite blocks."""
    part = part or partition_blocks(inst)
    out = []
    for w, blk in enumerate(part.blocks):
        room = max(len(part[v]) for v in (w - 1, w + 1) if 0 <= v < len(part))
        for i, d in zip(blk.indices, blk.demands):
            if d > room:
                out.append((blk.side, i))
    return out
