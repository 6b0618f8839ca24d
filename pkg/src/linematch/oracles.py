"""Two independent referees: brute-force enumeration and min-cost flow."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .model import Infeasible, Instance, LinematchError, Matching, check_feasible


class TooLarge(LinematchError):
    pass


class CertificateViolation(LinematchError):
    def __init__(self, msg: str, arc: int | None = None):
        super().__init__(msg)
        self.arc = arc


@dataclass
class OracleResult:
    cost: int
    matching: Matching
    potentials: list[int] | None = None
    network: FlowNetwork | None = field(default=None, repr=False)
    flows: list[int] | None = field(default=None, repr=False)


def _cheapest_sums(rows: list[list[int]]) -> list[list[list[int]]]:
    """out[i][c][k]: sum of the k cheapest entries of rows[i][c:]."""
    out = []
    for row in rows:
        per = []
        for c in range(len(row) + 1):
            acc = [0]
            for v in sorted(row[c:]):
                acc.append(acc[-1] + v)
            per.append(acc)
        out.append(per)
    return out


def oracle_enum(inst: Instance, limit: int = 20) -> OracleResult:
    """Exhaustive search over subsets of the y*z candidate pairs.

    Pairs are decided in row-major order, "leave out" before "take", and
    only strictly better subsets replace the incumbent, so among co-optimal
    subsets the one with the lexicographically least incidence vector is
    returned.  Branches are cut when some demand can no longer be met or
    when the cheapest way to finish the open demands of one side cannot
    beat the incumbent.
    """
    y, z = inst.y, inst.z
    if y * z > limit:
        raise TooLarge(f"{y * z} candidate pairs exceeds limit {limit}")
    bad = check_feasible(inst)
    if bad is not None:
        raise bad
    sc, tc = inst.s_coords, inst.t_coords
    sd, td = inst.s_demands, inst.t_demands
    w = [[abs(a - b) for b in tc] for a in sc]
    row_lb = _cheapest_sums(w)                                  # [i][col][k]
    col_lb = _cheapest_sums([[w[i][j] for i in range(y)] for j in range(z)])   # [j][row][k]
    later_rows = [0] * (y + 1)
    for i in range(y - 1, -1, -1):
        later_rows[i] = later_rows[i + 1] + row_lb[i][0][sd[i]]
    ds, dt = [0] * y, [0] * z
    chosen: list[tuple[int, int]] = []
    best: list = [None, None]

    def bound(i: int, j: int) -> int:
        # pairs (i, j..) and rows below i are still open
        lb_s = row_lb[i][j][max(0, sd[i] - ds[i])] + later_rows[i + 1]
        lb_t = 0
        for c in range(z):
            need = td[c] - dt[c]
            if need > 0:
                lb_t += col_lb[c][i][need]
        return max(lb_s, lb_t)

    def go(i: int, j: int, cost: int) -> None:
        if j == z:
            if ds[i] < sd[i]:
                return
            i, j = i + 1, 0
            if i == y:
                if all(dt[c] >= td[c] for c in range(z)) and (best[0] is None or cost < best[0]):
                    best[0], best[1] = cost, list(chosen)
                return
        if ds[i] + (z - j) < sd[i] or td[j] - dt[j] > y - i:
            return
        if best[0] is not None and cost + bound(i, j) >= best[0]:
            return
        if ds[i] + (z - j - 1) >= sd[i] and td[j] - dt[j] <= y - i - 1:
            go(i, j + 1, cost)
        ds[i] += 1
        dt[j] += 1
        chosen.append((i, j))
        go(i, j + 1, cost + w[i][j])
        chosen.pop()
        ds[i] -= 1
        dt[j] -= 1

    go(0, 0, 0)
    assert best[0] is not None
    return OracleResult(best[0], Matching.build(inst, best[1]))


# --- min-cost flow ------------------------------------------------------------


@dataclass
class FlowNetwork:
    """Circulation network with lower bounds, plus its transformed form.

    Nodes: 0 = source, 1 = sink, 2..y+1 = S points, y+2..y+z+1 = T points,
    then the super source and super sink of the transformation.  Arcs are
    stored in pairs (forward arc e, residual twin e ^ 1).  ``lower`` and
    ``cap`` describe the original bounds; the transformed network carries
    ``cap - lower`` and node excesses.
    """

    n_nodes: int
    y: int
    z: int
    tail: list[int]
    head: list[int]
    lower: list[int]
    cap: list[int]
    cost: list[int]
    excess: list[int]
    n_original: int          # arcs below this index (forward only) are original
    super_source: int
    super_sink: int
    pair_arcs: dict[int, tuple[int, int]]   # forward arc -> (s, t)

    @classmethod
    def build(cls, inst: Instance) -> FlowNetwork:
        y, z = inst.y, inst.z
        src, snk = 0, 1
        tail, head, lower, cap, cost = [], [], [], [], []
        pair_arcs = {}

        def arc(u, v, lo, hi, c):
            e = len(tail)
            tail.extend((u, v))
            head.extend((v, u))
            lower.extend((lo, 0))
            cap.extend((hi, 0))
            cost.extend((c, -c))
            return e

        for i in range(y):
            arc(src, 2 + i, inst.s_demands[i], z, 0)
        for i in range(y):
            for j in range(z):
                e = arc(2 + i, 2 + y + j, 0, 1, abs(inst.s_coords[i] - inst.t_coords[j]))
                pair_arcs[e] = (i, j)
        for j in range(z):
            arc(2 + y + j, snk, inst.t_demands[j], y, 0)
        arc(snk, src, 0, sum(inst.s_demands) * z + sum(inst.t_demands) * y, 0)
        n_orig = len(tail)
        nn = 2 + y + z
        excess = [0] * (nn + 2)
        for e in range(0, n_orig, 2):
            excess[head[e]] += lower[e]
            excess[tail[e]] -= lower[e]
        ss, tt = nn, nn + 1
        for v in range(nn):
            if excess[v] > 0:
                arc(ss, v, 0, excess[v], 0)
            elif excess[v] < 0:
                arc(v, tt, 0, -excess[v], 0)
        return cls(nn + 2, y, z, tail, head, lower, cap, cost, excess, n_orig, ss, tt, pair_arcs)

    def required(self) -> int:
        return sum(x for x in self.excess if x > 0)


def _ssp(n, tail, head, rcap, cost, adj_start, adj, ss, tt, pi, dist, prev, INFV):
    """Successive shortest paths with potentials; returns (flow, cost).

    Works on numpy arrays under numba and on plain lists (exact Python
    integers) when called through ``py_func``.
    """
    m = len(tail)
    # label-correcting start so that reduced costs are nonnegative
    for v in range(n):
        pi[v] = INFV
    pi[ss] = 0
    for _ in range(n):
        changed = False
        for e in range(m):
            if rcap[e] > 0 and pi[tail[e]] < INFV:
                nd = pi[tail[e]] + cost[e]
                if nd < pi[head[e]]:
                    pi[head[e]] = nd
                    changed = True
        if not changed:
            break
    top = 0
    for v in range(n):
        if pi[v] < INFV and pi[v] > top:
            top = pi[v]
    for v in range(n):
        if pi[v] >= INFV:
            pi[v] = top
    flow = 0
    total = 0
    while True:
        for v in range(n):
            dist[v] = INFV
            prev[v] = -1
        dist[ss] = 0
        heap = [(0, ss)]
        while len(heap) > 0:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for k in range(adj_start[u], adj_start[u + 1]):
                e = adj[k]
                if rcap[e] > 0:
                    v = head[e]
                    nd = d + cost[e] + pi[u] - pi[v]
                    if nd < dist[v]:
                        dist[v] = nd
                        prev[v] = e
                        heapq.heappush(heap, (nd, v))
        if dist[tt] >= INFV:
            break
        top = 0
        for v in range(n):
            if dist[v] < INFV and dist[v] > top:
                top = dist[v]
        for v in range(n):
            pi[v] += dist[v] if dist[v] < INFV else top
        push = INFV
        v = tt
        while v != ss:
            e = prev[v]
            if rcap[e] < push:
                push = rcap[e]
            v = tail[e]
        v = tt
        while v != ss:
            e = prev[v]
            rcap[e] -= push
            rcap[e ^ 1] += push
            total += push * cost[e]
            v = tail[e]
        flow += push
    return flow, total


_ssp_jit = njit(cache=True)(_ssp)


def _adjacency(n: int, tail: list[int]) -> tuple[list[int], list[int]]:
    counts = [0] * (n + 1)
    for u in tail:
        counts[u + 1] += 1
    for v in range(n):
        counts[v + 1] += counts[v]
    adj = [0] * len(tail)
    fill = counts[:]
    for e, u in enumerate(tail):
        adj[fill[u]] = e
        fill[u] += 1
    return counts, adj


def oracle_mcf(inst: Instance) -> OracleResult:
    """Exact optimum via min-cost circulation with lower bounds."""
    net = FlowNetwork.build(inst)
    n = net.n_nodes
    rcap = [c - lo for c, lo in zip(net.cap, net.lower)]
    start, adj = _adjacency(n, net.tail)
    span = max(max(inst.s_coords), max(inst.t_coords)) - min(min(inst.s_coords), min(inst.t_coords))
    if span * (len(net.tail) + 4) < 2**61:
        args = [np.array(a, dtype=np.int64) for a in (net.tail, net.head, rcap, net.cost, start, adj)]
        pi = np.zeros(n, np.int64)
        dist = np.zeros(n, np.int64)
        prev = np.zeros(n, np.int64)
        flow, total = _ssp_jit(n, *args, net.super_source, net.super_sink, pi, dist, prev, 2**62)
        rcap = args[2].tolist()
        pi = pi.tolist()
    else:
        pi, dist, prev = [0] * n, [0] * n, [0] * n
        inf = 1 << (span.bit_length() + 2 * n.bit_length() + 64)
        flow, total = _ssp(n, net.tail, net.head, rcap, net.cost, start, adj,
                           net.super_source, net.super_sink, pi, dist, prev, inf)
    flow, total = int(flow), int(total)
    if flow < net.required():
        raise Infeasible(f"flow saturates {flow} of {net.required()} required units")
    flows = [net.cap[e] - rcap[e] for e in range(0, len(net.tail), 2)]
    pairs = [net.pair_arcs[e] for e in net.pair_arcs if flows[e // 2] > 0]
    m = Matching.build(inst, pairs)
    return OracleResult(m.total_cost, m, [int(p) for p in pi], net, flows)


def certify_optimal(result: OracleResult, inst: Instance) -> None:
    """Check bounds, conservation and reduced-cost optimality of a flow."""
    net, flows, pi = result.network, result.flows, result.potentials
    if net is None or flows is None or pi is None:
        raise CertificateViolation("result carries no flow certificate")
    bal = [0] * net.n_nodes
    for e in range(0, net.n_original, 2):
        f = flows[e // 2]
        if not net.lower[e] <= f <= net.cap[e]:
            raise CertificateViolation(f"arc {e}: flow {f} outside [{net.lower[e]}, {net.cap[e]}]", e)
        bal[net.tail[e]] -= f
        bal[net.head[e]] += f
        rc = net.cost[e] + pi[net.tail[e]] - pi[net.head[e]]
        if f < net.cap[e] and rc < 0:
            raise CertificateViolation(f"arc {e}: unsaturated with reduced cost {rc}", e)
        if f > net.lower[e] and rc > 0:
            raise CertificateViolation(f"arc {e}: carries flow with reduced cost {rc}", e)
    for v in range(net.n_nodes - 2):
        if bal[v]:
            raise CertificateViolation(f"node {v}: imbalance {bal[v]}")
    cost = sum(net.cost[e] * flows[e // 2] for e in range(0, net.n_original, 2))
    if cost != result.cost:
        raise CertificateViolation(f"flow cost {cost} != reported {result.cost}")
