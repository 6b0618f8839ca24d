"""Exact O(n) dynamic program for the undemanded problem (every demand 1).

The sweep visits adjacent block pairs (A_w, A_{w+1}) = (a_1..a_s, b_1..b_t)
left to right.  C(q) is the cheapest cover of every point up to and
including q.  For b_i the prefix b_1..b_i is served by a suffix
a_{h+1..s} of A_w while a_1..a_h were already covered from the left:

    C(b_i) = F(1..i) + min_h [ C(a_h) + E(h+1..s) + max(0, i-(s-h)) * e_s ]

where C(a_0) is C of the last point of A_{w-1}.  Splitting the range of h
gives the X (more a's than b's), Y (exactly i) and Z (fewer) branches.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .blocks import BlockPartition, GapView, gaps, partition_blocks
from .model import INF, S, EmptySide, Instance, Matching, SolveReport


def case0_cost(g: GapView, i: int) -> int:
    """C(b_i) for the first block pair, where A_0 can only look right."""
    s = g.s
    base = g.esum(1, s) + g.fsum(1, i)
    if i <= s:
        return base
    return (i - s) * g.e[s - 1] + base


@dataclass
class XYZ:
    x: float
    y: float
    z: float
    c: float
    h: int  # split index that attains c


@dataclass
class PairState:
    """DP state for one block pair; ``c_left[h]`` is C(a_h), h = 0..s."""

    g: GapView
    c_left: list
    G: list = field(init=False)
    pre: list = field(init=False)       # (value, h) prefix minima of G, ties -> larger h
    c: list = field(init=False)         # C(b_i), index 1..t (index 0 unused)
    back: list = field(init=False)
    y_prev: tuple = field(init=False)
    z_prev: tuple = field(init=False)

    def __post_init__(self):
        g, s = self.g, self.g.s
        self.G = [self.c_left[h] + g.esum(h + 1, s) for h in range(s + 1)]
        self.pre = []
        best = (INF, -1)
        for h, v in enumerate(self.G):
            if v <= best[0]:
                best = (v, h)
            self.pre.append(best)
        self.c = [INF] * (g.t + 1)
        self.back = [-1] * (g.t + 1)
        self.y_prev = (self.G[s], s)     # Y(b_0)
        self.z_prev = (INF, -1)          # Z(b_0)

    def deg_b1(self, i: int) -> int:
        """deg(b_1) in the witness recorded for C(b_i)."""
        n_x = self.g.s - self.back[i]
        return 1 + n_x - i if n_x >= i else 1

    def deg_as(self, i: int) -> int:
        """Number of b's attached to a_s by the witness for C(b_i)."""
        n_x = self.g.s - self.back[i]
        if n_x == 0:
            return i
        return 1 + i - n_x if n_x < i else 1


def case4_xyz_step(state: PairState, i: int) -> XYZ:
    """Advance the X/Y/Z scan to b_i (calls must come in order i = 1, 2, ...)."""
    g, s = state.g, state.g.s
    fs = g.fsum(1, i)
    if s - i - 1 >= 0:
        xv, xh = state.pre[s - i - 1]
        x = xv + fs
    else:
        x, xh = INF, -1
    if i <= s:
        y, yh = state.G[s - i] + fs, s - i
    else:
        y, yh = INF, -1
    step = g.e[s - 1] + g.f[i - 1]
    (yp, yph), (zp, zph) = state.y_prev, state.z_prev
    if yp <= zp:
        z, zh = yp + step, yph
    else:
        z, zh = zp + step, zph
    state.y_prev, state.z_prev = (y, yh), (z, zh)
    # ties: Y/Z add i pairs, X adds more, so X only wins strictly
    c, h = (y, yh) if y <= z else (z, zh)
    if x < c:
        c, h = x, xh
    state.c[i], state.back[i] = c, h
    return XYZ(x, y, z, c, h)


def degree_case_step(state: PairState, i: int) -> float:
    """C(b_i) for the small cases (s = 1 or t = 1) and the rebalancing step.

    In the rebalancing step (i >= 2) the witness for b_{i-1} decides: if it
    already attaches a spare a to b_1, that edge moves to b_i for f_i - f_1;
    otherwise b_i either hangs off a_s (e_s + f_i) or the split moves left so
    that enough a's are available.
    """
    g, s, t = state.g, state.g.s, state.g.t
    fs = g.fsum(1, i)
    if s == 1:
        c0, c1 = state.c_left
        c, h = (c0, 0) if c0 <= c1 else (c1, 1)
        c = c + i * g.e[0] + fs
    elif t == 1:
        c, h = state.pre[s - 1]
        alt = state.G[s] + g.e[s - 1]
        if alt < c:
            c, h = alt, s
    else:
        if i < 2 or state.back[i - 1] < 0:
            raise ValueError("rebalancing step needs the previous column entry")
        prev, hp = state.c[i - 1], state.back[i - 1]
        if state.deg_b1(i - 1) > 1:
            c, h = prev + g.f[i - 1] - g.f[0], hp
        else:
            c, h = prev + g.f[i - 1] + g.e[s - 1], hp
            if s - i >= 0:
                xv, xh = state.pre[s - i]
                if xv + fs < c:
                    c, h = xv + fs, xh
    state.c[i], state.back[i] = c, h
    return c


@dataclass
class MMCostTable:
    partition: BlockPartition
    columns: list[PairState]
    steps: int = 0

    def cost_at(self, w: int, k: int) -> float:
        """C of the k-th point (1-based) of block w."""
        if w == 0:
            return INF
        return self.columns[w - 1].c[k]


def _pair_edges(part: BlockPartition, w: int, h: int, i: int) -> list[tuple[int, int]]:
    A, B = part[w], part[w + 1]
    s = len(A)
    n_x = s - h
    out = []
    if n_x >= i:
        out += [(A.indices[s - i + j - 1], B.indices[j - 1]) for j in range(1, i + 1)]
        out += [(A.indices[k - 1], B.indices[0]) for k in range(h + 1, s - i + 1)]
    else:
        out += [(A.indices[h + j - 1], B.indices[j - 1]) for j in range(1, n_x + 1)]
        out += [(A.indices[s - 1], B.indices[j - 1]) for j in range(n_x + 1, i + 1)]
    if A.side != S:
        out = [(b, a) for a, b in out]
    return out


def mm_table(inst: Instance) -> MMCostTable:
    part = partition_blocks(inst)
    cols: list[PairState] = []
    steps = 0
    for w in range(len(part) - 1):
        g = gaps(part, w)
        steps += g.s + 1 + g.t
        if w == 0:
            st = PairState(g, [0] + [INF] * g.s)
            for i in range(1, g.t + 1):
                st.c[i], st.back[i] = case0_cost(g, i), 0
        else:
            prev = cols[-1]
            c_a0 = cols[-2].c[-1] if w >= 2 else INF
            st = PairState(g, [c_a0] + prev.c[1:])
            for i in range(1, g.t + 1):
                if g.s == 1 or g.t == 1:
                    degree_case_step(st, i)
                else:
                    case4_xyz_step(st, i)
        cols.append(st)
    return MMCostTable(part, cols, steps)


def mm_witness(table: MMCostTable) -> list[tuple[int, int]]:
    part, cols = table.partition, table.columns
    w = len(cols) - 1
    i = cols[w].g.t
    pairs: list[tuple[int, int]] = []
    while True:
        h = cols[w].back[i]
        pairs += _pair_edges(part, w, h, i)
        if w == 0:
            break
        if h >= 1:
            w, i = w - 1, h
        else:
            w, i = w - 2, len(part[w - 1])
    return pairs


def mm_solve(inst: Instance) -> SolveReport:
    """Minimum-cost cover where every point needs at least one partner."""
    if inst.y == 0 or inst.z == 0:
        raise EmptySide("both sets must be nonempty")
    t0 = time.perf_counter()
    ones = inst.with_demands([1] * inst.y, [1] * inst.z)
    table = mm_table(ones)
    cost = table.columns[-1].c[-1]
    m = Matching.build(inst, mm_witness(table))
    assert m.total_cost == cost, (m.total_cost, cost)
    return SolveReport("mm", int(cost), m, time.perf_counter() - t0, inst.n,
                       steps=table.steps, counters={"blocks": len(table.partition)})
