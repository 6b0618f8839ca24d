"""Structural laws of optimal matchings, checked on solver and oracle witnesses.

Each checker returns a list of human-readable violations (empty = holds).
Points are compared by their position in the merged order, so ties in
coordinates are handled by the same total order the solvers use.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .blocks import partition_blocks
from .model import S, Instance, Matching

Pairs = Iterable[tuple[int, int]]


class _Layout:
    def __init__(self, inst: Instance, pairs: Pairs):
        self.inst = inst
        pts = inst.merged()
        self.n = len(pts)
        self.pos = {(p[1], p[2]): k for k, p in enumerate(pts)}
        self.x = [p[0] for p in pts]
        self.side = [p[1] for p in pts]
        self.idx = [p[2] for p in pts]
        self.pairs = list(pairs.pairs if isinstance(pairs, Matching) else pairs)
        self.edges = {(self.pos[(S, i)], self.pos[(1 - S, j)]) for i, j in self.pairs}
        self.edges |= {(b, a) for a, b in self.edges}
        part = partition_blocks(inst)
        self.block = [0] * self.n
        for w, blk in enumerate(part.blocks):
            for k in range(len(blk)):
                self.block[blk.start + k] = w
        self.starts = [blk.start for blk in part.blocks] + [self.n]

    def spans(self):
        for i, j in self.pairs:
            a, b = self.pos[(S, i)], self.pos[(1 - S, j)]
            yield (a, b) if a < b else (b, a)

    def name(self, p: int) -> str:
        return f"{'st'[self.side[p]]}{self.idx[p]}@{self.x[p]}"


def crossing_violations(inst: Instance, pairs: Pairs) -> list[str]:
    """Matched (a,c), (b,d) with a < b < c < d, a and d in one set, b and c
    in the other, and x_b < x_c: then (a,b) or (c,d) must be matched,
    because otherwise trading them in lowers the cost by 2(x_c - x_b)."""
    L = _Layout(inst, pairs)
    sp = list(L.spans())
    if len(sp) < 2:
        return []
    lo = np.array([a for a, _ in sp])
    hi = np.array([b for _, b in sp])
    x = np.array(L.x, dtype=object) if max(map(abs, L.x)) >= 2**62 else np.array(L.x)
    side = np.array(L.side)
    # i plays (a, c), j plays (b, d)
    cand = ((lo[:, None] < lo[None, :]) & (lo[None, :] < hi[:, None]) & (hi[:, None] < hi[None, :])
            & (side[lo][:, None] != side[lo][None, :]) & (x[lo][None, :] < x[hi][:, None]))
    out = []
    for i, j in zip(*np.nonzero(cand)):
        a, c, b, d = sp[i][0], sp[i][1], sp[j][0], sp[j][1]
        if (a, b) not in L.edges and (c, d) not in L.edges:
            out.append(f"({L.name(a)},{L.name(c)}) x ({L.name(b)},{L.name(d)}): "
                       f"neither ({L.name(a)},{L.name(b)}) nor ({L.name(c)},{L.name(d)}) matched")
    return out


def skip_edge_violations(inst: Instance, pairs: Pairs) -> list[str]:
    """Literal fan law for a pair (u, v) with u in A_i, v in A_j, j >= i+3:
    either u is matched to every point of A_{i+1}, A_{i+3}, ..., A_{j-2},
    or v is matched to every point of A_{i+2}, ..., A_{j-1}.

    This form is stronger than what optimality gives; spans of five or
    more blocks can break it on instances with a unique optimum (see
    ``exchange_violations`` for the law that always holds).
    """
    L = _Layout(inst, pairs)
    out = []
    for u, v in L.spans():
        bi, bj = L.block[u], L.block[v]
        if bj - bi < 3:
            continue

        def fan(p, first):
            return all((p, q) in L.edges
                       for w in range(first, bj, 2) for q in range(L.starts[w], L.starts[w + 1]))

        if not (fan(u, bi + 1) or fan(v, bi + 2)):
            out.append(f"({L.name(u)},{L.name(v)}) spans blocks {bi}..{bj} without a full fan")
    return out


def exchange_violations(inst: Instance, pairs: Pairs) -> list[str]:
    """For a pair (u, v), u < v: there must be no b < c strictly between with
    b in v's set unmatched to u, c in u's set unmatched to v and x_b < x_c.
    Otherwise (u,v) -> (u,b) + (c,v) saves x_c - x_b."""
    L = _Layout(inst, pairs)
    out = []
    for u, v in L.spans():
        if L.block[v] - L.block[u] < 3:
            continue
        b = next((p for p in range(u + 1, v)
                  if L.side[p] == L.side[v] and (u, p) not in L.edges), None)
        c = next((p for p in range(v - 1, u, -1)
                  if L.side[p] == L.side[u] and (v, p) not in L.edges), None)
        if b is not None and c is not None and b < c and L.x[b] < L.x[c]:
            out.append(f"({L.name(u)},{L.name(v)}) can be split via {L.name(b)} and {L.name(c)}")
    return out


def long_pair_violations(inst: Instance, pairs: Pairs) -> list[str]:
    """All-ones demands: every pair joins two adjacent blocks."""
    L = _Layout(inst, pairs)
    return [f"({L.name(u)},{L.name(v)}) joins blocks {L.block[u]} and {L.block[v]}"
            for u, v in L.spans() if L.block[v] - L.block[u] > 1]


def separating_violations(inst: Instance, pairs: Pairs) -> list[str]:
    """All-ones demands: inside each block, points with a partner on the
    left all come no later than points with a partner on the right."""
    L = _Layout(inst, pairs)
    left_max = [-1] * (len(L.starts) - 1)
    right_min = [L.n] * (len(L.starts) - 1)
    for u, v in L.spans():
        bu, bv = L.block[u], L.block[v]
        right_min[bu] = min(right_min[bu], u)
        left_max[bv] = max(left_max[bv], v)
    return [f"block {w}: {L.name(left_max[w])} matched left after {L.name(right_min[w])} matched right"
            for w in range(len(left_max)) if left_max[w] > right_min[w]]
