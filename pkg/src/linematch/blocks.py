"""Maximal alternating blocks of the merged point sequence and their gaps."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import accumulate

from .model import Instance


@dataclass(frozen=True)
class Block:
    side: int
    start: int                    # global position of the first member
    indices: tuple[int, ...]      # sorted indices within its own set
    coords: tuple[int, ...]
    demands: tuple[int, ...]
    prefix: tuple[int, ...] = field(repr=False)  # prefix[k] = sum(coords[:k])

    def __len__(self) -> int:
        return len(self.coords)

    def coord_sum(self, lo: int, hi: int) -> int:
        """Sum of coords[lo:hi] in O(1)."""
        return self.prefix[hi] - self.prefix[lo]


@dataclass(frozen=True)
class BlockPartition:
    blocks: tuple[Block, ...]
    # (side, sorted index) -> (block number, position inside the block)
    where: dict[tuple[int, int], tuple[int, int]] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.blocks)

    def __getitem__(self, w: int) -> Block:
        return self.blocks[w]

    def block_of(self, side: int, idx: int) -> int:
        return self.where[(side, idx)][0]

    def a0(self, w: int) -> int | None:
        """Largest coordinate of the previous block (None for w = 0)."""
        return self.blocks[w - 1].coords[-1] if w > 0 else None


def partition_blocks(inst: Instance) -> BlockPartition:
    runs: list[list[tuple[int, int, int]]] = []
    for pt in inst.merged():
        if runs and runs[-1][0][1] == pt[1]:
            runs[-1].append(pt)
        else:
            runs.append([pt])
    blocks = []
    where = {}
    pos = 0
    for w, run in enumerate(runs):
        side = run[0][1]
        coords = tuple(p[0] for p in run)
        idx = tuple(p[2] for p in run)
        dem = inst.demands(side)
        blocks.append(Block(side, pos, idx, coords, tuple(dem[i] for i in idx),
                            tuple(accumulate(coords, initial=0))))
        for k, i in enumerate(idx):
            where[(side, i)] = (w, k)
        pos += len(run)
    return BlockPartition(tuple(blocks), where)


@dataclass(frozen=True)
class GapView:
    """Gaps between block A_w = a_1..a_s and A_{w+1} = b_1..b_t.

    Lists are 0-based: ``e[i-1]`` is e_i = |b_1 - a_i| and ``f[i-1]`` is
    f_i = |b_i - b_1|.  ``esum``/``fsum`` take 1-based inclusive ranges.
    """

    left: Block
    right: Block

    @property
    def s(self) -> int:
        return len(self.left)

    @property
    def t(self) -> int:
        return len(self.right)

    @cached_property
    def e(self) -> list[int]:
        b1 = self.right.coords[0]
        return [abs(b1 - a) for a in self.left.coords]

    @cached_property
    def f(self) -> list[int]:
        b1 = self.right.coords[0]
        return [abs(b - b1) for b in self.right.coords]

    def esum(self, p: int, q: int) -> int:
        """Sum of e_p..e_q (1-based, inclusive; empty when p > q)."""
        if p > q:
            return 0
        cnt = q - p + 1
        return cnt * self.right.coords[0] - self.left.coord_sum(p - 1, q)

    def fsum(self, p: int, q: int) -> int:
        if p > q:
            return 0
        cnt = q - p + 1
        return self.right.coord_sum(p - 1, q) - cnt * self.right.coords[0]


def gaps(partition: BlockPartition, w: int) -> GapView:
    if not 0 <= w < len(partition) - 1:
        raise IndexError(f"no block pair ({w}, {w + 1}) in a partition of {len(partition)} blocks")
    return GapView(partition[w], partition[w + 1])
