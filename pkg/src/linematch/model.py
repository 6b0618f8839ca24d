"""Domain types shared by every solver: instances, matchings, reports.

Points are addressed internally by their position in the sorted order of
their own set (``s`` or ``t``).  Documents on disk use load order; the
``s_index``/``t_index`` maps translate between the two.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

S = 0
T = 1

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

# Dedicated "unreachable" value for DP tables.  Never produced by finite
# arithmetic, and ``min`` / ``+`` behave as expected against ints.
INF = math.inf


class LinematchError(Exception):
    """Base class for all library errors."""


class InstanceError(LinematchError, ValueError):
    """The instance document is malformed."""


class EmptySide(InstanceError):
    pass


class NonPositiveDemand(InstanceError):
    pass


class OutOfRange(InstanceError):
    pass


class Infeasible(LinematchError):
    """No matching can satisfy every demand.

    ``side``/``index`` name the offending point (sorted index).
    """

    def __init__(self, reason: str, side: int | None = None, index: int | None = None):
        super().__init__(reason)
        self.reason = reason
        self.side = side
        self.index = index


class Violation(LinematchError):
    """A matching fails verification; ``problems`` lists every defect."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class Instance:
    s_coords: tuple[int, ...]
    s_demands: tuple[int, ...]
    t_coords: tuple[int, ...]
    t_demands: tuple[int, ...]
    # sorted position -> load index
    s_index: tuple[int, ...]
    t_index: tuple[int, ...]

    @property
    def y(self) -> int:
        return len(self.s_coords)

    @property
    def z(self) -> int:
        return len(self.t_coords)

    @property
    def n(self) -> int:
        return self.y + self.z

    def coords(self, side: int) -> tuple[int, ...]:
        return self.s_coords if side == S else self.t_coords

    def demands(self, side: int) -> tuple[int, ...]:
        return self.s_demands if side == S else self.t_demands

    def merged(self) -> list[tuple[int, int, int]]:
        """All points as ``(x, side, sorted_index)`` in the global total order.

        Ties on x put S before T; within a set the sorted index already
        reflects load order.
        """
        pts = [(x, S, i) for i, x in enumerate(self.s_coords)]
        pts += [(x, T, j) for j, x in enumerate(self.t_coords)]
        pts.sort()
        return pts

    def max_demand(self) -> int:
        return max(max(self.s_demands), max(self.t_demands))

    def with_demands(self, s_demands: Iterable[int], t_demands: Iterable[int]) -> Instance:
        return Instance(self.s_coords, tuple(s_demands), self.t_coords, tuple(t_demands),
                        self.s_index, self.t_index)


def make_instance(s: Iterable[int], t: Iterable[int],
                  s_demands: Iterable[int] | None = None,
                  t_demands: Iterable[int] | None = None) -> Instance:
    """Convenience constructor from plain coordinate lists (load order)."""
    s = list(s)
    t = list(t)
    a = [1] * len(s) if s_demands is None else list(s_demands)
    b = [1] * len(t) if t_demands is None else list(t_demands)
    return load_instance({
        "s": [{"x": x, "demand": d} for x, d in zip(s, a, strict=True)],
        "t": [{"x": x, "demand": d} for x, d in zip(t, b, strict=True)],
    })


def _int_field(obj: Any, key: str, where: str) -> int:
    if not isinstance(obj, Mapping) or key not in obj:
        raise InstanceError(f"{where}: missing field {key!r}")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InstanceError(f"{where}: field {key!r} must be an integer, got {v!r}")
    if not INT64_MIN <= v <= INT64_MAX:
        raise OutOfRange(f"{where}: {key}={v} outside the signed 64-bit range")
    return v


def _load_side(raw: Any, name: str) -> tuple[list[int], list[int]]:
    if not isinstance(raw, list):
        raise InstanceError(f"{name!r} must be a list of points")
    xs, ds = [], []
    for k, pt in enumerate(raw):
        where = f"{name}[{k}]"
        if not isinstance(pt, Mapping):
            raise InstanceError(f"{where}: point must be an object")
        extra = set(pt) - {"x", "demand"}
        if extra:
            raise InstanceError(f"{where}: unknown fields {sorted(extra)}")
        x = _int_field(pt, "x", where)
        d = _int_field(pt, "demand", where)
        if d < 1:
            raise NonPositiveDemand(f"{where}: demand {d} < 1")
        xs.append(x)
        ds.append(d)
    if not xs:
        raise EmptySide(f"set {name!r} is empty")
    return xs, ds


def load_instance(raw: Mapping[str, Any]) -> Instance:
    """Validate an instance document and return the sorted Instance."""
    if not isinstance(raw, Mapping):
        raise InstanceError("instance document must be an object")
    extra = set(raw) - {"s", "t"}
    if extra:
        raise InstanceError(f"unknown top-level fields {sorted(extra)}")
    if "s" not in raw or "t" not in raw:
        raise InstanceError("instance document needs both 's' and 't'")
    sx, sd = _load_side(raw["s"], "s")
    tx, td = _load_side(raw["t"], "t")
    s_order = sorted(range(len(sx)), key=lambda i: (sx[i], i))
    t_order = sorted(range(len(tx)), key=lambda j: (tx[j], j))
    return Instance(
        s_coords=tuple(sx[i] for i in s_order),
        s_demands=tuple(sd[i] for i in s_order),
        t_coords=tuple(tx[j] for j in t_order),
        t_demands=tuple(td[j] for j in t_order),
        s_index=tuple(s_order),
        t_index=tuple(t_order),
    )


def dump_instance(inst: Instance) -> dict[str, Any]:
    """Inverse of load_instance: the document in original load order."""
    def side(coords, demands, index):
        out: list[dict[str, int] | None] = [None] * len(coords)
        for pos, load in enumerate(index):
            out[load] = {"x": coords[pos], "demand": demands[pos]}
        return out
    return {"s": side(inst.s_coords, inst.s_demands, inst.s_index),
            "t": side(inst.t_coords, inst.t_demands, inst.t_index)}


def check_feasible(inst: Instance) -> Infeasible | None:
    """Return None when some matching satisfies every demand, else the reason.

    Pairs are distinct, so a point can have at most |opposite set| partners;
    that bound is also sufficient (match everything with everything).
    """
    for i, a in enumerate(inst.s_demands):
        if a > inst.z:
            return Infeasible(f"s_{inst.s_index[i]} needs {a} partners, |T|={inst.z}", S, i)
    for j, b in enumerate(inst.t_demands):
        if b > inst.y:
            return Infeasible(f"t_{inst.t_index[j]} needs {b} partners, |S|={inst.y}", T, j)
    return None


def require_feasible(inst: Instance) -> None:
    bad = check_feasible(inst)
    if bad is not None:
        raise bad


def cost_of(inst: Instance, pairs: Iterable[tuple[int, int]]) -> int:
    sc, tc = inst.s_coords, inst.t_coords
    return sum(abs(sc[i] - tc[j]) for i, j in pairs)


@dataclass(frozen=True)
class Matching:
    """A set of distinct (s, t) pairs in sorted-index space."""

    pairs: frozenset[tuple[int, int]]
    total_cost: int

    @classmethod
    def build(cls, inst: Instance, pairs: Iterable[tuple[int, int]]) -> Matching:
        ps = frozenset((int(i), int(j)) for i, j in pairs)
        for i, j in ps:
            if not (0 <= i < inst.y and 0 <= j < inst.z):
                raise ValueError(f"pair ({i}, {j}) out of range")
        return cls(ps, cost_of(inst, ps))

    def degrees(self, inst: Instance) -> tuple[list[int], list[int]]:
        ds = [0] * inst.y
        dt = [0] * inst.z
        for i, j in self.pairs:
            ds[i] += 1
            dt[j] += 1
        return ds, dt

    def __len__(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)


def verify_matching(inst: Instance, matching: Matching | Iterable[tuple[int, int]]) -> int:
    """Check demands, ranges and duplicates; return the recomputed cost.

    Raises Violation listing every defect found.
    """
    pairs = list(matching.pairs) if isinstance(matching, Matching) else [tuple(p) for p in matching]
    problems = []
    for (i, j), c in sorted(Counter(pairs).items()):
        if c > 1:
            problems.append(f"pair (s_{inst.s_index[i]}, t_{inst.t_index[j]}) appears {c} times")
    ds = [0] * inst.y
    dt = [0] * inst.z
    good = []
    for i, j in set(pairs):
        if not (0 <= i < inst.y and 0 <= j < inst.z):
            problems.append(f"pair ({i}, {j}) out of range")
            continue
        ds[i] += 1
        dt[j] += 1
        good.append((i, j))
    for i, a in enumerate(inst.s_demands):
        if ds[i] < a:
            problems.append(f"s_{inst.s_index[i]} deg {ds[i]} < {a}")
    for j, b in enumerate(inst.t_demands):
        if dt[j] < b:
            problems.append(f"t_{inst.t_index[j]} deg {dt[j]} < {b}")
    if problems:
        raise Violation(problems)
    total = cost_of(inst, good)
    if isinstance(matching, Matching) and matching.total_cost != total:
        raise Violation([f"stated cost {matching.total_cost} != recomputed {total}"])
    return total


@dataclass
class SolveReport:
    algorithm: str
    cost: int
    matching: Matching
    elapsed: float
    n: int
    steps: int | None = None
    counters: dict[str, int] = field(default_factory=dict)


def matching_to_doc(inst: Instance, report: SolveReport) -> dict[str, Any]:
    pairs = sorted([inst.s_index[i], inst.t_index[j]] for i, j in report.matching.pairs)
    return {"algorithm": report.algorithm, "cost": report.cost, "pairs": pairs}


def pairs_from_doc(inst: Instance, doc: Mapping[str, Any]) -> list[tuple[int, int]]:
    """Translate a matching document's load-order pairs into sorted indices.

    Out-of-range indices are kept as -1 so verification can report them.
    """
    s_pos = {load: pos for pos, load in enumerate(inst.s_index)}
    t_pos = {load: pos for pos, load in enumerate(inst.t_index)}
    raw = doc.get("pairs") if isinstance(doc, Mapping) else None
    if not isinstance(raw, list):
        raise InstanceError("matching document needs a 'pairs' list")
    out = []
    for p in raw:
        if (not isinstance(p, list | tuple) or len(p) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in p)):
            raise InstanceError(f"bad pair entry {p!r}")
        out.append((s_pos.get(p[0], -1), t_pos.get(p[1], -1)))
    return out
