"""Enumeration of consumption-graph families that cover all competitive outcomes.

Phase 1 of the solver: build, for every pair of agents, the family of maximal
weighted welfare (MWW) graphs of the induced two-agent problem, then combine
one choice per pair into a graph for the full problem. The combined family is
a superset of all MWW graphs of the instance and therefore contains a
consumption graph for every competitive utility profile.

A two-agent family, with chores sorted by the disutility ratio
|v1j|/|v2j|, consists of

* splits: agent 1 takes a prefix of the sorted chores, agent 2 the rest;
* cuts: the chores whose ratio ties the pivot are shared, smaller ratios go
  to agent 1, larger to agent 2,

for at most 2m+1 graphs in total.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .core import ConsumptionGraph, Instance, Matrix, Vector
from .errors import InvalidInstanceError

#: interval endpoints for ratio constraints, as exact (num, den) pairs
_ZERO = (0, 1)
_INF = (1, 0)


@dataclass(frozen=True)
class TwoAgentGraph:
    """One member of a two-agent MWW family: a split or a cut at position k."""

    kind: str  # "split" | "cut"
    k: int
    edges: ConsumptionGraph


@dataclass(frozen=True)
class _PairOption:
    """A two-agent graph plus the weight-ratio interval that realizes it.

    ``lo``/``hi`` bound rho = tau_b / tau_a; cuts pin rho exactly
    (lo == hi), splits correspond to the open interval between two
    consecutive distinct ratios.
    """

    kind: str
    k: int
    mask_a: int
    mask_b: int
    lo: tuple[int, int]
    hi: tuple[int, int]


def _ratio_pairs(row_a: Sequence[Fraction], row_b: Sequence[Fraction]):
    """|row_a[j]| / |row_b[j]| as exact integer pairs."""
    num = [abs(a.numerator) * b.denominator for a, b in zip(row_a, row_b)]
    den = [a.denominator * abs(b.numerator) for a, b in zip(row_a, row_b)]
    return num, den


def _pair_options(row_a: Sequence[Fraction], row_b: Sequence[Fraction]) -> list[_PairOption]:
    m = len(row_a)
    rnum, rden = _ratio_pairs(row_a, row_b)
    order = sorted(range(m), key=lambda j: (Fraction(rnum[j], rden[j]), j))

    def ratio_lt(j: int, k: int) -> bool:
        return rnum[j] * rden[k] < rnum[k] * rden[j]

    def ratio_eq(j: int, k: int) -> bool:
        return rnum[j] * rden[k] == rnum[k] * rden[j]

    options: list[_PairOption] = []
    seen: set[tuple[int, int]] = set()

    def add(opt: _PairOption):
        if (opt.mask_a, opt.mask_b) not in seen:
            seen.add((opt.mask_a, opt.mask_b))
            options.append(opt)

    for k in range(m + 1):
        if k > 0:
            pivot = order[k - 1]
            mask_a = mask_b = 0
            for j in range(m):
                if ratio_eq(j, pivot):
                    mask_a |= 1 << j
                    mask_b |= 1 << j
                elif ratio_lt(j, pivot):
                    mask_a |= 1 << j
                else:
                    mask_b |= 1 << j
            r = (rnum[pivot], rden[pivot])
            add(_PairOption("cut", k, mask_a, mask_b, r, r))
        if k == 0 or k == m or ratio_lt(order[k - 1], order[k]):
            mask_a = mask_b = 0
            for j in order[:k]:
                mask_a |= 1 << j
            for j in order[k:]:
                mask_b |= 1 << j
            lo = _ZERO if k == 0 else (rnum[order[k - 1]], rden[order[k - 1]])
            hi = _INF if k == m else (rnum[order[k]], rden[order[k]])
            add(_PairOption("split", k, mask_a, mask_b, lo, hi))
    return options


def two_agent_mww(v_pair: Matrix | Sequence[Sequence[Fraction]]) -> list[TwoAgentGraph]:
    """All maximal weighted welfare graphs of a two-agent problem.

    Chores are sorted by the ratio |v1j|/|v2j| (stably, ties by original
    index); the result interleaves splits and cuts in pivot order,
    de-duplicated, and has at most 2m+1 members.
    """
    if len(v_pair) != 2:
        raise InvalidInstanceError("two_agent_mww expects exactly two value rows")
    row_a, row_b = v_pair
    if any(x >= 0 for x in itertools.chain(row_a, row_b)):
        raise InvalidInstanceError("values must be strictly negative")
    m = len(row_a)
    return [
        TwoAgentGraph(kind=o.kind, k=o.k, edges=ConsumptionGraph((o.mask_a, o.mask_b), m))
        for o in _pair_options(row_a, row_b)
    ]


def mww_graph_for_weights(inst: Instance, weights: Vector) -> ConsumptionGraph:
    """Graph linking each chore to every agent of minimal weighted disutility.

    Edge (i, j) exists iff weights[i] * |v[i][j]| <= weights[k] * |v[k][j]|
    for every agent k; every chore has degree >= 1.
    """
    if any(w <= 0 for w in weights):
        raise InvalidInstanceError("weights must be strictly positive")
    rows = [0] * inst.n
    for j in range(inst.m):
        scores = [weights[i] * abs(inst.values[i][j]) for i in range(inst.n)]
        best = min(scores)
        for i in range(inst.n):
            if scores[i] == best:
                rows[i] |= 1 << j
    return ConsumptionGraph(rows=tuple(rows), m=inst.m)


def prune(g: ConsumptionGraph, inst: Instance | None = None,
          drop_inefficient: bool = False) -> bool:
    """Keep/discard filter for enumerated graphs.

    Discards (returns False) any graph with an unlinked chore (no feasible
    allocation exists) or an unlinked agent (no competitive allocation with a
    negative budget exists). With ``drop_inefficient`` and an instance, also
    discards graphs whose edges admit a trading cycle of disutility product
    above 1; that pass is optional and off by default.
    """
    if any(row == 0 for row in g.rows):
        return False
    cover = 0
    for row in g.rows:
        cover |= row
    if cover != (1 << g.m) - 1:
        return False
    if drop_inefficient:
        if inst is None:
            raise ValueError("drop_inefficient requires the instance")
        if _has_profitable_cycle(inst, g):
            return False
    return True


def _has_profitable_cycle(inst: Instance, g: ConsumptionGraph) -> bool:
    """Multiplicative Bellman-Ford positive-cycle test on the graph's edges."""
    n, m = inst.n, inst.m
    edges: list[tuple[int, int, Fraction]] = []
    for i in range(n):
        for j in range(m):
            if g.rows[i] >> j & 1:
                edges.append((i, n + j, abs(inst.values[i][j])))
    for j in range(m):
        for i in range(n):
            edges.append((n + j, i, 1 / abs(inst.values[i][j])))
    dist = [Fraction(1)] * (n + m)
    for _ in range(n + m + 1):
        changed = False
        for u, w, mult in edges:
            cand = dist[u] * mult
            if cand > dist[w]:
                dist[w] = cand
                changed = True
        if not changed:
            return False
    return True


def direct_family_bound(n: int, m: int) -> int:
    """Size bound (2m+1)**(n(n-1)/2) on the combined family."""
    return (2 * m + 1) ** (n * (n - 1) // 2)


def dual_family_bound(n: int, m: int) -> int:
    """Size bound (2n+1)**(m(m-1)/2) on the transposed family."""
    return (2 * n + 1) ** (m * (m - 1) // 2)


def pick_mode(inst: Instance) -> str:
    """Choose direct or dual enumeration by the smaller exact size bound."""
    return "direct" if direct_family_bound(inst.n, inst.m) <= dual_family_bound(inst.n, inst.m) else "dual"


def _grouped_pairs(n: int) -> list[tuple[int, int]]:
    # (0,1),(0,2),(1,2),(0,3),... so that every triangle closes as early as possible
    return [(lo, hi) for hi in range(1, n) for lo in range(hi)]


def _enumerate_combined(values: Sequence[Sequence[Fraction]], m: int,
                        fast: bool) -> Iterator[ConsumptionGraph]:
    """Stream combined graphs, one per combination of per-pair choices.

    Combinations are produced in lexicographic order of the pair-option
    indices. With ``fast`` the stream skips combinations that provably cannot
    certify: those leaving an agent or chore unlinked, and those whose ratio
    constraints are mutually inconsistent (checked with exact closed-interval
    arithmetic, so no realizable combination is ever skipped).
    """
    n = len(values)
    if n == 1:
        yield ConsumptionGraph(rows=((1 << m) - 1,), m=m)
        return
    pairs = _grouped_pairs(n)
    tables = [_pair_options(values[a], values[b]) for a, b in pairs]
    full = (1 << m) - 1
    rows = [full] * n
    # oriented ratio bounds: lo[a][b], hi[a][b] bound tau_b / tau_a
    lo = [[None] * n for _ in range(n)]
    hi = [[None] * n for _ in range(n)]

    def lt(x: tuple[int, int], y: tuple[int, int]) -> bool:
        return x[0] * y[1] < y[0] * x[1]

    def rec(pi: int) -> Iterator[ConsumptionGraph]:
        if pi == len(pairs):
            yield ConsumptionGraph(rows=tuple(rows), m=m)
            return
        a, b = pairs[pi]
        row_a_saved, row_b_saved = rows[a], rows[b]
        for opt in tables[pi]:
            na, nb = row_a_saved & opt.mask_a, row_b_saved & opt.mask_b
            if fast:
                if na == 0 or nb == 0:
                    continue
                cover = na | nb
                for i in range(n):
                    if i != a and i != b:
                        cover |= rows[i]
                if cover != full:
                    continue
                consistent = True
                for c in range(n):
                    if c == a or c == b or lo[a][c] is None or lo[c][b] is None:
                        continue
                    plo = (lo[a][c][0] * lo[c][b][0], lo[a][c][1] * lo[c][b][1])
                    phi = (hi[a][c][0] * hi[c][b][0], hi[a][c][1] * hi[c][b][1])
                    if lt(opt.hi, plo) or lt(phi, opt.lo):
                        consistent = False
                        break
                if not consistent:
                    continue
            lo[a][b], hi[a][b] = opt.lo, opt.hi
            lo[b][a] = (opt.hi[1], opt.hi[0])
            hi[b][a] = (opt.lo[1], opt.lo[0])
            rows[a], rows[b] = na, nb
            yield from rec(pi + 1)
            rows[a], rows[b] = row_a_saved, row_b_saved
            lo[a][b] = hi[a][b] = lo[b][a] = hi[b][a] = None
        rows[a], rows[b] = row_a_saved, row_b_saved

    yield from rec(0)


def enumerate_rich_family(inst: Instance, fast: bool = False) -> Iterator[ConsumptionGraph]:
    """Stream the combined pair family for the instance (covers all equilibria).

    For n = 1 the stream is the single full graph. For n = 2 it equals the
    two-agent family. ``fast`` enables the skip rules documented on
    :func:`_enumerate_combined`; the default streams every combination.
    """
    yield from _enumerate_combined(inst.values, inst.m, fast)


def enumerate_rich_family_dual(inst: Instance, fast: bool = False) -> Iterator[ConsumptionGraph]:
    """Stream the family of the transposed problem, mapped back to this one.

    Agents and chores swap roles, the two-agent machinery runs on the
    transposed value matrix, and each streamed graph is transposed back.
    Graphs that would leave an agent without a chore are filtered out; the
    remaining family still covers every competitive utility profile.
    """
    transposed = tuple(
        tuple(inst.values[i][j] for i in range(inst.n)) for j in range(inst.m)
    )
    for g in _enumerate_combined(transposed, inst.n, fast):
        back = g.transpose()
        if all(row != 0 for row in back.rows):
            yield back
