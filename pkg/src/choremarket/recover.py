"""Candidate utility profiles from consumption graphs.

Phase 2 of the solver. If a graph G really is the consumption graph of a
competitive allocation, the equilibrium utilities are pinned down by two
facts: utilities of agents connected in G are proportionally locked through
products of disutility ratios along connecting paths ("influences"), and each
connected component spends exactly its pooled budget. Evaluating the resulting
closed formula on an arbitrary graph yields a "candidate" profile: correct
whenever the graph was right, garbage (to be rejected by certification)
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .core import ConsumptionGraph, Instance, Vector


@dataclass(frozen=True)
class InfluenceTable:
    """Connected components of a graph and pairwise influence ratios.

    ``components`` lists (agents, chores) index tuples per component;
    ``pi[(i, k)]`` is the product of disutility ratios along a canonical path
    from agent i to agent k (defined only within a component).
    """

    components: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    pi: dict[tuple[int, int], Fraction]


@dataclass
class CandidateProfile:
    """A graph with the utility vector its structure implies."""

    graph: ConsumptionGraph
    u: Vector
    status: str  # "pending" | "certified" | "rejected"


def _components_with_products(inst: Instance, g: ConsumptionGraph):
    """BFS components plus anchor influence products as integer pairs.

    Per component: (agents ascending, chore mask, P, Q) where
    pi[anchor -> i] = P[i] / Q[i], the anchor being the lowest agent index.
    The spanning tree is breadth-first with lowest-index-first tie-breaking,
    which fixes a canonical path choice; on graphs that really support a
    competitive allocation every path gives the same product.
    """
    n, m = inst.n, g.m
    rows = g.rows
    cols = g.cols()
    av = inst.abs_value_pairs
    seen = 0
    out = []
    for start in range(n):
        if seen >> start & 1:
            continue
        seen |= 1 << start
        agents = [start]
        P = {start: 1}
        Q = {start: 1}
        chores_mask = 0
        frontier = [start]
        while frontier:
            discovered: list[int] = []
            for i in frontier:
                row = rows[i]
                j = 0
                while row >> j:
                    if row >> j & 1 and not chores_mask >> j & 1:
                        chores_mask |= 1 << j
                        col = cols[j]
                        vn_i, vd_i = av[i][j]
                        for k in range(n):
                            if col >> k & 1 and not seen >> k & 1:
                                seen |= 1 << k
                                vn_k, vd_k = av[k][j]
                                P[k] = P[i] * vn_i * vd_k
                                Q[k] = Q[i] * vd_i * vn_k
                                agents.append(k)
                                discovered.append(k)
                    j += 1
            frontier = sorted(discovered)
        agents.sort()
        out.append((agents, chores_mask, P, Q))
    return out


def influences(inst: Instance, g: ConsumptionGraph) -> InfluenceTable:
    """Influence ratios pi[(i, k)] for all agent pairs sharing a component."""
    comps = []
    pi: dict[tuple[int, int], Fraction] = {}
    for agents, chores_mask, P, Q in _components_with_products(inst, g):
        chores = tuple(j for j in range(g.m) if chores_mask >> j & 1)
        comps.append((tuple(agents), chores))
        for i in agents:
            for k in agents:
                pi[(i, k)] = Fraction(P[k] * Q[i], Q[k] * P[i])
    return InfluenceTable(components=tuple(comps), pi=pi)


def equal_split_utilities(inst: Instance, g: ConsumptionGraph) -> Vector:
    """Utilities of the allocation splitting each chore among its neighbors.

    Each chore j with degree d_j >= 1 in g gives a 1/d_j share to every
    linked agent; unlinked chores are skipped.
    """
    degrees = [col.bit_count() for col in g.cols()]
    out = []
    for i in range(inst.n):
        total = Fraction(0)
        row = g.rows[i]
        for j in range(g.m):
            if row >> j & 1:
                total += inst.values[i][j] / degrees[j]
        out.append(total)
    return tuple(out)


def _candidate_vector_raw(av, ab, rows, n: int, m: int) -> tuple:
    """Fused candidate computation on raw row masks; the solver/oracle hot path.

    ``av``/``ab`` are the instance's absolute (num, den) pairs. Returns the
    candidate utilities as Fractions; isolated agents come out at exactly 0.
    """
    cols = [0] * m
    for i in range(n):
        row = rows[i]
        j = 0
        while row:
            if row & 1:
                cols[j] |= 1 << i
            row >>= 1
            j += 1
    degrees = [c.bit_count() for c in cols]
    # equal-split utilities as pairs (negative numerators), agent by agent
    ubar_n = [0] * n
    ubar_d = [1] * n
    for i in range(n):
        row = rows[i]
        sn, sd = 0, 1
        avi = av[i]
        j = 0
        while row:
            if row & 1:
                vn, vd = avi[j]
                den = vd * degrees[j]
                sn, sd = sn * den - vn * sd, sd * den
                g_ = gcd(sn, sd)
                if g_ > 1:
                    sn, sd = sn // g_, sd // g_
            row >>= 1
            j += 1
        ubar_n[i], ubar_d[i] = sn, sd
    u: list[Fraction] = [Fraction(0)] * n
    seen = 0
    P = [1] * n
    Q = [1] * n
    for start in range(n):
        if seen >> start & 1:
            continue
        seen |= 1 << start
        P[start] = Q[start] = 1
        agents = [start]
        chores_seen = 0
        frontier = [start]
        while frontier:
            discovered = []
            for i in frontier:
                row = rows[i] & ~chores_seen
                avi = av[i]
                j = 0
                while row:
                    if row & 1:
                        chores_seen |= 1 << j
                        col = cols[j] & ~seen
                        if col:
                            vn_i, vd_i = avi[j]
                            k = 0
                            while col:
                                if col & 1:
                                    seen |= 1 << k
                                    vn_k, vd_k = av[k][j]
                                    P[k] = P[i] * vn_i * vd_k
                                    Q[k] = Q[i] * vd_i * vn_k
                                    agents.append(k)
                                    discovered.append(k)
                                col >>= 1
                                k += 1
                    row >>= 1
                    j += 1
            discovered.sort()
            frontier = discovered
        # pooled budget B (negative) and T = sum_k (P_k/Q_k) * ubar_k
        bn, bd = 0, 1
        tn, td = 0, 1
        for k in agents:
            an, ad = ab[k]
            bn, bd = bn * ad - an * bd, bd * ad
            num = P[k] * ubar_n[k]
            den = Q[k] * ubar_d[k]
            tn, td = tn * den + num * td, td * den
            g_ = gcd(tn, td)
            if g_ > 1:
                tn, td = tn // g_, td // g_
        g_ = gcd(bn, bd)
        if g_ > 1:
            bn, bd = bn // g_, bd // g_
        for i in agents:
            an, ad = ab[i]
            # u_i = (b_i / B) * (Q_i / P_i) * T with b_i = -an/ad
            u[i] = Fraction(-an * bd * Q[i] * tn, ad * bn * P[i] * td)
    return tuple(u)


def candidate_utility(inst: Instance, g: ConsumptionGraph) -> CandidateProfile:
    """Candidate profile for a graph; rejected outright unless strictly negative.

    Agents isolated in g get utility 0, which already rules the graph out:
    a competitive agent with a negative budget always works.
    """
    u = _candidate_vector_raw(inst.abs_value_pairs, inst.abs_budget_pairs, g.rows, inst.n, g.m)
    status = "rejected" if any(x.numerator >= 0 for x in u) else "pending"
    return CandidateProfile(graph=g, u=u, status=status)
