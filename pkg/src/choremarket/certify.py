"""Competitiveness certification via an exact maximum-flow problem.

Phase 3 of the solver. A strictly negative utility profile u is competitive
iff (a) the minimal weighted disutilities q_j (which at equilibrium equal the
price magnitudes) sum exactly to the total budget magnitude, and (b) the
network source -> agents -> chores -> sink, restricted to edges of minimal
weighted disutility, carries a flow saturating every source edge. The maximum
flow, computed with exact rationals, yields the allocation; prices are the
negated q_j.

``verify_outcome`` re-checks an accepted outcome from first principles
(minimal-pain-per-buck plus budget exhaustion) and deliberately shares no code
with the flow solver.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .core import ConsumptionGraph, Instance, Matrix, Vector, consumption_graph


@dataclass(frozen=True)
class Rejection:
    """Why a candidate profile is not competitive."""

    reason: str  # "sum-mismatch" | "flow-deficit"


@dataclass(frozen=True)
class CompetitiveOutcome:
    """A certified equilibrium: utilities, one witness allocation, prices."""

    u: Vector
    z: Matrix
    p: Vector
    graph: ConsumptionGraph


def tau_weights(u: Vector, budgets: Vector) -> Vector:
    """Welfare weights b_i / u_i (> 0) under which the profile would be optimal."""
    if any(x >= 0 for x in u):
        raise ValueError("utility profile must be strictly negative")
    if any(b >= 0 for b in budgets):
        raise ValueError("budgets must be strictly negative")
    return tuple(b / x for b, x in zip(budgets, u))


def min_weighted_disutility(inst: Instance, u: Vector) -> Vector:
    """q_j = min_i |b_i * v_ij / u_i|, the would-be price magnitude of chore j."""
    if any(x >= 0 for x in u):
        raise ValueError("utility profile must be strictly negative")
    return tuple(
        min(abs(inst.budgets[i] * inst.values[i][j] / u[i]) for i in range(inst.n))
        for j in range(inst.m)
    )


def _disutility_columns(inst: Instance, u: Vector):
    """Per chore: (q_j as an integer pair, bitmask of agents attaining it)."""
    n, m = inst.n, inst.m
    prod_n, prod_d = inst.abs_budget_value_products
    un = [-x.numerator for x in u]
    ud = [x.denominator for x in u]
    out = []
    for j in range(m):
        best_n = best_d = 0
        mask = 0
        for i in range(n):
            wn = prod_n[i][j] * ud[i]
            wd = prod_d[i][j] * un[i]
            if mask == 0 or wn * best_d < best_n * wd:
                best_n, best_d, mask = wn, wd, 1 << i
            elif wn * best_d == best_n * wd:
                mask |= 1 << i
        g = gcd(best_n, best_d)
        out.append(((best_n // g, best_d // g), mask))
    return out


def _max_flow(cap: list[list[Fraction]], source: int, sink: int) -> Fraction:
    """Edmonds-Karp on a dense capacity matrix, mutated into the residual."""
    size = len(cap)
    total = Fraction(0)
    while True:
        parent = [-1] * size
        parent[source] = source
        queue = deque([source])
        while queue:
            x = queue.popleft()
            if x == sink:
                break
            for y in range(size):
                if parent[y] < 0 and cap[x][y] > 0:
                    parent[y] = x
                    queue.append(y)
        if parent[sink] < 0:
            return total
        bottleneck = None
        y = sink
        while y != source:
            x = parent[y]
            c = cap[x][y]
            bottleneck = c if bottleneck is None or c < bottleneck else bottleneck
            y = x
        y = sink
        while y != source:
            x = parent[y]
            cap[x][y] -= bottleneck
            cap[y][x] += bottleneck
            y = x
        total += bottleneck


def check_competitive(inst: Instance, u: Vector) -> CompetitiveOutcome | Rejection:
    """Decide whether u is a competitive utility profile; recover (z, p) if so.

    Rejects with reason "sum-mismatch" when sum_j q_j differs from the total
    budget magnitude, and with "flow-deficit" when the restricted network
    cannot absorb all budgets. Otherwise the saturating flow F gives the
    allocation z_ij = F_ij / q_j and prices p_j = -q_j.
    """
    if any(x.numerator >= 0 for x in u):
        raise ValueError("utility profile must be strictly negative")
    return _check_competitive_negative(inst, u)


def _check_competitive_negative(inst: Instance, u: Vector) -> CompetitiveOutcome | Rejection:
    """check_competitive for callers that already know u is strictly negative."""
    n, m = inst.n, inst.m
    columns = _disutility_columns(inst, u)
    sn, sd = 0, 1
    for (qn, qd), _mask in columns:
        sn, sd = sn * qd + qn * sd, sd * qd
        g = gcd(sn, sd)
        if g > 1:
            sn, sd = sn // g, sd // g
    tn, td = 0, 1
    for bn, bd in inst.abs_budget_pairs:
        tn, td = tn * bd + bn * td, td * bd
        g = gcd(tn, td)
        if g > 1:
            tn, td = tn // g, td // g
    if sn * td != tn * sd:
        return Rejection(reason="sum-mismatch")

    total = Fraction(tn, td)
    infinite = total + 1
    source, sink = 0, n + m + 1
    cap = [[Fraction(0)] * (n + m + 2) for _ in range(n + m + 2)]
    for i in range(n):
        cap[source][1 + i] = abs(inst.budgets[i])
    q: list[Fraction] = []
    for j, ((qn, qd), mask) in enumerate(columns):
        q.append(Fraction(qn, qd))
        cap[1 + n + j][sink] = q[j]
        for i in range(n):
            if mask >> i & 1:
                cap[1 + i][1 + n + j] = infinite
    residual = [row[:] for row in cap]
    flow_value = _max_flow(residual, source, sink)
    if flow_value != total:
        return Rejection(reason="flow-deficit")

    z = tuple(
        tuple(
            (cap[1 + i][1 + n + j] - residual[1 + i][1 + n + j]) / q[j]
            if cap[1 + i][1 + n + j] > 0
            else Fraction(0)
            for j in range(m)
        )
        for i in range(n)
    )
    p = tuple(-x for x in q)
    return CompetitiveOutcome(u=tuple(u), z=z, p=p, graph=consumption_graph(z))


def verify_outcome(inst: Instance, out: CompetitiveOutcome) -> bool:
    """Independent first-principles audit of a certified outcome.

    Checks, with exact arithmetic and no flow machinery: every consumed chore
    minimizes the disutility-to-price ratio for its consumer, every budget is
    exhausted exactly, and every chore is fully distributed.
    """
    n, m = inst.n, inst.m
    z, p = out.z, out.p
    if any(p[j] >= 0 for j in range(m)):
        return False
    for j in range(m):
        if sum(z[i][j] for i in range(n)) != 1:
            return False
        if any(z[i][j] < 0 for i in range(n)):
            return False
    for i in range(n):
        if inst.budgets[i] != sum(
            (p[j] * z[i][j] for j in range(m)), start=Fraction(0)
        ):
            return False
        ratios = [inst.values[i][c] / p[c] for c in range(m)]
        for j in range(m):
            if z[i][j] > 0 and any(ratios[j] > ratios[c] for c in range(m)):
                return False
    return True
