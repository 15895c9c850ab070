"""End-to-end solver: enumerate graphs, recover candidates, certify, dedup.

Produces the complete set of competitive utility profiles with one witness
(allocation, prices) per profile. For instances without unit-product trading
cycles every profile has exactly one allocation, recovered by peeling leaves
off the (necessarily acyclic) consumption graph; for degenerate instances the
per-profile allocation polytopes can have exponentially many vertices, so
enumeration is refused and only the witnesses are reported.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice

from .certify import CompetitiveOutcome, Rejection, check_competitive
from .core import (
    DEFAULT_CYCLE_CAP,
    ConsumptionGraph,
    Instance,
    Matrix,
    Vector,
    is_degenerate,
)
from .errors import UnrealizableProfileError
from .graphs import enumerate_rich_family, enumerate_rich_family_dual, pick_mode, prune
from .recover import candidate_utility

THREADS_ENV = "CHOREMARKET_THREADS"

_STAGES = ("pruned", "nonnegative-utility", "sum-mismatch", "flow-deficit", "duplicate-profile")


@dataclass
class SolveMeta:
    """Run accounting: mode used, stream size, and per-stage rejections."""

    mode: str
    graphs_enumerated: int = 0
    rejected: dict[str, int] = field(default_factory=lambda: {s: 0 for s in _STAGES})
    accepted: int = 0
    degenerate: bool | None = None  # filled lazily, see all_allocations


@dataclass(frozen=True)
class SolutionSet:
    """All competitive utility profiles, lexicographically sorted, one witness each."""

    profiles: tuple[Vector, ...]
    outcomes: tuple[CompetitiveOutcome, ...]
    meta: SolveMeta


@dataclass(frozen=True)
class Refusal:
    """Returned instead of allocations when enumeration would be unsound."""

    reason: str


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _classify(inst: Instance, g: ConsumptionGraph):
    """Stage tag plus candidate utilities for one streamed graph."""
    if not prune(g):
        return "pruned", None
    cand = candidate_utility(inst, g)
    if cand.status == "rejected":
        return "nonnegative-utility", None
    return "candidate", cand.u


def solve_all(inst: Instance, mode: str = "auto", workers: int | None = None) -> SolutionSet:
    """Compute every competitive utility profile of the instance.

    ``mode`` selects the enumeration side: "direct" combines two-agent
    families over agent pairs, "dual" runs the same machinery on the
    transposed problem, and "auto" (default) picks the side with the smaller
    exact size bound. Certification results are cached per distinct candidate
    profile; the first certified witness per profile is kept. Worker threads
    (``workers`` or the CHOREMARKET_THREADS environment variable) split the
    candidate computation; output is identical for any worker count.
    """
    if mode == "auto":
        resolved = pick_mode(inst)
    elif mode in ("direct", "dual"):
        resolved = mode
    else:
        raise ValueError(f"unknown mode {mode!r}")
    stream = (
        enumerate_rich_family(inst, fast=True)
        if resolved == "direct"
        else enumerate_rich_family_dual(inst, fast=True)
    )
    meta = SolveMeta(mode=resolved)
    certified: dict[tuple, CompetitiveOutcome | Rejection] = {}
    found: dict[tuple, CompetitiveOutcome] = {}

    def consume(tag: str, u: Vector | None):
        meta.graphs_enumerated += 1
        if tag != "candidate":
            meta.rejected[tag] += 1
            return
        key = tuple((x.numerator, x.denominator) for x in u)
        result = certified.get(key)
        if result is None:
            result = check_competitive(inst, u)
            certified[key] = result
        if isinstance(result, Rejection):
            meta.rejected[result.reason] += 1
        elif key in found:
            meta.rejected["duplicate-profile"] += 1
        else:
            found[key] = result

    nworkers = _worker_count(workers)
    if nworkers == 1:
        for g in stream:
            consume(*_classify(inst, g))
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            while True:
                chunk = list(islice(stream, 512 * nworkers))
                if not chunk:
                    break
                for tag, u in pool.map(lambda g: _classify(inst, g), chunk):
                    consume(tag, u)

    order = sorted(found.values(), key=lambda out: out.u)
    meta.accepted = len(order)
    return SolutionSet(
        profiles=tuple(out.u for out in order),
        outcomes=tuple(order),
        meta=meta,
    )


def leaf_peel(inst: Instance, g: ConsumptionGraph, u: Vector) -> Matrix:
    """The unique allocation with utilities u whose support lies in a forest g.

    Repeatedly resolves degree-1 vertices: a leaf chore goes entirely to its
    only neighbor; a leaf agent takes exactly the share of its single
    remaining chore that closes its utility gap. Raises
    :class:`UnrealizableProfileError` when a computed share leaves [0, 1] or a
    remainder cannot be placed, i.e. when (g, u) fits no allocation.
    """
    if not g.is_acyclic():
        raise ValueError("leaf peeling requires an acyclic consumption graph")
    n, m = inst.n, g.m
    agent_adj = [set(j for j in range(m) if g.rows[i] >> j & 1) for i in range(n)]
    chore_adj = [set(i for i in range(n) if g.rows[i] >> j & 1) for j in range(m)]
    for j in range(m):
        if not chore_adj[j]:
            raise UnrealizableProfileError(f"chore {j + 1} is linked to no agent")
    z = [[Fraction(0)] * m for _ in range(n)]
    got = [Fraction(0)] * n
    remaining = [Fraction(1)] * m
    active_agents = set(range(n))
    active_chores = set(range(m))

    def drop_chore(j: int):
        active_chores.discard(j)
        for i in chore_adj[j]:
            agent_adj[i].discard(j)
        chore_adj[j] = set()

    def drop_agent(i: int):
        active_agents.discard(i)
        for j in agent_adj[i]:
            chore_adj[j].discard(i)
        agent_adj[i] = set()

    while active_agents or active_chores:
        leaf_chore = next(
            (j for j in sorted(active_chores) if len(chore_adj[j]) == 1), None
        )
        if leaf_chore is not None:
            j = leaf_chore
            (i,) = chore_adj[j]
            z[i][j] += remaining[j]
            got[i] += inst.values[i][j] * remaining[j]
            remaining[j] = Fraction(0)
            drop_chore(j)
            continue
        isolated_chore = next((j for j in sorted(active_chores) if not chore_adj[j]), None)
        if isolated_chore is not None:
            if remaining[isolated_chore] != 0:
                raise UnrealizableProfileError(
                    f"chore {isolated_chore + 1} cannot be fully distributed"
                )
            drop_chore(isolated_chore)
            continue
        isolated_agent = next((i for i in sorted(active_agents) if not agent_adj[i]), None)
        if isolated_agent is not None:
            if got[isolated_agent] != u[isolated_agent]:
                raise UnrealizableProfileError(
                    f"agent {isolated_agent + 1} cannot reach the required utility"
                )
            drop_agent(isolated_agent)
            continue
        leaf_agent = next((i for i in sorted(active_agents) if len(agent_adj[i]) == 1), None)
        if leaf_agent is None:
            raise UnrealizableProfileError("no leaf found; graph is not a forest")
        i = leaf_agent
        (j,) = agent_adj[i]
        share = (u[i] - got[i]) / inst.values[i][j]
        if share < 0 or share > remaining[j]:
            raise UnrealizableProfileError(
                f"agent {i + 1} would need a share of {share} of chore {j + 1}"
            )
        z[i][j] += share
        got[i] = u[i]
        remaining[j] -= share
        drop_agent(i)
        if remaining[j] == 0 and j in active_chores and chore_adj[j]:
            drop_chore(j)
    return tuple(tuple(row) for row in z)


def all_allocations(
    inst: Instance, sol: SolutionSet, cycle_cap: int = DEFAULT_CYCLE_CAP
) -> list[Matrix] | Refusal:
    """One (provably unique) allocation per profile, or a refusal if degenerate.

    Degeneracy — some bipartite cycle of the value matrix with disutility
    product exactly 1 — makes the set of allocations behind a single profile a
    polytope with potentially exponentially many vertices, so no enumeration
    is attempted; the certified witnesses in ``sol`` remain available.
    """
    degenerate = is_degenerate(inst, cycle_cap)
    sol.meta.degenerate = degenerate
    if degenerate:
        return Refusal(
            reason=(
                "the value matrix admits a trading cycle with disutility product "
                "exactly 1, so a single utility profile can be realized by "
                "exponentially many extreme allocations; use the certified "
                "representative allocation of each profile instead"
            )
        )
    return [leaf_peel(inst, out.graph, out.u) for out in sol.outcomes]
