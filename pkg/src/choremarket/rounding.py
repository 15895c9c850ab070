"""Rounding a divisible equilibrium to an indivisible allocation.

The pipeline solves the divisible market with budgets equal to the negated
fairness weights, removes consumption cycles by indifference-preserving
transfers (possible exactly because equilibrium cycles have unit disutility
product), and then rounds the resulting forest: sole-consumer chores go to
their consumer, each root agent greedily absorbs adjacent chores while its
bundle price stays within budget, and leftover chores drop to a child agent.
The rounded bundles price out to budgets b' within one chore of the originals,
which yields weighted envy-freeness up to one removal/addition and weighted
proportionality up to one chore.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Instance,
    Matrix,
    Vector,
    consumption_graph,
    freeze_vector,
    is_pareto_optimal,
)
from .errors import CertificateError, InvalidInstanceError, NonUnitCycleError
from .solver import solve_all


@dataclass(frozen=True)
class IndivisibleAllocation:
    """Whole-chore assignment: owner[j] is the agent doing chore j.

    ``b_prime[i]`` is the total price of agent i's bundle (0 for an empty
    bundle), i.e. the budget for which the assignment is an exact equilibrium
    at the original prices.
    """

    owner: tuple[int, ...]
    b_prime: Vector

    def bundles(self, n: int) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(n)]
        for j, i in enumerate(self.owner):
            out[i].append(j)
        return out


@dataclass(frozen=True)
class RoundReport:
    """Rounding result together with its fairness certificates."""

    allocation: IndivisibleAllocation
    prices: Vector
    fractional_utilities: Vector
    certificates: dict[str, bool]


def _find_cycle(adj_agents: list[set[int]], adj_chores: list[set[int]]):
    """One cycle of the bipartite graph as ([agents], [chores]), or None.

    The cycle (a_0, c_0, a_1, c_1, ..., a_{L-1}, c_{L-1}) uses edges
    (a_k, c_k) and (a_{k+1 mod L}, c_k).
    """
    n = len(adj_agents)
    seen_agents: set[int] = set()
    for start in range(n):
        if start in seen_agents or not adj_agents[start]:
            continue
        # parent[vertex] with vertices ("a", i) / ("c", j)
        parent: dict = {("a", start): None}
        stack = [("a", start)]
        while stack:
            node = stack.pop()
            kind, x = node
            if kind == "a":
                seen_agents.add(x)
            neighbors = adj_agents[x] if kind == "a" else adj_chores[x]
            other = "c" if kind == "a" else "a"
            for y in sorted(neighbors):
                nxt = (other, y)
                if parent[node] == nxt:
                    continue
                if nxt in parent:
                    # walk both endpoints up to the common root to extract the cycle
                    path_a = [node]
                    while parent[path_a[-1]] is not None:
                        path_a.append(parent[path_a[-1]])
                    ancestors = {v: k for k, v in enumerate(path_a)}
                    path_b = [nxt]
                    while path_b[-1] not in ancestors:
                        path_b.append(parent[path_b[-1]])
                    cycle = path_a[: ancestors[path_b[-1]] + 1][::-1] + path_b[:-1]
                    while cycle[0][0] != "a":
                        cycle = cycle[1:] + cycle[:1]
                    agents = [v for k, v in cycle if k == "a"]
                    chores = [v for k, v in cycle if k == "c"]
                    return agents, chores
                parent[nxt] = node
                stack.append(nxt)
    return None


def acyclicize(inst: Instance, z: Matrix) -> Matrix:
    """Remove consumption cycles from a Pareto-optimal allocation, utilities intact.

    Every cycle in the consumption graph of a Pareto-optimal allocation has
    disutility product exactly 1, so shares can be rotated around it keeping
    every agent indifferent until some edge hits zero. The transfer is scaled
    to zero the tightest edge, oriented so the minimum-share edge is among
    those being drained. A cycle with product != 1 raises
    :class:`NonUnitCycleError` (the input was not Pareto optimal).
    """
    n, m = inst.n, inst.m
    work = [list(row) for row in z]
    while True:
        adj_agents = [set(j for j in range(m) if work[i][j] > 0) for i in range(n)]
        adj_chores = [set(i for i in range(n) if work[i][j] > 0) for j in range(m)]
        cycle = _find_cycle(adj_agents, adj_chores)
        if cycle is None:
            break
        agents, chores = cycle
        length = len(agents)
        product = Fraction(1)
        for k in range(length):
            nxt = agents[(k + 1) % length]
            product *= abs(inst.values[agents[k]][chores[k]]) / abs(inst.values[nxt][chores[k]])
        if product != 1:
            raise NonUnitCycleError(
                f"trading cycle with disutility product {product} != 1; "
                "input allocation is not Pareto optimal"
            )
        # orient so the minimum-share edge on the cycle gets drained
        forward = min(work[agents[k]][chores[k]] for k in range(length))
        backward = min(work[agents[(k + 1) % length]][chores[k]] for k in range(length))
        if backward < forward:
            agents = [agents[0]] + agents[:0:-1]
            chores = chores[::-1]
        eps = [Fraction(1)]
        for k in range(length - 1):
            nxt = agents[k + 1]
            eps.append(eps[k] * inst.values[nxt][chores[k]] / inst.values[nxt][chores[k + 1]])
        scale = min(work[agents[k]][chores[k]] / eps[k] for k in range(length))
        for k in range(length):
            delta = scale * eps[k]
            work[agents[k]][chores[k]] -= delta
            work[agents[(k + 1) % length]][chores[k]] += delta
    return tuple(tuple(row) for row in work)


def round_to_integral(
    inst: Instance, z_acyc: Matrix, p: Vector, budgets: Vector
) -> IndivisibleAllocation:
    """Round an acyclic-support equilibrium to whole chores.

    Chores consumed by a single agent go there directly. Each component of
    the remaining forest is rooted at its lowest-index agent; a root absorbs
    adjacent chores in ascending price magnitude while the bundle price stays
    at or above its budget, remaining adjacent chores fall to their
    lowest-index child agent, and freed children become roots in turn. Every
    agent keeps only chores it consumed fractionally, so the result is an
    exact equilibrium at the same prices for the per-bundle budgets b'.
    """
    n, m = inst.n, inst.m
    g = consumption_graph(z_acyc)
    if not g.is_acyclic():
        raise ValueError("rounding requires an acyclic consumption graph")
    agent_adj = [set(j for j in range(m) if g.rows[i] >> j & 1) for i in range(n)]
    chore_adj = [set(i for i in range(n) if g.rows[i] >> j & 1) for j in range(m)]
    owner = [-1] * m
    bundle_price = [Fraction(0)] * n

    def assign(j: int, i: int):
        owner[j] = i
        bundle_price[i] += p[j]
        for k in chore_adj[j]:
            agent_adj[k].discard(j)
        chore_adj[j] = set()

    for j in range(m):
        if len(chore_adj[j]) == 1:
            assign(j, next(iter(chore_adj[j])))

    remaining_agents = set(i for i in range(n) if agent_adj[i])
    queue: list[int] = []
    queued: set[int] = set()
    while remaining_agents or queue:
        if not queue:
            component_root = min(remaining_agents)
            queue.append(component_root)
            queued.add(component_root)
        i = queue.pop(0)
        remaining_agents.discard(i)
        freed: set[int] = set()
        while True:
            candidates = sorted(agent_adj[i], key=lambda j: (abs(p[j]), j))
            j_next = next(
                (j for j in candidates if bundle_price[i] + p[j] >= budgets[i]), None
            )
            if j_next is None:
                break
            freed |= chore_adj[j_next] - {i}
            assign(j_next, i)
        for j in sorted(agent_adj[i]):
            children = sorted(chore_adj[j] - {i})
            freed |= set(children)
            assign(j, children[0])
        agent_adj[i] = set()
        for k in sorted(freed):
            if k in remaining_agents and k not in queued:
                queue.append(k)
                queued.add(k)
    assert all(o >= 0 for o in owner)
    return IndivisibleAllocation(owner=tuple(owner), b_prime=tuple(bundle_price))


def _bundle_value(inst: Instance, i: int, chores) -> Fraction:
    return sum((inst.values[i][j] for j in chores), start=Fraction(0))


def check_ef11(inst: Instance, alloc: IndivisibleAllocation, weights: Vector) -> bool:
    """Weighted envy-freeness up to one removed and one added chore.

    For every agent i with a non-empty bundle and every other agent k, some
    chore j in i's bundle and some chore j' exist with
    u_i(bundle_i - j) / w_i >= u_i(bundle_k + j') / w_k.
    """
    if any(w <= 0 for w in weights):
        raise InvalidInstanceError("weights must be strictly positive")
    n, m = inst.n, inst.m
    bundles = alloc.bundles(n)
    for i in range(n):
        if not bundles[i]:
            continue
        mine = _bundle_value(inst, i, bundles[i])
        for k in range(n):
            if k == i:
                continue
            theirs = _bundle_value(inst, i, bundles[k])
            their_set = set(bundles[k])
            best_left = max((mine - inst.values[i][j]) / weights[i] for j in bundles[i])
            best_right = min(
                (theirs + (inst.values[i][j2] if j2 not in their_set else 0)) / weights[k]
                for j2 in range(m)
            )
            if best_left < best_right:
                return False
    return True


def check_prop1(inst: Instance, alloc: IndivisibleAllocation, weights: Vector) -> bool:
    """Weighted proportionality up to one chore.

    Every agent with a non-empty bundle can drop one owned chore and be at
    least as well off as its weighted share of doing everything.
    """
    if any(w <= 0 for w in weights):
        raise InvalidInstanceError("weights must be strictly positive")
    n, m = inst.n, inst.m
    total_weight = sum(weights)
    bundles = alloc.bundles(n)
    for i in range(n):
        if not bundles[i]:
            continue
        mine = _bundle_value(inst, i, bundles[i])
        share = weights[i] / total_weight * _bundle_value(inst, i, range(m))
        if all(mine - inst.values[i][j] < share for j in bundles[i]):
            return False
    return True


def budgets_close(alloc: IndivisibleAllocation, p: Vector, budgets: Vector) -> bool:
    """Post-rounding budgets stay within one owned/one arbitrary chore price.

    Non-empty bundle: b_i - |p_j| <= b'_i <= b_i + |p_j'| for some owned j and
    some chore j'. Empty bundle: b'_i = 0 and b_i + |p_j'| > 0 for some j'.
    """
    n = len(budgets)
    m = len(p)
    bundles = alloc.bundles(n)
    for i in range(n):
        b, bp = budgets[i], alloc.b_prime[i]
        if bundles[i]:
            if not any(b - abs(p[j]) <= bp for j in bundles[i]):
                return False
            if not any(bp <= b + abs(p[j2]) for j2 in range(m)):
                return False
        else:
            if bp != 0 or not any(b + abs(p[j2]) > 0 for j2 in range(m)):
                return False
    return True


def round_fair_report(inst: Instance, weights: Vector) -> RoundReport:
    """Solve with budgets -weights, round the first equilibrium, certify."""
    weights = freeze_vector(weights)
    if len(weights) != inst.n:
        raise InvalidInstanceError(
            f"got {len(weights)} weights for {inst.n} agents"
        )
    if any(w <= 0 for w in weights):
        raise InvalidInstanceError("fairness weights must be strictly positive")
    budgets = tuple(-w for w in weights)
    market = Instance(values=inst.values, budgets=budgets)
    sol = solve_all(market)
    if not sol.outcomes:
        raise CertificateError("no competitive outcome found; this is a solver bug")
    out = sol.outcomes[0]
    z_acyc = acyclicize(market, out.z)
    alloc = round_to_integral(market, z_acyc, out.p, budgets)
    integral = tuple(
        tuple(Fraction(1) if alloc.owner[j] == i else Fraction(0) for j in range(inst.m))
        for i in range(inst.n)
    )
    certificates = {
        "ef11": check_ef11(inst, alloc, weights),
        "prop1": check_prop1(inst, alloc, weights),
        "budgets_close": budgets_close(alloc, out.p, budgets),
        "pareto_optimal": is_pareto_optimal(inst, integral),
    }
    return RoundReport(
        allocation=alloc,
        prices=out.p,
        fractional_utilities=out.u,
        certificates=certificates,
    )


def round_fair(inst: Instance, weights: Vector) -> IndivisibleAllocation:
    """An indivisible allocation that is weighted-EF up to one removal/addition
    and weighted-proportional up to one chore, for the given positive weights."""
    return round_fair_report(inst, weights).allocation
