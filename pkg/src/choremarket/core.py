"""Exact domain model for divisible chore division.

An instance is a matrix of strictly negative rational values (agent i's value
for doing all of chore j) together with strictly negative rational budgets.
All arithmetic is exact: every quantity is a ``fractions.Fraction`` and every
predicate in this package decides exact equalities and inequalities, never
floating-point approximations.

Agents and chores are 0-indexed throughout the library; the I/O layer shifts
to 1-indexed reporting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .errors import CapExceededError, InvalidInstanceError

Rational = Fraction
Vector = tuple[Fraction, ...]
Matrix = tuple[tuple[Fraction, ...], ...]

#: default ceiling on (n*m)**min(n,m), the loose bound on the number of simple
#: cycles inspected by :func:`is_degenerate`
DEFAULT_CYCLE_CAP = 10**7


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise InvalidInstanceError(f"expected an exact rational, got {type(x).__name__}")


def freeze_matrix(rows) -> Matrix:
    return tuple(tuple(_as_fraction(x) for x in row) for row in rows)


def freeze_vector(xs) -> Vector:
    return tuple(_as_fraction(x) for x in xs)


@dataclass(frozen=True)
class ConsumptionGraph:
    """Bipartite agent-chore adjacency, one chore bitmask per agent.

    Bit j of ``rows[i]`` is set iff agent i is linked to chore j.
    """

    rows: tuple[int, ...]
    m: int

    @property
    def n(self) -> int:
        return len(self.rows)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self.rows):
            for j in range(self.m):
                if row >> j & 1:
                    yield i, j

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def cols(self) -> tuple[int, ...]:
        """Agent bitmask per chore (the transpose of ``rows``)."""
        out = [0] * self.m
        for i, row in enumerate(self.rows):
            for j in range(self.m):
                if row >> j & 1:
                    out[j] |= 1 << i
        return tuple(out)

    def chore_degree(self, j: int) -> int:
        return sum(row >> j & 1 for row in self.rows)

    def transpose(self) -> "ConsumptionGraph":
        return ConsumptionGraph(rows=self.cols(), m=self.n)

    def is_acyclic(self) -> bool:
        """True iff the graph is a forest (checked per connected component)."""
        cols = self.cols()
        seen_a, seen_c = 0, 0
        for start in range(self.n):
            if seen_a >> start & 1 or self.rows[start] == 0:
                continue
            agents = chores = edges = 0
            stack = [("a", start)]
            seen_a |= 1 << start
            while stack:
                side, x = stack.pop()
                if side == "a":
                    agents += 1
                    edges += self.rows[x].bit_count()
                    for j in range(self.m):
                        if self.rows[x] >> j & 1 and not seen_c >> j & 1:
                            seen_c |= 1 << j
                            stack.append(("c", j))
                else:
                    chores += 1
                    for i in range(self.n):
                        if cols[x] >> i & 1 and not seen_a >> i & 1:
                            seen_a |= 1 << i
                            stack.append(("a", i))
            if edges > agents + chores - 1:
                return False
        return True

    @staticmethod
    def from_edges(n: int, m: int, edges) -> "ConsumptionGraph":
        rows = [0] * n
        for i, j in edges:
            rows[i] |= 1 << j
        return ConsumptionGraph(rows=tuple(rows), m=m)

    @staticmethod
    def complete(n: int, m: int) -> "ConsumptionGraph":
        return ConsumptionGraph(rows=((1 << m) - 1,) * n, m=m)


@dataclass(frozen=True)
class Instance:
    """A chore division problem: strictly negative values and budgets."""

    values: Matrix
    budgets: Vector

    def __post_init__(self):
        object.__setattr__(self, "values", freeze_matrix(self.values))
        object.__setattr__(self, "budgets", freeze_vector(self.budgets))
        n = len(self.values)
        if n == 0 or len(self.values[0]) == 0:
            raise InvalidInstanceError("an instance needs at least one agent and one chore")
        m = len(self.values[0])
        if any(len(row) != m for row in self.values):
            raise InvalidInstanceError("value rows have inconsistent lengths")
        if len(self.budgets) != n:
            raise InvalidInstanceError(
                f"budget vector has length {len(self.budgets)}, expected {n}"
            )

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def m(self) -> int:
        return len(self.values[0])

    @cached_property
    def abs_value_pairs(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """|v[i][j]| as (numerator, denominator) integer pairs, for hot loops."""
        return tuple(
            tuple((abs(x.numerator), x.denominator) for x in row) for row in self.values
        )

    @cached_property
    def abs_budget_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((abs(b.numerator), b.denominator) for b in self.budgets)

    @cached_property
    def abs_budget_value_products(self):
        """|b_i * v_ij| as parallel numerator/denominator integer tables."""
        num = tuple(
            tuple(abs(b.numerator * v.numerator) for v in row)
            for b, row in zip(self.budgets, self.values)
        )
        den = tuple(
            tuple(b.denominator * v.denominator for v in row)
            for b, row in zip(self.budgets, self.values)
        )
        return num, den


@dataclass(frozen=True)
class Preassignment:
    """A chore handed out during validation at price zero (original indexing)."""

    chore: int
    agent: int
    price: Fraction = Fraction(0)


@dataclass(frozen=True)
class ValidatedInstance:
    """Residual strictly-negative instance plus zero-value preassignments.

    ``kept_chores[j]`` is the original index of residual chore j.
    """

    instance: Instance
    preassignments: tuple[Preassignment, ...]
    kept_chores: tuple[int, ...]


def validate_instance(raw: Instance) -> ValidatedInstance:
    """Check signs and dimensions and strip zero-value chores.

    A chore valued at exactly zero by some agent leaves the market: it goes to
    the lowest-indexed indifferent agent at price zero and the solver works on
    the residual instance. Positive values and non-negative budgets are
    rejected outright.
    """
    n, m = raw.n, raw.m
    for i, b in enumerate(raw.budgets):
        if b >= 0:
            raise InvalidInstanceError(f"budget of agent {i + 1} must be strictly negative")
    for i, row in enumerate(raw.values):
        for j, x in enumerate(row):
            if x > 0:
                raise InvalidInstanceError(
                    f"value of agent {i + 1} for chore {j + 1} is positive; "
                    "only chores (non-positive values) are supported"
                )
    pre = []
    kept = []
    for j in range(m):
        indifferent = next((i for i in range(n) if raw.values[i][j] == 0), None)
        if indifferent is None:
            kept.append(j)
        else:
            pre.append(Preassignment(chore=j, agent=indifferent))
    if not kept:
        raise InvalidInstanceError(
            "every chore is valued at zero by some agent; no market remains "
            "after preassigning them, so negative budgets cannot be exhausted"
        )
    residual = Instance(
        values=tuple(tuple(raw.values[i][j] for j in kept) for i in range(n)),
        budgets=raw.budgets,
    )
    return ValidatedInstance(
        instance=residual, preassignments=tuple(pre), kept_chores=tuple(kept)
    )


def feasible(inst: Instance, z: Matrix) -> bool:
    """True iff z is a feasible allocation: non-negative, columns sum to 1."""
    if len(z) != inst.n or any(len(row) != inst.m for row in z):
        return False
    for row in z:
        if any(x < 0 for x in row):
            return False
    return all(sum(z[i][j] for i in range(inst.n)) == 1 for j in range(inst.m))


def utility_of(inst: Instance, z: Matrix) -> Vector:
    """Exact utility profile of an allocation: u[i] = sum_j v[i][j] * z[i][j]."""
    return tuple(
        sum((inst.values[i][j] * z[i][j] for j in range(inst.m)), start=Fraction(0))
        for i in range(inst.n)
    )


def consumption_graph(z: Matrix) -> ConsumptionGraph:
    """Graph linking agent i to chore j iff z[i][j] > 0."""
    m = len(z[0])
    rows = tuple(
        sum(1 << j for j in range(m) if row[j] > 0) for row in z
    )
    return ConsumptionGraph(rows=rows, m=m)


def path_product(inst: Instance, path: Sequence[int]) -> Fraction:
    """Product of disutility ratios along an alternating agent/chore path.

    ``path`` holds agent indices at even positions and chore indices at odd
    positions: (i_1, j_1, i_2, ..., j_L, i_{L+1}). The result is
    prod_k |v[i_k][j_k]| / |v[i_{k+1}][j_k]|.
    """
    if len(path) < 3 or len(path) % 2 == 0:
        raise ValueError("path must alternate agent/chore and both start and end at an agent")
    for pos, x in enumerate(path):
        bound = inst.n if pos % 2 == 0 else inst.m
        if not 0 <= x < bound:
            raise ValueError(f"index {x} at position {pos} is out of range")
    prod = Fraction(1)
    for k in range(0, len(path) - 2, 2):
        i, j, i_next = path[k], path[k + 1], path[k + 2]
        prod *= abs(inst.values[i][j]) / abs(inst.values[i_next][j])
    return prod


def is_pareto_optimal(inst: Instance, z: Matrix) -> bool:
    """Exact test for Pareto optimality of a feasible allocation.

    An allocation is dominated iff the directed bipartite graph with an edge
    i -> j of weight |v[i][j]| whenever z[i][j] > 0 and edges j -> i' of weight
    1/|v[i'][j]| for every agent contains a cycle of product > 1. Detection is
    a multiplicative Bellman-Ford over exact rationals.
    """
    n, m = inst.n, inst.m
    edges: list[tuple[int, int, Fraction]] = []
    for i in range(n):
        for j in range(m):
            if z[i][j] > 0:
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
            return True
    return False


def is_weighted_envy_free(inst: Instance, z: Matrix, weights: Vector) -> bool:
    """True iff u_i(z_i)/w_i >= u_i(z_k)/w_k for every ordered agent pair (i, k)."""
    if any(w <= 0 for w in weights):
        raise InvalidInstanceError("envy weights must be strictly positive")
    n, m = inst.n, inst.m
    for i in range(n):
        valuations = [
            sum((inst.values[i][j] * z[k][j] for j in range(m)), start=Fraction(0))
            for k in range(n)
        ]
        own = valuations[i] / weights[i]
        if any(own < valuations[k] / weights[k] for k in range(n)):
            return False
    return True


def _iter_unit_cycle_found(inst: Instance) -> bool:
    """DFS over simple cycles of the complete bipartite graph; True iff some
    cycle has disutility product exactly 1."""
    n, m = inst.n, inst.m
    av = inst.abs_value_pairs

    def dfs(anchor: int, last_agent: int, used_a: int, used_c: int,
            first_chore: int, num: int, den: int) -> bool:
        # close the cycle through any unused chore with index above the first
        if used_a.bit_count() >= 2:
            for j in range(first_chore + 1, m):
                if used_c >> j & 1:
                    continue
                ln, ld = av[last_agent][j]
                an, ad = av[anchor][j]
                if num * ln * ad == den * ld * an:
                    return True
        # extend by one chore and one agent
        for j in range(m):
            if used_c >> j & 1 or j == first_chore:
                continue
            ln, ld = av[last_agent][j]
            for a in range(anchor + 1, n):
                if used_a >> a & 1:
                    continue
                an, ad = av[a][j]
                if dfs(anchor, a, used_a | 1 << a, used_c | 1 << j,
                       first_chore, num * ln * ad, den * ld * an):
                    return True
        return False

    for anchor in range(n - 1):
        for first_chore in range(m - 1):
            fn, fd = av[anchor][first_chore]
            for second in range(anchor + 1, n):
                sn, sd = av[second][first_chore]
                if dfs(anchor, second, (1 << anchor) | (1 << second),
                       1 << first_chore, first_chore, fn * sd, fd * sn):
                    return True
    return False


def is_degenerate(inst: Instance, cycle_cap: int = DEFAULT_CYCLE_CAP) -> bool:
    """True iff some simple bipartite cycle has disutility product exactly 1.

    Degenerate instances admit utility profiles realized by more than one
    allocation. The test enumerates simple cycles of the complete bipartite
    graph, which is viable only at desk scale; it refuses (raises
    :class:`CapExceededError`) when the loose bound (n*m)**min(n,m) on the
    cycle count exceeds ``cycle_cap``.
    """
    n, m = inst.n, inst.m
    if min(n, m) < 2:
        return False
    if (n * m) ** min(n, m) > cycle_cap:
        raise CapExceededError(
            f"degeneracy test refused: (n*m)**min(n,m) = {(n * m) ** min(n, m)} "
            f"exceeds the cap of {cycle_cap} simple cycles"
        )
    return _iter_unit_cycle_found(inst)
