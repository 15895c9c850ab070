"""Brute-force ground truth for small instances.

Iterating candidate recovery and certification over *every* bipartite graph is
exponential but trivially complete: the full family contains the consumption
graph of every competitive allocation. The resulting profile set is the exact
reference against which the polynomial pipeline is tested.

``kkt_check`` is a second, fully independent competitiveness test for a given
allocation (a direct first-order-condition inequality check) that shares
nothing with the flow-based certifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .certify import CompetitiveOutcome, Rejection, _check_competitive_negative
from .core import Instance, Matrix, Vector, utility_of
from .errors import CapExceededError
from .recover import _candidate_vector_raw

DEFAULT_GRAPH_CAP = 2**20


@dataclass(frozen=True)
class OracleReport:
    """Exact competitive profile set with one witness outcome per profile."""

    profiles: tuple[Vector, ...]
    witnesses: tuple[CompetitiveOutcome, ...]
    graphs_examined: int


def brute_force_cu(inst: Instance, cap: int = DEFAULT_GRAPH_CAP) -> OracleReport:
    """The set of competitive utility profiles, by exhaustive graph search.

    Every one of the 2**(n*m) bipartite graphs is examined; graphs leaving an
    agent or chore unlinked cannot carry an equilibrium and are skipped
    cheaply, every other graph contributes its candidate profile to the
    certifier. Certification is cached per distinct candidate vector, which
    does not change the accepted set (it is a pure function of the profile).
    Refuses instances with 2**(n*m) above ``cap``.
    """
    n, m = inst.n, inst.m
    total = 1 << (n * m)
    if total > cap:
        raise CapExceededError(
            f"brute force refused: 2**(n*m) = {total} graphs exceeds the cap of {cap}"
        )
    full = (1 << m) - 1
    av = inst.abs_value_pairs
    ab = inst.abs_budget_pairs
    # verdict cache keyed by integer pairs: Fraction tuples hash slowly
    verdicts: dict[tuple, CompetitiveOutcome | Rejection | None] = {}
    found: dict[tuple, CompetitiveOutcome] = {}
    for rows in product(range(1, 1 << m), repeat=n):
        cover = 0
        for row in rows:
            cover |= row
        if cover != full:
            continue
        u = _candidate_vector_raw(av, ab, rows, n, m)
        if any(x.numerator >= 0 for x in u):
            continue
        key = tuple((x.numerator, x.denominator) for x in u)
        verdict = verdicts.get(key)
        if verdict is None:
            verdict = _check_competitive_negative(inst, u)
            verdicts[key] = verdict
        if isinstance(verdict, CompetitiveOutcome) and key not in found:
            found[key] = verdict
    order = sorted(found.values(), key=lambda out: out.u)
    return OracleReport(
        profiles=tuple(out.u for out in order),
        witnesses=tuple(order),
        graphs_examined=total,
    )


def kkt_check(inst: Instance, z: Matrix) -> bool:
    """First-order-condition test: is the allocation z competitive?

    True iff the utility profile is strictly negative and every consumed
    chore j satisfies v[i][j]*b[i]/u[i] >= v[k][j]*b[k]/u[k] for all agents k.
    Deliberately independent of the flow certifier.
    """
    u = utility_of(inst, z)
    if any(x >= 0 for x in u):
        return False
    n, m = inst.n, inst.m
    score = [
        [inst.values[i][j] * inst.budgets[i] / u[i] for j in range(m)] for i in range(n)
    ]
    for j in range(m):
        top = max(score[i][j] for i in range(n))
        for i in range(n):
            if z[i][j] > 0 and score[i][j] != top:
                return False
    return True
