"""End-to-end acceptance gate.

Every criterion below checks the solver's external guarantees at full
precision (all equalities are exact rational equalities; there are no
numerical tolerances anywhere). One PASS line per criterion is printed; run
with ``pytest -s tests/test_acceptance.py`` to see them stream.
"""

import random
import time
from dataclasses import dataclass
from fractions import Fraction as F

import pytest

from choremarket import (
    Instance,
    Refusal,
    all_allocations,
    brute_force_cu,
    budgets_close,
    check_ef11,
    check_prop1,
    is_pareto_optimal,
    is_weighted_envy_free,
    kkt_check,
    round_fair_report,
    solve_all,
    verify_outcome,
)
from choremarket.graphs import direct_family_bound, dual_family_bound

CORPUS_SEED = 746_434_191
CORPUS_SIZE = 500
ROUNDING_SEED = 58_067_223
ROUNDING_SIZE = 200


def _announce(criterion: str, detail: str):
    print(f"PASS {criterion}: {detail}")


def _random_instance(rng: random.Random, n: int, m: int) -> Instance:
    values = [
        [-F(rng.randint(1, 20), rng.randint(1, 20)) for _ in range(m)]
        for _ in range(n)
    ]
    budgets = [-F(rng.randint(1, 20), rng.randint(1, 20)) for _ in range(n)]
    return Instance(values=values, budgets=budgets)


@dataclass
class CorpusRecord:
    instance: Instance
    direct: object
    dual: object
    oracle: object


@pytest.fixture(scope="session")
def corpus():
    """500 random instances with n, m in 1..4, solved both ways plus oracle."""
    rng = random.Random(CORPUS_SEED)
    records = []
    start = time.perf_counter()
    for _ in range(CORPUS_SIZE):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        inst = _random_instance(rng, n, m)
        records.append(
            CorpusRecord(
                instance=inst,
                direct=solve_all(inst, mode="direct"),
                dual=solve_all(inst, mode="dual"),
                oracle=brute_force_cu(inst),
            )
        )
    elapsed = time.perf_counter() - start
    return records, elapsed


def test_criterion_1_worked_example_reproduced_exactly():
    inst = Instance(values=[[-1, -8], [-1, -2]], budgets=[-1, -2])
    start = time.perf_counter()
    sol = solve_all(inst)
    elapsed = time.perf_counter() - start
    assert sol.profiles == ((F(-3), F(-3, 2)), (F(-1), F(-2)))
    by_profile = dict(zip(sol.profiles, sol.outcomes))
    corner = by_profile[(F(-1), F(-2))]
    shared = by_profile[(F(-3), F(-3, 2))]
    assert corner.z == ((F(1), F(0)), (F(0), F(1)))
    assert corner.p == (F(-1), F(-2))
    assert shared.z == ((F(1), F(1, 4)), (F(0), F(3, 4)))
    assert shared.p == (F(-1, 3), F(-8, 3))
    assert elapsed < 1.0
    _announce(
        "criterion-1",
        f"both equilibria of the worked 2x2 instance, exact, in {elapsed:.3f}s",
    )


def test_criterion_2_profile_sets_match_exhaustive_oracle(corpus):
    records, elapsed = corpus
    assert len(records) == CORPUS_SIZE
    for rec in records:
        assert rec.direct.profiles == rec.oracle.profiles
    assert elapsed < 300.0, f"corpus solve+oracle took {elapsed:.1f}s"
    _announce(
        "criterion-2",
        f"{CORPUS_SIZE} instances, solver == exhaustive oracle exactly, "
        f"corpus built in {elapsed:.1f}s (< 300s)",
    )


def test_criterion_3_outcomes_are_efficient_and_fair(corpus):
    records, _ = corpus
    outcomes = 0
    for rec in records:
        inst = rec.instance
        envy_weights = tuple(abs(b) for b in inst.budgets)
        for sol in (rec.direct, rec.dual):
            for out in sol.outcomes:
                assert verify_outcome(inst, out)
                assert is_pareto_optimal(inst, out.z)
                assert is_weighted_envy_free(inst, out.z, envy_weights)
                assert kkt_check(inst, out.z)
                outcomes += 1
    _announce(
        "criterion-3",
        f"{outcomes} certified outcomes all pass the audit, efficiency, "
        "weighted envy-freeness, and first-order checks",
    )


def test_criterion_4_direct_and_dual_modes_agree(corpus):
    records, _ = corpus
    for rec in records:
        assert rec.direct.profiles == rec.dual.profiles
    _announce(
        "criterion-4",
        f"direct and transposed enumeration give identical profile sets on "
        f"all {len(records)} instances",
    )


def test_criterion_5_enumeration_and_profile_bounds(corpus):
    records, _ = corpus
    for rec in records:
        n, m = rec.instance.n, rec.instance.m
        d_bound, t_bound = direct_family_bound(n, m), dual_family_bound(n, m)
        assert rec.direct.meta.graphs_enumerated <= d_bound
        assert rec.dual.meta.graphs_enumerated <= t_bound
        assert len(rec.direct.profiles) <= min(d_bound, t_bound)
    _announce(
        "criterion-5",
        "stream sizes and profile counts respect both combinatorial bounds "
        f"on all {len(records)} instances",
    )


def test_criterion_6_identical_chores_refuse_allocation_enumeration():
    inst = Instance(values=[[-1] * 4] * 2, budgets=[-1, -1])
    sol = solve_all(inst)
    assert sol.profiles == ((F(-2), F(-2)),)
    result = all_allocations(inst, sol)
    assert isinstance(result, Refusal)
    assert sol.meta.degenerate is True
    assert verify_outcome(inst, sol.outcomes[0])
    _announce(
        "criterion-6",
        "identical-chores instance: single profile (-2, -2), allocation "
        "enumeration refused with a degeneracy report",
    )


def test_criterion_7_rounding_guarantees_hold_on_random_corpus():
    rng = random.Random(ROUNDING_SEED)
    start = time.perf_counter()
    for _ in range(ROUNDING_SIZE):
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        inst = _random_instance(rng, n, m)
        weights = tuple(F(rng.randint(1, 20), rng.randint(1, 20)) for _ in range(n))
        report = round_fair_report(inst, weights)
        alloc = report.allocation
        budgets = tuple(-w for w in weights)
        assert check_ef11(inst, alloc, weights)
        assert check_prop1(inst, alloc, weights)
        assert budgets_close(alloc, report.prices, budgets)
    elapsed = time.perf_counter() - start
    _announce(
        "criterion-7",
        f"{ROUNDING_SIZE} random roundings (n,m <= 5) all satisfy one-chore "
        f"envy, proportionality, and budget-drift bounds in {elapsed:.1f}s",
    )


def test_criterion_8_desk_scale_runtime():
    rng = random.Random(99_173)
    inst = _random_instance(rng, 3, 8)
    start = time.perf_counter()
    sol = solve_all(inst, mode="direct")
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    assert sol.meta.graphs_enumerated <= direct_family_bound(3, 8) == 17**3
    assert sol.profiles
    for out in sol.outcomes:
        assert verify_outcome(inst, out)
    _announce(
        "criterion-8",
        f"3 agents x 8 chores solved in {elapsed:.2f}s "
        f"({sol.meta.graphs_enumerated} graphs examined, bound 4913)",
    )
