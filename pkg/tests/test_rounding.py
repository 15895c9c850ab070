import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choremarket import (
    IndivisibleAllocation,
    Instance,
    NonUnitCycleError,
    acyclicize,
    budgets_close,
    check_ef11,
    check_prop1,
    consumption_graph,
    is_pareto_optimal,
    round_fair,
    round_fair_report,
    round_to_integral,
    solve_all,
    utility_of,
)

from conftest import random_instance

Z_SHARED = ((F(1), F(1, 4)), (F(0), F(3, 4)))


class TestAcyclicize:
    def test_acyclic_input_unchanged(self, duo):
        assert acyclicize(duo, Z_SHARED) == Z_SHARED

    def test_four_cycle_of_identical_chores(self):
        inst = Instance(values=[[-1, -1], [-1, -1]], budgets=[-1, -1])
        z = ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2)))
        out = acyclicize(inst, z)
        assert utility_of(inst, out) == (F(-1), F(-1))
        assert consumption_graph(out).is_acyclic()
        assert consumption_graph(out).edge_count() < 4

    def test_profitable_cycle_raises(self, duo):
        z = ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2)))
        with pytest.raises(NonUnitCycleError):
            acyclicize(duo, z)

    def test_larger_degenerate_cycle(self):
        inst = Instance(values=[[-2, -3], [-4, -6]], budgets=[-1, -1])
        z = ((F(3, 4), F(1, 3)), (F(1, 4), F(2, 3)))
        out = acyclicize(inst, z)
        assert utility_of(inst, out) == utility_of(inst, z)
        assert consumption_graph(out).is_acyclic()
        assert all(x >= 0 for row in out for x in row)
        assert all(sum(out[i][j] for i in range(2)) == 1 for j in range(2))


class TestRoundToIntegral:
    def test_shared_equilibrium(self, duo):
        alloc = round_to_integral(duo, Z_SHARED, (F(-1, 3), F(-8, 3)), duo.budgets)
        assert alloc.owner == (0, 1)
        assert alloc.b_prime == (F(-1, 3), F(-8, 3))

    def test_integral_input_unchanged(self, duo):
        z = ((F(1), F(0)), (F(0), F(1)))
        alloc = round_to_integral(duo, z, (F(-1), F(-2)), duo.budgets)
        assert alloc.owner == (0, 1)
        assert alloc.b_prime == (F(-1), F(-2))

    def test_single_agent_takes_everything(self):
        inst = Instance(values=[[-2, -3]], budgets=[-4])
        (out,) = solve_all(inst).outcomes
        alloc = round_to_integral(inst, out.z, out.p, inst.budgets)
        assert alloc.owner == (0, 0)
        assert alloc.b_prime == (F(-4),)

    def test_single_shared_chore_goes_to_child_agent(self):
        inst = Instance(values=[[-1], [-1]], budgets=[-1, -1])
        (out,) = solve_all(inst).outcomes
        alloc = round_to_integral(inst, out.z, out.p, inst.budgets)
        assert alloc.owner == (1,)
        assert alloc.b_prime == (F(0), F(-2))

    def test_cyclic_input_rejected(self, duo):
        z = ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2)))
        with pytest.raises(ValueError):
            round_to_integral(duo, z, (F(-1), F(-2)), duo.budgets)


class TestCertificates:
    def test_worked_rounding_is_fair(self, duo):
        alloc = IndivisibleAllocation(owner=(0, 1), b_prime=(F(-1, 3), F(-8, 3)))
        assert check_ef11(duo, alloc, (F(1), F(2)))
        assert check_prop1(duo, alloc, (F(1), F(2)))

    def test_two_agents_one_chore(self):
        inst = Instance(values=[[-1], [-1]], budgets=[-1, -1])
        alloc = IndivisibleAllocation(owner=(0,), b_prime=(F(-2), F(0)))
        assert check_ef11(inst, alloc, (F(1), F(1)))
        assert check_prop1(inst, alloc, (F(1), F(1)))

    def test_borderline_identical_chores(self):
        inst = Instance(values=[[-1, -1], [-1, -1]], budgets=[-1, -1])
        alloc = IndivisibleAllocation(owner=(0, 0), b_prime=(F(-2), F(0)))
        assert check_ef11(inst, alloc, (F(1), F(1)))

    def test_unfair_allocation_detected(self):
        inst = Instance(values=[[-1, -1, -1], [-1, -1, -1]], budgets=[-1, -1])
        alloc = IndivisibleAllocation(owner=(0, 0, 0), b_prime=(F(-3), F(0)))
        assert not check_ef11(inst, alloc, (F(1), F(1)))
        assert not check_prop1(inst, alloc, (F(1), F(1)))

    def test_budget_drift_bounds(self, duo):
        alloc = IndivisibleAllocation(owner=(0, 1), b_prime=(F(-1, 3), F(-8, 3)))
        assert budgets_close(alloc, (F(-1, 3), F(-8, 3)), duo.budgets)
        # an empty bundle needs some chore pricier than the whole budget
        small = IndivisibleAllocation(owner=(1, 1), b_prime=(F(0), F(-3)))
        assert budgets_close(small, (F(-1, 3), F(-8, 3)), duo.budgets)
        assert not budgets_close(small, (F(-1, 3), F(-2, 3)), duo.budgets)


class TestRoundFair:
    def test_worked_instance(self, duo):
        report = round_fair_report(duo, (F(1), F(2)))
        assert report.allocation.owner == (0, 1)
        assert all(report.certificates.values())

    def test_identical_chores_split_one_each(self):
        inst = Instance(values=[[-1, -1], [-1, -1]], budgets=[-1, -1])
        alloc = round_fair(inst, (F(1), F(1)))
        assert sorted(alloc.owner) == [0, 1]

    def test_single_chore(self):
        inst = Instance(values=[[-2], [-3], [-4]], budgets=[-1, -1, -1])
        report = round_fair_report(inst, (F(1), F(1), F(1)))
        assert all(report.certificates.values())

    def test_weight_validation(self, duo):
        from choremarket import InvalidInstanceError

        with pytest.raises(InvalidInstanceError):
            round_fair(duo, (F(1), F(0)))
        with pytest.raises(InvalidInstanceError):
            round_fair(duo, (F(1),))


@settings(max_examples=20, deadline=None)
@given(st.randoms())
def test_random_roundings_carry_all_guarantees(rng):
    r = random.Random(rng.randint(0, 10**9))
    n, m = r.randint(1, 3), r.randint(1, 4)
    inst = random_instance(r, n, m, top=8)
    weights = tuple(F(r.randint(1, 8), r.randint(1, 8)) for _ in range(n))
    report = round_fair_report(inst, weights)
    assert all(report.certificates.values()), report.certificates
    alloc = report.allocation
    assert sorted(j for i in range(n) for j in alloc.bundles(n)[i]) == list(range(m))
    integral = tuple(
        tuple(F(1) if alloc.owner[j] == i else F(0) for j in range(m)) for i in range(n)
    )
    assert is_pareto_optimal(inst, integral)
    # every owned chore still minimizes its owner's pain-per-buck at the
    # equilibrium prices, so (owner, b') is itself competitive
    p = report.prices
    for j, i in enumerate(alloc.owner):
        assert all(
            inst.values[i][j] / p[j] <= inst.values[i][c] / p[c] for c in range(m)
        )
