import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choremarket import (
    CapExceededError,
    ConsumptionGraph,
    Instance,
    InvalidInstanceError,
    consumption_graph,
    feasible,
    is_degenerate,
    is_pareto_optimal,
    is_weighted_envy_free,
    path_product,
    utility_of,
    validate_instance,
)

from conftest import random_instance

Z_CORNER = ((F(1), F(0)), (F(0), F(1)))
Z_SHARED = ((F(1), F(1, 4)), (F(0), F(3, 4)))


class TestValidate:
    def test_strictly_negative_instance_passes_through(self, duo):
        validated = validate_instance(duo)
        assert validated.instance == duo
        assert validated.preassignments == ()
        assert validated.kept_chores == (0, 1)

    def test_zero_valued_chore_is_preassigned(self):
        raw = Instance(values=[[-1, 0], [-1, -2]], budgets=[-1, -1])
        validated = validate_instance(raw)
        (pre,) = validated.preassignments
        assert (pre.chore, pre.agent, pre.price) == (1, 0, 0)
        assert validated.instance.m == 1
        assert validated.instance.values == ((F(-1),), (F(-1),))
        assert validated.kept_chores == (0,)

    def test_positive_value_rejected(self):
        with pytest.raises(InvalidInstanceError):
            validate_instance(Instance(values=[[1, -1]], budgets=[-1]))

    def test_nonnegative_budget_rejected(self):
        with pytest.raises(InvalidInstanceError):
            validate_instance(Instance(values=[[-1]], budgets=[0]))

    def test_empty_dimensions_rejected(self):
        with pytest.raises(InvalidInstanceError):
            Instance(values=[], budgets=[])
        with pytest.raises(InvalidInstanceError):
            Instance(values=[[]], budgets=[-1])

    def test_ragged_rows_rejected(self):
        with pytest.raises(InvalidInstanceError):
            Instance(values=[[-1, -2], [-1]], budgets=[-1, -1])

    def test_all_chores_zero_valued_rejected(self):
        with pytest.raises(InvalidInstanceError):
            validate_instance(Instance(values=[[0], [-1]], budgets=[-1, -1]))


class TestUtility:
    def test_shared_allocation(self, duo):
        assert utility_of(duo, Z_SHARED) == (F(-3), F(-3, 2))

    def test_corner_allocation(self, duo):
        assert utility_of(duo, Z_CORNER) == (F(-1), F(-2))

    def test_empty_bundle_has_zero_utility(self, duo):
        z = ((F(0), F(0)), (F(1), F(1)))
        assert utility_of(duo, z)[0] == 0

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 1000), st.randoms())
    def test_linearity_on_mixtures(self, n, m, alpha_raw, rng):
        alpha = F(alpha_raw, 1000)
        r = random.Random(rng.randint(0, 10**9))
        inst = random_instance(r, n, m)

        def rand_alloc():
            cols = []
            for _ in range(m):
                col = [F(r.randint(0, 5)) for _ in range(n)]
                total = sum(col)
                cols.append([x / total for x in col] if total else [F(1, n)] * n)
            return tuple(tuple(cols[j][i] for j in range(m)) for i in range(n))

        za, zb = rand_alloc(), rand_alloc()
        mix = tuple(
            tuple(alpha * za[i][j] + (1 - alpha) * zb[i][j] for j in range(m))
            for i in range(n)
        )
        ua, ub, um = utility_of(inst, za), utility_of(inst, zb), utility_of(inst, mix)
        assert um == tuple(alpha * a + (1 - alpha) * b for a, b in zip(ua, ub))
        assert feasible(inst, mix)


class TestConsumptionGraph:
    def test_edges_follow_positive_shares(self):
        g = consumption_graph(Z_SHARED)
        assert sorted(g.edges()) == [(0, 0), (0, 1), (1, 1)]

    def test_disjoint_allocation(self):
        g = consumption_graph(Z_CORNER)
        assert sorted(g.edges()) == [(0, 0), (1, 1)]

    def test_uniform_allocation_yields_complete_graph(self):
        z = ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2)))
        assert consumption_graph(z) == ConsumptionGraph.complete(2, 2)

    def test_acyclicity(self):
        assert consumption_graph(Z_SHARED).is_acyclic()
        assert not ConsumptionGraph.complete(2, 2).is_acyclic()


class TestPathProduct:
    def test_via_second_chore(self, duo):
        assert path_product(duo, (0, 1, 1)) == 4

    def test_via_first_chore(self, duo):
        assert path_product(duo, (0, 0, 1)) == 1

    def test_same_agent_roundtrip_is_one(self, duo):
        assert path_product(duo, (0, 1, 0)) == 1

    def test_malformed_paths_rejected(self, duo):
        with pytest.raises(ValueError):
            path_product(duo, (0, 1))
        with pytest.raises(ValueError):
            path_product(duo, (0,))
        with pytest.raises(ValueError):
            path_product(duo, (0, 5, 1))

    @settings(max_examples=30, deadline=None)
    @given(st.randoms())
    def test_reversal_inverts_the_product(self, rng):
        r = random.Random(rng.randint(0, 10**9))
        inst = random_instance(r, 3, 3)
        path = (0, r.randint(0, 2), 1, r.randint(0, 2), 2)
        assert path_product(inst, path) * path_product(inst, path[::-1]) == 1


class TestParetoOptimal:
    def test_equilibrium_allocation_is_efficient(self, duo):
        assert is_pareto_optimal(duo, Z_SHARED)

    def test_swapped_corner_is_dominated(self, duo):
        assert not is_pareto_optimal(duo, ((F(0), F(1)), (F(1), F(0))))

    def test_single_agent_always_efficient(self):
        inst = Instance(values=[[-3, -5]], budgets=[-1])
        assert is_pareto_optimal(inst, ((F(1), F(1)),))

    def test_unit_cycles_inside_support_are_allowed(self):
        inst = Instance(values=[[-1, -1], [-1, -1]], budgets=[-1, -1])
        z = ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2)))
        assert is_pareto_optimal(inst, z)


class TestWeightedEnvy:
    def test_both_equilibria_weighted_envy_free(self, duo):
        assert is_weighted_envy_free(duo, Z_SHARED, (F(1), F(2)))
        assert is_weighted_envy_free(duo, Z_CORNER, (F(1), F(2)))

    def test_dumping_everything_on_one_agent_fails(self):
        inst = Instance(values=[[-1, -1], [-1, -1]], budgets=[-1, -1])
        z = ((F(1), F(1)), (F(0), F(0)))
        assert not is_weighted_envy_free(inst, z, (F(1), F(1)))

    def test_nonpositive_weights_rejected(self, duo):
        with pytest.raises(InvalidInstanceError):
            is_weighted_envy_free(duo, Z_CORNER, (F(0), F(1)))


class TestDegenerate:
    def test_generic_two_by_two(self, duo):
        assert not is_degenerate(duo)

    def test_identical_chores(self):
        inst = Instance(values=[[-1, -1], [-1, -1]], budgets=[-1, -1])
        assert is_degenerate(inst)

    def test_single_agent_has_no_cycles(self):
        assert not is_degenerate(Instance(values=[[-1, -2, -3]], budgets=[-1]))

    def test_cap_enforced(self, duo):
        with pytest.raises(CapExceededError):
            is_degenerate(duo, cycle_cap=1)

    def test_hidden_unit_cycle_detected(self):
        # |v00 v11| == |v10 v01| across a 4-cycle
        inst = Instance(values=[[-2, -3], [-4, -6]], budgets=[-1, -1])
        assert is_degenerate(inst)
        inst2 = Instance(values=[[-2, -3], [-4, -7]], budgets=[-1, -1])
        assert not is_degenerate(inst2)
