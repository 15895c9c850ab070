from fractions import Fraction as F

import pytest

from choremarket import Instance, InvalidInstanceError, solve_all
from choremarket.plotting import render_utility_svg, split_vertices


class TestSplitVertices:
    def test_worked_instance_chains(self, duo):
        pareto, anti = split_vertices(duo)
        assert pareto == [(F(0), F(-3)), (F(-1), F(-2)), (F(-9), F(0))]
        assert anti == [(F(-9), F(0)), (F(-8), F(-1)), (F(0), F(-3))]

    def test_chain_endpoints_meet(self):
        inst = Instance(values=[[-2, -1, -4], [-1, -1, -1]], budgets=[-1, -1])
        pareto, anti = split_vertices(inst)
        assert len(pareto) == len(anti) == inst.m + 1
        assert pareto[0] == anti[-1]
        assert pareto[-1] == anti[0]

    def test_single_chore_degenerates_to_segment(self):
        inst = Instance(values=[[-3], [-5]], budgets=[-1, -1])
        pareto, _ = split_vertices(inst)
        assert pareto == [(F(0), F(-5)), (F(-3), F(0))]

    def test_three_agents_rejected(self):
        inst = Instance(values=[[-1], [-1], [-1]], budgets=[-1, -1, -1])
        with pytest.raises(InvalidInstanceError):
            split_vertices(inst)


class TestSvg:
    def test_marks_every_equilibrium(self, duo):
        sol = solve_all(duo)
        svg = render_utility_svg(duo, sol.profiles)
        assert svg.startswith("<svg ")
        assert svg.count("<circle") == 2
        assert "(-3/1, -3/2)" in svg
        assert "(-1/1, -2/1)" in svg

    def test_deterministic_output(self, duo):
        sol = solve_all(duo)
        assert render_utility_svg(duo, sol.profiles) == render_utility_svg(duo, sol.profiles)
