import random
from fractions import Fraction

import pytest

from choremarket import Instance


@pytest.fixture
def duo():
    """Two agents, two chores, unequal budgets; has exactly two equilibria."""
    return Instance(values=[[-1, -8], [-1, -2]], budgets=[-1, -2])


@pytest.fixture
def duo_equal():
    """Same values as ``duo`` with equal budgets; a single equilibrium."""
    return Instance(values=[[-1, -8], [-1, -2]], budgets=[-1, -1])


def random_instance(rng: random.Random, n: int, m: int, top: int = 20) -> Instance:
    values = [
        [-Fraction(rng.randint(1, top), rng.randint(1, top)) for _ in range(m)]
        for _ in range(n)
    ]
    budgets = [-Fraction(rng.randint(1, top), rng.randint(1, top)) for _ in range(n)]
    return Instance(values=values, budgets=budgets)
