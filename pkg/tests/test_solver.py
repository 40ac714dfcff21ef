from __future__ import annotations

import pytest

from nangle import graded as G
from nangle.errors import BudgetExceeded
from nangle.graded import GradedObject
from nangle.rng import generator
from nangle.solver import MapSystem, Term


def test_single_equation_per_degree():
    rng = generator(2)
    x, y = GradedObject({0: 2, 1: 1}), GradedObject({0: 2, 1: 2})
    a = G.random_iso(x, rng, 5)
    b = G.random_map(x, y, rng, 5)
    ms = MapSystem(5)
    ms.unknown("u", x, y)
    ms.equation([Term("u", right=a)], b)  # u a = b
    sol = ms.solve()
    assert G.compose(sol["u"], a) == b


def test_shifted_term():
    x = GradedObject({0: 1})
    sx = G.shift_object(x, 1)
    ms = MapSystem(3)
    ms.unknown("u", x, x)
    ms.equation([Term("u", shift=1)], G.scale(2, G.identity(sx, 3)))
    assert ms.solve()["u"] == G.scale(2, G.identity(x, 3))


def test_inconsistent_system():
    x = GradedObject({0: 1})
    ms = MapSystem(5)
    ms.unknown("u", x, x)
    ms.equation([Term("u", right=G.zero_map(x, x, 5))], G.identity(x, 5))
    assert ms.solve() is None and ms.space() is None


def test_search_enumerates_small_space_and_reports_none():
    x = GradedObject({0: 1})
    ms = MapSystem(2)
    ms.unknown("u", x, x)
    space = ms.space()
    assert space.dimension == 1
    assert space.search(lambda s: False, generator(0), budget=10) is None
    found = space.search(lambda s: not s["u"].is_zero(), generator(0))
    assert found["u"] == G.identity(x, 2)


def test_search_budget_exceeded():
    x = GradedObject({0: 3})
    ms = MapSystem(5)
    ms.unknown("u", x, x)
    with pytest.raises(BudgetExceeded):
        ms.space().search(lambda s: False, generator(0), budget=5)


def test_fit_errors():
    x, y = GradedObject({0: 1}), GradedObject({0: 2})
    ms = MapSystem(5)
    ms.unknown("u", x, y)
    with pytest.raises(ValueError):
        ms.equation([Term("u")], G.zero_map(y, y, 5))
