import pytest
from gmpy2 import mpq

from curvelab.bivar import BivarPoly
from curvelab.errors import BudgetExhausted
from curvelab.interval import Box
from curvelab.solve2d import count_solutions, solve_system

CIRCLE = BivarPoly({(2, 0): 1, (0, 2): 1, (0, 0): -1})
REGION = Box.from_bounds(-2, 2, -2, 2)


def test_circle_line():
    line = BivarPoly({(0, 1): 1, (1, 0): -1})
    sols = solve_system(CIRCLE, line, REGION)
    assert len(sols) == 2
    for s in sols:
        # both roots on the diagonal at distance 1 from the origin
        assert s.box.x.overlaps(s.box.y)
        v = CIRCLE.interval_eval(s.box)
        assert v.contains_zero()


def test_conic_pair_roots_on_grid_lines():
    # x = +-1/2 sits exactly on dyadic subdivision lines
    other = BivarPoly({(2, 0): 2, (0, 2): 1, (0, 0): mpq(-5, 4)})
    sols = solve_system(CIRCLE, other, REGION)
    assert len(sols) == 4
    xs = sorted(s.box.x.mid for s in sols)
    assert xs[0] < 0 < xs[-1]
    for s in sols:
        assert s.box.x.contains(mpq(1, 2)) or s.box.x.contains(mpq(-1, 2))


def test_disjoint_curves():
    far = BivarPoly({(2, 0): 1, (0, 2): 1, (0, 0): -4})
    assert solve_system(CIRCLE, far, REGION) == []


def test_critical_points_of_circle():
    assert count_solutions(CIRCLE, CIRCLE.derivative("y"), REGION) == 2


def test_saddle_gradient():
    h = BivarPoly({(2, 0): 1, (0, 2): -1})
    assert count_solutions(h.derivative("x"), h.derivative("y"), REGION) == 1


def test_tangential_intersection_exhausts_budget():
    line = BivarPoly({(1, 0): 1, (0, 0): -1})
    with pytest.raises(BudgetExhausted):
        solve_system(CIRCLE, line, REGION, budget=3000)


def test_enclosures_are_certificates():
    # every returned box must actually contain a sign change of both inputs
    g = BivarPoly({(2, 0): 1, (0, 1): -1})  # parabola y = x^2
    sols = solve_system(CIRCLE, g, REGION)
    assert len(sols) == 2
    for s in sols:
        assert CIRCLE.interval_eval(s.box).contains_zero()
        assert g.interval_eval(s.box).contains_zero()
