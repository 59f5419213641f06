import pytest
from gmpy2 import mpq

from curvelab.bivar import BivarPoly, Curve, hessian_curve
from curvelab.errors import CommonFactor, NegativeSlack
from curvelab.inflection import (
    count_inflections,
    count_real_intersections,
    inflection_budget,
)
from curvelab.interval import Box, RatInterval
from curvelab.solve2d import solve_system
from curvelab.topology import compute_topology

CIRCLE = BivarPoly({(2, 0): 1, (0, 2): 1, (0, 0): -1})
CONIC = BivarPoly({(2, 0): 2, (0, 2): 1, (0, 0): mpq(-5, 4)})


@pytest.fixture(scope="module")
def quartic():
    """Perturbation of two transversal conics: two nested ovals, the outer
    smoothing four nodes into eight inflection points."""
    c = Curve(CIRCLE * CONIC + BivarPoly.constant(mpq(-1, 1000)))
    t = compute_topology(c)
    return c, t, count_inflections(c, t)


class TestBudget:
    def test_conic_budget(self):
        b = inflection_budget(0, 0, 2)
        assert b.slack == 0 and b.maximal

    def test_nodal_sextic_budget(self):
        b = inflection_budget(8, 8, 6)
        assert b.slack == 0 and b.verdict == "maximal"

    def test_smooth_sextic_budget(self):
        b = inflection_budget(24, 0, 6)
        assert b.slack == 0 and b.maximal

    def test_submaximal(self):
        b = inflection_budget(4, 0, 4)
        assert b.slack == 4 and b.verdict == "submaximal"

    def test_negative_slack_raises(self):
        with pytest.raises(NegativeSlack):
            inflection_budget(9, 0, 2)


class TestIntersections:
    def test_transversal_conics(self):
        assert count_real_intersections(Curve(CIRCLE), Curve(CONIC)) == 4

    def test_disjoint_conics(self):
        far = BivarPoly({(2, 0): 1, (0, 2): 1, (0, 0): -9})
        assert count_real_intersections(Curve(CIRCLE), Curve(far)) == 0

    def test_shared_component_raises(self):
        with pytest.raises(CommonFactor):
            count_real_intersections(Curve(CIRCLE), Curve(CIRCLE * CONIC))


class TestCounts:
    def test_ellipse_has_none(self):
        c = Curve(BivarPoly({(2, 0): mpq(1, 4), (0, 2): 1, (0, 0): -1}))
        r = count_inflections(c, compute_topology(c))
        assert r.total == 0
        assert not r.degenerate

    def test_quartic_eight_on_outer_oval(self, quartic):
        c, t, r = quartic
        outer = next(o.id for o in t.ovals if t.depth(o.id) == 0)
        assert r.total == 8
        assert r.per_oval[outer] == 8
        assert all(p.transversal for p in r.points)
        assert not r.degenerate

    def test_per_oval_sums_to_total(self, quartic):
        _, _, r = quartic
        assert sum(r.per_oval.values()) == r.total

    def test_boxes_disjoint_and_on_curve(self, quartic):
        c, _, r = quartic
        for i, p in enumerate(r.points):
            assert c.f.interval_eval(p.box).contains_zero()
            for q in r.points[i + 1 :]:
                assert not p.box.overlaps(q.box)

    def test_central_symmetry_pairs_boxes(self, quartic):
        # the curve is invariant under (x, y) -> (-x, -y), so each enclosure
        # must be matched by one overlapping its point reflection
        _, _, r = quartic
        assert r.total % 2 == 0
        for p in r.points:
            neg = Box(
                RatInterval(-p.box.x.hi, -p.box.x.lo),
                RatInterval(-p.box.y.hi, -p.box.y.lo),
            )
            assert any(q.box.overlaps(neg) for q in r.points)

    def test_klein_bound(self, quartic):
        _, _, r = quartic
        assert r.total <= 4 * (4 - 2)

    def test_report_json_schema(self, quartic):
        _, _, r = quartic
        out = r.to_json()
        assert set(out) == {"total", "per_oval", "degenerate", "nodes"}
        assert out["total"] == 8
        assert sum(out["per_oval"].values()) == 8

    def test_agrees_with_subdivision_oracle(self, quartic):
        # independent check: certified 2D subdivision on {f = 0, G = 0}
        c, _, r = quartic
        g = hessian_curve(c.f)
        region = Box.from_bounds(-2, 2, -2, 2)
        sols = solve_system(c.f, g, region, budget=600000)
        assert len(sols) == r.total


class TestNodeSmoothing:
    def test_smoothing_adds_two_per_node(self, quartic):
        # components are convex (no inflections); the union has four real
        # nodes, and the smoothed curve gains exactly two inflections each
        _, _, r = quartic
        nodes = count_real_intersections(Curve(CIRCLE), Curve(CONIC))
        assert nodes == 4
        assert r.total == 0 + 2 * nodes

    def test_budget_closes_for_the_nodal_union(self):
        # (#I, #N) = (0, 4) on the degree-4 union saturates eq-style
        # bookkeeping: 0 + 2*4 = 4*(4-2)
        b = inflection_budget(0, 4, 4)
        assert b.slack == 0 and b.maximal
