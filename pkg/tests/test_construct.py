import pytest
from gmpy2 import mpq

from curvelab.bivar import BivarPoly, Curve
from curvelab.construct import (
    FIRST_ELLIPSE,
    UNIT_CIRCLE,
    CertTargets,
    ConstructionPlan,
    _parity_ok,
    build_hilbert,
    choose_lines,
    epsilon_search,
    example_sextic,
    perturb,
)
from curvelab.errors import InfeasibleSelection
from curvelab.hull import count_hull_segments, trace_outer_oval
from curvelab.topology import compute_topology


class TestPerturb:
    def test_identity_at_zero(self):
        assert perturb(UNIT_CIRCLE, FIRST_ELLIPSE, 0) == UNIT_CIRCLE

    def test_linear_in_epsilon(self):
        p = perturb(UNIT_CIRCLE, FIRST_ELLIPSE, mpq(1, 8))
        assert p(2, 3) == UNIT_CIRCLE(2, 3) + mpq(1, 8) * FIRST_ELLIPSE(2, 3)

    def test_exact_rational(self):
        p = perturb(UNIT_CIRCLE, BivarPoly.constant(1), mpq(1, 3))
        assert p(0, 0) == mpq(-2, 3)


class TestExampleSextic:
    def test_shape(self):
        c = example_sextic()
        assert c.f.degree == 6
        assert c.label == "example-sextic"

    def test_even_in_both_variables(self):
        c = example_sextic()
        assert all(i % 2 == 0 and j % 2 == 0 for i, j in c.f.monomials)

    def test_constant_term(self):
        # only the cubed circle and the tiny constant survive at the origin
        c = example_sextic()
        assert c.f(0, 0) == -1 - mpq(1, 10**10)


class TestPlanRoundTrip:
    def test_json_round_trip(self):
        plan = ConstructionPlan(d_target=3, r_sequence=[4, 8], seed=5)
        data = plan.to_json()
        assert data == {"d": 3, "r": [4, 8], "seed": 5, "base_point": ["0/1", "0/1"]}
        back = ConstructionPlan.from_json(data)
        assert back.d_target == 3
        assert back.r_sequence == [4, 8]
        assert back.seed == 5


class TestChooseLines:
    @pytest.fixture(scope="class")
    def c1_setup(self):
        c1 = Curve(FIRST_ELLIPSE)
        c0 = Curve(UNIT_CIRCLE)
        u = Curve(FIRST_ELLIPSE * UNIT_CIRCLE)
        poly = trace_outer_oval(u, None, base=(mpq(0), mpq(0)))
        return c1, c0, poly

    def test_counts_for_step_two(self, c1_setup):
        c1, c0, poly = c1_setup
        fam = choose_lines(c1, c0, 2, 4, union_polyline=poly)
        assert len(fam.lines) == 4
        assert len(fam.points) == 8
        assert fam.hull_count == 4

    def test_points_on_circle_and_outside_ellipse(self, c1_setup):
        c1, c0, poly = c1_setup
        fam = choose_lines(c1, c0, 2, 4, union_polyline=poly)
        for zx, zy in fam.points:
            assert zx * zx + zy * zy == 1
            assert FIRST_ELLIPSE(zx, zy) > 0

    def test_points_lie_on_their_lines(self, c1_setup):
        c1, c0, poly = c1_setup
        fam = choose_lines(c1, c0, 2, 4, union_polyline=poly)
        prod = fam.product_poly
        for zx, zy in fam.points:
            assert prod(zx, zy) == 0

    def test_product_degree(self, c1_setup):
        c1, c0, poly = c1_setup
        fam = choose_lines(c1, c0, 2, 0, union_polyline=poly)
        assert fam.product_poly.degree == 4
        assert fam.hull_count == 0

    def test_odd_r_rejected(self, c1_setup):
        c1, c0, poly = c1_setup
        with pytest.raises(InfeasibleSelection):
            choose_lines(c1, c0, 2, 3, union_polyline=poly)

    def test_oversized_r_rejected(self, c1_setup):
        c1, c0, poly = c1_setup
        with pytest.raises(InfeasibleSelection):
            choose_lines(c1, c0, 2, 10, union_polyline=poly)

    def test_parity_certificate(self, c1_setup):
        c1, c0, poly = c1_setup
        fam = choose_lines(c1, c0, 2, 4, union_polyline=poly)
        assert _parity_ok(FIRST_ELLIPSE, fam.points)


class TestEpsilonSearch:
    def test_two_nested_ovals(self):
        # (x^2+y^2-1)(x^2+y^2-4) + eps stays a pair of nested ovals for
        # small eps of either sign
        P = UNIT_CIRCLE * BivarPoly({(2, 0): 1, (0, 2): 1, (0, 0): -4})
        eps, (c, tree, topo, infl, hull) = epsilon_search(
            P, BivarPoly.constant(1), CertTargets(ovals=2)
        )
        assert tree.count == 2
        assert topo.hyperbolic
        assert abs(eps) <= 1

    def test_stability_witness_rejects_flaky_scale(self):
        # at eps = 1 the same perturbation has no real points at all, so the
        # search must skip large eps and settle below the break-up threshold
        P = UNIT_CIRCLE * BivarPoly({(2, 0): 1, (0, 2): 1, (0, 0): -4})
        eps, _ = epsilon_search(
            P, BivarPoly.constant(1), CertTargets(ovals=2), start_k=0
        )
        f = perturb(P, BivarPoly.constant(1), eps)
        assert compute_topology(Curve(f)).count == 2


@pytest.mark.slow
class TestChainDepthTwo:
    @pytest.fixture(scope="class")
    def chain(self):
        return build_hilbert(ConstructionPlan(d_target=2, r_sequence=[4]))

    def test_two_steps(self, chain):
        assert len(chain) == 2

    def test_first_step_convex(self, chain):
        c1 = chain[0]
        assert c1.topology.oval_count == 1
        assert c1.inflections.total == 0
        assert c1.hull.s == 0
        assert c1.union_hull.s == 4

    def test_second_step(self, chain):
        c2 = chain[1]
        assert c2.curve.f.degree == 4
        assert c2.topology.oval_count == 2
        assert c2.topology.hyperbolic
        assert c2.inflections.total == 8
        assert c2.hull.s == 4
        assert c2.hull.undecided == 0
        assert c2.union_hull.s == 8
