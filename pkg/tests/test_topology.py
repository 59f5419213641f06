import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from curvelab.bivar import BivarPoly, Curve
from curvelab.errors import NonCompact, Singular
from curvelab.topology import (
    certify_hyperbolic,
    certify_nonsingular,
    compute_topology,
    is_compact,
)

CIRCLE = BivarPoly({(2, 0): 1, (0, 2): 1, (0, 0): -1})


def circle(r2):
    return BivarPoly({(2, 0): 1, (0, 2): 1, (0, 0): -mpq(r2)})


class TestNonsingular:
    def test_circle(self):
        assert certify_nonsingular(Curve(CIRCLE))

    def test_squared_circle_detected(self):
        cert = certify_nonsingular(Curve(CIRCLE * CIRCLE))
        assert not cert
        assert cert.reason == "non-square-free"

    def test_node_found_with_witness(self):
        cert = certify_nonsingular(Curve(BivarPoly({(2, 0): 1, (0, 2): -1})))
        assert not cert
        assert cert.witness is not None
        assert cert.witness.contains_point(0, 0)

    def test_smooth_cubic(self):
        # y^2 = x^3 - x is smooth
        f = BivarPoly({(0, 2): 1, (3, 0): -1, (1, 0): 1})
        assert certify_nonsingular(Curve(f))

    def test_nodal_cubic_detected(self):
        # y^2 = x^3 + x^2 has a node at the origin
        f = BivarPoly({(0, 2): 1, (3, 0): -1, (2, 0): -1})
        cert = certify_nonsingular(Curve(f))
        assert not cert
        assert cert.witness.contains_point(0, 0)


class TestCompactness:
    def test_circle_compact(self):
        assert is_compact(CIRCLE)

    def test_hyperbola_not_compact(self):
        assert not is_compact(BivarPoly({(2, 0): 1, (0, 2): -1, (0, 0): -1}))

    def test_parabola_not_compact(self):
        assert not is_compact(BivarPoly({(2, 0): 1, (0, 1): -1}))

    def test_compute_topology_rejects_noncompact(self):
        with pytest.raises(NonCompact):
            compute_topology(Curve(BivarPoly({(2, 0): 1, (0, 2): -1, (0, 0): -1})))

    def test_compute_topology_rejects_singular(self):
        with pytest.raises(Singular):
            compute_topology(Curve(CIRCLE * CIRCLE))


class TestOvalCounts:
    def test_circle_one_oval(self):
        t = compute_topology(Curve(CIRCLE))
        assert t.count == 1
        assert t.max_depth == 0

    def test_nested_circles(self):
        t = compute_topology(Curve(circle(1) * circle(4)))
        assert t.count == 2
        assert t.max_depth == 1
        assert t.is_chain()

    def test_disjoint_circles(self):
        # unit circle plus a circle centred at (3, 0)
        f = BivarPoly({(2, 0): 1, (0, 2): 1, (1, 0): -6, (0, 0): 8})
        t = compute_topology(Curve(f * circle(1)))
        assert t.count == 2
        assert t.max_depth == 0
        assert not t.is_chain()

    def test_three_concentric_circles(self):
        t = compute_topology(Curve(circle(1) * circle(4) * circle(9)))
        assert t.count == 3
        assert t.max_depth == 2
        assert t.is_chain()

    def test_four_crescents(self):
        # quartic level set with four non-convex components
        other = BivarPoly({(2, 0): 2, (0, 2): 1, (0, 0): mpq(-5, 4)})
        t = compute_topology(Curve(CIRCLE * other + BivarPoly.constant(mpq(1, 100))))
        assert t.count == 4
        assert t.max_depth == 0

    def test_perturbed_conic_pair_nests(self):
        other = BivarPoly({(2, 0): 2, (0, 2): 1, (0, 0): mpq(-5, 4)})
        t = compute_topology(Curve(CIRCLE * other + BivarPoly.constant(mpq(-1, 1000))))
        assert t.count == 2
        assert t.is_chain()

    def test_witness_inside_curve_region(self):
        t = compute_topology(Curve(CIRCLE))
        wx, wy = t.ovals[0].witness
        assert CIRCLE(wx, wy) < 0  # interior of the disc

    def test_polyline_closed_and_near_curve(self):
        t = compute_topology(Curve(CIRCLE))
        poly = t.ovals[0].polyline
        assert len(poly) >= 4
        for px, py in poly:
            assert abs(CIRCLE(px, py)) < mpq(1, 4)


class TestHyperbolicity:
    def test_ellipse_hyperbolic(self):
        c = Curve(BivarPoly({(2, 0): mpq(1, 4), (0, 2): 1, (0, 0): -1}))
        t = compute_topology(c)
        rep = certify_hyperbolic(c, t, n_dirs=24)
        assert rep.hyperbolic
        assert rep.directions_checked == 24

    def test_nested_circles_hyperbolic(self):
        c = Curve(circle(1) * circle(4))
        rep = certify_hyperbolic(c, compute_topology(c), n_dirs=24)
        assert rep.hyperbolic

    def test_disjoint_circles_not_hyperbolic(self):
        f = BivarPoly({(2, 0): 1, (0, 2): 1, (1, 0): -6, (0, 0): 8})
        c = Curve(f * circle(1))
        rep = certify_hyperbolic(c, compute_topology(c), n_dirs=24)
        assert not rep.hyperbolic

    def test_report_json_schema(self):
        c = Curve(circle(1) * circle(4))
        rep = certify_hyperbolic(c, compute_topology(c), n_dirs=8)
        out = rep.to_json()
        assert set(out) >= {"nonsingular", "ovals", "depth", "hyperbolic", "witness", "directions_checked"}
        assert out["ovals"] == 2
        assert out["depth"] == 1


class TestInvariance:
    @given(
        sx=st.integers(-3, 3),
        sy=st.integers(-3, 3),
        r2s=st.lists(st.sampled_from([1, 4, 9, 16]), min_size=1, max_size=2, unique=True),
    )
    @settings(max_examples=12, deadline=None)
    def test_translation_preserves_oval_count(self, sx, sy, r2s):
        f = BivarPoly.constant(1)
        for r2 in r2s:
            f = f * circle(r2)
        shifted = f.subs_affine(1, 0, sx, 0, 1, sy)
        t0 = compute_topology(Curve(f))
        t1 = compute_topology(Curve(shifted))
        assert t0.count == t1.count
        assert t0.max_depth == t1.max_depth

    def test_shear_preserves_topology(self):
        f = circle(1) * circle(4)
        sheared = f.subs_affine(1, mpq(1, 2), 0, 0, 1, 0)
        t0 = compute_topology(Curve(f))
        t1 = compute_topology(Curve(sheared))
        assert t0.count == t1.count
        assert t0.is_chain() == t1.is_chain()
