import pytest
from gmpy2 import mpq

from curvelab.bivar import BivarPoly, Curve
from curvelab.errors import NonCompact
from curvelab.hull import (
    convex_hull,
    count_hull_segments,
    segment_inflection_bound,
    trace_outer_oval,
)
from curvelab.inflection import count_inflections
from curvelab.topology import compute_topology

CIRCLE = BivarPoly({(2, 0): 1, (0, 2): 1, (0, 0): -1})
CONIC = BivarPoly({(2, 0): 2, (0, 2): 1, (0, 0): mpq(-5, 4)})


@pytest.fixture(scope="module")
def union_report():
    """Two transversally crossing ellipses; the union's hull has 4 bridges."""
    c = Curve(CIRCLE * CONIC)
    poly = trace_outer_oval(c, None, mpq(1, 128))
    return c, poly, count_hull_segments(c, poly)


class TestConvexHull:
    def test_square_with_interior_point(self):
        pts = [(0, 0), (1, 0), (1, 1), (0, 1), (mpq(1, 2), mpq(1, 2))]
        hull = convex_hull(pts)
        assert len(hull) == 4

    def test_collinear_points_merged(self):
        pts = [(0, 0), (1, 0), (2, 0), (1, 1)]
        hull = convex_hull(pts)
        assert len(hull) == 3
        assert (1, 0) not in hull

    def test_orientation_ccw(self):
        hull = convex_hull([(0, 0), (2, 0), (1, 2)])
        area2 = sum(
            hull[i][0] * hull[(i + 1) % 3][1] - hull[(i + 1) % 3][0] * hull[i][1]
            for i in range(3)
        )
        assert area2 > 0


class TestTrace:
    def test_circle_vertices_near_radius_one(self):
        c = Curve(CIRCLE)
        t = compute_topology(c)
        poly = trace_outer_oval(c, t, mpq(1, 64), radial_width=mpq(1, 2**24))
        assert len(poly) >= 64
        for px, py in poly:
            assert abs(px * px + py * py - 1) < mpq(1, 2**20)

    def test_ellipse_vertices_on_curve(self):
        f = BivarPoly({(2, 0): mpq(1, 4), (0, 2): 1, (0, 0): -1})
        c = Curve(f)
        poly = trace_outer_oval(c, compute_topology(c), mpq(1, 64))
        for px, py in poly:
            assert abs(f(px, py)) < mpq(1, 2**16)

    def test_noncompact_rejected(self):
        c = Curve(BivarPoly({(2, 0): 1, (0, 2): -1, (0, 0): -1}))
        with pytest.raises(NonCompact):
            trace_outer_oval(c, None)

    def test_outermost_oval_traced_for_nested_curve(self):
        # two nested circles: the trace must land on the radius-2 one
        f = CIRCLE * BivarPoly({(2, 0): 1, (0, 2): 1, (0, 0): -4})
        c = Curve(f)
        poly = trace_outer_oval(c, compute_topology(c), mpq(1, 64))
        for px, py in poly:
            assert abs(px * px + py * py - 4) < mpq(1, 2**16)


class TestSegmentCounts:
    def test_circle_is_convex(self):
        c = Curve(CIRCLE)
        poly = trace_outer_oval(c, compute_topology(c), mpq(1, 64))
        rep = count_hull_segments(c, poly)
        assert rep.s == 0
        assert rep.undecided == 0

    def test_ellipse_is_convex(self):
        c = Curve(BivarPoly({(2, 0): mpq(1, 4), (0, 2): 1, (0, 0): -1}))
        poly = trace_outer_oval(c, compute_topology(c), mpq(1, 64))
        assert count_hull_segments(c, poly).s == 0

    def test_crossing_ellipses_have_four(self, union_report):
        _, _, rep = union_report
        assert rep.s == 4
        assert rep.undecided == 0

    def test_segment_lines_pair_by_symmetry(self, union_report):
        # the union is invariant under both axis reflections, so the four
        # supporting lines come as sign patterns of one (|a|, |b|, c)
        _, _, rep = union_report
        shapes = {(abs(s.line[0]), abs(s.line[1]), s.line[2]) for s in rep.segments}
        assert len(shapes) == 1

    def test_endpoint_boxes_meet_the_curve(self, union_report):
        c, _, rep = union_report
        for seg in rep.segments:
            assert c.f.interval_eval(seg.end_a).contains_zero()
            assert c.f.interval_eval(seg.end_b).contains_zero()

    def test_report_json_schema(self, union_report):
        _, _, rep = union_report
        out = rep.to_json()
        assert set(out) == {"s", "segments", "undecided"}
        assert out["s"] == 4
        assert len(out["segments"]) == 4
        for seg in out["segments"]:
            assert set(seg) == {"line", "arc"}
            assert len(seg["arc"]) == 2

    def test_perturbed_quartic_has_four(self):
        c = Curve(CIRCLE * CONIC + BivarPoly.constant(mpq(-1, 1000)))
        t = compute_topology(c)
        poly = trace_outer_oval(c, t, mpq(1, 256))
        rep = count_hull_segments(c, poly)
        assert rep.s == 4
        assert rep.undecided == 0

    def test_degree_bound(self, union_report):
        # s <= 2d(d-1) for a hull-generic curve of degree 2d
        _, _, rep = union_report
        assert rep.s <= 2 * 2 * (2 - 1)

    def test_affine_invariance(self, union_report):
        _, _, rep = union_report
        f = (CIRCLE * CONIC).subs_affine(1, mpq(1, 3), mpq(1, 7), 0, 1, mpq(-1, 5))
        c = Curve(f)
        poly = trace_outer_oval(c, None, mpq(1, 128), base=(mpq(-1, 7), mpq(1, 5)))
        rep2 = count_hull_segments(c, poly)
        assert rep2.s == rep.s


class TestInflectionBound:
    def test_quartic_bound_holds(self):
        c = Curve(CIRCLE * CONIC + BivarPoly.constant(mpq(-1, 1000)))
        t = compute_topology(c)
        poly = trace_outer_oval(c, t, mpq(1, 256))
        h = count_hull_segments(c, poly)
        r = count_inflections(c, t)
        outer = next(o.id for o in t.ovals if t.depth(o.id) == 0)
        assert segment_inflection_bound(h, r, outer)
        assert 2 * h.s <= r.per_oval[outer]
