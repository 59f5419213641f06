"""Certified counting of line segments in the convex hull boundary.

A compact real curve's convex hull boundary consists of arcs of the curve
and straight bridges across its concavities; ``s`` is the number of maximal
such bridges.  The count is produced in two stages: a dense certified trace
of the hull-defining oval, then a per-candidate certificate that the curve
genuinely avoids a whole slab around each long hull edge except near its two
endpoints.  Candidates that cannot be certified within the budget are
reported as undecided and never counted — the returned ``s`` is always a
certified lower bound that equals the true count for curves whose hull
contacts are non-degenerate (isolated tangencies between bridges).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from statistics import median_low

from gmpy2 import isqrt, mpq, mpz

from .bivar import BivarPoly, Curve, restrict_to_line, resultant_eliminate
from .errors import CurveLabError, NonCompact
from .interval import Box, RatInterval
from .qmath import q_str
from .topology import OvalTree, is_compact
from .unipoly import isolate_real_roots, refine_root, root_bound


@dataclass
class HullSegment:
    """One certified straight bridge of the hull boundary.

    The true segment endpoints are enclosed by ``end_a``/``end_b`` and its
    supporting line lies within the traced tolerance of ``line`` (as
    ``a*x + b*y + c = 0``, normalized to ``max(|a|, |b|) = 1``).
    """

    end_a: Box
    end_b: Box
    line: tuple

    def to_json(self):
        return {
            "line": [q_str(v) for v in self.line],
            "arc": [self.end_a.to_json(), self.end_b.to_json()],
        }


@dataclass
class HullReport:
    """Certified ``s`` with supporting lines and honest undecided count."""

    s: int
    segments: list[HullSegment] = field(default_factory=list)
    traced_points: int = 0
    gap_threshold_used: object = mpq(0)
    undecided: int = 0

    def to_json(self):
        return {
            "s": self.s,
            "segments": [seg.to_json() for seg in self.segments],
            "undecided": self.undecided,
        }


# ---------------------------------------------------------------------------
# tracing
# ---------------------------------------------------------------------------


def _direction(tau):
    """Exact unit vector at parameter tau in [0, 2), winding once ccw.

    Built from the Pythagorean parametrization of the circle, so the vector
    is exactly unit length and every coordinate stays rational."""
    s = 1
    if tau >= 1:
        s, tau = -1, tau - 1
    t = 2 * tau - 1
    den = 1 + t * t
    return (s * (1 - t * t) / den, s * 2 * t / den)


def _dyadic_in(iv: RatInterval):
    """A dyadic point inside the interval, keeping denominators small."""
    w = iv.width
    if w <= 0:
        return iv.lo
    k = max(2, iv.width.denominator.bit_length() - iv.width.numerator.bit_length() + 3)
    scale = mpz(1) << k
    r = mpq((iv.mid * scale).numerator // (iv.mid * scale).denominator, scale)
    return r if iv.lo < r < iv.hi else iv.mid


def _dist_sq(p, q):
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def trace_outer_oval(
    c: Curve,
    t: OvalTree | None,
    resolution=mpq(1, 1024),
    *,
    base=None,
    radial_width=mpq(1, 2**24),
    max_gap=None,
    max_splits: int = 12,
):
    """Closed polyline on the hull-defining boundary of a compact curve.

    Rays are shot from an interior base point (the innermost oval's witness
    when a topology is supplied) and the outermost crossing along each ray is
    isolated and refined to width <= ``radial_width``, so every returned
    vertex lies within that distance of the curve.  ``resolution`` is the
    base angular step as a fraction of a full turn; extra rays are inserted
    until consecutive vertices are closer than ``max_gap``, which densifies
    exactly where the radius turns fast.
    """
    f = c.f.content_free()
    if not is_compact(f):
        raise NonCompact("hull tracing requires a compact curve")
    if t is not None and t.count:
        base = t.innermost().witness
    elif base is None:
        base = (mpq(0), mpq(0))
    bx, by = mpq(base[0]), mpq(base[1])
    radial_width = mpq(radial_width)

    def shoot(tau):
        ux, uy = _direction(tau)
        # reducible curves (unions) have even-multiplicity ray crossings at
        # component intersections; the squarefree part keeps the root set
        # while restoring the sign change that refinement needs
        g = restrict_to_line(f, (bx, by), (ux, uy)).squarefree_part()
        outward = [iv for iv in isolate_real_roots(g) if iv.hi > 0]
        if not outward:
            raise CurveLabError(
                "a ray from the base point misses the curve; the base point "
                "is not interior to the hull-defining oval"
            )
        iv = refine_root(g, outward[-1], radial_width)
        r = _dyadic_in(iv)
        if r <= 0:
            raise CurveLabError("base point lies on or outside the curve")
        return (bx + r * ux, by + r * uy)

    n = max(16, int(1 / mpq(resolution)))
    taus = [mpq(2 * k, n) for k in range(n)]
    points = {tau: shoot(tau) for tau in taus}
    if max_gap is None:
        scale = max(
            max(abs(p[0] - bx), abs(p[1] - by)) for p in points.values()
        )
        max_gap = scale / 512
    gap_sq = mpq(max_gap) ** 2

    stack = [(taus[k], taus[(k + 1) % n] + (2 if k + 1 == n else 0), 0) for k in range(n)]
    while stack:
        t1, t2, depth = stack.pop()
        p1 = points[t1 if t1 < 2 else t1 - 2]
        p2 = points[t2 if t2 < 2 else t2 - 2]
        if depth >= max_splits or _dist_sq(p1, p2) <= gap_sq:
            continue
        tm = (t1 + t2) / 2
        key = tm if tm < 2 else tm - 2
        points[key] = shoot(key)
        stack.append((t1, tm, depth + 1))
        stack.append((tm, t2, depth + 1))
    return [points[tau] for tau in sorted(points)]


# ---------------------------------------------------------------------------
# exact convex hull
# ---------------------------------------------------------------------------


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points):
    """Counterclockwise hull by monotone chain with exact rational turns.

    Collinear boundary points are dropped, so consecutive hull edges are
    never collinear and each edge is maximal."""
    pts = sorted(set((mpq(p[0]), mpq(p[1])) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _diamond_angle(a, b):
    """Rational proxy for the angle of (a, b), monotone over a full turn."""
    if a >= 0 and b >= 0:
        return b / (a + b)
    if a < 0 <= b:
        return 1 + (-a) / (-a + b)
    if a <= 0 and b < 0:
        return 2 + (-b) / (-a - b)
    return 3 + a / (a - b)


def _sqrt_upper(x, bits: int = 20):
    """Rational upper bound on sqrt(x) for nonnegative rational x."""
    x = mpq(x)
    if x <= 0:
        return mpq(0)
    scale = mpz(1) << (2 * bits)
    n = (x * scale).numerator // (x * scale).denominator
    return mpq(isqrt(n) + 1, mpz(1) << bits)


# ---------------------------------------------------------------------------
# candidate certification
# ---------------------------------------------------------------------------


def _curve_bounding_box(f: BivarPoly) -> Box:
    """A box certified to contain the real curve, from resultant root bounds.

    Extreme x (resp. y) on a compact curve occurs at a vertical (resp.
    horizontal) tangent or a singular point; both satisfy the eliminant."""
    rx = resultant_eliminate(f, f.derivative("y"), "y")
    ry = resultant_eliminate(f, f.derivative("x"), "x")
    if rx.degree < 1 or ry.degree < 1:
        raise NonCompact("curve has no tangency extremes; not compact")
    bx = root_bound(rx) + 1
    by = root_bound(ry) + 1
    return Box.from_bounds(-bx, bx, -by, by)


def _certify_gap(f, fx, fy, line, delta, p, q, rho_sq, region, budget):
    """Certify that the curve meets the slab {a x + b y + c >= -delta} only
    inside the two endpoint disks, by exhaustive interval subdivision.

    Success means the curve stays at depth > delta below the candidate chord
    everywhere between the endpoint neighborhoods, on both sides and over
    the whole plane — the hull boundary there can contain no curve point, so
    it is a straight bridge.  Returns 'certified' or 'undecided'.
    """
    a, b, cc = line
    queue = [region]
    spent = 0
    while queue:
        box = queue.pop()
        spent += 1
        if spent > budget:
            return "undecided"
        lam = a * box.x + b * box.y + cc
        if lam.hi < -delta:
            continue
        if _box_in_disk(box, p, rho_sq) or _box_in_disk(box, q, rho_sq):
            continue
        if f.mean_value_eval(box, fx, fy).sign() != 0:
            continue
        if box.width <= delta / 8:
            # a curve point persists near the chord outside both disks;
            # refining further cannot change that verdict
            return "undecided"
        queue.extend(box.split())
    return "certified"


def _box_in_disk(box: Box, center, radius_sq) -> bool:
    cx, cy = center
    dx = max(abs(box.x.lo - cx), abs(box.x.hi - cx))
    dy = max(abs(box.y.lo - cy), abs(box.y.hi - cy))
    return dx * dx + dy * dy <= radius_sq


def count_hull_segments(
    c: Curve,
    polyline,
    *,
    vertex_error=mpq(1, 2**24),
    gap_factor: int = 6,
    margin_factor: int = 4,
    budget: int = 1500000,
) -> HullReport:
    """Certified count of straight segments in the hull boundary.

    The polyline must trace the hull-defining oval with every vertex within
    ``vertex_error`` of the curve (``trace_outer_oval`` guarantees this).
    A hull edge of the vertex set is a bridge candidate when it spans
    skipped trace samples lying below its chord by more than four vertex
    errors — a certified concavity, since rounding alone cannot push an
    on-curve sample that deep — or, as a fallback, when it is longer than
    ``gap_factor`` times the median vertex spacing.  Each candidate is then
    certified by showing the curve's deviation below the chord exceeds
    ``margin_factor * vertex_error`` strictly between the endpoint
    neighborhoods.  Failed candidates are counted in ``undecided``, never
    in ``s``.
    """
    f = c.f.content_free()
    pts = [(mpq(p[0]), mpq(p[1])) for p in polyline]
    if len(pts) < 3:
        return HullReport(s=0, traced_points=len(pts))
    # normalize to counterclockwise so hull traversal follows trace order
    area2 = sum(
        pts[i][0] * pts[(i + 1) % len(pts)][1]
        - pts[(i + 1) % len(pts)][0] * pts[i][1]
        for i in range(len(pts))
    )
    if area2 < 0:
        pts.reverse()
    vertex_error = mpq(vertex_error)
    delta = margin_factor * vertex_error

    n = len(pts)
    spacings = [_dist_sq(pts[i], pts[(i + 1) % n]) for i in range(n)]
    med_sq = median_low(sorted(spacings))
    threshold_sq = gap_factor * gap_factor * med_sq

    index_of = {}
    for k, pt in enumerate(pts):
        index_of.setdefault(pt, k)

    hull = convex_hull(pts)
    region = _curve_bounding_box(f)
    fx = f.derivative("x")
    fy = f.derivative("y")

    found = []
    undecided = 0
    for i in range(len(hull)):
        p = hull[i]
        q = hull[(i + 1) % len(hull)]
        edge_sq = _dist_sq(p, q)
        dx, dy = q[0] - p[0], q[1] - p[1]
        a, b = dy, -dx  # outward normal of a ccw hull edge
        m = max(abs(a), abs(b))
        a, b = a / m, b / m
        cc = -(a * p[0] + b * p[1])
        if edge_sq <= threshold_sq:
            # short edge: candidate only on certified concavity underneath
            ip = index_of.get(p)
            iq = index_of.get(q)
            if ip is None or iq is None:
                continue
            dip = mpq(0)
            k = (ip + 1) % n
            while k != iq:
                depth = -(a * pts[k][0] + b * pts[k][1] + cc)
                if depth > dip:
                    dip = depth
                k = (k + 1) % n
            if dip <= 4 * vertex_error:
                continue
        rho_sq = edge_sq / 16
        verdict = _certify_gap(
            f, fx, fy, (a, b, cc), delta, p, q, rho_sq, region, budget
        )
        if verdict == "certified":
            rho = _sqrt_upper(rho_sq)
            found.append(
                HullSegment(
                    end_a=Box.from_bounds(p[0] - rho, p[0] + rho, p[1] - rho, p[1] + rho),
                    end_b=Box.from_bounds(q[0] - rho, q[0] + rho, q[1] - rho, q[1] + rho),
                    line=(a, b, cc),
                )
            )
        else:
            undecided += 1
    found.sort(key=lambda seg: _diamond_angle(seg.line[0], seg.line[1]))
    return HullReport(
        s=len(found),
        segments=found,
        traced_points=len(pts),
        gap_threshold_used=_sqrt_upper(threshold_sq),
        undecided=undecided,
    )


def segment_inflection_bound(h: HullReport, r, outer_oval_id) -> bool:
    """Cross-check: each hull bridge forces at least two inflections on the
    arc it spans, so 2 s must not exceed the outer oval's inflection count.
    A False return is a contradiction between two certificates."""
    return 2 * h.s <= r.per_oval.get(outer_oval_id, 0)
