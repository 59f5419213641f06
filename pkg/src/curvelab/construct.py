"""Inductive construction of hyperbolic curves with prescribed hull segments.

Starting from a base circle and an ellipse crossing it in four real points,
each step multiplies the previous curve by the circle and smooths the
resulting nodes with a small multiple of a product of lines through a common
interior point.  The line directions control how many of the new
curve/circle intersection points sit on the convex hull boundary, which in
turn prescribes the number of straight hull segments of the next curve.
Every step is re-certified from scratch by the topology, inflection, and
hull modules; the pipeline never trusts the construction heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from gmpy2 import mpq

from .bivar import BivarPoly, Curve, restrict_to_line
from .errors import (
    CurveLabError,
    InfeasibleSelection,
    SearchExhausted,
)
from .hull import (
    _diamond_angle,
    _cross,
    _curve_bounding_box,
    _dist_sq,
    convex_hull,
    count_hull_segments,
    trace_outer_oval,
)
from .inflection import count_inflections
from .interval import Box, RatInterval
from .qmath import q_str
from .topology import certify_hyperbolic, compute_topology
from .unipoly import UniPoly, isolate_real_roots, refine_root, root_bound, sturm_count

UNIT_CIRCLE = BivarPoly({(2, 0): 1, (0, 2): 1, (0, 0): -1})
# the default first ellipse: the spec shape 2x^2 + y^2 scaled so that it
# genuinely crosses the unit circle in four points instead of touching it
FIRST_ELLIPSE = BivarPoly({(2, 0): 2, (0, 2): 1, (0, 0): mpq(-5, 4)})


# ---------------------------------------------------------------------------
# plan and result types
# ---------------------------------------------------------------------------


@dataclass
class LineFamily:
    """Lines through a common base point with their circle intersections."""

    lines: list  # (a, b, c) triples for a x + b y + c = 0
    product_poly: BivarPoly
    points: list  # rational points on the base circle, 2 per line
    on_hull: list  # bool per point: certified on the union's hull boundary

    @property
    def hull_count(self) -> int:
        return sum(1 for v in self.on_hull if v)


@dataclass
class PerturbationStep:
    base: BivarPoly
    direction: BivarPoly
    epsilon: object
    sign_tried: str = "both"
    certificates_required: list = field(default_factory=list)

    @property
    def result(self) -> BivarPoly:
        return perturb(self.base, self.direction, self.epsilon)


@dataclass
class CertTargets:
    """What a perturbed curve must certify before an epsilon is accepted."""

    ovals: int
    inflections: int | None = None
    s: int | None = None
    hyperbolic: bool = True


@dataclass
class ConstructionPlan:
    d_target: int
    r_sequence: list = field(default_factory=list)  # r_2 .. r_d
    seed: int = 0
    base_point: tuple = (mpq(0), mpq(0))
    c0: BivarPoly = field(default_factory=lambda: UNIT_CIRCLE)
    first_ellipse: BivarPoly = field(default_factory=lambda: FIRST_ELLIPSE)

    def to_json(self):
        return {
            "d": self.d_target,
            "r": list(self.r_sequence),
            "seed": self.seed,
            "base_point": [q_str(self.base_point[0]), q_str(self.base_point[1])],
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            d_target=int(data["d"]),
            r_sequence=[None if r is None else int(r) for r in data.get("r", [])],
            seed=int(data.get("seed", 0)),
            base_point=tuple(mpq(v) for v in data.get("base_point", ("0", "0"))),
        )


@dataclass
class StepResult:
    curve: Curve
    topology: object
    inflections: object
    hull: object
    tree: object = None
    epsilon: object = None
    line_family: LineFamily | None = None
    union_hull: object = None

    def __iter__(self):
        # the canonical 4-tuple view of a certified step
        return iter((self.curve, self.topology, self.inflections, self.hull))


# ---------------------------------------------------------------------------
# elementary operations
# ---------------------------------------------------------------------------


def perturb(P: BivarPoly, Q: BivarPoly, eps) -> BivarPoly:
    """P + eps * Q, exactly."""
    eps = mpq(eps)
    if eps == 0:
        return P
    return P + BivarPoly.constant(eps) * Q


def example_sextic() -> Curve:
    """The fully explicit degree-6 curve with 3 nested ovals and s = 12.

    A triple perturbation of the unit circle cubed by two line pairs (at
    slopes approximating tan 15 deg and tan 75 deg, squared to 12-digit
    rational accuracy) and a tiny constant."""
    C = UNIT_CIRCLE
    x2 = BivarPoly({(2, 0): 1})
    y2 = BivarPoly({(0, 2): 1})
    a2 = mpq(717967697245, 10**13)
    b2 = mpq(139282032302755, 10**13)
    f = (
        C**3
        + mpq(79, 50) * (C * C * (y2 - a2 * x2))
        + mpq(-11, 2000) * (C * (y2 - x2) * (y2 - b2 * x2))
        + BivarPoly.constant(mpq(-1, 10**10))
    )
    return Curve(f, label="example-sextic")


def _circle_point(t):
    """The rational unit-circle point with tan(angle/2) = t."""
    t = mpq(t)
    den = 1 + t * t
    return ((1 - t * t) / den, 2 * t / den)


def _exterior_sign(f: BivarPoly) -> int:
    lead = f.leading_form()
    v = lead(1, 0)
    return 1 if v > 0 else -1


def _circle_restriction(f: BivarPoly) -> UniPoly:
    """Numerator of f at the rational circle point with parameter t."""
    d = f.degree
    one = UniPoly.constant(1)
    tt = UniPoly.x()
    x_num = one - tt * tt
    y_num = 2 * tt
    den = one + tt * tt
    xp = [one]
    yp = [one]
    dp = [one]
    for _ in range(d):
        xp.append(xp[-1] * x_num)
        yp.append(yp[-1] * y_num)
        dp.append(dp[-1] * den)
    total = UniPoly.zero()
    for (i, j), c in f.monomials.items():
        total = total + UniPoly.constant(c) * xp[i] * yp[j] * dp[d - i - j]
    return total


def _beyond_crossings(f: BivarPoly, z) -> int:
    """Real curve crossings strictly beyond z on the ray from the origin.

    For a hyperbolic curve star-shaped around the origin, zero crossings
    beyond certify that z lies outside the outer oval."""
    p = restrict_to_line(f, (mpq(0), mpq(0)), z)
    hi = root_bound(p) + 1
    if hi <= 1:
        return 0
    return sturm_count(p, RatInterval(mpq(1), hi))


def _support_certificate(f: BivarPoly, z, region, mu=mpq(1, 2**10), budget: int = 20000) -> bool:
    """Certify that the curve f lies strictly inside {<z, w> < 1 - mu}.

    Then the unit-circle point z is the unique maximizer of its own support
    direction over curve-union-circle, hence an exposed hull boundary point."""
    zx, zy = z
    fx = f.derivative("x")
    fy = f.derivative("y")
    queue = [region]
    spent = 0
    while queue:
        box = queue.pop()
        spent += 1
        if spent > budget:
            return False
        lam = zx * box.x + zy * box.y
        if lam.hi < 1 - mu:
            continue
        if f.mean_value_eval(box, fx, fy).sign() != 0:
            continue
        if box.width <= mu / 4:
            return False
        queue.extend(box.split())
    return True


def _strictly_inside_hull(hull_pts, z, margin) -> bool:
    """Exact test that z is inside the convex polygon with clearance margin."""
    m2 = mpq(margin) ** 2
    n = len(hull_pts)
    if n < 3:
        return False
    for i in range(n):
        p = hull_pts[i]
        q = hull_pts[(i + 1) % n]
        cr = _cross(p, q, z)
        if cr <= 0 or cr * cr <= m2 * _dist_sq(p, q):
            return False
    return True


def _parity_ok(prev_f: BivarPoly, points) -> bool:
    """Even number of chosen points on each circle arc cut by the previous
    curve, measured by exact cyclic angle proxies."""
    p = _circle_restriction(prev_f)
    if p.is_zero:
        return False
    angles = sorted(_diamond_angle(z[0], z[1]) for z in points)
    crossings = []
    for iv in isolate_real_roots(p):
        # shrink until the enclosure avoids t = 0 (the angle-proxy wrap) and
        # every chosen point; the chosen points are off the curve, so this
        # terminates
        for _ in range(80):
            bad = iv.contains(0) or any(
                iv.contains_strictly(t) for t in _t_values(points)
            )
            if not bad:
                break
            iv = refine_root(p, iv, iv.width / 4)
        else:
            return False
        za = _circle_point(iv.lo)
        zb = _circle_point(iv.hi)
        da, db = _diamond_angle(*za), _diamond_angle(*zb)
        crossings.append((min(da, db), max(da, db)))
    if prev_f(-1, 0) == 0 or prev_f(1, 0) == 0:
        return False
    crossings.sort()
    if not crossings:
        return len(angles) % 2 == 0
    counts = [0] * len(crossings)
    for ang in angles:
        idx = len(crossings) - 1
        for k, (lo, hi) in enumerate(crossings):
            if ang < lo:
                idx = k - 1
                break
        counts[idx % len(crossings)] += 1
    return all(c % 2 == 0 for c in counts)


def _t_values(points):
    for zx, zy in points:
        if zx != -1:
            yield zy / (1 + zx)


# ---------------------------------------------------------------------------
# line selection
# ---------------------------------------------------------------------------


def choose_lines(
    prev: Curve,
    c0: Curve,
    step_d: int,
    r_d: int | None,
    seed: int = 0,
    *,
    union_polyline=None,
    avoid_boxes=(),
    vertex_error=mpq(1, 2**24),
) -> LineFamily:
    """2*step_d distinct lines through the origin whose 4*step_d circle
    intersections are all exterior to the previous curve, with exactly r_d
    of them certified on the hull boundary of previous-union-circle.

    Each candidate line has a Pythagorean slope, so both of its circle
    points are exact rational points and every certificate below is an exact
    or certified computation.  ``union_polyline`` (a trace of the union)
    speeds up and sharpens the interior certificates; it is computed on
    demand when omitted.
    """
    f = prev.f.content_free()
    ext = _exterior_sign(f)
    need_lines = 2 * step_d
    if r_d is not None and (r_d < 0 or r_d > 4 * step_d or r_d % 2 != 0):
        raise InfeasibleSelection(
            f"r={r_d} is not an even number within [0, {4 * step_d}]"
        )
    if union_polyline is None:
        union_polyline = trace_outer_oval(
            Curve(f * c0.f), None, base=(mpq(0), mpq(0)), radial_width=vertex_error
        )
    hull_pts = convex_hull(union_polyline)
    region = _curve_bounding_box(f)

    # candidate slopes: a deterministic dyadic ladder around the half-circle,
    # rotated by the seed so reruns can escape an unlucky configuration
    grid = 64
    cands = []
    for k in range(grid):
        t = mpq(2 * k + 1 + 2 * (seed % grid), grid) - 1
        while t > 1:
            t -= 2
        cands.append(t)

    classified = []  # (t, points, flags) with flags[i] True = on hull
    for t in cands:
        z1 = _circle_point(t)
        z2 = (-z1[0], -z1[1])
        pts = (z1, z2)
        if any(f(z[0], z[1]) == 0 for z in pts):
            continue
        if any((1 if f(z[0], z[1]) > 0 else -1) != ext for z in pts):
            continue
        if any(_beyond_crossings(f, z) != 0 for z in pts):
            continue
        if any(
            any(b.contains_point(z[0], z[1]) for b in avoid_boxes) for z in pts
        ):
            continue
        flags = []
        ok = True
        for z in pts:
            if _support_certificate(f, z, region):
                flags.append(True)
            elif _strictly_inside_hull(hull_pts, z, 2 * vertex_error):
                flags.append(False)
            else:
                ok = False
                break
        if ok:
            classified.append((t, pts, tuple(flags)))

    both_hull = [c for c in classified if c[2] == (True, True)]
    both_in = [c for c in classified if c[2] == (False, False)]
    # interior lines graze the previous curve near its circle crossings,
    # where a small |f| value means weak node smoothing; prefer the lines
    # whose circle points sit deepest in the exterior
    both_in.sort(key=lambda c: min(abs(f(z[0], z[1])) for z in c[1]), reverse=True)

    def assemble(selection):
        pts = []
        flags = []
        lines = []
        product = BivarPoly.constant(1)
        for t, zz, fl in selection:
            zx, zy = zz[0]
            a, b, cc = -zy, zx, mpq(0)  # line through origin and z
            lines.append((a, b, cc))
            product = product * BivarPoly.line(a, b, cc)
            pts.extend(zz)
            flags.extend(fl)
        return LineFamily(lines, product, pts, flags)

    if r_d is not None:
        if len(both_hull) < r_d // 2:
            raise InfeasibleSelection(
                f"only {2 * len(both_hull)} certified hull points available, "
                f"need {r_d}"
            )
        if len(both_in) < need_lines - r_d // 2:
            raise InfeasibleSelection(
                f"only {len(both_in)} interior lines available, "
                f"need {need_lines - r_d // 2}"
            )
        splits = [r_d // 2]
    else:
        splits = list(range(min(len(both_hull), need_lines), -1, -1))

    # prefer well-spread slope selections: clustered lines make the circle's
    # excursions outside the perturbed curve extremely shallow, which both
    # squeezes the admissible epsilon range and shrinks the new hull
    # segments below any measurable size
    for want_hull in splits:
        want_in = need_lines - want_hull
        if want_hull > len(both_hull) or want_in > len(both_in):
            continue
        for hsel in _spread_combinations(both_hull, want_hull):
            for isel in _bounded_combinations(both_in, want_in):
                selection = list(hsel) + list(isel)
                points = [z for _, zz, _ in selection for z in zz]
                if _parity_ok(f, points):
                    return assemble(selection)
    raise InfeasibleSelection("arc parity condition failed for all candidates")


def _bounded_combinations(pool, k, cap: int = 64):
    for i, comb in enumerate(combinations(pool, k)):
        if i >= cap:
            return
        yield comb


def _spread_combinations(pool, k, cap: int = 64):
    """Selections of k pool entries, widest slope spread first.

    Entries are (t, ...) with t the half-angle parameter, so sorting by t
    orders the lines by direction.  Evenly strided index patterns come
    first (every rotation offset), then a bounded tail of the remaining
    lexicographic combinations as a fallback for the parity filter.
    """
    n = len(pool)
    if k == 0:
        yield ()
        return
    if k > n:
        return
    pool = sorted(pool, key=lambda entry: entry[0])
    seen = set()
    for off in range(n):
        idx = tuple(sorted((off + (i * n) // k) % n for i in range(k)))
        if len(idx) == k and idx not in seen:
            seen.add(idx)
            yield tuple(pool[i] for i in idx)
    spent = 0
    for comb in combinations(range(n), k):
        if comb in seen:
            continue
        spent += 1
        if spent > cap:
            return
        yield tuple(pool[i] for i in comb)


# ---------------------------------------------------------------------------
# epsilon search
# ---------------------------------------------------------------------------


def _certify(fpoly: BivarPoly, targets: CertTargets):
    """Run the full certificate chain; returns (counts, reports) or raises."""
    c = Curve(fpoly)
    tree = compute_topology(c)
    if tree.count != targets.ovals:
        raise CurveLabError(f"oval count {tree.count} != {targets.ovals}")
    if targets.ovals > 1 and not tree.is_chain():
        raise CurveLabError("ovals are not nested in a chain")
    topo = certify_hyperbolic(c, tree, n_dirs=120)
    if targets.hyperbolic and not topo.hyperbolic:
        raise CurveLabError("hyperbolicity certificate failed")
    infl = None
    if targets.inflections is not None:
        infl = count_inflections(c, tree)
        if infl.total != targets.inflections:
            raise CurveLabError(
                f"inflection total {infl.total} != {targets.inflections}"
            )
    hull = None
    if targets.s is not None:
        poly = trace_outer_oval(c, tree)
        hull = count_hull_segments(c, poly)
        if hull.s != targets.s or hull.undecided:
            raise CurveLabError(
                f"hull count {hull.s} (+{hull.undecided} undecided) != {targets.s}"
            )
    counts = (
        tree.count,
        infl.total if infl is not None else None,
        hull.s if hull is not None else None,
    )
    return counts, (c, tree, topo, infl, hull)


def epsilon_search(
    P: BivarPoly,
    Q: BivarPoly,
    targets: CertTargets,
    *,
    scale=mpq(1),
    max_k: int = 24,
    start_k: int = 0,
    extra=None,
):
    """Smallest-k dyadic epsilon whose curve passes all target certificates
    and whose halving passes with identical certified counts.

    The halving is the stability witness: one passing epsilon could be a
    coincidence of the discrete search, two adjacent scales with the same
    certified counts are evidence the stable small-epsilon regime is
    reached.  ``extra``, when given, is a further acceptance gate run on
    the perturbed polynomial of a surviving candidate; it returns an
    artifact on success and raises CurveLabError to reject the epsilon.
    Returns (epsilon, reports-tuple) or, with ``extra``, (epsilon,
    reports-tuple, extra-artifact).
    """
    scale = mpq(scale)
    log = []
    for k in range(start_k, max_k):
        for sgn in (1, -1):
            eps = sgn * scale / 2**k
            fpoly = perturb(P, Q, eps)
            try:
                counts, reports = _certify(fpoly, targets)
            except CurveLabError as exc:
                log.append((eps, str(exc)))
                continue
            try:
                counts_half, _ = _certify(perturb(P, Q, eps / 2), targets)
            except CurveLabError as exc:
                log.append((eps / 2, f"stability witness: {exc}"))
                continue
            if counts_half != counts:
                log.append((eps, "stability witness changed certified counts"))
                continue
            if extra is None:
                return eps, reports
            try:
                artifact = extra(fpoly)
            except CurveLabError as exc:
                log.append((eps, str(exc)))
                continue
            return eps, reports, artifact
    raise SearchExhausted(
        f"no epsilon of the form ±{scale}/2^k, k<{max_k}, certified", log=log
    )


# ---------------------------------------------------------------------------
# the full pipeline
# ---------------------------------------------------------------------------


def _union_hull(prev_f: BivarPoly, c0_f: BivarPoly, vertex_error=mpq(1, 2**24)):
    u = Curve(prev_f * c0_f)
    poly = trace_outer_oval(u, None, base=(mpq(0), mpq(0)), radial_width=vertex_error)
    return poly, count_hull_segments(u, poly, vertex_error=vertex_error)


def _intersections_on_outer_oval(fpoly: BivarPoly, points) -> bool:
    """Each rational curve point is outermost on its ray from the origin."""
    for z in points:
        p = restrict_to_line(fpoly, (mpq(0), mpq(0)), z)
        root = UniPoly([mpq(-1), mpq(1)])  # r - 1; the point sits at r = 1
        q_, rem = p.divmod(root)
        if rem.degree >= 0 and not rem.is_zero:
            return False
        hi = root_bound(p) + 1
        if q_(1) == 0 or sturm_count(q_, RatInterval(mpq(1), hi)) != 0:
            return False
    return True


def build_hilbert(plan: ConstructionPlan) -> list[StepResult]:
    """The certified chain C_1, ..., C_d.

    Every step certifies from scratch: nesting topology, hyperbolicity,
    the saturated inflection count 2d(2d-2), the hull identity
    s(C_d) = s(C_{d-1} union C_0), and the bookkeeping
    s(C_d union C_0) = s(C_d) + r_d.  Any failure aborts with the step
    index in the message.
    """
    if plan.d_target < 1:
        raise InfeasibleSelection("d must be at least 1")
    c0 = Curve(plan.c0, label="C0")
    chain: list[StepResult] = []

    # C_1: the first ellipse, certified directly
    counts, (c1, tree1, topo1, infl1, hull1) = _certify(
        plan.first_ellipse, CertTargets(ovals=1, inflections=0, s=0)
    )
    upoly, uhull = _union_hull(c1.f, c0.f)
    if uhull.s != 4 or uhull.undecided:
        raise CurveLabError(
            f"step 1: union hull count {uhull.s} (+{uhull.undecided} undecided) != 4"
        )
    chain.append(
        StepResult(c1, topo1, infl1, hull1, tree=tree1, union_hull=uhull)
    )
    prev, prev_union_poly, prev_union_hull = c1, upoly, uhull

    for d in range(2, plan.d_target + 1):
        r_d = None
        if len(plan.r_sequence) >= d - 1:
            r_d = plan.r_sequence[d - 2]
        # keep new intersection points clear of the bridge contact boxes: a
        # corner too close to an existing contact makes the neighboring
        # boundary arc fall off the hull and merges two bridges into one
        avoid = []
        for seg in prev_union_hull.segments:
            avoid.extend((seg.end_a, seg.end_b))
        family = choose_lines(
            prev,
            c0,
            d,
            r_d,
            seed=plan.seed,
            union_polyline=prev_union_poly,
            avoid_boxes=avoid,
        )
        targets = CertTargets(
            ovals=d, inflections=2 * d * (2 * d - 2), s=prev_union_hull.s
        )
        # the bookkeeping identity is part of epsilon acceptance: an epsilon
        # whose new corner falls too close to an existing contact arc merges
        # two bridges and must be rejected, not reported as a broken chain
        expected_union = prev_union_hull.s + (r_d if r_d is not None else 0)

        def union_gate(fpoly, want=expected_union, step=d, check=r_d is not None):
            up, uh = _union_hull(fpoly, c0.f)
            if uh.undecided:
                raise CurveLabError(
                    f"step {step}: union hull has {uh.undecided} undecided candidates"
                )
            if check and uh.s != want:
                raise CurveLabError(
                    f"step {step}: s(C_d union C_0) = {uh.s} != {want}"
                )
            return up, uh

        eps, (cd, tree, topo, infl, hull), (upoly, uhull) = epsilon_search(
            prev.f * c0.f, family.product_poly, targets, extra=union_gate
        )
        if not _intersections_on_outer_oval(cd.f, family.points):
            raise CurveLabError(
                f"step {d}: a circle intersection point left the outer oval"
            )
        for z in family.points:
            if any(p.box.contains_point(z[0], z[1]) for p in infl.points):
                raise CurveLabError(
                    f"step {d}: an intersection point landed in an inflection box"
                )
        if uhull.s != hull.s + family.hull_count:
            raise CurveLabError(
                f"step {d}: s(C_d union C_0) = {uhull.s} "
                f"!= {hull.s} + {family.hull_count}"
            )
        chain.append(
            StepResult(
                cd,
                topo,
                infl,
                hull,
                tree=tree,
                epsilon=eps,
                line_family=family,
                union_hull=uhull,
            )
        )
        prev, prev_union_poly, prev_union_hull = cd, upoly, uhull
    return chain
