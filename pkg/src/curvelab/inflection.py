"""Certified counting of real inflection points and their oval assignment.

Inflection candidates are the real common zeros of the curve f and its
curvature numerator G = hessian_curve(f).  Working in the same sheared frame
as the topology sweep, the x-coordinates are isolated from the resultant
res_y(f, G); every candidate strip is then resolved by the certified 2D
solver, and each certified point is matched to the unique sweep strand
carrying it, which identifies its oval exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .bivar import BivarPoly, Curve, hessian_curve, resultant_eliminate
from .errors import (
    BudgetExhausted,
    CommonFactor,
    ConstantInput,
    CurveLabError,
    KleinViolation,
    NegativeSlack,
    NonGenericSweep,
    UnresolvedCandidate,
    ZeroPolynomial,
)
from .interval import Box, RatInterval
from .solve2d import _round_box, _System, solve_system
from .topology import (
    _SHEARS,
    OvalTree,
    _disjoint_refine,
    _fiber,
    _SweepError,
    _y_bound,
    compute_topology,
)
from .unipoly import UniPoly, isolate_real_roots, refine_root, sturm_count


@dataclass
class InflectionPoint:
    """A certified enclosure of one real inflection point."""

    box: Box
    oval_id: int | None
    transversal: bool

    def to_json(self):
        return {
            "box": self.box.to_json(),
            "oval_id": self.oval_id,
            "transversal": self.transversal,
        }


@dataclass
class InflectionReport:
    total: int
    per_oval: dict
    degenerate: bool
    nodes: int
    points: list = field(default_factory=list)

    def to_json(self):
        return {
            "total": self.total,
            "per_oval": {str(k): v for k, v in sorted(self.per_oval.items())},
            "degenerate": self.degenerate,
            "nodes": self.nodes,
        }


@dataclass
class InflectionBudget:
    slack: int
    verdict: str

    @property
    def maximal(self) -> bool:
        return self.verdict == "maximal"

    def to_json(self):
        return {"slack": self.slack, "verdict": self.verdict}


def inflection_budget(i_count: int, n_count: int, degree: int) -> InflectionBudget:
    """slack = degree*(degree-2) - i_count - 2*n_count; maximal iff zero.

    Negative slack can only come from a miscertified count upstream, so it
    raises rather than reporting."""
    if i_count < 0 or n_count < 0 or degree < 0:
        raise ConstantInput("inflection budget takes nonnegative inputs")
    slack = degree * (degree - 2) - i_count - 2 * n_count
    if slack < 0:
        raise NegativeSlack(
            f"{i_count} inflections + 2*{n_count} nodes exceeds the degree-{degree} budget"
        )
    return InflectionBudget(int(slack), "maximal" if slack == 0 else "submaximal")


def count_real_intersections(c1: Curve, c2: Curve, budget: int = 400000) -> int:
    """Number of real intersection points of two curves, each certified.

    Used to count the nodes of a product curve from its known factors; raises
    CommonFactor when the factors share a component."""
    f1 = c1.f.content_free()
    f2 = c2.f.content_free()
    if f1.is_zero or f2.is_zero:
        raise ZeroPolynomial("zero polynomial has no curve")
    rx = resultant_eliminate(f1, f2, "y")
    ry = resultant_eliminate(f1, f2, "x")
    if rx.degree == 0 or ry.degree == 0:
        return 0
    from .unipoly import root_bound

    bx = root_bound(rx)
    by = root_bound(ry)
    region = Box.from_bounds(-bx - 1, bx + 1, -by - 1, by + 1)
    return len(solve_system(f1, f2, region, budget))


# ---------------------------------------------------------------------------
# counting in a sweep frame
# ---------------------------------------------------------------------------


def _locate_strip(tt: OvalTree, iv: RatInterval, r_sf: UniPoly):
    """Refine an x-root interval until it sits strictly inside one sweep
    strip (or outside the critical span, where the curve has no real
    points).  Returns (refined interval, strip index or None)."""
    crit = list(tt.crit)
    for _ in range(200):
        if iv.hi < crit[0].lo or iv.lo > crit[-1].hi:
            return iv, None
        for i in range(len(crit) - 1):
            if crit[i].hi < iv.lo and iv.hi < crit[i + 1].lo:
                return iv, i
        iv = refine_root(r_sf, iv, iv.width / 4)
        for i, civ in enumerate(crit):
            if civ.overlaps(iv):
                crit[i] = refine_root(tt.disc_sf, civ, civ.width / 4)
    raise NonGenericSweep("inflection x-root entangled with a critical value")


def _partition(p: UniPoly, ivs, window: RatInterval):
    """Counts of fiber roots strictly below / strictly inside the window."""
    below = inside = 0
    for iv in ivs:
        cur = iv
        for _ in range(150):
            if cur.hi < window.lo:
                below += 1
                break
            if cur.lo > window.hi:
                break
            if window.lo < cur.lo and cur.hi < window.hi:
                inside += 1
                break
            cur = refine_root(p, cur, cur.width / 4)
        else:
            raise _SweepError("fiber root straddles the window")
    return below, inside


def _strand_index(fsx, fsy, cols, box: Box, shrink) -> int:
    """Index (bottom to top) of the sweep strand through a certified point.

    The box is shrunk (via the caller-supplied contraction) until |f_x / f_y|
    is bounded on a slightly taller box, which certifies that the curve
    branch through the point stays inside that window across the whole
    x-extent; the branch is then the unique fiber root in the window at the
    rational midpoint, and counting roots below it is exact."""
    for _ in range(40):
        if box.width <= mpq(1, 2**24):
            break
        box = shrink(box)
    e = box.width * 8 + mpq(1, 2**40)
    for _ in range(120):
        window = RatInterval(box.y.lo - e, box.y.hi + e)
        tall = Box(box.x, window)
        ivy = fsy.interval_eval(tall)
        if ivy.sign() == 0:
            box = shrink(box)
            e = e / 4
            continue
        ivx = fsx.interval_eval(tall)
        m_num = max(abs(ivx.lo), abs(ivx.hi))
        m_den = min(abs(ivy.lo), abs(ivy.hi))
        if m_num * box.x.width >= m_den * e:
            box = shrink(box)
            continue
        p = _fiber(cols, box.x.mid)
        try:
            below, inside = _partition(p, isolate_real_roots(p), window)
        except _SweepError:
            e = e * mpq(17, 16)
            continue
        if inside == 1:
            return below
        box = shrink(box)
    raise UnresolvedCandidate("could not certify the strand carrying an inflection point")


def _refine_pair(fs, g, r_sf, s_sf, iv, cands):
    """Match an x-root of the first projection with the unique y-root of the
    second that yields a common zero, by interval exclusion of the rest."""
    cands = list(cands)
    for _ in range(200):
        viable = []
        for yc in cands:
            bx = Box(iv, yc)
            if fs.interval_eval(bx).contains_zero() and g.interval_eval(bx).contains_zero():
                viable.append(yc)
        if len(viable) == 1:
            return iv, viable[0]
        if not viable:
            raise UnresolvedCandidate("inflection fiber lost all y-candidates")
        iv = refine_root(r_sf, iv, iv.width / 4)
        cands = [refine_root(s_sf, yc, yc.width / 4) for yc in viable]
    raise UnresolvedCandidate("could not separate y-candidates for an inflection")


def _deepest_containing(tt: OvalTree, px, py):
    """Id of the innermost oval of tt whose interior contains (px, py), by
    exact vertical ray casting in tt's frame; None when outside every oval."""
    crit = list(tt.crit)
    strip = None
    for _ in range(200):
        if px < crit[0].lo or px > crit[-1].hi:
            return None
        for i in range(len(crit) - 1):
            if crit[i].hi < px < crit[i + 1].lo:
                strip = i
                break
        if strip is not None:
            break
        for i, civ in enumerate(crit):
            if civ.contains(px):
                if tt.disc_sf(px) == 0:
                    raise UnresolvedCandidate("ray through a critical value")
                crit[i] = refine_root(tt.disc_sf, civ, civ.width / 4)
    else:
        raise UnresolvedCandidate("ray could not be separated from critical values")
    cols = tt.frame_poly.as_unipoly_in("y")
    p = _fiber(cols, px)
    if p(py) == 0:
        raise UnresolvedCandidate("ray base point lies on the curve")
    active = [s for (s, _) in tt.fiber_records[strip + 1][1]]
    roots = isolate_real_roots(p)
    below = {}
    for j, iv in enumerate(roots):
        cur = iv
        for _ in range(150):
            if cur.hi < py:
                oid = tt.strand_oval[active[j]]
                below[oid] = below.get(oid, 0) + 1
                break
            if cur.lo > py:
                break
            cur = refine_root(p, cur, cur.width / 4)
        else:
            raise UnresolvedCandidate("fiber root would not separate from the ray base")
    containing = [oid for oid, n in below.items() if n % 2 == 1]
    if not containing:
        return None
    return max(containing, key=tt.depth)


def _match_ovals(t: OvalTree, tt: OvalTree) -> dict:
    """Map tt's oval ids to t's, by locating each t-witness inside tt."""
    if tt is t:
        return {o.id: o.id for o in t.ovals}
    if tt.count != t.count:
        raise UnresolvedCandidate("frames disagree on the oval count")
    mapping = {}
    for o in t.ovals:
        wx, wy = o.witness
        oid = _deepest_containing(tt, wx - tt.shear * wy, wy)
        if oid is None or oid in mapping:
            raise UnresolvedCandidate("oval matching across frames failed")
        mapping[oid] = o.id
    return mapping


def _to_original_frame(raw, shear, remap):
    """Map frame boxes back through x = x' + shear*y', keeping them disjoint."""
    boxes = [b for (b, _, _, _) in raw]
    for _ in range(60):
        mapped = [Box(b.x + b.y * shear, b.y) for b in boxes]
        if all(
            not mapped[i].overlaps(mapped[j])
            for i in range(len(mapped))
            for j in range(i + 1, len(mapped))
        ):
            return [
                InflectionPoint(m, remap.get(oid), tv)
                for m, (_, oid, tv, _) in zip(mapped, raw)
            ]
        boxes = [shrink(b) for b, (_, _, _, shrink) in zip(boxes, raw)]
    raise UnresolvedCandidate("inflection enclosures could not be separated")


def _count_in_frame(t, tt, fs, g, r, r_sf, klein, nodes, budget) -> InflectionReport:
    squarefree = r_sf.degree == r.degree
    fsx = fs.derivative("x")
    fsy = fs.derivative("y")
    cols = fs.as_unipoly_in("y")
    ivs = _disjoint_refine(r_sf, isolate_real_roots(r_sf)) if r_sf.degree > 0 else []
    raw = []
    degenerate = False
    if squarefree:
        # A simple real root of the projection resultant carries exactly one
        # common zero of {f, G}; being unique it is self-conjugate, hence
        # real.  Existence is therefore algebraic, and the point is enclosed
        # by pairing the root with the unique compatible root of the second
        # projection — univariate refinement only, immune to the
        # ill-conditioning of near-tangential inflection pairs.
        s_sf = resultant_eliminate(fs, g, "x").squarefree_part()
        yivs = _disjoint_refine(s_sf, isolate_real_roots(s_sf)) if s_sf.degree > 0 else []
        yivs = [refine_root(s_sf, yc, mpq(1, 2**12)) for yc in yivs]
        for iv in ivs:
            iv = refine_root(r_sf, iv, mpq(1, 2**12))
            iv, strip = _locate_strip(tt, iv, r_sf)
            if strip is None:
                raise UnresolvedCandidate(
                    "inflection x-root outside the critical span"
                )
            iv, yc = _refine_pair(fs, g, r_sf, s_sf, iv, yivs)

            def shrink(b, _r=r_sf, _s=s_sf):
                return Box(
                    refine_root(_r, b.x, b.x.width / 8),
                    refine_root(_s, b.y, b.y.width / 8),
                )

            active = [s for (s, _) in tt.fiber_records[strip + 1][1]]
            k = _strand_index(fsx, fsy, cols, Box(iv, yc), shrink)
            raw.append((Box(iv, yc), tt.strand_oval[active[k]], True, shrink))
    else:
        # multiple resultant roots: fall back to the certified 2D solver per
        # strip, which distinguishes real flexes from conjugate complex pairs
        w = r.gcd(r.derivative())  # its roots are exactly the multiple roots of r
        sys_fg = _System(fs, g)

        def shrink2(b, _s=sys_fg):
            return _round_box(_s.refine(b, b.width / 16))

        for iv in ivs:
            iv = refine_root(r_sf, iv, mpq(1, 2**14))
            iv, strip = _locate_strip(tt, iv, r_sf)
            if strip is None:
                continue
            yb = _y_bound(fs, iv)
            sols = solve_system(fs, g, Box(iv, RatInterval(-yb, yb)), budget)
            if not sols:
                continue  # a conjugate complex pair projecting to a real x
            multiple = w.degree > 0 and sturm_count(w, RatInterval(iv.lo, iv.hi)) > 0
            if multiple:
                degenerate = True
            active = [s for (s, _) in tt.fiber_records[strip + 1][1]]
            for s in sols:
                k = _strand_index(fsx, fsy, cols, s.box, shrink2)
                raw.append((s.box, tt.strand_oval[active[k]], not multiple, shrink2))
    total = len(raw)
    if total > klein:
        raise KleinViolation(
            f"certified {total} real inflection points on a degree-{klein} budget"
        )
    remap = _match_ovals(t, tt)
    points = _to_original_frame(raw, tt.shear, remap)
    points.sort(key=lambda p: (p.box.x.lo, p.box.y.lo, p.box.x.hi, p.box.y.hi))
    per = {o.id: 0 for o in t.ovals}
    for p in points:
        if p.oval_id is not None:
            per[p.oval_id] += 1
    return InflectionReport(total, per, degenerate, nodes, points)


def _frames(c: Curve, t: OvalTree):
    """The sweep frames to try: t's own first, then fresh ones further down
    the shear schedule."""
    seen = set()
    if t.frame_poly is not None:
        seen.add(t.shear)
        yield t
    k = 0
    while k < len(_SHEARS):
        try:
            tt = compute_topology(c, skip_shears=k)
        except CurveLabError:
            return
        k = _SHEARS.index(tt.shear) + 1
        if tt.shear in seen:
            continue
        seen.add(tt.shear)
        yield tt


def count_inflections(c: Curve, t: OvalTree, nodes: int = 0, budget: int = 400000) -> InflectionReport:
    """Certified count of real inflection points, assigned to ovals of t.

    Prefers a frame where the projection resultant is square-free (every
    point then transversal); if no scheduled shear achieves that, falls back
    to the first workable frame with multiplicity bookkeeping and sets the
    degenerate flag.  `nodes` is pass-through bookkeeping for nodal inputs
    whose node count was established separately."""
    f0 = c.f.content_free()
    d = f0.degree
    if d < 2:
        raise ConstantInput("inflection counting needs degree at least 2")
    klein = d * (d - 2)
    last = None
    fallback = None
    for tt in _frames(c, t):
        fs = tt.frame_poly
        g = hessian_curve(fs).content_free()
        if g.is_zero:
            raise CommonFactor("curvature numerator vanishes identically")
        r = resultant_eliminate(fs, g, "y")
        r_sf = r.squarefree_part()
        if r_sf.degree != r.degree:
            if fallback is None:
                fallback = (tt, fs, g, r, r_sf)
            continue
        try:
            return _count_in_frame(t, tt, fs, g, r, r_sf, klein, nodes, budget)
        except (_SweepError, NonGenericSweep, BudgetExhausted, UnresolvedCandidate) as e:
            last = e
    if fallback is not None:
        tt, fs, g, r, r_sf = fallback
        return _count_in_frame(t, tt, fs, g, r, r_sf, klein, nodes, budget)
    raise last if last is not None else NonGenericSweep(
        "no sweep frame with a usable inflection resultant"
    )
