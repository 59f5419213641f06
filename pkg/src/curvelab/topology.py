"""Certified topology of compact real affine curves.

A vertical sweep in a sheared frame where the discriminant is square-free:
then every critical fiber carries exactly one simple turning point, fiber
root counts change by 0 or +-2 across it, and the strand bookkeeping below
reconstructs the ovals exactly.  Nesting is decided by exact root counting
on vertical rays, never by floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .bivar import BivarPoly, Curve, resultant_eliminate, restrict_to_line
from .errors import (
    BudgetExhausted,
    CommonFactor,
    ConstantInput,
    EndpointRoot,
    NonCompact,
    NonGenericSweep,
    Singular,
    UnresolvedCandidate,
    ZeroPolynomial,
)
from .interval import Box, RatInterval
from .qmath import q, q_str
from .solve2d import _round_box, _System, solve_system
from .unipoly import (
    UniPoly,
    count_real_roots,
    isolate_real_roots,
    refine_root,
    root_bound,
    sturm_count,
)

# deterministic shear schedule; denominators chosen coprime so distinct
# attempts never coincide
_SHEARS = [
    mpq(0),
    mpq(1, 3),
    mpq(-1, 3),
    mpq(2, 7),
    mpq(-2, 7),
    mpq(3, 11),
    mpq(-3, 11),
    mpq(5, 13),
    mpq(-5, 13),
    mpq(7, 17),
    mpq(-7, 17),
    mpq(8, 19),
    mpq(-8, 19),
]


@dataclass
class Oval:
    id: int
    parent: int | None
    witness: tuple
    polyline: list

    def to_json(self):
        return {
            "id": self.id,
            "parent": self.parent,
            "witness": [q_str(self.witness[0]), q_str(self.witness[1])],
            "polyline": [[q_str(p[0]), q_str(p[1])] for p in self.polyline],
        }


@dataclass
class OvalTree:
    ovals: list
    shear: object = mpq(0)
    # sweep internals, in the sheared frame; consumed by the inflection
    # assignment, which must reason about strands in the same frame
    frame_poly: BivarPoly | None = None
    fiber_records: list | None = None
    crit: list | None = None
    strand_oval: dict | None = None
    disc_sf: UniPoly | None = None

    @property
    def count(self) -> int:
        return len(self.ovals)

    def depth(self, oval_id: int) -> int:
        d = 0
        o = self._by_id(oval_id)
        while o.parent is not None:
            d += 1
            o = self._by_id(o.parent)
        return d

    @property
    def max_depth(self) -> int:
        return max((self.depth(o.id) for o in self.ovals), default=0)

    def is_chain(self) -> bool:
        """True when the nesting order is total: one oval per depth level."""
        depths = sorted(self.depth(o.id) for o in self.ovals)
        return depths == list(range(len(self.ovals)))

    def innermost(self) -> Oval:
        return max(self.ovals, key=lambda o: self.depth(o.id))

    def _by_id(self, oval_id: int) -> Oval:
        for o in self.ovals:
            if o.id == oval_id:
                return o
        raise KeyError(oval_id)

    def to_json(self):
        return {"ovals": [o.to_json() for o in self.ovals], "shear": q_str(self.shear)}


@dataclass
class NonsingularCertificate:
    nonsingular: bool
    witness: Box | None = None
    reason: str | None = None

    def __bool__(self):
        return self.nonsingular

    def to_json(self):
        out = {"nonsingular": self.nonsingular}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass
class TopologyReport:
    nonsingular: bool
    oval_count: int
    max_nesting_depth: int
    hyperbolic: bool
    witness: tuple | None
    directions_checked: int
    failed_direction: tuple | None = None

    def to_json(self):
        out = {
            "nonsingular": self.nonsingular,
            "ovals": self.oval_count,
            "depth": self.max_nesting_depth,
            "hyperbolic": self.hyperbolic,
            "witness": None
            if self.witness is None
            else [q_str(self.witness[0]), q_str(self.witness[1])],
            "directions_checked": self.directions_checked,
        }
        if self.failed_direction is not None:
            out["failed_direction"] = [q_str(self.failed_direction[0]), q_str(self.failed_direction[1])]
        return out


# ---------------------------------------------------------------------------
# nonsingularity
# ---------------------------------------------------------------------------


def _univariate_nonsingular(p: UniPoly, axis: str) -> NonsingularCertificate:
    """Curve that is a union of lines parallel to an axis."""
    if p.squarefree_part().degree == p.degree:
        return NonsingularCertificate(True)
    return NonsingularCertificate(False, None, f"repeated {axis}-factor")


def _rational_candidates(x, max_den=10**9):
    """Continued-fraction convergents of x with bounded denominator, the
    usual way to recover an exact rational hiding inside an interval."""
    x = mpq(x)
    out = [x] if x.denominator <= max_den else []
    p0, q0, p1, q1 = 0, 1, 1, 0
    a = x
    for _ in range(64):
        fl = a.numerator // a.denominator
        p0, p1 = p1, fl * p1 + p0
        q0, q1 = q1, fl * q1 + q0
        if q1 > max_den:
            break
        c = mpq(p1, q1)
        if c not in out:
            out.append(c)
        frac = a - fl
        if frac == 0:
            break
        a = 1 / frac
    return out


def certify_nonsingular(c: Curve, budget: int = 400000) -> NonsingularCertificate:
    """Decide whether {f = 0, f_x = 0, f_y = 0} has a real solution.

    Negative answers are certified by sign-definite enclosures of f at every
    gradient zero; positive answers require an exact rational singular point
    (irrational singularities exhaust the refinement and raise
    UnresolvedCandidate rather than guessing).
    """
    f = c.f.content_free()
    if f.is_zero:
        raise ZeroPolynomial("zero polynomial has no curve")
    if f.degree < 1:
        raise ConstantInput("constant polynomial has empty zero set")
    fx = f.derivative("x")
    fy = f.derivative("y")
    if f.degree_in("y") == 0:
        return _univariate_nonsingular(_as_uni(f, "x"), "x")
    if f.degree_in("x") == 0:
        return _univariate_nonsingular(_as_uni(f, "y"), "y")
    # square-freeness via both discriminant projections
    try:
        ry = resultant_eliminate(f, fy, "y")
    except CommonFactor:
        return NonsingularCertificate(False, None, "non-square-free")
    try:
        rx = resultant_eliminate(f, fx, "x")
    except CommonFactor:
        return NonsingularCertificate(False, None, "non-square-free")
    # bounding box for gradient zeros
    try:
        px = _axis_poly(fx, fy, "x")
        py = _axis_poly(fx, fy, "y")
    except CommonFactor:
        raise UnresolvedCandidate("gradient components share a factor; singular locus may be positive-dimensional")
    if px.degree == 0 or py.degree == 0:
        return NonsingularCertificate(True)  # gradient never vanishes
    bx = root_bound(px)
    by = root_bound(py)
    region = Box.from_bounds(-bx - 1, bx + 1, -by - 1, by + 1)
    sols = solve_system(fx, fy, region, budget)
    sys_ = _System(fx, fy)
    for s in sols:
        box = s.box
        for _ in range(80):
            val = f.mean_value_eval(box, fx, fy)
            if val.sign() != 0:
                break
            for cx in _rational_candidates(box.x.mid):
                if not box.x.contains(cx):
                    continue
                for cy in _rational_candidates(box.y.mid):
                    if not box.y.contains(cy):
                        continue
                    if f(cx, cy) == 0 and fx(cx, cy) == 0 and fy(cx, cy) == 0:
                        w = Box.from_bounds(cx - mpq(1, 1024), cx + mpq(1, 1024),
                                            cy - mpq(1, 1024), cy + mpq(1, 1024))
                        return NonsingularCertificate(False, w, "singular point found")
            box = sys_.refine(box, box.width / 16)
        else:
            raise UnresolvedCandidate(
                "cannot decide sign of f at a gradient zero; possible irrational singular point"
            )
    return NonsingularCertificate(True)


def _axis_poly(fx: BivarPoly, fy: BivarPoly, var: str) -> UniPoly:
    """A univariate polynomial in `var` vanishing on every gradient zero."""
    other = "y" if var == "x" else "x"
    for g in (fx, fy):
        if g.degree_in(other) == 0:
            return _as_uni(g, var)
    return resultant_eliminate(fx, fy, other)


def _as_uni(f: BivarPoly, var: str) -> UniPoly:
    cs = f.as_unipoly_in(var)
    return UniPoly([c.coeffs[0] if c.degree >= 0 else mpq(0) for c in cs])


# ---------------------------------------------------------------------------
# compactness
# ---------------------------------------------------------------------------


def is_compact(f: BivarPoly) -> bool:
    """True when the leading form is definite, so the affine curve is bounded."""
    lead = f.leading_form()
    cy = lead.monomials.get((0, f.degree), mpq(0))
    if cy == 0 or f.degree % 2 == 1:
        return False
    slice_ = UniPoly(
        [lead.monomials.get((f.degree - j, j), mpq(0)) for j in range(f.degree + 1)]
    )
    return count_real_roots(slice_) == 0


# ---------------------------------------------------------------------------
# the sweep
# ---------------------------------------------------------------------------


def _fiber(f_cols, x0) -> UniPoly:
    """f(x0, y) from the coefficient list of f in y."""
    return UniPoly([c(x0) for c in f_cols])


def _y_bound(f: BivarPoly, x_range: RatInterval):
    """Cauchy bound on fiber roots, uniform over the x-range."""
    cols = f.as_unipoly_in("y")
    lead = cols[-1].coeffs[0]  # constant by compactness
    m = mpq(0)
    for c in cols[:-1]:
        iv = UniPoly(c.coeffs)  # interval image of the coefficient
        img = _uni_interval(iv, x_range)
        m = max(m, max(abs(img.lo), abs(img.hi)))
    return 1 + m / abs(lead)


def _uni_interval(p: UniPoly, iv: RatInterval) -> RatInterval:
    acc = RatInterval(0, 0)
    pw = RatInterval(1, 1)
    for c in p.coeffs:
        acc = acc + pw * c
        pw = pw * iv
    return acc


def _disjoint_refine(p: UniPoly, intervals):
    """Refine isolating intervals until they are pairwise separated."""
    ivs = list(intervals)
    for _ in range(200):
        ok = all(ivs[i].hi < ivs[i + 1].lo for i in range(len(ivs) - 1))
        if ok:
            return ivs
        ivs = [refine_root(p, iv, iv.width / 4) for iv in ivs]
    raise UnresolvedCandidate("isolating intervals failed to separate")


class _SweepError(Exception):
    """Internal: restart the sweep with a different sample point."""


def _event_pair_position(sys_, cols, f, ev, newborn: bool) -> int:
    """Index (bottom to top) of the lower of the two strands meeting a
    turning point.

    Certified by a box T around the event that the curve's boundary crossing
    pattern pins down: no crossings on the top/bottom edges or on the vertical
    edge away from the fold, exactly two on the vertical edge the fold opens
    toward (all by exact Sturm counts).  Since T contains exactly one vertical
    tangent, any curve component inside T must fold, so those two crossings
    are the fold's arms; counting fiber roots below T on that edge gives the
    pair's position in the strand order."""
    for _ in range(24):
        exl, exr = ev.x.lo, ev.x.hi
        xw = ev.x.width
        cy = ev.y.mid
        h = ev.y.width / 2 + xw
        for _ in range(64):
            w_lo, w_hi = cy - h, cy + h
            try:
                top = restrict_to_line(f, (exl, w_hi), (1, 0))
                bot = restrict_to_line(f, (exl, w_lo), (1, 0))
                span = RatInterval(0, xw)
                crossings = sturm_count(top, span) + sturm_count(bot, span)
                window = RatInterval(w_lo, w_hi)
                p_l = _fiber(cols, exl)
                p_r = _fiber(cols, exr)
                n_l = sturm_count(p_l, window)
                n_r = sturm_count(p_r, window)
            except EndpointRoot:
                h = h * mpq(19, 16)  # nudge the box edges off the curve
                continue
            want_l, want_r = (0, 2) if newborn else (2, 0)
            if crossings == 0 and (n_l, n_r) == (want_l, want_r):
                p = p_r if newborn else p_l
                b = root_bound(p)
                return sturm_count(p, RatInterval(-b - 1, w_lo))
            if n_l <= want_l and n_r <= want_r:
                # the fold arms escape through the top or bottom: a fold's
                # vertical extent scales like the square root of its width,
                # so the box must be grown much taller than it is wide
                h = h * 2
                continue
            break  # extra strands inside: shrink the event box
        ev = _round_box(sys_.refine(ev, ev.width / 2**6))
    raise _SweepError("could not certify the strand pair at a turning point")


def _sweep(f: BivarPoly, disc: UniPoly):
    """Run the certified sweep; f integer-coefficient, disc square-free."""
    fy = f.derivative("y")
    cols = f.as_unipoly_in("y")
    crit = _disjoint_refine(disc, isolate_real_roots(disc))
    if not crit:
        raise NonCompact("no critical values: curve has no bounded real branch")
    # sample x-values: one left of everything, one in each gap, one at the right
    samples = [crit[0].lo - 1]
    for i in range(len(crit) - 1):
        samples.append((crit[i].hi + crit[i + 1].lo) / 2)
    samples.append(crit[-1].hi + 1)

    # critical points per strip; per-strip fiber bounds keep the strips squat
    events = []
    for iv in crit:
        yb_strip = _y_bound(f, iv)
        strip = Box(RatInterval(iv.lo, iv.hi), RatInterval(-yb_strip, yb_strip))
        sols = solve_system(f, fy, strip)
        if len(sols) > 1:
            raise NonGenericSweep("multiple turning points over one critical value")
        events.append(sols[0].box if sols else None)

    sys_ = _System(f, fy)
    next_id = 0
    active = []  # strand ids, bottom to top
    parent_uf = {}

    def find(a):
        while parent_uf[a] != a:
            parent_uf[a] = parent_uf[parent_uf[a]]
            a = parent_uf[a]
        return a

    def union(a, b):
        parent_uf[find(a)] = find(b)

    fiber_records = []  # per sample: (x, [(strand, RatInterval)])
    strand_events = {}  # strand -> [left event idx, right event idx]

    fiber_p = _fiber(cols, samples[0])
    roots = _disjoint_refine(fiber_p, isolate_real_roots(fiber_p)) if fiber_p.degree > 0 else []
    if roots:
        raise NonCompact("curve extends past the leftmost critical value")
    fiber_records.append((samples[0], []))

    for k, iv in enumerate(crit):
        x_next = samples[k + 1]
        fiber_p = _fiber(cols, x_next)
        roots = _disjoint_refine(fiber_p, isolate_real_roots(fiber_p))
        ev = events[k]
        n_left = len(active)
        n_right = len(roots)
        if ev is None:
            if n_right != n_left:
                raise NonGenericSweep("fiber count changed without a real turning point")
        else:
            if n_right == n_left + 2:
                m = _event_pair_position(sys_, cols, f, ev, newborn=True)
                s1, s2 = next_id, next_id + 1
                next_id += 2
                parent_uf[s1] = s1
                parent_uf[s2] = s2
                union(s1, s2)
                active[m:m] = [s1, s2]
                strand_events[s1] = [k, None]
                strand_events[s2] = [k, None]
            elif n_right == n_left - 2:
                m = _event_pair_position(sys_, cols, f, ev, newborn=False)
                if m + 1 >= len(active):
                    raise NonGenericSweep("death event does not match fiber ordering")
                s1, s2 = active[m], active[m + 1]
                union(s1, s2)
                strand_events[s1][1] = k
                strand_events[s2][1] = k
                del active[m : m + 2]
            else:
                raise NonGenericSweep("turning point with unexpected fiber count change")
        if len(active) != n_right:
            raise NonGenericSweep("strand bookkeeping out of sync")
        fiber_records.append((x_next, list(zip(active, roots))))

    if active:
        raise NonCompact("curve extends past the rightmost critical value")
    return fiber_records, strand_events, events, parent_uf, find, crit


def _pick_witness(fiber_records, strand_find, oval_root):
    """Interior witness: a point just above the oval's lowest strand on the
    first sample fiber where the oval is alive."""
    for x0, pairs in fiber_records:
        mine = [i for i, (s, _) in enumerate(pairs) if strand_find(s) == oval_root]
        if len(mine) >= 2:
            i = mine[0]
            lo = pairs[i][1].hi
            hi = pairs[i + 1][1].lo
            return (x0, (lo + hi) / 2), x0, pairs
    raise UnresolvedCandidate("oval never alive on a sample fiber")


def compute_topology(c: Curve, max_attempts: int = len(_SHEARS), skip_shears: int = 0) -> OvalTree:
    """Ovals and their nesting forest, via the certified sweep.

    Retries deterministic rational shears until the discriminant is
    square-free; NonGenericSweep after the schedule is exhausted.
    `skip_shears` starts further down the schedule, for callers that need a
    frame satisfying extra genericity conditions of their own.
    """
    f0 = c.f.content_free()
    if f0.is_zero:
        raise ZeroPolynomial("zero polynomial has no curve")
    if f0.degree < 1:
        raise ConstantInput("constant polynomial has empty zero set")
    if not is_compact(f0):
        raise NonCompact("leading form is not definite; affine curve unbounded")
    last = None
    for shear in _SHEARS[skip_shears:max_attempts]:
        fs = f0.shear_x(shear).content_free()
        fy = fs.derivative("y")
        try:
            disc = resultant_eliminate(fs, fy, "y")
        except CommonFactor:
            raise Singular("curve is non-square-free")
        # complex intersections of factors make disc non-square-free for
        # every shear, so only the real root structure is vetted, during the
        # sweep itself (event mismatches and uncertifiable turning points)
        disc_sf = disc.squarefree_part()
        try:
            fib, sev, events, uf, find, crit = _sweep(fs, disc_sf)
        except (_SweepError, NonGenericSweep, BudgetExhausted) as e:
            last = e
            continue
        return _assemble(fs, fib, sev, events, find, shear, crit, disc_sf)
    raise last if last is not None else NonGenericSweep("no generic shear found")


def _assemble(f, fiber_records, strand_events, events, find, shear, crit, disc_sf) -> OvalTree:
    cols = f.as_unipoly_in("y")
    roots_of = {}
    for s in strand_events:
        roots_of.setdefault(find(s), []).append(s)
    ovals = []
    witness_data = {}
    strand_oval = {}
    for oid, (root, strands) in enumerate(sorted(roots_of.items())):
        w, x0, pairs = _pick_witness(fiber_records, find, root)
        poly = _polyline(root, strands, strand_events, fiber_records, events, find)
        ovals.append(Oval(oid, None, w, poly))
        witness_data[oid] = (root, w)
        for s in strands:
            strand_oval[s] = oid
    # nesting by exact vertical ray casting at each witness
    tree = OvalTree(ovals, shear, f, fiber_records, crit, strand_oval, disc_sf)
    fiber_cache = {x: pairs for (x, pairs) in fiber_records}
    for o in ovals:
        wx, wy = o.witness
        pairs = fiber_cache[wx]
        anc = []
        for other in ovals:
            if other.id == o.id:
                continue
            other_root = witness_data[other.id][0]
            below = sum(
                1
                for (s, iv) in pairs
                if find(s) == other_root and iv.hi < wy
            )
            crosses = sum(1 for (s, iv) in pairs if find(s) == other_root)
            if crosses and below % 2 == 1:
                anc.append(other.id)
        if anc:
            # parent = deepest ancestor
            o.parent = max(anc, key=lambda a: len(_ancestors(a, ovals, witness_data, fiber_cache, find)))
    # witnesses and polylines back to the original frame: x = x' + shear*y'
    if shear != 0:
        for o in ovals:
            o.witness = (o.witness[0] + shear * o.witness[1], o.witness[1])
            o.polyline = [(px + shear * py, py) for (px, py) in o.polyline]
    return tree


def _ancestors(oid, ovals, witness_data, fiber_cache, find):
    o = next(v for v in ovals if v.id == oid)
    wx, wy = o.witness
    pairs = fiber_cache.get(wx, [])
    out = []
    for other in ovals:
        if other.id == oid:
            continue
        other_root = witness_data[other.id][0]
        below = sum(1 for (s, iv) in pairs if find(s) == other_root and iv.hi < wy)
        if below % 2 == 1:
            out.append(other.id)
    return out


def _polyline(root, strands, strand_events, fiber_records, events, find):
    """Walk the strand/event cycle of one oval into a closed polyline."""
    pts_of = {s: [] for s in strands}
    for x0, pairs in fiber_records:
        for s, iv in pairs:
            if s in pts_of:
                pts_of[s].append((x0, iv.mid))
    ev_pt = {}
    for k, ev in enumerate(events):
        if ev is not None:
            ev_pt[k] = (ev.x.mid, ev.y.mid)
    # each event touches exactly two strands of the oval on the same side
    ev_strands = {}
    for s in strands:
        le, re = strand_events[s]
        ev_strands.setdefault(le, []).append(s)
        ev_strands.setdefault(re, []).append(s)
    start = strands[0]
    poly = []
    s, forward = start, True
    seen = set()
    while True:
        seen.add(s)
        pts = pts_of[s] if forward else list(reversed(pts_of[s]))
        poly.extend(pts)
        ev = strand_events[s][1] if forward else strand_events[s][0]
        poly.append(ev_pt[ev])
        a, b = ev_strands[ev]
        s_next = b if a == s else a
        if s_next == start:
            break
        # the partner strand meets this event on the same side, so the
        # traversal direction flips relative to that side
        forward = strand_events[s_next][0] == ev
        s = s_next
        if len(seen) > len(strands):
            raise UnresolvedCandidate("polyline traversal did not close")
    return poly


# ---------------------------------------------------------------------------
# hyperbolicity
# ---------------------------------------------------------------------------


def certify_hyperbolic(c: Curve, t: OvalTree, n_dirs: int = 360) -> TopologyReport:
    """Structural certificate (nesting chain of length degree/2) plus
    redundant direction sampling from the innermost witness."""
    f = c.f.content_free()
    d = f.degree
    structural = t.count == d // 2 and d % 2 == 0 and t.is_chain() and t.count > 0
    witness = t.innermost().witness if t.count else None
    hyperbolic = structural
    failed = None
    checked = 0
    if structural:
        for k in range(n_dirs):
            u = mpq(2 * (k + 1), n_dirs + 1) - 1
            direction = (1 - u * u, 2 * u)
            p = restrict_to_line(f, witness, direction)
            checked += 1
            if count_real_roots(p) != d:
                hyperbolic = False
                failed = direction
                break
    return TopologyReport(
        nonsingular=True,
        oval_count=t.count,
        max_nesting_depth=t.max_depth,
        hyperbolic=hyperbolic,
        witness=witness,
        directions_checked=checked,
        failed_direction=failed,
    )
