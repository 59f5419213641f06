"""Certified solving of bivariate polynomial systems by subdivision.

Boxes are discarded by interval sign tests and accepted by the Krawczyk
existence/uniqueness operator, so every reported box provably contains
exactly one solution of {f = 0, g = 0} and the reported list is provably
complete within the search box.  Only simple (nonsingular Jacobian)
solutions can be certified; clusters that never separate exhaust the budget
and raise instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .bivar import BivarPoly
from .errors import BudgetExhausted
from .interval import Box, RatInterval
from .qmath import dyadic_ceil, dyadic_floor


def _round_box(box: Box, extra_bits: int = 8) -> Box:
    """Round endpoints outward to dyadics a bit finer than the box width.

    Exact Krawczyk iteration squares denominator sizes at every step; the
    slight outward padding costs a fraction of the width and keeps every
    subsequent evaluation on small numbers."""
    w = box.width
    if w <= 0:
        k = 64
    else:
        k = max(4, (w.denominator.bit_length() - w.numerator.bit_length()) + extra_bits)
    return Box(
        RatInterval(dyadic_floor(box.x.lo, k), dyadic_ceil(box.x.hi, k)),
        RatInterval(dyadic_floor(box.y.lo, k), dyadic_ceil(box.y.hi, k)),
    )


@dataclass
class SystemSolution:
    """A certified enclosure of one simple solution."""

    box: Box

    def to_json(self):
        return {"box": self.box.to_json()}


class _System:
    def __init__(self, f: BivarPoly, g: BivarPoly):
        self.f = f
        self.g = g
        self.fx = f.derivative("x")
        self.fy = f.derivative("y")
        self.gx = g.derivative("x")
        self.gy = g.derivative("y")

    def excludes(self, box: Box) -> bool:
        if self.f.mean_value_eval(box, self.fx, self.fy).sign() != 0:
            return True
        return self.g.mean_value_eval(box, self.gx, self.gy).sign() != 0

    def krawczyk(self, box: Box):
        """Returns 'unique' / 'empty' / 'unknown', plus the contracted box
        when the operator certifies a unique solution."""
        mx, my = box.mid
        fm = self.f(mx, my)
        gm = self.g(mx, my)
        # rational inverse of the midpoint Jacobian
        a = self.fx(mx, my)
        b = self.fy(mx, my)
        c = self.gx(mx, my)
        d = self.gy(mx, my)
        det = a * d - b * c
        if det == 0:
            return "unknown", None
        y11, y12 = d / det, -b / det
        y21, y22 = -c / det, a / det
        # interval Jacobian over the box
        jfx = self.fx.interval_eval(box)
        jfy = self.fy.interval_eval(box)
        jgx = self.gx.interval_eval(box)
        jgy = self.gy.interval_eval(box)
        # R = I - Y * J(box)
        r11 = 1 - (jfx * y11 + jgx * y12)
        r12 = -(jfy * y11 + jgy * y12)
        r21 = -(jfx * y21 + jgx * y22)
        r22 = 1 - (jfy * y21 + jgy * y22)
        dx = RatInterval(box.x.lo - mx, box.x.hi - mx)
        dy = RatInterval(box.y.lo - my, box.y.hi - my)
        kx = (r11 * dx + r12 * dy) + (mx - (y11 * fm + y12 * gm))
        ky = (r21 * dx + r22 * dy) + (my - (y21 * fm + y22 * gm))
        if kx.hi < box.x.lo or kx.lo > box.x.hi or ky.hi < box.y.lo or ky.lo > box.y.hi:
            return "empty", None
        if box.x.lo < kx.lo and kx.hi < box.x.hi and box.y.lo < ky.lo and ky.hi < box.y.hi:
            contracted = Box(kx.intersect(box.x), ky.intersect(box.y))
            return "unique", contracted
        return "unknown", None

    def newton_point(self, box: Box):
        """m - Y F(m), the Newton step from the box midpoint."""
        mx, my = box.mid
        a = self.fx(mx, my)
        b = self.fy(mx, my)
        c = self.gx(mx, my)
        d = self.gy(mx, my)
        det = a * d - b * c
        if det == 0:
            return mx, my
        fm = self.f(mx, my)
        gm = self.g(mx, my)
        return mx - (d * fm - b * gm) / det, my - (a * gm - c * fm) / det

    def refine(self, box: Box, width) -> Box:
        """Shrink a certified box until narrower than `width` (or until the
        contraction stalls).  Recentering candidate boxes on the Newton point
        keeps the contraction going when the solution sits on a box edge."""
        width = mpq(width)
        for _ in range(300):
            if box.width <= width:
                break
            px, py = self.newton_point(box)
            h = box.width / 4
            cand = Box(RatInterval(px - h, px + h), RatInterval(py - h, py + h))
            status, nxt = self.krawczyk(cand)
            if status == "unique" and _inside(cand, _inflate(box)):
                box = _round_box(nxt)
                continue
            status, nxt = self.krawczyk(box)
            if status == "unique" and nxt.width < box.width:
                box = _round_box(nxt)
            else:
                break
        return box


def solve_system(f: BivarPoly, g: BivarPoly, region: Box, budget: int = 200000):
    """All solutions of {f = 0, g = 0} in the region, as certified boxes.

    Raises BudgetExhausted when subdivision cannot settle every box within
    the given number of box inspections (typically a singular or
    near-singular solution).
    """
    sys_ = _System(f, g)
    queue = [region]
    found = []
    spent = 0
    while queue:
        box = queue.pop()
        spent += 1
        if spent > budget:
            raise BudgetExhausted(
                f"system solving spent {spent} boxes without resolving; "
                f"{len(queue)} boxes pending"
            )
        if sys_.excludes(box):
            continue
        status, contracted = sys_.krawczyk(box)
        if status == "empty":
            continue
        if status == "unique":
            found.append(_round_box(contracted))
            continue
        # solutions sitting exactly on subdivision lines never end up interior
        # to a box; certifying on an inflated box retires them (uniqueness on
        # a superset covers the original box, so dropping it loses nothing)
        status, contracted = sys_.krawczyk(_inflate(box))
        if status == "unique":
            found.append(_round_box(contracted))
            continue
        queue.extend(_split(box))
    return _dedupe(sys_, found)


def _split(box: Box):
    """Halve the dominant axis; quarter only roughly square boxes.  Keeps
    extreme aspect ratios (thin sweep strips) from exploding the box count."""
    wx, wy = box.x.width, box.y.width
    if wx > 2 * wy:
        xm = box.x.mid
        return [
            Box(RatInterval(box.x.lo, xm), box.y),
            Box(RatInterval(xm, box.x.hi), box.y),
        ]
    if wy > 2 * wx:
        ym = box.y.mid
        return [
            Box(box.x, RatInterval(box.y.lo, ym)),
            Box(box.x, RatInterval(ym, box.y.hi)),
        ]
    return box.split()


def _inside(inner: Box, outer: Box) -> bool:
    return outer.contains_box(inner)


def _inflate(box: Box, factor=mpq(1, 2)) -> Box:
    # pad both axes by a fraction of the larger width, so a degenerate axis
    # (exactly pinned by the contraction) gets genuine thickness back
    e = box.width * factor
    return Box(
        RatInterval(box.x.lo - e, box.x.hi + e),
        RatInterval(box.y.lo - e, box.y.hi + e),
    )


def _dedupe(sys_: _System, boxes):
    """Merge certified boxes that enclose the same solution.

    Two enclosures describe one solution exactly when Krawczyk certifies
    uniqueness on their hull; overlap alone is not trusted.
    """
    boxes = [sys_.refine(b, mpq(1, 2**20)) for b in boxes]
    out: list[Box] = []
    for b in boxes:
        merged = False
        for i, other in enumerate(out):
            if not b.overlaps(other):
                continue
            hull = Box(b.x.hull(other.x), b.y.hull(other.y))
            status, contracted = sys_.krawczyk(_inflate(hull, mpq(1, 8)))
            if status == "unique":
                out[i] = contracted
                merged = True
                break
        if not merged:
            out.append(b)
    return [SystemSolution(b) for b in out]


def count_solutions(f: BivarPoly, g: BivarPoly, region: Box, budget: int = 200000) -> int:
    return len(solve_system(f, g, region, budget))
