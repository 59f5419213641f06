"""Exact rational intervals and axis-aligned boxes.

Used both as isolating intervals (root certificates) and as interval
arithmetic carriers for subdivision-based exclusion tests.  Endpoints are
exact rationals, so inclusion is genuine, not outward-rounded.
"""

from __future__ import annotations

from gmpy2 import mpq

from .qmath import Q, q_str


class RatInterval:
    """Closed interval [lo, hi] with exact rational endpoints.

    When used as an isolating interval the semantics are open (the root is
    strictly inside and the endpoints are non-roots); for interval arithmetic
    the closed reading applies.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo = mpq(lo)
        hi = mpq(hi)
        if lo > hi:
            raise ValueError(f"interval endpoints out of order: {lo} > {hi}")
        self.lo = lo
        self.hi = hi

    @classmethod
    def point(cls, x):
        return cls(x, x)

    def __repr__(self):
        return f"RatInterval({self.lo}, {self.hi})"

    def __eq__(self, other):
        if not isinstance(other, RatInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_strictly(self, x) -> bool:
        return self.lo < x < self.hi

    def overlaps(self, other: "RatInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def contains_interval(self, other: "RatInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def sign(self) -> int:
        """1 / -1 when the interval is strictly one-signed, else 0."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    # -- interval arithmetic -------------------------------------------

    def __add__(self, other):
        if isinstance(other, RatInterval):
            return RatInterval(self.lo + other.lo, self.hi + other.hi)
        return RatInterval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other if isinstance(other, RatInterval) else -mpq(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RatInterval):
            vals = (
                self.lo * other.lo,
                self.lo * other.hi,
                self.hi * other.lo,
                self.hi * other.hi,
            )
            return RatInterval(min(vals), max(vals))
        other = mpq(other)
        if other >= 0:
            return RatInterval(self.lo * other, self.hi * other)
        return RatInterval(self.hi * other, self.lo * other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k == 0:
            return RatInterval(1, 1)
        if k == 1:
            return self
        if k % 2 == 1 or self.lo >= 0:
            return RatInterval(self.lo**k, self.hi**k)
        if self.hi <= 0:
            return RatInterval(self.hi**k, self.lo**k)
        return RatInterval(0, max(self.lo**k, self.hi**k))

    def hull(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersect(self, other: "RatInterval"):
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return RatInterval(lo, hi) if lo <= hi else None

    def to_json(self):
        return [q_str(self.lo), q_str(self.hi)]


class Box:
    """Axis-aligned rectangle: a pair of intervals."""

    __slots__ = ("x", "y")

    def __init__(self, x: RatInterval, y: RatInterval):
        self.x = x
        self.y = y

    @classmethod
    def from_bounds(cls, xlo, xhi, ylo, yhi):
        return cls(RatInterval(xlo, xhi), RatInterval(ylo, yhi))

    def __repr__(self):
        return f"Box(x={self.x}, y={self.y})"

    @property
    def mid(self):
        return (self.x.mid, self.y.mid)

    @property
    def width(self):
        return max(self.x.width, self.y.width)

    def contains_point(self, px, py) -> bool:
        return self.x.contains(px) and self.y.contains(py)

    def overlaps(self, other: "Box") -> bool:
        return self.x.overlaps(other.x) and self.y.overlaps(other.y)

    def contains_box(self, other: "Box") -> bool:
        return self.x.contains_interval(other.x) and self.y.contains_interval(other.y)

    def contains_box_strictly(self, other: "Box") -> bool:
        return (
            self.x.lo < other.x.lo
            and other.x.hi < self.x.hi
            and self.y.lo < other.y.lo
            and other.y.hi < self.y.hi
        )

    def split(self):
        """Quarter the box (split the longer side first when degenerate)."""
        xm = self.x.mid
        ym = self.y.mid
        xs = [RatInterval(self.x.lo, xm), RatInterval(xm, self.x.hi)]
        ys = [RatInterval(self.y.lo, ym), RatInterval(ym, self.y.hi)]
        return [Box(xi, yi) for xi in xs for yi in ys]

    def corners(self):
        return [
            (self.x.lo, self.y.lo),
            (self.x.hi, self.y.lo),
            (self.x.hi, self.y.hi),
            (self.x.lo, self.y.hi),
        ]

    def to_json(self):
        return {"x": self.x.to_json(), "y": self.y.to_json()}
