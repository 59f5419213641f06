"""Sparse exact bivariate polynomials and derived curves.

Provides the curvature-numerator (Hessian) curve, restriction to rational
lines, affine substitutions, interval evaluation on boxes, and Sylvester
resultants with two independent computation paths (fraction-free Bareiss over
the polynomial ring, and evaluation/interpolation).
"""

from __future__ import annotations

from gmpy2 import mpq

from .errors import (
    CommonFactor,
    ConstantInput,
    DegreeZeroInVar,
    ZeroDirection,
    ZeroPolynomial,
)
from .interval import Box, RatInterval
from .qmath import Q, q, q_str
from .unipoly import UniPoly


class BivarPoly:
    """Polynomial in x, y with exact rational coefficients, sparse."""

    __slots__ = ("monomials",)

    def __init__(self, monomials=None):
        ms = {}
        if monomials:
            for key, c in dict(monomials).items():
                c = mpq(c)
                if c != 0:
                    i, j = key
                    ms[(int(i), int(j))] = c
        self.monomials = ms

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def x(cls):
        return cls({(1, 0): 1})

    @classmethod
    def y(cls):
        return cls({(0, 1): 1})

    @classmethod
    def line(cls, a, b, c):
        """a*x + b*y + c"""
        return cls({(1, 0): a, (0, 1): b, (0, 0): c})

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.monomials:
            return -1
        return max(i + j for i, j in self.monomials)

    def degree_in(self, var: str) -> int:
        if not self.monomials:
            return -1
        k = 0 if var == "x" else 1
        return max(key[k] for key in self.monomials)

    def __eq__(self, other):
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.monomials == other.monomials

    def __hash__(self):
        return hash(frozenset(self.monomials.items()))

    def __repr__(self):
        if self.is_zero:
            return "BivarPoly(0)"
        parts = [f"{c}*x^{i}*y^{j}" for (i, j), c in sorted(self.monomials.items())]
        return "BivarPoly(" + " + ".join(parts) + ")"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, BivarPoly):
            other = BivarPoly.constant(q(other))
        out = dict(self.monomials)
        for key, c in other.monomials.items():
            s = out.get(key, mpq(0)) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        r = BivarPoly.__new__(BivarPoly)
        r.monomials = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = BivarPoly.__new__(BivarPoly)
        r.monomials = {k: -c for k, c in self.monomials.items()}
        return r

    def __sub__(self, other):
        if not isinstance(other, BivarPoly):
            other = BivarPoly.constant(q(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BivarPoly):
            c = mpq(other)
            if c == 0:
                return BivarPoly.zero()
            r = BivarPoly.__new__(BivarPoly)
            r.monomials = {k: v * c for k, v in self.monomials.items()}
            return r
        out = {}
        for (i1, j1), c1 in self.monomials.items():
            for (i2, j2), c2 in other.monomials.items():
                key = (i1 + i2, j1 + j2)
                s = out.get(key, mpq(0)) + c1 * c2
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        r = BivarPoly.__new__(BivarPoly)
        r.monomials = out
        return r

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = BivarPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self, var: str) -> "BivarPoly":
        out = {}
        if var == "x":
            for (i, j), c in self.monomials.items():
                if i:
                    out[(i - 1, j)] = c * i
        elif var == "y":
            for (i, j), c in self.monomials.items():
                if j:
                    out[(i, j - 1)] = c * j
        else:
            raise ValueError(f"unknown variable {var!r}")
        return BivarPoly(out)

    # -- evaluation ----------------------------------------------------------

    def __call__(self, px, py):
        px, py = mpq(px), mpq(py)
        if not self.monomials:
            return mpq(0)
        nx = self.degree_in("x")
        ny = self.degree_in("y")
        xs = _powers(px, nx)
        ys = _powers(py, ny)
        acc = mpq(0)
        for (i, j), c in self.monomials.items():
            acc += c * xs[i] * ys[j]
        return acc

    def interval_eval(self, box: Box) -> RatInterval:
        """Plain interval-arithmetic enclosure of f over the box."""
        if not self.monomials:
            return RatInterval(0, 0)
        xs = _ipowers(box.x, self.degree_in("x"))
        ys = _ipowers(box.y, self.degree_in("y"))
        acc = RatInterval(0, 0)
        for (i, j), c in self.monomials.items():
            acc = acc + xs[i] * ys[j] * c
        return acc

    def mean_value_eval(self, box: Box, fx: "BivarPoly", fy: "BivarPoly") -> RatInterval:
        """Centered-form enclosure f(m) + fx(B)(X-mx) + fy(B)(Y-my); much
        tighter than plain interval evaluation near the zero set."""
        mx, my = box.mid
        center = self(mx, my)
        dx = RatInterval(box.x.lo - mx, box.x.hi - mx)
        dy = RatInterval(box.y.lo - my, box.y.hi - my)
        enc = fx.interval_eval(box) * dx + fy.interval_eval(box) * dy + center
        plain = self.interval_eval(box)
        out = enc.intersect(plain)
        return out if out is not None else enc

    # -- substitutions --------------------------------------------------------

    def subs_affine(self, xx, xy, xc, yx, yy, yc) -> "BivarPoly":
        """f(xx*x + xy*y + xc, yx*x + yy*y + yc), all coefficients rational."""
        lx = BivarPoly({(1, 0): xx, (0, 1): xy, (0, 0): xc})
        ly = BivarPoly({(1, 0): yx, (0, 1): yy, (0, 0): yc})
        nx = self.degree_in("x")
        ny = self.degree_in("y")
        px = _poly_powers(lx, nx)
        py = _poly_powers(ly, ny)
        acc = BivarPoly.zero()
        for (i, j), c in self.monomials.items():
            acc = acc + px[i] * py[j] * c
        return acc

    def shear_x(self, s) -> "BivarPoly":
        """f(x + s*y, y): the standard genericity shear."""
        return self.subs_affine(1, q(s), 0, 0, 1, 0)

    # -- conversions -----------------------------------------------------------

    def as_unipoly_in(self, var: str) -> list[UniPoly]:
        """Coefficient list in `var` (degree 0 upward); entries are
        polynomials in the other variable."""
        d = self.degree_in(var)
        if d < 0:
            return []
        buckets: list[dict] = [dict() for _ in range(d + 1)]
        if var == "y":
            for (i, j), c in self.monomials.items():
                buckets[j][i] = c
        else:
            for (i, j), c in self.monomials.items():
                buckets[i][j] = c
        out = []
        for b in buckets:
            n = max(b) if b else -1
            out.append(UniPoly([b.get(k, 0) for k in range(n + 1)]))
        return out

    @classmethod
    def from_unipoly_in(cls, coeffs: list[UniPoly], var: str) -> "BivarPoly":
        out = {}
        for k, p in enumerate(coeffs):
            for e, c in enumerate(p.coeffs):
                if c != 0:
                    key = (e, k) if var == "y" else (k, e)
                    out[key] = c
        return cls(out)

    def leading_form(self) -> "BivarPoly":
        d = self.degree
        return BivarPoly({k: c for k, c in self.monomials.items() if k[0] + k[1] == d})

    def content_free(self) -> "BivarPoly":
        """Scale so coefficients are coprime integers, leading sign kept."""
        if self.is_zero:
            return self
        from math import gcd, lcm

        den = 1
        for c in self.monomials.values():
            den = lcm(den, int(c.denominator))
        g = 0
        for c in self.monomials.values():
            g = gcd(g, abs(int(c * den)))
        scale = mpq(den, g)
        return self * scale

    def to_json_monomials(self):
        return [[i, j, q_str(c)] for (i, j), c in sorted(self.monomials.items())]

    @classmethod
    def from_json_monomials(cls, data):
        return cls({(int(i), int(j)): q(c) for i, j, c in data})


def _powers(v, n):
    out = [mpq(1)]
    for _ in range(n):
        out.append(out[-1] * v)
    return out


def _ipowers(iv: RatInterval, n: int):
    out = [RatInterval(1, 1)]
    if n >= 1:
        out.append(iv)
    for k in range(2, n + 1):
        out.append(iv**k)
    return out


def _poly_powers(p: BivarPoly, n: int):
    out = [BivarPoly.constant(1)]
    for _ in range(n):
        out.append(out[-1] * p)
    return out


class Curve:
    """A plane curve f = 0 with a display label."""

    __slots__ = ("f", "degree", "label")

    def __init__(self, f: BivarPoly, label: str = ""):
        if f.is_zero:
            raise ZeroPolynomial("a curve needs a nonzero polynomial")
        self.f = f
        self.degree = f.degree
        self.label = label

    def __repr__(self):
        return f"Curve({self.label or self.f!r}, degree={self.degree})"

    def to_json(self):
        return {
            "label": self.label,
            "degree": self.degree,
            "monomials": self.f.to_json_monomials(),
        }

    @classmethod
    def from_json(cls, data) -> "Curve":
        f = BivarPoly.from_json_monomials(data["monomials"])
        c = cls(f, data.get("label", ""))
        if "degree" in data and int(data["degree"]) != c.degree:
            raise ValueError("declared degree does not match monomials")
        return c


def hessian_curve(f: BivarPoly) -> BivarPoly:
    """Curvature numerator G = fxx*fy^2 - 2*fxy*fx*fy + fyy*fx^2.

    Real nonsingular points of f = 0 with tangent contact order >= 3 are
    exactly the points of {f = 0, G = 0}; deg G <= 3*deg f - 4.
    """
    if f.degree < 1:
        raise ConstantInput("hessian of a constant polynomial")
    fx = f.derivative("x")
    fy = f.derivative("y")
    fxx = fx.derivative("x")
    fxy = fx.derivative("y")
    fyy = fy.derivative("y")
    return fxx * fy * fy - 2 * fxy * fx * fy + fyy * fx * fx


def restrict_to_line(f: BivarPoly, base, direction) -> UniPoly:
    """t -> f(base + t*direction) as an exact univariate polynomial."""
    bx, by = (q(base[0]), q(base[1]))
    dx, dy = (q(direction[0]), q(direction[1]))
    if dx == 0 and dy == 0:
        raise ZeroDirection("line direction must be nonzero")
    lx = UniPoly([bx, dx])
    ly = UniPoly([by, dy])
    nx = f.degree_in("x")
    ny = f.degree_in("y")
    px = _uni_powers(lx, nx)
    py = _uni_powers(ly, ny)
    acc = UniPoly.zero()
    for (i, j), c in f.monomials.items():
        acc = acc + px[i] * py[j] * c
    return acc


def _uni_powers(p: UniPoly, n: int):
    out = [UniPoly.one()]
    for _ in range(n):
        out.append(out[-1] * p)
    return out


# ---------------------------------------------------------------------------
# Resultants
# ---------------------------------------------------------------------------


def sylvester_matrix(fc: list[UniPoly], gc: list[UniPoly]):
    """Sylvester matrix for coefficient lists (degree 0 upward) in the
    eliminated variable; entries are polynomials in the kept variable."""
    m = len(fc) - 1
    n = len(gc) - 1
    size = m + n
    zero = UniPoly.zero()
    rows = []
    for r in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(fc)):
            row[r + k] = c
        rows.append(row)
    for r in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(gc)):
            row[r + k] = c
        rows.append(row)
    return rows


def _bareiss_poly_det(mat) -> UniPoly:
    """Fraction-free Bareiss determinant over the polynomial ring."""
    n = len(mat)
    if n == 0:
        return UniPoly.one()
    m = [row[:] for row in mat]
    sign_flips = 1
    prev = UniPoly.one()
    for k in range(n - 1):
        if m[k][k].is_zero:
            pivot_row = next((r for r in range(k + 1, n) if not m[r][k].is_zero), None)
            if pivot_row is None:
                return UniPoly.zero()
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign_flips = -sign_flips
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev)
            m[i][k] = UniPoly.zero()
        prev = m[k][k]
    return m[n - 1][n - 1] * mpq(sign_flips)


def _bareiss_int_det(mat) -> int:
    """Bareiss determinant of an integer matrix."""
    n = len(mat)
    if n == 0:
        return 1
    m = [row[:] for row in mat]
    det_sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot_row = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if pivot_row is None:
                return 0
            m[k], m[pivot_row] = m[pivot_row], m[k]
            det_sign = -det_sign
        for i in range(k + 1, n):
            mik = m[i][k]
            mkk = m[k][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * mkk - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = m[k][k]
    return det_sign * m[n - 1][n - 1]


def _det_rational(mat) -> Q:
    """Determinant of a rational matrix via row scaling + integer Bareiss."""
    from math import lcm

    n = len(mat)
    scale = mpq(1)
    int_rows = []
    for row in mat:
        d = 1
        for v in row:
            d = lcm(d, int(mpq(v).denominator))
        scale *= d
        int_rows.append([int(mpq(v) * d) for v in row])
    return mpq(_bareiss_int_det(int_rows)) / scale


def resultant_bareiss(f: BivarPoly, g: BivarPoly, var: str) -> UniPoly:
    """Sylvester resultant via fraction-free elimination over the ring."""
    fc = f.as_unipoly_in(var)
    gc = g.as_unipoly_in(var)
    return _bareiss_poly_det(sylvester_matrix(fc, gc))


def resultant_interp(f: BivarPoly, g: BivarPoly, var: str) -> UniPoly:
    """Sylvester resultant via evaluation/interpolation in the kept variable.

    Degree bound: deg_kept(f)*deg_var(g) + deg_kept(g)*deg_var(f); the
    interpolant is re-verified at extra sample points.
    """
    other = "y" if var == "x" else "x"
    bound = f.degree_in(other) * g.degree_in(var) + g.degree_in(other) * f.degree_in(var)
    fc = f.as_unipoly_in(var)
    gc = g.as_unipoly_in(var)
    npts = bound + 1
    xs = []
    vals = []
    t = 0
    while len(xs) < npts + 3:
        xs.append(mpq(t))
        mat = [[entry(mpq(t)) for entry in row] for row in sylvester_matrix(fc, gc)]
        vals.append(_det_rational(mat))
        t = -t if t > 0 else -t + 1
    poly = _newton_interpolate(xs[:npts], vals[:npts])
    for xe, ve in zip(xs[npts:], vals[npts:]):
        if poly(xe) != ve:
            raise ArithmeticError("resultant interpolation failed verification")
    return poly


def _newton_interpolate(xs, vals) -> UniPoly:
    n = len(xs)
    coef = list(vals)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = UniPoly.zero()
    basis = UniPoly.one()
    for i in range(n):
        poly = poly + basis * coef[i]
        basis = basis * UniPoly([-xs[i], 1])
    return poly


def resultant_eliminate(f: BivarPoly, g: BivarPoly, var: str, method: str = "auto") -> UniPoly:
    """Eliminate `var` from the pair (f, g) by the Sylvester resultant.

    Raises CommonFactor when the resultant vanishes identically (the pair
    shares a nonconstant factor in `var`), DegreeZeroInVar when either input
    does not involve `var`.
    """
    if f.is_zero or g.is_zero:
        raise ZeroPolynomial("resultant of a zero polynomial")
    if var not in ("x", "y"):
        raise ValueError(f"unknown variable {var!r}")
    if f.degree_in(var) <= 0 or g.degree_in(var) <= 0:
        raise DegreeZeroInVar(f"both inputs must have positive degree in {var}")
    if method == "bareiss":
        res = resultant_bareiss(f, g, var)
    elif method == "interp":
        res = resultant_interp(f, g, var)
    elif method == "auto":
        size = f.degree_in(var) + g.degree_in(var)
        res = resultant_bareiss(f, g, var) if size < 10 else resultant_interp(f, g, var)
    else:
        raise ValueError(f"unknown method {method!r}")
    if res.is_zero:
        raise CommonFactor("resultant vanished identically: inputs share a factor")
    return res
