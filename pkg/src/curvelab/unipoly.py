"""Exact univariate polynomials over the rationals.

Dense representation, coefficients from degree 0 upward.  Root counting is
done with Sturm sequences, root isolation with Descartes/bisection (VCA) on
the square-free part; both run on scaled integer coefficient lists, which is
where all the time is spent.
"""

from __future__ import annotations

from math import gcd as _igcd, lcm as _ilcm

from gmpy2 import mpq, mpz

from .errors import EndpointRoot, NonExactDivision, ZeroPolynomial
from .interval import RatInterval
from .qmath import Q, q, sign


class UniPoly:
    """A polynomial in one variable with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [mpq(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def one(cls):
        return cls((1,))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def constant(cls, c):
        return cls((c,))

    # -- basic structure ----------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "UniPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c != 0:
                terms.append(f"{c}*t^{i}" if i else f"{c}")
        return "UniPoly(" + " + ".join(terms) + ")"

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [mpq(0)] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] += c
        return UniPoly(a)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            c = mpq(other)
            return UniPoly([a * c for a in self.coeffs])
        if self.is_zero or other.is_zero:
            return UniPoly.zero()
        out = [mpq(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UniPoly.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, x):
        acc = mpq(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other):
        """Euclidean division; other must be nonzero."""
        other = _coerce(other)
        if other.is_zero:
            raise ZeroPolynomial("division by zero polynomial")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.leading
        quot = [mpq(0)] * max(0, len(rem) - d)
        for i in range(len(rem) - d - 1, -1, -1):
            c = rem[i + d] / lead
            if c == 0:
                continue
            quot[i] = c
            for j, b in enumerate(other.coeffs):
                rem[i + j] -= c * b
        return UniPoly(quot), UniPoly(rem)

    def exact_div(self, other):
        qt, r = self.divmod(other)
        if not r.is_zero:
            raise NonExactDivision("polynomial division left a remainder")
        return qt

    # -- integer scaling ------------------------------------------------

    def int_coeffs(self):
        """Primitive integer coefficient list with the same roots and the
        sign of the original leading coefficient."""
        if self.is_zero:
            return []
        den = 1
        for c in self.coeffs:
            den = _ilcm(den, int(c.denominator))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = _igcd(g, abs(v))
        return [v // g for v in ints]

    @classmethod
    def from_int_coeffs(cls, ints):
        return cls([mpq(v) for v in ints])

    # -- gcd and square-free structure ----------------------------------

    def gcd(self, other):
        """Monic gcd, computed by a primitive integer PRS."""
        a = self.int_coeffs()
        b = _coerce(other).int_coeffs()
        g = _int_gcd(a, b)
        if not g:
            return UniPoly.zero()
        lead = mpq(g[-1])
        return UniPoly([mpq(v) / lead for v in g])

    def squarefree_part(self):
        """Monic polynomial with the same distinct roots, all simple."""
        if self.is_zero:
            raise ZeroPolynomial("square-free part of zero")
        if self.degree == 0:
            return UniPoly.one()
        g = self.gcd(self.derivative())
        p = self if g.degree == 0 else self.exact_div(g)
        return p * (1 / p.leading)

    def squarefree_decomposition(self):
        """Yun's algorithm: list of (factor, multiplicity), factors monic."""
        if self.is_zero:
            raise ZeroPolynomial("square-free decomposition of zero")
        p = self * (1 / self.leading)
        if p.degree == 0:
            return []
        d = p.derivative()
        a = p.gcd(d)
        b = p.exact_div(a)
        c = d.exact_div(a)
        out = []
        i = 1
        while b.degree > 0:
            w = c - b.derivative()
            g = b.gcd(w)
            if g.degree > 0:
                out.append((g, i))
            b = b.exact_div(g)
            c = w.exact_div(g)
            i += 1
        return out


def _coerce(p) -> UniPoly:
    if isinstance(p, UniPoly):
        return p
    return UniPoly((q(p),))


# ---------------------------------------------------------------------------
# Integer-list kernels.  A polynomial is a list of ints, degree 0 upward,
# nonzero leading entry.  Everything below is sign-exact.
# ---------------------------------------------------------------------------


def _int_eval_sign(ints, num: int, den: int) -> int:
    """Sign of p(num/den), den > 0, via the integer value p(num/den)*den^deg."""
    n = len(ints) - 1
    acc = ints[n]
    power = 1
    for i in range(n - 1, -1, -1):
        power *= den
        acc = acc * num + ints[i] * power
    return (acc > 0) - (acc < 0)


def _int_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _int_primitive(a):
    g = 0
    for v in a:
        g = _igcd(g, abs(v))
    if g > 1:
        a = [v // g for v in a]
    return a


def _int_prem(a, b):
    """Pseudo-remainder of a by b over the integers.

    Returns (r, s) with r = s0 * (a mod b) for a scalar s0 of sign s.
    """
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    s = 1
    while a and len(a) - 1 >= db:
        la = a[-1]
        shift = len(a) - 1 - db
        a = [lb * v for v in a]
        s *= 1 if lb > 0 else -1
        for j, bv in enumerate(b):
            a[shift + j] -= la * bv
        _int_trim(a)
    return a, s


def _int_gcd(a, b):
    """gcd of integer polynomials via primitive PRS; result primitive,
    positive leading coefficient."""
    a = _int_primitive(list(a))
    b = _int_primitive(list(b))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r, _s = _int_prem(a, b)
        a, b = b, _int_primitive(r)
    if a and a[-1] < 0:
        a = [-v for v in a]
    return a


def _taylor_shift1(a):
    """In place p(x) -> p(x+1)."""
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += a[j + 1]
    return a


def _synthetic_div_at1(a):
    """Exact division by (x - 1); caller guarantees a(1) == 0."""
    n = len(a) - 1
    out = [0] * n
    acc = a[n]
    for i in range(n - 1, -1, -1):
        out[i] = acc
        acc += a[i]
    return out


def _sign_variations(a) -> int:
    v = 0
    prev = 0
    for c in a:
        if c != 0:
            s = 1 if c > 0 else -1
            if prev and s != prev:
                v += 1
            prev = s
    return v


def _descartes_upper(a) -> int:
    """Descartes bound for the number of roots in the open interval (0,1):
    sign variations of (1+x)^n a(1/(1+x))."""
    rev = list(reversed(a))
    _taylor_shift1(rev)
    return _sign_variations(rev)


def root_bound(p) -> Q:
    """Power-of-two Cauchy bound: all real roots lie strictly in (-B, B)."""
    ints = p.int_coeffs() if isinstance(p, UniPoly) else list(p)
    if not ints:
        raise ZeroPolynomial("root bound of zero polynomial")
    lead = abs(ints[-1])
    m = max(abs(c) for c in ints[:-1]) if len(ints) > 1 else 0
    b = 2 + (m + lead - 1) // lead
    bound = 1
    while bound < b:
        bound <<= 1
    return mpq(bound)


def sturm_chain(ints):
    """Sturm chain over the integers with positive-scalar normalization."""
    chain = [list(ints)]
    d = [i * c for i, c in enumerate(ints)][1:]
    if d:
        chain.append(_int_primitive(d))
    while len(chain) >= 2 and len(chain[-1]) > 1:
        r, s = _int_prem(chain[-2], chain[-1])
        if not r:
            break
        # want the NEGATED true remainder up to a positive factor
        if s > 0:
            r = [-v for v in r]
        chain.append(_int_primitive(r))
    return chain


def _chain_variations(chain, num: int, den: int) -> int:
    v = 0
    prev = 0
    for p in chain:
        s = _int_eval_sign(p, num, den)
        if s:
            if prev and s != prev:
                v += 1
            prev = s
    return v


def sturm_count(p: UniPoly, window: RatInterval) -> int:
    """Exact number of distinct real roots of p in the open window."""
    if p.is_zero:
        raise ZeroPolynomial("sturm_count on the zero polynomial")
    lo, hi = window.lo, window.hi
    if p(lo) == 0 or p(hi) == 0:
        raise EndpointRoot(f"window endpoint is a root of p: ({lo}, {hi})")
    sf = p.squarefree_part()
    ints = sf.int_coeffs()
    if len(ints) <= 1:
        return 0
    chain = sturm_chain(ints)
    vlo = _chain_variations(chain, int(lo.numerator), int(lo.denominator))
    vhi = _chain_variations(chain, int(hi.numerator), int(hi.denominator))
    return vlo - vhi


def count_real_roots(p: UniPoly) -> int:
    """Distinct real roots over the whole line."""
    if p.is_zero:
        raise ZeroPolynomial("count_real_roots on the zero polynomial")
    if p.degree <= 0:
        return 0
    b = root_bound(p)
    return sturm_count(p, RatInterval(-b, b))


def _vca(a, lo: Q, hi: Q, out, exact):
    """Descartes/bisection on the (0,1)-rescaled square-free integer
    polynomial `a`; emits isolating (lo, hi) pairs and exact dyadic roots.
    Endpoints are guaranteed non-roots throughout."""
    stack = [(a, lo, hi)]
    while stack:
        a, alo, ahi = stack.pop()
        v = _descartes_upper(a)
        if v == 0:
            continue
        if v == 1:
            out.append((alo, ahi))
            continue
        mid = (alo + ahi) / 2
        n = len(a) - 1
        # left half: p(x/2) * 2^n ; right half: p((x+1)/2) * 2^n
        left = [c << (n - i) for i, c in enumerate(a)]
        right = _taylor_shift1(list(left))
        if right[0] == 0:  # subdivision point is an exact root
            exact.append(mid)
            right = _int_trim(right[1:])
            left = _synthetic_div_at1(left)
            _int_trim(left)
        if len(left) > 1:
            stack.append((left, alo, mid))
        if len(right) > 1:
            stack.append((right, mid, ahi))


def isolate_real_roots(p: UniPoly) -> list[RatInterval]:
    """Disjoint open isolating intervals for the distinct real roots of p."""
    return [iv for iv, _m in isolate_with_multiplicity(p)]


def isolate_with_multiplicity(p: UniPoly) -> list[tuple[RatInterval, int]]:
    """Isolating intervals plus multiplicities, sorted by position.

    Intervals are pairwise disjoint, open, have non-root endpoints, and each
    contains exactly one distinct real root of p."""
    if p.is_zero:
        raise ZeroPolynomial("isolate on the zero polynomial")
    if p.degree <= 0:
        return []
    sf = p.squarefree_part()
    ints = sf.int_coeffs()
    if len(ints) <= 1:
        return []
    b = root_bound(sf)
    # substitute x = -b + 2b*u to bring every root to u in (0,1)
    a = _compose_affine(ints, -int(b), int(2 * b))
    pairs: list[tuple[Q, Q]] = []
    exact: list[Q] = []
    _vca(a, mpq(0), mpq(1), pairs, exact)
    # a pair emitted after an exact-root deflation can carry that root on its
    # endpoint; pull such endpoints inward before anything trusts them
    intervals = [
        _repair_endpoints(sf, -b + 2 * b * lo, -b + 2 * b * hi) for lo, hi in pairs
    ]
    exact_roots = [-b + 2 * b * u for u in exact]
    for x in exact_roots:
        gaps = [abs(x - e) for pair in intervals for e in pair]
        gaps += [abs(x - y) for y in exact_roots if y != x]
        delta = min(g for g in gaps if g > 0) / 2 if any(g > 0 for g in gaps) else mpq(1, 2)
        intervals.append((x - delta, x + delta))
    intervals.sort()
    if p.degree == sf.degree:
        mults = None
    else:
        mults = p.squarefree_decomposition()
    result = []
    for lo, hi in intervals:
        m = 1
        if mults is not None:
            for factor, k in mults:
                if sign(factor(lo)) != sign(factor(hi)):
                    m = k
                    break
        result.append((RatInterval(lo, hi), m))
    return result


def _repair_endpoints(sf: UniPoly, lo: Q, hi: Q):
    """Shrink an interval with exactly one interior root of the square-free
    polynomial sf until neither endpoint is a root."""
    if sf(lo) != 0 and sf(hi) != 0:
        return lo, hi
    w = hi - lo
    for k in range(2, 200):
        l2 = lo if sf(lo) != 0 else lo + w / 2**k
        h2 = hi if sf(hi) != 0 else hi - w / 2**k
        if sf(l2) != 0 and sf(h2) != 0 and sturm_count(sf, RatInterval(l2, h2)) == 1:
            return l2, h2
    raise EndpointRoot("could not move isolating interval off a root endpoint")


def _compose_affine(ints, c: int, s: int):
    """Integer coefficients of p(c + s*x)."""
    acc = [ints[-1]]
    for i in range(len(ints) - 2, -1, -1):
        nxt = [0] * (len(acc) + 1)
        for j, v in enumerate(acc):
            nxt[j] += v * c
            nxt[j + 1] += v * s
        nxt[0] += ints[i]
        acc = nxt
    _int_trim(acc)
    return acc


def refine_root(p: UniPoly, interval: RatInterval, width) -> RatInterval:
    """Shrink an isolating interval of a simple root below `width` by
    bisection.  The input must bracket a sign change."""
    lo, hi = interval.lo, interval.hi
    slo = sign(p(lo))
    shi = sign(p(hi))
    if slo == 0 or shi == 0:
        raise EndpointRoot("refine_root needs non-root endpoints")
    if slo == shi:
        raise ValueError("interval does not bracket a sign change")
    width = mpq(width)
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = sign(p(mid))
        if sm == 0:
            h = min((hi - lo) / 8, width / 2)
            return RatInterval(mid - h, mid + h)
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return RatInterval(lo, hi)
