"""Laurent polynomials over the integers and Gaussian rationals.

Carriers for the Burau/Alexander computation: ring arithmetic in Z[t, 1/t],
exact evaluation over Q(i), and first derivatives via dual numbers.
"""

from __future__ import annotations

from gmpy2 import mpq, mpz

from .errors import NonExactDivision, ZeroBase
from .qmath import q_str


class LaurentPoly:
    """Sparse Laurent polynomial: map exponent -> nonzero integer."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        cs = {}
        if coeffs:
            for e, c in dict(coeffs).items():
                c = int(c)
                if c != 0:
                    cs[int(e)] = c
        self.coeffs = cs

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def t(cls, exponent: int = 1, coeff: int = 1):
        return cls({exponent: coeff})

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def min_exp(self) -> int:
        return min(self.coeffs)

    @property
    def max_exp(self) -> int:
        return max(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        if self.is_zero:
            return "LaurentPoly(0)"
        parts = [f"{c}*t^{e}" for e, c in sorted(self.coeffs.items())]
        return "LaurentPoly(" + " + ".join(parts) + ")"

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        r = LaurentPoly.__new__(LaurentPoly)
        r.coeffs = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = LaurentPoly.__new__(LaurentPoly)
        r.coeffs = {e: -c for e, c in self.coeffs.items()}
        return r

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly.zero()
            r = LaurentPoly.__new__(LaurentPoly)
            r.coeffs = {e: c * other for e, c in self.coeffs.items()}
            return r
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        r = LaurentPoly.__new__(LaurentPoly)
        r.coeffs = out
        return r

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by t**k."""
        r = LaurentPoly.__new__(LaurentPoly)
        r.coeffs = {e + k: c for e, c in self.coeffs.items()}
        return r

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division in Z[t, 1/t]; raises NonExactDivision otherwise."""
        if other.is_zero:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero:
            return LaurentPoly.zero()
        # shift both to ordinary polynomials and long-divide
        sa, sb = self.min_exp, other.min_exp
        a = self.shift(-sa)
        b = other.shift(-sb)
        da, db = a.max_exp, b.max_exp
        if da < db:
            raise NonExactDivision("degree of dividend below divisor")
        acoef = [a.coeffs.get(i, 0) for i in range(da + 1)]
        bcoef = [b.coeffs.get(i, 0) for i in range(db + 1)]
        lead = bcoef[-1]
        quot = [0] * (da - db + 1)
        for i in range(da - db, -1, -1):
            c = acoef[i + db]
            if c % lead != 0:
                raise NonExactDivision("non-exact Laurent division")
            c //= lead
            quot[i] = c
            if c:
                for j, bv in enumerate(bcoef):
                    acoef[i + j] -= c * bv
        if any(acoef):
            raise NonExactDivision("Laurent division left a remainder")
        return LaurentPoly({i + sa - sb: c for i, c in enumerate(quot)})

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({e - 1: e * c for e, c in self.coeffs.items() if e != 0})

    def normalized(self) -> "LaurentPoly":
        """Unit normalization: lowest exponent 0, positive constant term."""
        if self.is_zero:
            return self
        m = self.min_exp
        r = self.shift(-m)
        if r.coeffs[0] < 0:
            r = -r
        return r

    def eval(self, z: "GaussRat") -> "GaussRat":
        if self.is_zero:
            return GaussRat(0, 0)
        if any(e < 0 for e in self.coeffs) and z.is_zero:
            raise ZeroBase("negative exponents evaluated at zero")
        acc = GaussRat(0, 0)
        for e, c in self.coeffs.items():
            acc = acc + z**e * c
        return acc

    def eval_dual(self, z: "GaussRat") -> tuple["GaussRat", "GaussRat"]:
        """Exact (value, derivative) at z via dual numbers."""
        if self.is_zero:
            zero = GaussRat(0, 0)
            return zero, zero
        if any(e < 0 for e in self.coeffs) and z.is_zero:
            raise ZeroBase("negative exponents evaluated at zero")
        val = GaussRat(0, 0)
        der = GaussRat(0, 0)
        for e, c in self.coeffs.items():
            val = val + z**e * c
            der = der + z ** (e - 1) * (c * e)
        return val, der

    def eval_rational(self, x):
        """Exact value at a nonzero rational point."""
        x = mpq(x)
        if x == 0 and any(e < 0 for e in self.coeffs):
            raise ZeroBase("negative exponents evaluated at zero")
        acc = mpq(0)
        for e, c in self.coeffs.items():
            acc += c * x**e
        return acc

    def to_json(self):
        return {str(e): str(c) for e, c in sorted(self.coeffs.items())}


def laurent_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    """Ring operations by name; convenience wrapper for report plumbing."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown Laurent op: {op}")


class GaussRat:
    """Gaussian rational a + b*i with exact components."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    @classmethod
    def i(cls):
        return cls(0, 1)

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other):
        if not isinstance(other, GaussRat):
            other = GaussRat(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"

    def __add__(self, other):
        if not isinstance(other, GaussRat):
            other = GaussRat(other)
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, GaussRat):
            other = GaussRat(other)
        return GaussRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GaussRat):
            return GaussRat(self.re * mpq(other), self.im * mpq(other))
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussRat":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if not isinstance(other, GaussRat):
            other = GaussRat(other)
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = GaussRat(1, 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def to_json(self):
        return [q_str(self.re), q_str(self.im)]


def eval_gauss(p, z: GaussRat) -> GaussRat:
    """Exact value at a Gaussian rational of a Laurent or rational polynomial."""
    if isinstance(p, LaurentPoly):
        return p.eval(z)
    # UniPoly duck-typed: iterate coefficients degree 0 upward
    acc = GaussRat(0, 0)
    for c in reversed(p.coeffs):
        acc = acc * z + GaussRat(c)
    return acc
