"""Exact rational scalars.

All arithmetic in the library runs over gmpy2 rationals (``mpq``).  They are
automatically normalized (coprime, positive denominator), immutable, and
hashable, which is exactly the contract the rest of the library relies on.
JSON serialization uses the string form ``"num/den"`` everywhere.
"""

from __future__ import annotations

from gmpy2 import mpq, mpz

Q = mpq

ZERO = mpq(0)
ONE = mpq(1)


def q(value, den=None) -> Q:
    """Coerce to an exact rational. Accepts int, mpq, mpz, or "num/den" text."""
    if den is not None:
        return mpq(value, den)
    if isinstance(value, str):
        return mpq(value)
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an exact rational")
    return mpq(value)


def q_str(x) -> str:
    """Serialize a rational as "num/den" (always with explicit denominator)."""
    x = mpq(x)
    return f"{x.numerator}/{x.denominator}"


def q_parse(text: str) -> Q:
    return mpq(text)


def sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def qfloor(x) -> int:
    return int(x.numerator // x.denominator)


def qceil(x) -> int:
    return int(-((-x).numerator // (-x).denominator)) if x.denominator != 1 else int(x.numerator)


def qabs(x):
    return -x if x < 0 else x


def qmax(*xs):
    m = xs[0]
    for x in xs[1:]:
        if x > m:
            m = x
    return m


def qmin(*xs):
    m = xs[0]
    for x in xs[1:]:
        if x < m:
            m = x
    return m


def common_denominator(values) -> int:
    """lcm of the denominators of an iterable of rationals."""
    from math import lcm

    d = 1
    for v in values:
        d = lcm(d, int(mpq(v).denominator))
    return d


def dyadic_floor(x, k: int) -> Q:
    """Largest multiple of 2**-k that is <= x. Keeps denominators small."""
    scale = mpz(1) << k
    return mpq((x * scale).numerator // (x * scale).denominator, scale)


def dyadic_ceil(x, k: int) -> Q:
    f = dyadic_floor(x, k)
    return f if f == x else f + mpq(1, mpz(1) << k)
