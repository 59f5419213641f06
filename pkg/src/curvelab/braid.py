"""Braid words, reduced Burau representation, Alexander polynomials, and the
non-realizability verdict for the fixed obstruction family.

The family b_n lives on n+6 strands; its closure's Alexander polynomial is
computed as det(rho(w) - I) * (1 - t) / (1 - t^strands) over Z[t, 1/t], with
two independent determinant paths (fraction-free Bareiss and
evaluation/interpolation) that are cross-checked in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .errors import InvalidN, NonExactDivision, ZeroAlexander
from .laurent import GaussRat, LaurentPoly


@dataclass(frozen=True)
class BraidWord:
    """A word in Artin generators: letter k stands for sigma_|k|^sign(k)."""

    letters: tuple
    strands: int

    def __post_init__(self):
        if self.letters:
            if self.strands < 2:
                raise ValueError("nonempty word needs at least 2 strands")
            for k in self.letters:
                if k == 0 or abs(k) > self.strands - 1:
                    raise ValueError(f"letter {k} out of range for {self.strands} strands")

    @classmethod
    def from_letters(cls, letters, strands=None):
        letters = tuple(int(k) for k in letters)
        if strands is None:
            strands = 1 + max((abs(k) for k in letters), default=1)
        return cls(letters, strands)

    def __len__(self):
        return len(self.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(tuple(-k for k in reversed(self.letters)), self.strands)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        strands = max(self.strands, other.strands)
        return BraidWord(self.letters + other.letters, strands)


def build_bn(n: int) -> BraidWord:
    """The obstruction braid on n+6 strands.

    b_n = prod_{i=4}^{n+3} [ (prod_{j=i}^{n+3} s_j^-1) s_{n+4}^-4 ]
          * prod_{j=4}^{n+3} s_j^-1
          * Delta
    where Delta is the positive half twist on all n+6 strands, written as
    (s_{n+5} ... s_1)(s_{n+5} ... s_2) ... (s_{n+5}); it accounts for the
    pencil of lines through the base point.
    """
    if n < 1:
        raise InvalidN(f"family parameter must be >= 1, got {n}")
    letters = []
    for i in range(4, n + 4):
        for j in range(i, n + 4):
            letters.append(-j)
        letters.extend([-(n + 4)] * 4)
    for j in range(4, n + 4):
        letters.append(-j)
    for i in range(1, n + 6):
        for j in range(n + 5, i - 1, -1):
            letters.append(j)
    return BraidWord(tuple(letters), n + 6)


def exponent_sum(w: BraidWord) -> int:
    return sum(1 if k > 0 else -1 for k in w.letters)


# ---------------------------------------------------------------------------
# Reduced Burau representation.
#
# Generator images on strands s (matrices of size m = s-1, 1-indexed i):
#   sigma_i:      (i,i) = -t,   (i,i-1) = t,  (i,i+1) = 1
#   sigma_i^-1:   (i,i) = -1/t, (i,i-1) = 1,  (i,i+1) = 1/t
# Right-multiplying an accumulated matrix by a generator touches at most
# three columns, which keeps the 225-letter family words cheap.
# ---------------------------------------------------------------------------


def _apply_letter(cols, k: int, m: int):
    """cols[c][r] are exponent->int dicts; update for one letter in place."""
    i = abs(k) - 1
    ci = cols[i]
    if k > 0:
        if i - 1 >= 0:
            dst = cols[i - 1]
            for r in range(m):
                _addmul(dst[r], ci[r], 1)
        if i + 1 < m:
            dst = cols[i + 1]
            for r in range(m):
                _addmul(dst[r], ci[r], 0)
        for r in range(m):
            ci[r] = {e + 1: -v for e, v in ci[r].items()}
    else:
        if i - 1 >= 0:
            dst = cols[i - 1]
            for r in range(m):
                _addmul(dst[r], ci[r], 0)
        if i + 1 < m:
            dst = cols[i + 1]
            for r in range(m):
                _addmul(dst[r], ci[r], -1)
        for r in range(m):
            ci[r] = {e - 1: -v for e, v in ci[r].items()}


def _addmul(dst: dict, src: dict, shift: int):
    for e, v in src.items():
        k = e + shift
        nv = dst.get(k, 0) + v
        if nv:
            dst[k] = nv
        else:
            del dst[k]


def _burau_columns(w: BraidWord):
    m = w.strands - 1
    cols = [[({0: 1} if r == c else {}) for r in range(m)] for c in range(m)]
    for k in w.letters:
        _apply_letter(cols, k, m)
    return cols


def reduced_burau(w: BraidWord):
    """Matrix of the reduced Burau image, rows of LaurentPoly."""
    m = w.strands - 1
    cols = _burau_columns(w)
    return [[LaurentPoly(cols[c][r]) for c in range(m)] for r in range(m)]


# ---------------------------------------------------------------------------
# Determinant over Z[t, 1/t]
# ---------------------------------------------------------------------------


def _ip_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _ip_mul(a, b):
    """Integer poly product via Kronecker substitution."""
    if not a or not b:
        return []
    ma = max(abs(v) for v in a)
    mb = max(abs(v) for v in b)
    k = (ma * mb * min(len(a), len(b))).bit_length() + 2
    va = _ip_pack(a, k)
    vb = _ip_pack(b, k)
    return _ip_unpack(va * vb, k, len(a) + len(b) - 1)


def _ip_pack(a, k):
    v = 0
    for c in reversed(a):
        v = (v << k) + c
    return v


def _ip_unpack(v, k, n):
    out = []
    half = 1 << (k - 1)
    full = 1 << k
    for _ in range(n):
        r = v & (full - 1)
        if r >= half:
            r -= full
        out.append(r)
        v = (v - r) >> k
    return _ip_trim(out)


def _ip_sub(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] = v
    for i, v in enumerate(b):
        out[i] -= v
    return _ip_trim(out)


def _ip_exact_div(a, b):
    """Exact division of integer polynomials."""
    if not b:
        raise ZeroDivisionError("integer poly division by zero")
    if not a:
        return []
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    n = len(a) - 1 - db
    if n < 0:
        raise NonExactDivision("dividend degree below divisor")
    quot = [0] * (n + 1)
    for i in range(n, -1, -1):
        c = a[i + db]
        if c % lead:
            raise NonExactDivision("non-exact integer poly division")
        c //= lead
        quot[i] = c
        if c:
            for j, bv in enumerate(b):
                a[i + j] -= c * bv
    if any(a):
        raise NonExactDivision("integer poly division left a remainder")
    return _ip_trim(quot)


def _laurent_det_bareiss(entries):
    """det of a matrix of exponent->int dicts, as a LaurentPoly.

    Rows are shifted to ordinary polynomials first; the accumulated t-power
    is restored at the end.
    """
    n = len(entries)
    shift_total = 0
    mat = []
    for row in entries:
        mins = [min(d) for d in row if d]
        s = min(mins) if mins else 0
        shift_total += s
        prow = []
        for d in row:
            if d:
                top = max(d) - s
                prow.append(_ip_trim([d.get(e + s, 0) for e in range(top + 1)]))
            else:
                prow.append([])
        mat.append(prow)
    det_sign = 1
    prev = [1]
    for k in range(n - 1):
        if not mat[k][k]:
            pr = next((r for r in range(k + 1, n) if mat[r][k]), None)
            if pr is None:
                return LaurentPoly.zero()
            mat[k], mat[pr] = mat[pr], mat[k]
            det_sign = -det_sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _ip_sub(_ip_mul(mat[i][j], mat[k][k]), _ip_mul(mat[i][k], mat[k][j]))
                mat[i][j] = _ip_exact_div(num, prev)
            mat[i][k] = []
        prev = mat[k][k]
    final = mat[n - 1][n - 1]
    return LaurentPoly({e + shift_total: det_sign * c for e, c in enumerate(final) if c})


def _laurent_det_interp(entries):
    """Same determinant by evaluation at rational points + interpolation."""
    from .bivar import _det_rational  # integer Bareiss on scalars
    from .unipoly import UniPoly

    n = len(entries)
    shift_total = 0
    rows = []
    degree_bound = 0
    for row in entries:
        mins = [min(d) for d in row if d]
        maxs = [max(d) for d in row if d]
        s = min(mins) if mins else 0
        shift_total += s
        degree_bound += (max(maxs) - s) if maxs else 0
        rows.append([{e - s: c for e, c in d.items()} for d in row])
    npts = degree_bound + 1
    xs = []
    vals = []
    t = 1
    while len(xs) < npts:
        tv = mpq(t)
        xs.append(tv)
        mat = [[sum(c * tv**e for e, c in d.items()) if d else mpq(0) for d in row] for row in rows]
        vals.append(_det_rational(mat))
        t += 1
    # Newton interpolation
    coef = list(vals)
    for j in range(1, npts):
        for i in range(npts - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = UniPoly.zero()
    basis = UniPoly.one()
    for i in range(npts):
        poly = poly + basis * coef[i]
        basis = basis * UniPoly([-xs[i], 1])
    return LaurentPoly(
        {e + shift_total: int(c) for e, c in enumerate(poly.coeffs) if c != 0}
    )


@dataclass
class AlexanderResult:
    """Normalized Alexander polynomial of a braid closure and its behavior
    at t = i."""

    polynomial: LaurentPoly
    value_at_i: GaussRat
    derivative_at_i: GaussRat
    simple_root_at_i: bool

    def to_json(self):
        return {
            "alexander": self.polynomial.to_json(),
            "value_at_i": self.value_at_i.to_json(),
            "derivative_at_i": self.derivative_at_i.to_json(),
            "simple_root_at_i": self.simple_root_at_i,
        }


def alexander_polynomial(w: BraidWord, method: str = "bareiss") -> AlexanderResult:
    """det(reduced Burau - I) * (1 - t) / (1 - t^strands), unit-normalized.

    The division is exact by construction; a nonzero remainder is an internal
    error and raises NonExactDivision.
    """
    m = w.strands - 1
    cols = _burau_columns(w)
    entries = []
    for r in range(m):
        row = []
        for c in range(m):
            d = dict(cols[c][r])
            if r == c:
                nv = d.get(0, 0) - 1
                if nv:
                    d[0] = nv
                else:
                    d.pop(0, None)
            row.append(d)
        entries.append(row)
    if method == "bareiss":
        det = _laurent_det_bareiss(entries)
    elif method == "interp":
        det = _laurent_det_interp(entries)
    else:
        raise ValueError(f"unknown determinant method {method!r}")
    if det.is_zero:
        raise ZeroAlexander("Burau determinant vanished identically")
    num = det * LaurentPoly({0: 1, 1: -1})
    den = LaurentPoly({0: 1, w.strands: -1})
    alex = num.exact_div(den).normalized()
    z = GaussRat.i()
    value, deriv = alex.eval_dual(z)
    simple = value.is_zero and not deriv.is_zero
    return AlexanderResult(alex, value, deriv, simple)


@dataclass
class ObstructionVerdict:
    """Outcome of the realizability obstruction for family parameter n."""

    n: int
    letters: int
    strands: int
    e: int
    equality_e_strands_minus_1: bool
    alexander: AlexanderResult | None
    verdict: str  # Obstructed | ObstructedByReduction | Inconclusive

    def to_json(self):
        out = {
            "n": self.n,
            "letters": self.letters,
            "strands": self.strands,
            "e": self.e,
            "equality_e_strands_minus_1": self.equality_e_strands_minus_1,
            "verdict": self.verdict,
        }
        if self.alexander is not None:
            out["alexander"] = self.alexander.polynomial.to_json()
            out["value_at_i"] = self.alexander.value_at_i.to_json()
            out["simple_root_at_i"] = self.alexander.simple_root_at_i
        return out


def obstruction_check(n: int, method: str = "bareiss") -> ObstructionVerdict:
    """Direct obstruction at the given n.

    Obstructed requires both the exponent-sum equality e = strands - 1 and a
    simple root of the Alexander polynomial at t = i.  Parameters above the
    directly-checked threshold are ObstructedByReduction (sub-scheme
    restriction); everything else is Inconclusive — this computation never
    claims realizability.
    """
    if n < 1:
        raise InvalidN(f"family parameter must be >= 1, got {n}")
    w = build_bn(n)
    e = exponent_sum(w)
    equality = e == w.strands - 1
    if n > 10:
        return ObstructionVerdict(n, len(w), w.strands, e, equality, None, "ObstructedByReduction")
    alex = alexander_polynomial(w, method=method)
    if equality and alex.simple_root_at_i:
        verdict = "Obstructed"
    else:
        verdict = "Inconclusive"
    return ObstructionVerdict(n, len(w), w.strands, e, equality, alex, verdict)
