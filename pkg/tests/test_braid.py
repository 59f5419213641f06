import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvelab.braid import (
    BraidWord,
    alexander_polynomial,
    build_bn,
    exponent_sum,
    obstruction_check,
    reduced_burau,
)
from curvelab.errors import InvalidN, ZeroAlexander
from curvelab.laurent import GaussRat, LaurentPoly


def mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def test_word_validation():
    with pytest.raises(ValueError):
        BraidWord((0,), 3)
    with pytest.raises(ValueError):
        BraidWord((3,), 3)
    w = BraidWord.from_letters([1, -2, 1])
    assert w.strands == 3 and len(w) == 3


def test_inverse_and_product():
    w = BraidWord.from_letters([1, -2, 3], 5)
    assert w.inverse().letters == (-3, 2, -1)
    assert (w * w.inverse()).strands == 5
    ident = reduced_burau(BraidWord((), 5))
    assert mat_eq(reduced_burau(w * w.inverse()), ident)


@pytest.mark.parametrize("strands", range(3, 9))
def test_burau_braid_relations(strands):
    for i in range(1, strands - 1):
        a = reduced_burau(BraidWord.from_letters([i, i + 1, i], strands))
        b = reduced_burau(BraidWord.from_letters([i + 1, i, i + 1], strands))
        assert mat_eq(a, b)
    for i in range(1, strands):
        for j in range(i + 2, strands):
            a = reduced_burau(BraidWord.from_letters([i, j], strands))
            b = reduced_burau(BraidWord.from_letters([j, i], strands))
            assert mat_eq(a, b)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(3, 8).flatmap(
        lambda s: st.tuples(
            st.just(s),
            st.lists(
                st.integers(1, s - 1).flatmap(lambda k: st.sampled_from([k, -k])),
                max_size=12,
            ),
        )
    )
)
def test_burau_multiplicative(sw):
    strands, letters = sw
    half = len(letters) // 2
    w1 = BraidWord.from_letters(letters[:half], strands)
    w2 = BraidWord.from_letters(letters[half:], strands)
    a = reduced_burau(w1)
    b = reduced_burau(w2)
    m = strands - 1
    prod = [
        [sum((a[r][k] * b[k][c] for k in range(m)), LaurentPoly.zero()) for c in range(m)]
        for r in range(m)
    ]
    assert mat_eq(prod, reduced_burau(w1 * w2))


def test_alexander_unknot():
    r = alexander_polynomial(BraidWord.from_letters([1]))
    assert r.polynomial == LaurentPoly.one()
    assert r.value_at_i == GaussRat(1, 0)
    assert not r.simple_root_at_i


def test_alexander_trefoil():
    r = alexander_polynomial(BraidWord.from_letters([1, 1, 1]))
    assert r.polynomial == LaurentPoly({0: 1, 1: -1, 2: 1})


def test_alexander_figure_eight():
    r = alexander_polynomial(BraidWord.from_letters([1, -2, 1, -2]))
    assert r.polynomial == LaurentPoly({0: 1, 1: -3, 2: 1})


def test_alexander_conjugation_invariant():
    w = BraidWord.from_letters([1, 1, 2, -1, 2], 3)
    base = alexander_polynomial(w).polynomial
    for g in (1, 2, -1, -2):
        conj = BraidWord.from_letters([g], 3) * w * BraidWord.from_letters([-g], 3)
        assert alexander_polynomial(conj).polynomial == base


def test_alexander_zero_determinant():
    # trivial 2-component unlink: empty word on 2 strands
    with pytest.raises(ZeroAlexander):
        alexander_polynomial(BraidWord((), 2))


def test_family_shape():
    for n in range(1, 13):
        w = build_bn(n)
        assert w.strands == n + 6
        assert exponent_sum(w) == 15
    assert len(build_bn(1)) == 27
    assert len(build_bn(10)) == 225
    with pytest.raises(InvalidN):
        build_bn(0)


def test_family_obstruction_n10():
    v = obstruction_check(10)
    assert v.strands == 16 and v.e == 15 and v.equality_e_strands_minus_1
    assert v.alexander.value_at_i.is_zero
    assert not v.alexander.derivative_at_i.is_zero
    assert v.verdict == "Obstructed"


def test_family_verdicts_full_range():
    verdicts = {n: obstruction_check(n).verdict for n in range(1, 13)}
    assert verdicts[10] == "Obstructed"
    assert verdicts[11] == verdicts[12] == "ObstructedByReduction"
    for n in range(1, 10):
        assert verdicts[n] == "Inconclusive"


def test_determinant_paths_agree():
    for n in range(1, 7):
        w = build_bn(n)
        a = alexander_polynomial(w, method="bareiss").polynomial
        b = alexander_polynomial(w, method="interp").polynomial
        assert a == b
