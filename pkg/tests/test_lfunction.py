from fractions import Fraction

import pytest

from qtwist.characters import character, trivial_character
from qtwist.cyclotomic import tower_for_orders
from qtwist.errors import DomainError, VerificationFailure
from qtwist.lfunction import (
    LSetting,
    interpolation_check,
    l_special_h,
    l_value_at_negative,
    l_value_integral,
    l_value_series,
    series_factor,
    strictly_increasing,
)
from qtwist.padic import PadicContext

CTX = PadicContext(3, 30)
CHI4 = character(4, 1)
T1 = tower_for_orders(CTX, 1)
T34 = tower_for_orders(CTX, 3, CHI4.order)
BASE = LSetting(T1, CTX(4), 1)
TWIST = LSetting(T34, CTX(4), 1, CHI4, T34.root_of_unity(3), 5)


def same(a, b, slack=2):
    return a.agreement(b) >= min(a.prec, b.prec) - slack


@pytest.mark.parametrize("st", [BASE, TWIST], ids=["base", "twisted"])
@pytest.mark.parametrize("s", [0, -1, -2, 2, Fraction(1, 2)])
def test_series_equals_integral(st, s):
    for N in (1, 2):
        assert same(l_value_series(s, st, N), l_value_integral(s, st, N))


def test_h_zero_route_equivalence():
    st = LSetting(T1, CTX(4), 0)
    assert same(l_value_series(0, st, 2), l_value_integral(0, st, 2))


@pytest.mark.parametrize("s", [-1, 2, 3])
def test_special_h_matches_series(s):
    st = BASE.with_h(s - 1)
    for N in (1, 2):
        assert l_special_h(s, BASE, N) == l_value_series(s, st, N)


def test_special_h_at_one_and_errors():
    # s = 1 is allowed here: the first series vanishes and h = 0
    assert l_special_h(1, BASE, 1) is not None
    with pytest.raises(DomainError):
        l_special_h(0, BASE, 2)
    with pytest.raises(DomainError):
        l_special_h(Fraction(1, 2), BASE, 2)


def test_pole_at_one():
    with pytest.raises(DomainError):
        l_value_series(1, BASE, 2)
    with pytest.raises(DomainError):
        l_value_integral(1, BASE, 2)


@pytest.mark.parametrize("s", [-3, -1, 0, 2])
@pytest.mark.parametrize("n", [1, 2, 5, 7])
def test_branch_consistency(s, n):
    # the branch route with b = s mod (p - 1) equals the literal integer power
    st = LSetting(T1, CTX(4), 1, branch=s % 2)
    for e in (0, 1):
        lit = series_factor(n, e, s, st, literal=True)
        br = series_factor(n, e, s, st, literal=False)
        assert lit.agreement(br) >= lit.prec - 2


def test_determinism():
    a = l_value_at_negative(2, TWIST)
    t2 = tower_for_orders(PadicContext(3, 30), 3, CHI4.order)
    st2 = LSetting(t2, t2.ctx(4), 1, CHI4, t2.root_of_unity(3), 5)
    b = l_value_at_negative(2, st2)
    assert a.c == b.c and a.s == b.s and a.prec == b.prec


def test_setting_validation():
    with pytest.raises(DomainError):
        LSetting(T1, CTX(2), 1)
    with pytest.raises(DomainError):
        LSetting(T1, CTX(4), 1, alpha=3)
    with pytest.raises(DomainError):
        LSetting(T1, CTX(4), 1, alpha=1)
    with pytest.raises(DomainError):
        LSetting(T1, CTX(4), 1, character(3, 1))


def test_closed_form_errors():
    with pytest.raises(ValueError):
        l_value_at_negative(0, BASE)
    with pytest.raises(ValueError):
        l_value_at_negative(1, BASE, sign=2)


@pytest.mark.parametrize("st", [BASE, TWIST], ids=["base", "twisted"])
def test_interpolation_sign_constant(st):
    signs = set()
    for m in (1, 2, 3):
        rep = interpolation_check(m, st, [2, 3, 4])
        signs.add((rep.sign, rep.omega))
        best = rep.defects[(rep.sign, rep.omega)]
        assert all(d >= N - 3 for d, N in zip(best, rep.levels))
    assert signs == {(1, True)}


def test_interpolation_other_sign_bounded():
    rep = interpolation_check(1, BASE, [2, 3, 4])
    other = rep.defects[(-1, True)]
    assert max(other) <= 1


def test_interpolation_coincident_variants_reported():
    # omega^2 = 1 at p = 3, so the omega and plain closed forms are the same number
    rep = interpolation_check(2, BASE, [2, 3, 4])
    assert (1, True) in rep.coincident and (1, False) in rep.coincident


def test_interpolation_ambiguity_raises():
    # with the h-weighted bracket at h = 2 no variant converges
    st = LSetting(T1, CTX(4), 2)
    with pytest.raises(VerificationFailure):
        interpolation_check(1, st, [2, 3, 4])
    assert interpolation_check(1, st, [2, 3, 4], strict=False).sign is None


def test_standard_bracket_h2_same_sign():
    st = LSetting(T1, CTX(4), 2, mazur="standard")
    rep = interpolation_check(1, st, [2, 3, 4])
    assert (rep.sign, rep.omega) == (1, True)


def test_strictly_increasing_helper():
    assert strictly_increasing([1, 2, 5])
    assert not strictly_increasing([3, 6, 6])
