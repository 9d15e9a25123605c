import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qtwist.characters import character, trivial_character
from qtwist.cyclotomic import ExactCyclotomic, embed_exact, tower_for_orders
from qtwist.errors import DomainError
from qtwist.padic import PadicContext
from qtwist.qbernoulli import (
    IntegrandSpec,
    QSetting,
    beta_generalized,
    beta_generalized_direct,
    beta_series_formal,
    beta_twisted,
    classical_bernoulli,
    classical_limit_defect,
    generalized_bernoulli_exact,
    distribution_prefactor_check,
    q_integral,
    shift_identity_check,
    twisted_bernoulli_exact,
)

CTX = PadicContext(3, 30)
T1 = tower_for_orders(CTX, 1)
T3 = tower_for_orders(CTX, 3)
CHI4 = character(4, 1)
T34 = tower_for_orders(CTX, 3, CHI4.order)


def S(tower, h=1, q=4, l=1):
    return QSetting(tower, CTX(q), h, l)


# -- exact classical numbers ---------------------------------------------------

def test_classical_bernoulli_pins():
    assert classical_bernoulli(1) == Fraction(-1, 2)
    assert classical_bernoulli(2) == Fraction(1, 6)
    assert classical_bernoulli(12) == Fraction(-691, 2730)
    assert classical_bernoulli(7) == 0


def test_twisted_exact_pins():
    vals = [twisted_bernoulli_exact(n, 2, 1).to_fraction() for n in range(5)]
    assert vals[:3] == [0, Fraction(-1, 2), Fraction(1, 2)]
    assert vals[4] == Fraction(-1, 2)
    assert twisted_bernoulli_exact(2).to_fraction() == Fraction(1, 6)


def test_generalized_exact_pins():
    assert generalized_bernoulli_exact(1, CHI4).to_fraction() == Fraction(-1, 2)
    assert generalized_bernoulli_exact(0, CHI4).to_fraction() == 0


@given(st.integers(0, 6))
def test_trivial_character_reduces_to_twisted(n):
    a = generalized_bernoulli_exact(n, None, 3, 1, Fraction(1, 2))
    b = twisted_bernoulli_exact(n, 3, 1, Fraction(1, 2))
    assert a == b


# -- closed form and Riemann sums ----------------------------------------------------

def test_beta_pinned_minus_one_fifth():
    v = beta_twisted(1, 0, S(T1))
    assert v == CTX(Fraction(-1, 5))
    assert beta_twisted(0, 0, S(T1)) == 1


@pytest.mark.parametrize("h", [0, 1, 2])
@pytest.mark.parametrize("m", [0, 1, 3])
@pytest.mark.parametrize("tower,xi_order", [(T1, 1), (T3, 3)])
def test_witt_convergence(h, m, tower, xi_order):
    setting = S(tower, h)
    xi = tower.root_of_unity(xi_order)
    closed = beta_twisted(m, 0, setting, xi)
    eff = []
    for N in (3, 4, 5):
        rs = q_integral(IntegrandSpec(m, xi, None, 0, h - 1), setting, N)
        d = rs.agreement(closed)
        assert d >= N - 2
        # exact agreement at working precision counts as infinite
        eff.append(math.inf if d >= min(rs.prec, closed.prec) - 2 else d)
    assert eff == sorted(eff)


def test_witt_q_one_gives_bernoulli():
    setting = S(T1, 0, q=1)
    assert beta_twisted(2, 0, setting) == CTX(Fraction(1, 6))
    for N in (3, 4, 5):
        assert q_integral(IntegrandSpec(2, weight=-1), setting, N).agreement(CTX(Fraction(1, 6))) >= N - 2


@pytest.mark.parametrize("poly,expect", [([0, 1], math.inf), ([0, 0, 1], 4), ([1, 2, 0, 1], 8)])
def test_shift_identity(poly, expect):
    # f(y+1) - f(y) averages to f'(0) up to p^N-small terms
    assert shift_identity_check(poly, 3, 4) == expect


# -- generalized numbers -----------------------------------------------------------

@pytest.mark.parametrize("n", [0, 1, 2, 3])
@pytest.mark.parametrize("h", [0, 1, 2])
def test_generalized_two_routes(n, h):
    setting = S(T34, h, l=4)
    xi = T34.root_of_unity(3)
    a = beta_generalized(n, 0, setting, xi, CHI4)
    b = beta_generalized_direct(n, 0, setting, xi, CHI4)
    assert a.agreement(b) >= min(a.prec, b.prec) - 2


def test_generalized_matches_riemann_sum():
    setting = S(T34, 1, l=4)
    xi = T34.root_of_unity(1)
    closed = beta_generalized(1, 0, setting, xi, CHI4)
    for N in (2, 3, 4):
        rs = q_integral(IntegrandSpec(1, xi, CHI4, 0, 0), setting, N)
        assert rs.agreement(closed) >= N - 2


def test_generalized_trivial_character_is_twisted():
    setting = S(T3, 1)
    xi = T3.root_of_unity(3)
    assert beta_generalized(2, 0, setting, xi, trivial_character()) == beta_twisted(2, 0, setting, xi)


@pytest.mark.parametrize("d", [2, 4, 5])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_prefactor(d, n):
    r = distribution_prefactor_check(n, d, S(T3, 1), T3.root_of_unity(3))
    assert "[d]" in r["vanishing"]
    if n >= 2:
        assert "d" not in r["vanishing"]


def test_distribution_prefactor_pinned_d2():
    r = distribution_prefactor_check(1, 2, S(T1, 1))
    assert "[d]" in r["vanishing"]


# -- formal q-series -----------------------------------------------------------------

@pytest.mark.parametrize("m,h,N,k", [(1, 1, 2, 1), (0, 2, 3, 1), (2, 0, 3, 2), (3, 2, 4, 1), (2, 1, 1, 0)])
def test_formal_series_identity(m, h, N, k):
    lhs, rhs = beta_series_formal(m, h, N, k, D=10)
    assert lhs == rhs


def test_formal_series_constant_term_m0():
    for h in (1, 2):
        lhs, rhs = beta_series_formal(0, h, 2, 1, D=6)
        # h (1 - q) / (1 - q^h xi) has constant term h
        assert lhs.coefficient(0) == rhs.coefficient(0) == ExactCyclotomic.rational(2, h)


def test_formal_series_pole():
    with pytest.raises(DomainError):
        beta_series_formal(1, 0, 1, 0)


# -- q -> 1 ----------------------------------------------------------------------------

@pytest.mark.parametrize("n,xi_order,use_chi", [(1, 1, True), (2, 3, False), (2, 1, False), (3, 3, True)])
def test_classical_limit(n, xi_order, use_chi):
    chi = CHI4 if use_chi else None
    tower = T34
    xi = tower.root_of_unity(xi_order)
    defects = []
    for k in range(1, 5):
        setting = QSetting(tower, CTX(1 + 3 ** k), 1, 4 if use_chi else 1)
        d = classical_limit_defect(n, setting, xi, chi)
        assert d >= k - 2
        defects.append(d)
    assert defects[-1] > defects[0]


def test_classical_limit_pins_embedded():
    t = tower_for_orders(CTX, 2)
    assert embed_exact(twisted_bernoulli_exact(2, 2, 1), t) == CTX(Fraction(1, 2))
