from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qtwist.characters import character, trivial_character
from qtwist.cyclotomic import tower_for_orders
from qtwist.errors import DomainError, InsufficientLevel
from qtwist.measures import (
    INF,
    Ball,
    BaseQ,
    MazurType,
    Measure,
    Regularized,
    RegularizationParam,
    ResidueOps,
    TwistedMoment,
    additivity_check,
    baseq_exact,
    boundedness_probe,
    character_integrand,
    euler_factor_eval,
    mazur_bracket,
    mazur_density_check,
    riemann_integrate,
)
from qtwist.padic import PadicContext
from qtwist.qbernoulli import QSetting, beta_generalized

CTX = PadicContext(3, 30)
T1 = tower_for_orders(CTX, 1)
CHI4 = character(4, 1)
T34 = tower_for_orders(CTX, 3, CHI4.order)
S1 = QSetting(T1, CTX(4), 1)


def agree(a, b, slack=2):
    return a.agreement(b) >= min(a.prec, b.prec) - slack


# -- balls and residues -------------------------------------------------------------

@given(st.integers(0, 4), st.integers(0, 10**6), st.sampled_from([1, 2, 4]))
def test_children_partition(N, a, l):
    b = Ball(a % (l * 3 ** N), N, 3, l)
    kids = b.children()
    assert len(kids) == 3
    for k in range(3 * 3):
        x = b.a + k * b.modulus
        assert b.contains(x)
        assert sum(k.contains(x) for k in kids) == 1


@given(st.integers(-10**6, 10**6), st.integers(0, 5))
def test_residue_ops(x, N):
    f, w = ResidueOps.frac(x, N, 3, 2), ResidueOps.whole(x, N, 3, 2)
    assert f + w == x
    assert 0 <= f < 2 * 3 ** N
    assert w % (2 * 3 ** N) == 0


def test_ball_validation():
    with pytest.raises(ValueError):
        Ball(9, 2, 3)
    with pytest.raises(ValueError):
        Ball(0, -1, 3)


def test_regularization_param():
    assert RegularizationParam(2, 1, 3).inverse_mod(9) == 5
    with pytest.raises(DomainError):
        RegularizationParam(1, 1, 3)
    with pytest.raises(DomainError):
        RegularizationParam(6, 1, 3)
    with pytest.raises(DomainError):
        RegularizationParam(2, 4, 3)


# -- additivity -----------------------------------------------------------------------

def test_baseq_pinned():
    q = Fraction(4)
    parts = sum(baseq_exact(Ball(a, 2, 3), q) for a in (0, 3, 6))
    assert parts == Fraction(4161, 87381) == Fraction(1, 21) == baseq_exact(Ball(0, 1, 3), q)
    assert Measure(BaseQ(), S1).value(Ball(0, 1, 3)) == CTX(Fraction(1, 21))


def test_baseq_exact_additivity():
    for N in range(4):
        for a in range(3 ** N):
            assert additivity_check(BaseQ(), Ball(a, N, 3), S1) == INF


@pytest.mark.parametrize("xi_order", [1, 3])
@pytest.mark.parametrize("h,n", [(0, 2), (1, 1), (2, 3)])
def test_twisted_moment_additivity(xi_order, h, n):
    T = tower_for_orders(CTX, 3)
    S = QSetting(T, CTX(4), h)
    kind = TwistedMoment(n, T.root_of_unity(xi_order), h)
    m = Measure(kind, S)
    for N in range(3):
        for a in range(3 ** N):
            v, pr = additivity_check(kind, Ball(a, N, 3), S, m, with_precision=True)
            assert v >= pr - 2


def test_regularized_additivity():
    T = tower_for_orders(CTX, 3)
    S = QSetting(T, CTX(4), 1)
    kind = Regularized(2, T.root_of_unity(3), 1, 2)
    m = Measure(kind, S)
    for N in range(3):
        for a in range(3 ** N):
            v, pr = additivity_check(kind, Ball(a, N, 3), S, m, with_precision=True)
            assert v >= pr - 2


def test_mazur_additive_at_h1_only():
    for a in range(3):
        assert additivity_check(MazurType(1, 2), Ball(a, 1, 3), S1) >= CTX.M - 2
    bad = [additivity_check(MazurType(2, 2), Ball(a, 1, 3), QSetting(T1, CTX(4), 2)) for a in range(3)]
    assert min(bad) < CTX.M - 2


def test_mazur_bracket_variants():
    for a in range(9):
        assert mazur_bracket(a, 2, 1, 2, 3) == mazur_bracket(a, 2, 1, 2, 3, variant="standard")
    # a = 5, alpha = 2, L = 3: [10]_1 / 3 = 3
    assert mazur_bracket(5, 1, 2, 2, 3) == Fraction(-1, 6) + 3
    with pytest.raises(DomainError):
        mazur_bracket(1, 1, -1, 2, 3)
    with pytest.raises(ValueError):
        mazur_bracket(1, 1, 1, 2, 3, variant="other")


# -- integrals ---------------------------------------------------------------------

def test_domain_partition_exact():
    S = QSetting(T34, CTX(4), 1, 4)
    kind = TwistedMoment(2, T34.root_of_unity(3), 1)
    m = Measure(kind, S)
    f = character_integrand(CHI4, T34)
    for N in (1, 2):
        whole = riemann_integrate(f, kind, N, "X", S, m)
        parts = riemann_integrate(f, kind, N, "X*", S, m) + riemann_integrate(f, kind, N, "pX", S, m)
        assert whole.agreement(parts) >= whole.prec - 1


@pytest.mark.parametrize("n", [1, 2])
def test_character_integral_is_beta(n):
    S = QSetting(T34, CTX(4), 1, 4)
    xi = T34.root_of_unity(3)
    kind = TwistedMoment(n, xi, 1)
    closed = beta_generalized(n, 0, S, xi, CHI4)
    for N in (1, 2, 3):
        v = riemann_integrate(character_integrand(CHI4, T34), kind, N, "X", S)
        assert agree(v, closed)


def test_integrate_errors():
    with pytest.raises(InsufficientLevel):
        riemann_integrate(lambda a: None, BaseQ(), 0, "X", S1)
    with pytest.raises(ValueError):
        riemann_integrate(lambda a: None, BaseQ(), 1, "Y", S1)


@pytest.mark.parametrize("chi,xi_order,n,alpha", [(None, 1, 1, 2), (CHI4, 3, 1, 5), (CHI4, 3, 2, 7)])
def test_euler_identity(chi, xi_order, n, alpha):
    l = chi.l if chi else 1
    S = QSetting(T34, CTX(4), 1, l)
    for N in (2, 3):
        lhs, rhs = euler_factor_eval(n, chi, T34.root_of_unity(xi_order), alpha, S, N)
        assert agree(lhs, rhs)


def test_mazur_density_convergence():
    S = QSetting(T34, CTX(4), 1, 4)
    xi = T34.root_of_unity(3)
    ds = [mazur_density_check(1, CHI4, xi, 5, S, N) for N in (2, 3, 4)]
    assert all(d >= N - 3 for d, N in zip(ds, (2, 3, 4)))
    assert ds[-1] > ds[0]


@pytest.mark.parametrize("h", [0, 2])
def test_mazur_density_standard_bracket_other_h(h):
    S = QSetting(T1, CTX(4), h)
    ds = [mazur_density_check(1, None, None, 2, S, N, "standard") for N in (2, 3, 4)]
    assert all(d >= N - 3 for d, N in zip(ds, (2, 3, 4)))


def test_boundedness():
    base = boundedness_probe(BaseQ(), S1, 4)
    assert base == [-1, -2, -3, -4]
    reg = boundedness_probe(Regularized(1, None, 1, 2), S1, 4)
    assert len(set(reg)) == 1
    assert min(boundedness_probe(MazurType(1, 2), S1, 4)) >= -1
