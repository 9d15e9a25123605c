"""Ball-indexed distributions and measures on X = lim Z/(l p^N).

A ball ``a + l p^N Z_p`` is a :class:`Ball`; the four measure kinds are small
frozen dataclasses and :class:`Measure` binds one of them to a :class:`QSetting`,
caching the per-level constants so that enumerating all balls of a level is cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from qtwist.characters import TwistedCharacter, trivial_character
from qtwist.cyclotomic import ExtElement, RootOfUnity, xi_power
from qtwist.errors import DomainError, InsufficientLevel
from qtwist.padic import INF, PadicNumber, angle, qnum, qpow, teichmuller
from qtwist.qbernoulli import QSetting, _beta_core_coeffs, _eval_coeffs, beta_generalized

DOMAINS = ("X", "X*", "pX")


@dataclass(frozen=True)
class Ball:
    """The ball ``a + l p^N Z_p`` with ``0 <= a < l p^N``."""

    a: int
    N: int
    p: int
    l: int = 1

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("level must be >= 0")
        if not 0 <= self.a < self.modulus:
            raise ValueError(f"residue {self.a} outside [0, {self.modulus})")

    @property
    def modulus(self) -> int:
        return self.l * self.p ** self.N

    def children(self) -> list["Ball"]:
        m = self.modulus
        return [Ball(self.a + i * m, self.N + 1, self.p, self.l) for i in range(self.p)]

    def contains(self, x: int) -> bool:
        return (x - self.a) % self.modulus == 0


class ResidueOps:
    """``{x}_N`` (least nonnegative residue mod l p^N) and ``[x]_N = x - {x}_N``."""

    @staticmethod
    def frac(x: int, N: int, p: int, l: int = 1) -> int:
        return x % (l * p ** N)

    @staticmethod
    def whole(x: int, N: int, p: int, l: int = 1) -> int:
        return x - x % (l * p ** N)


@dataclass(frozen=True)
class RegularizationParam:
    """An integer alpha != 1 standing for a unit of X (prime to l and p)."""

    alpha: int
    l: int
    p: int

    def __post_init__(self):
        if self.alpha == 1:
            raise DomainError("alpha must differ from 1")
        if math.gcd(self.alpha, self.l * self.p) != 1:
            raise DomainError(f"alpha={self.alpha} must be prime to l*p={self.l * self.p}")

    def inverse_mod(self, modulus: int) -> int:
        return pow(self.alpha, -1, modulus) if modulus > 1 else 0


@dataclass(frozen=True)
class BaseQ:
    pass


@dataclass(frozen=True)
class TwistedMoment:
    n: int
    xi: Optional[RootOfUnity] = None
    h: int = 0


@dataclass(frozen=True)
class Regularized:
    n: int
    xi: Optional[RootOfUnity]
    h: int
    alpha: int


@dataclass(frozen=True)
class MazurType:
    """``variant="weighted"`` is the h-weighted bracket; ``"standard"`` the classical
    Mazur bracket ``(1/alpha - 1)/2 + [a alpha]_N / (alpha l p^N)`` (equal at h = 1)."""

    h: int
    alpha: int
    variant: str = "weighted"


MeasureKind = Union[BaseQ, TwistedMoment, Regularized, MazurType]


def mazur_bracket(a: int, N: int, h: int, alpha: int, p: int, l: int = 1, variant: str = "weighted") -> Fraction:
    L = l * p ** N
    g = (a * alpha - (a * alpha) % L) // L
    if variant == "standard":
        return (Fraction(1, alpha) - 1) / 2 + Fraction(g, alpha)
    if variant != "weighted":
        raise ValueError(f"unknown Mazur variant {variant!r}")
    if h == -1:
        raise DomainError("h = -1 makes the Mazur bracket singular")
    return (Fraction(1, alpha) - 1) / (h + 1) + Fraction(h * g, alpha)


class _MomentLevel:
    """Per-level constants of the twisted-moment distribution for fixed (q, xi)."""

    def __init__(self, n, h, q: PadicNumber, xi: RootOfUnity, L: int, tower):
        self.tower = tower
        self.q = q
        self.h = h
        self.xi = xi
        self.coeffs = _beta_core_coeffs(n, h, q ** L, xi.power(L), tower)
        self.pref = tower.scalar(qnum(L, q) ** (n - 1))

    def value(self, a: int) -> ExtElement:
        t = self.tower
        qa = self.q ** a
        v = _eval_coeffs(self.coeffs, qa, t) * self.pref * t.scalar(self.q ** (self.h * a))
        if self.xi.order > 1:
            v = v * self.xi.power(a).value
        return v


class Measure:
    """A measure kind bound to a setting; ``value(ball)`` is the ball function."""

    def __init__(self, kind: MeasureKind, setting: QSetting):
        self.kind = kind
        self.setting = setting
        self.tower = setting.tower
        self.p = setting.p
        self.l = setting.l
        self._levels: dict = {}
        if isinstance(kind, (Regularized, MazurType)):
            self.reg = RegularizationParam(kind.alpha, self.l, self.p)
        if isinstance(kind, Regularized):
            q = setting.q
            self.q_alpha = qpow(q, Fraction(1, kind.alpha))
            self.xi = kind.xi or self.tower.root_of_unity(1)
            self.xi_alpha = self.xi.inv_power(kind.alpha)
            self.c_alpha = self.tower.scalar(qnum(Fraction(1, kind.alpha), q) ** (kind.n - 1) / kind.alpha)

    def ball(self, a: int, N: int) -> Ball:
        return Ball(a % (self.l * self.p ** N), N, self.p, self.l)

    def _level(self, key, N, q, xi, n, h):
        k = (key, N)
        if k not in self._levels:
            self._levels[k] = _MomentLevel(n, h, q, xi, self.l * self.p ** N, self.tower)
        return self._levels[k]

    def value(self, ball: Ball) -> ExtElement:
        kind, t = self.kind, self.tower
        a, N = ball.a, ball.N
        L = ball.modulus
        if isinstance(kind, BaseQ):
            q = self.setting.q
            return t.scalar(q ** a / qnum(L, q))
        if isinstance(kind, TwistedMoment):
            xi = kind.xi or t.root_of_unity(1)
            return self._level("tm", N, self.setting.q, xi, kind.n, kind.h).value(a)
        if isinstance(kind, Regularized):
            main = self._level("tm", N, self.setting.q, self.xi, kind.n, kind.h).value(a)
            scaled = self._level("alpha", N, self.q_alpha, self.xi_alpha, kind.n, kind.h)
            return main - self.c_alpha * scaled.value((kind.alpha * a) % L)
        if isinstance(kind, MazurType):
            br = mazur_bracket(a, N, kind.h, kind.alpha, self.p, self.l, kind.variant)
            return t.scalar(self.setting.q.ctx(br))
        raise TypeError(f"unknown measure kind {kind!r}")


def measure_value(kind: MeasureKind, ball: Ball, setting: QSetting) -> ExtElement:
    return Measure(kind, setting).value(ball)


def baseq_exact(ball: Ball, q: Fraction) -> Fraction:
    """``q^a / [l p^N; q]`` over Q for a rational q."""
    q = Fraction(q)
    L = ball.modulus
    qn = Fraction(L) if q == 1 else (1 - q ** L) / (1 - q)
    return q ** ball.a / qn


def additivity_check(kind: MeasureKind, ball: Ball, setting: QSetting, measure: Optional[Measure] = None,
                     with_precision: bool = False):
    """Valuation of ``sum_i mu(a + i l p^N, N+1) - mu(a, N)`` over i = 0..p-1.

    BaseQ is checked over Q with the rational lift of q, so its defect is exact.
    With ``with_precision`` the absolute precision of the difference is returned too.
    """
    if isinstance(kind, BaseQ):
        q = setting.q.lift()
        d = sum(baseq_exact(c, q) for c in ball.children()) - baseq_exact(ball, q)
        v = INF if d == 0 else setting.q.ctx(d).valuation()
        return (v, INF) if with_precision else v
    m = measure or Measure(kind, setting)
    total = setting.tower.zero()
    for c in ball.children():
        total = total + m.value(c)
    diff = total - m.value(ball)
    v = total.agreement(m.value(ball))
    return (v, diff.prec) if with_precision else v


def _in_domain(a: int, p: int, domain: str) -> bool:
    if domain == "X":
        return True
    if domain == "X*":
        return a % p != 0
    if domain == "pX":
        return a % p == 0
    raise ValueError(f"domain must be one of {DOMAINS}")


def riemann_integrate(f: Callable[[int], Optional[ExtElement]], kind: MeasureKind, N: int, domain: str,
                      setting: QSetting, measure: Optional[Measure] = None) -> ExtElement:
    """``sum f(a) mu(a + l p^N)`` over the level-N residues lying in ``domain``.

    ``f`` gets the residue a and may return None for a zero value.
    """
    if N < 1:
        raise InsufficientLevel("level N >= 1 is needed to separate X* from pX")
    m = measure or Measure(kind, setting)
    t = setting.tower
    L = setting.l * setting.p ** N
    total = t.zero()
    for a in range(L):
        if not _in_domain(a, setting.p, domain):
            continue
        fa = f(a)
        if fa is None or fa.is_exact_zero():
            continue
        total = total + fa * m.value(Ball(a, N, setting.p, setting.l))
    return total


def character_integrand(chi, tower) -> Callable[[int], ExtElement]:
    cache: dict = {}

    def f(a):
        r = a % chi.period
        if r not in cache:
            cache[r] = chi.evaluate(r, tower)
        return cache[r]

    return f


def euler_rhs(n: int, chi, xi: RootOfUnity, alpha: int, setting: QSetting) -> ExtElement:
    """Four-term Euler-corrected combination of generalized twisted q-Bernoulli values.

    ``beta(q, xi) - [p]^(n-1) chi(p) beta(q^p, xi^p)
      - alpha^-1 [1/alpha]^(n-1) chi(1/alpha) beta(q^(1/alpha), xi^(1/alpha))
      + alpha^-1 [p/alpha]^(n-1) chi(p/alpha) beta(q^(p/alpha), xi^(p/alpha))``
    """
    t, q, p = setting.tower, setting.q, setting.p
    chi = chi or trivial_character()
    RegularizationParam(alpha, setting.l, p)
    P = chi.period
    ainv = pow(alpha, -1, P) if P > 1 else 0

    def term(y: Fraction, residue: int, xi_y: RootOfUnity):
        c = chi.evaluate(residue % P if P > 1 else 0, t)
        if c.is_exact_zero():
            return t.zero()
        qy = q ** y.numerator if y.denominator == 1 else qpow(q, y)
        b = beta_generalized(n, 0, setting.with_q(qy), xi_y, chi)
        return b * c * t.scalar(qnum(y if y.denominator > 1 else y.numerator, q) ** (n - 1))

    total = beta_generalized(n, 0, setting, xi, chi)
    total = total - term(Fraction(p), p, xi.power(p))
    ia = t.scalar(Fraction(1, alpha))
    total = total - term(Fraction(1, alpha), ainv, xi.inv_power(alpha)) * ia
    total = total + term(Fraction(p, alpha), p * ainv, xi_power(xi, p, alpha)) * ia
    return total


def euler_factor_eval(n: int, chi, xi: Optional[RootOfUnity], alpha: int, setting: QSetting, N: int):
    """(lhs, rhs): the level-N integral of chi over X* against the regularized
    measure, and the four-term closed form."""
    xi = xi or setting.tower.root_of_unity(1)
    chi = chi or trivial_character()
    kind = Regularized(n, xi, setting.h, alpha)
    lhs = riemann_integrate(character_integrand(chi, setting.tower), kind, N, "X*", setting)
    return lhs, euler_rhs(n, chi, xi, alpha, setting)


def mazur_density(n: int, chi, xi: RootOfUnity, setting: QSetting) -> Callable[[int], Optional[ExtElement]]:
    """``a -> ((h+n) q^((h+1)a) - h q^(ha)) <a>^(n-1) xi^a chi(a) omega(a)^-1`` on p-units."""
    t, q, h, p = setting.tower, setting.q, setting.h, setting.p
    ctx = q.ctx

    def f(a):
        if a % p == 0:
            return None
        c = chi.evaluate(a % chi.period if chi.period > 1 else 0, t)
        if c.is_exact_zero():
            return None
        w = teichmuller(a % p, ctx)
        scal = ((h + n) * q ** ((h + 1) * a) - h * q ** (h * a)) * angle(a, q) ** (n - 1) / w
        v = c * t.scalar(scal)
        if xi.order > 1:
            v = v * xi.power(a).value
        return v

    return f


def mazur_density_check(n: int, chi, xi: Optional[RootOfUnity], alpha: int, setting: QSetting, N: int,
                        variant: str = "weighted"):
    """Valuation of (integral of chi_n against the regularized measure over X*) minus
    (integral of the Mazur density against the Mazur-type measure), both at level N."""
    xi = xi or setting.tower.root_of_unity(1)
    chi = chi or trivial_character()
    chi_n = TwistedCharacter(chi, n, setting.p)
    lhs = riemann_integrate(character_integrand(chi_n, setting.tower), Regularized(n, xi, setting.h, alpha),
                            N, "X*", setting)
    rhs = riemann_integrate(mazur_density(n, chi, xi, setting), MazurType(setting.h, alpha, variant),
                            N, "X*", setting)
    return lhs.agreement(rhs)


def boundedness_probe(kind: MeasureKind, setting: QSetting, maxN: int, minN: int = 1) -> list:
    """Per-level minimum valuation of the ball values for N = minN..maxN."""
    m = Measure(kind, setting)
    out = []
    for N in range(minN, maxN + 1):
        L = setting.l * setting.p ** N
        low = INF
        for a in range(L):
            v = m.value(Ball(a, N, setting.p, setting.l))
            if not v.is_zero():
                low = min(low, v.valuation())
        out.append(low)
    return out


__all__ = [
    "Ball",
    "BaseQ",
    "DOMAINS",
    "MazurType",
    "Measure",
    "MeasureKind",
    "Regularized",
    "RegularizationParam",
    "ResidueOps",
    "TwistedMoment",
    "additivity_check",
    "baseq_exact",
    "boundedness_probe",
    "character_integrand",
    "euler_factor_eval",
    "euler_rhs",
    "mazur_bracket",
    "mazur_density",
    "mazur_density_check",
    "measure_value",
    "riemann_integrate",
]
