"""The h-extended p-adic twisted L-function: level-N partial sums (series and
Mazur-integral forms), the h = s - 1 specialization, Euler-corrected values at
negative integers and the interpolation cross-check between them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from qtwist.characters import DirichletCharacter, TwistedCharacter, trivial_character
from qtwist.cyclotomic import ExtElement, ExtensionTower, RootOfUnity
from qtwist.errors import DomainError, VerificationFailure
from qtwist.measures import MazurType, RegularizationParam, euler_rhs, mazur_bracket, riemann_integrate
from qtwist.padic import INF, PadicNumber, angle, angle_pow, q_admissible, qnum, teichmuller
from qtwist.qbernoulli import QSetting

SValue = Union[int, Fraction, PadicNumber]


@dataclass(frozen=True)
class LSetting:
    """Everything an L-value depends on. ``branch`` fixes omega^(s-1) for non-integer s;
    ``mazur`` selects the bracket ("weighted" or "standard", identical at h = 1)."""

    tower: ExtensionTower
    q: PadicNumber
    h: int = 1
    chi: DirichletCharacter = field(default_factory=trivial_character)
    xi: Optional[RootOfUnity] = None
    alpha: int = 2
    N_max: int = 4
    branch: int = 0
    mazur: str = "weighted"

    def __post_init__(self):
        if not q_admissible(self.q):
            raise DomainError("q is not admissible")
        if math.gcd(self.chi.l, self.tower.p) != 1:
            raise DomainError(f"conductor {self.chi.l} must be prime to p")
        RegularizationParam(self.alpha, self.chi.l, self.tower.p)

    @property
    def p(self) -> int:
        return self.tower.p

    @property
    def l(self) -> int:
        return self.chi.l

    @property
    def root(self) -> RootOfUnity:
        return self.xi or self.tower.root_of_unity(1)

    @property
    def qsetting(self) -> QSetting:
        return QSetting(self.tower, self.q, self.h, self.l)

    def with_h(self, h: int) -> "LSetting":
        return LSetting(self.tower, self.q, h, self.chi, self.xi, self.alpha, self.N_max, self.branch, self.mazur)

    def metadata(self) -> dict:
        return {
            "p": self.p, "q": self.q.render(), "h": self.h, "chi_modulus": self.chi.l,
            "chi_index": self.chi.index, "xi_order": self.root.order, "alpha": self.alpha,
            "branch": self.branch, "mazur": self.mazur,
        }


def _is_int(s) -> bool:
    return isinstance(s, int) or (isinstance(s, Fraction) and s.denominator == 1)


def _omega(n: int, e: int, st: LSetting) -> PadicNumber:
    w = teichmuller(n % st.p, st.q.ctx)
    return w ** (e % (st.p - 1))


def series_factor(n: int, e: int, s: SValue, st: LSetting, literal: Optional[bool] = None) -> PadicNumber:
    """``[n]^(e-s) omega(n)^(s-1)`` for a p-unit n.

    Integer s uses literal powers. Otherwise the factor is read as
    ``<n>^(e-s) omega^(e-b) omega^(b-1)`` with b the declared branch class.
    """
    literal = _is_int(s) if literal is None else literal
    if literal:
        s = int(s)
        return qnum(n, st.q) ** (e - s) * _omega(n, s - 1, st)
    b = st.branch
    return angle_pow(n, e - s if not isinstance(s, PadicNumber) else st.q.ctx(e) - s, st.q) * \
        _omega(n, e - b, st) * _omega(n, b - 1, st)


def _check_s(s):
    if _is_int(s) and int(s) == 1:
        raise DomainError("s = 1 is a pole")


def _char_xi(n: int, st: LSetting) -> Optional[ExtElement]:
    t = st.tower
    c = st.chi.evaluate(n, t)
    if c.is_exact_zero():
        return None
    xi = st.root
    if xi.order > 1:
        c = c * xi.power(n).value
    return c


def l_value_series(s: SValue, st: LSetting, N: int) -> ExtElement:
    """Level-N partial sum over 1 <= n < l p^N, p not dividing n, of the two-term
    series weighted by the Mazur bracket."""
    _check_s(s)
    t, q, h, p = st.tower, st.q, st.h, st.p
    ctx = q.ctx
    sv = ctx(s)
    coef = (1 - sv + h) / (1 - sv) * (q - 1)
    first = not (_is_int(s) and h + 1 == int(s))
    L = st.l * p ** N
    total = t.zero()
    for n in range(1, L):
        if n % p == 0:
            continue
        cx = _char_xi(n, st)
        if cx is None:
            continue
        qh = q ** (h * n)
        scal = qh * series_factor(n, 0, s, st)
        if first:
            scal = scal + coef * qh * series_factor(n, 1, s, st)
        br = mazur_bracket(n, N, h, st.alpha, p, st.l, st.mazur)
        total = total + cx * t.scalar(scal * ctx(br))
    return total


def l_value_integral(s: SValue, st: LSetting, N: int) -> ExtElement:
    """Level-N integral over X* of ``((h+1-s) q^((h+1)x) - h q^(hx)) xi^x <x>^(-s) chi(x) omega(x)^-1``
    against the Mazur-type measure, divided by 1 - s."""
    _check_s(s)
    t, q, h, p = st.tower, st.q, st.h, st.p
    ctx = q.ctx
    sv = ctx(s) if not isinstance(s, PadicNumber) else s

    def f(a):
        if a % p == 0:
            return None
        cx = _char_xi(a, st)
        if cx is None:
            return None
        if _is_int(s):
            ang = angle(a, q) ** (-int(s))
        else:
            ang = angle_pow(a, -sv, q)
        w = teichmuller(a % p, ctx)
        scal = ((h + 1 - sv) * q ** ((h + 1) * a) - h * q ** (h * a)) * ang / w
        return cx * t.scalar(scal)

    kind = MazurType(h, st.alpha, st.mazur)
    total = riemann_integrate(f, kind, N, "X*", st.qsetting)
    return total * t.scalar(1 / (1 - sv))


def l_special_h(s: int, st: LSetting, N: int) -> ExtElement:
    """The single-series form obtained with h = s - 1."""
    if not _is_int(s):
        raise DomainError("the h = s - 1 form needs an integer s")
    s = int(s)
    if s == 0:
        raise DomainError("s = 0 makes the bracket singular")
    t, q, p = st.tower, st.q, st.p
    h = s - 1
    L = st.l * p ** N
    sub = st.with_h(h)
    total = t.zero()
    for n in range(1, L):
        if n % p == 0:
            continue
        cx = _char_xi(n, sub)
        if cx is None:
            continue
        br = mazur_bracket(n, N, h, st.alpha, p, st.l, st.mazur)
        scal = q ** (h * n) * series_factor(n, 0, s, sub) * q.ctx(br)
        total = total + cx * t.scalar(scal)
    return total


def l_value_at_negative(m: int, st: LSetting, sign: int = 1, omega: bool = True) -> ExtElement:
    """``sign/m`` times the Euler-corrected combination for weight m.

    With ``omega`` the character is chi * omega^(-m) (period l p), otherwise chi itself.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    psi = TwistedCharacter(st.chi, m, st.p) if omega else st.chi
    val = euler_rhs(m, psi, st.root, st.alpha, st.qsetting)
    return val * st.tower.scalar(Fraction(sign, m))


VARIANTS = ((1, True), (-1, True), (1, False), (-1, False))


@dataclass
class InterpolationReport:
    m: int
    levels: list
    defects: dict          # (sign, omega) -> per-level defect valuations
    precision: list
    sign: Optional[int] = None
    omega: Optional[bool] = None
    coincident: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "levels": self.levels,
            "sign": self.sign,
            "omega_factor": self.omega,
            "coincident_variants": [f"sign={s:+d},omega={o}" for s, o in self.coincident],
            "defects": {f"sign={s:+d},omega={o}": [str(v) for v in d] for (s, o), d in self.defects.items()},
            "precision": [str(v) for v in self.precision],
        }


def _converges(defects: list, precision: list, levels: list, c) -> bool:
    """Defect at level N is at least N - c (or at working precision) and grows overall."""
    at_prec = [d >= pr - 2 for d, pr in zip(defects, precision)]
    if not all(ok or d >= N - c for d, N, ok in zip(defects, levels, at_prec)):
        return False
    return all(at_prec) or defects[-1] > defects[0]


def strictly_increasing(defects: list) -> bool:
    return all(b > a for a, b in zip(defects, defects[1:]))


def interpolation_check(m: int, st: LSetting, levels=None, strict: bool = True, c=3) -> InterpolationReport:
    """Compare the series at s = 1 - m with the four signed / omega variants of the closed form.

    A variant converges when its defect at level N is >= N - c and grows over the
    sampled levels. Exactly one variant must converge, except that variants
    whose closed forms coincide (omega^m = 1, where chi and chi omega^-m agree on
    units) count as one; the omega variant is then reported and the tie recorded.
    Otherwise :class:`VerificationFailure` is raised (unless ``strict`` is False).
    """
    levels = list(levels or range(2, st.N_max + 1))
    series = [l_value_series(1 - m, st, N) for N in levels]
    closed = {}
    for omega in (True, False):
        base = l_value_at_negative(m, st, 1, omega)
        closed[(1, omega)] = base
        closed[(-1, omega)] = -base
    defects, precision = {}, []
    for v in series:
        precision.append(min(v.prec, min(c.prec for c in closed.values())))
    for key in VARIANTS:
        defects[key] = [v.agreement(closed[key]) for v in series]
    good = [k for k in VARIANTS if _converges(defects[k], precision, levels, c)]
    rep = InterpolationReport(m, levels, defects, precision)
    if len(good) > 1:
        ref = closed[good[0]]
        if all(closed[k].agreement(ref) >= min(ref.prec, closed[k].prec) - 2 for k in good[1:]):
            rep.coincident = good
            good = [k for k in good if k[1]] or good[:1]
    if len(good) == 1:
        rep.sign, rep.omega = good[0]
    elif strict:
        raise VerificationFailure(f"interpolation ambiguous for m={m}: converging variants {good}; "
                                  f"defects {rep.as_dict()['defects']}")
    return rep


__all__ = [
    "INF",
    "InterpolationReport",
    "LSetting",
    "VARIANTS",
    "interpolation_check",
    "l_special_h",
    "l_value_at_negative",
    "l_value_integral",
    "l_value_series",
    "series_factor",
    "strictly_increasing",
]
