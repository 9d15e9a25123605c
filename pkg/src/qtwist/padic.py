"""Capped-relative p-adic numbers, log/exp, q-numbers and the Teichmüller character.

A nonzero :class:`PadicNumber` is ``p**v * u`` with ``u`` a unit known modulo
``p**(prec - v)``; ``prec`` is the absolute precision and never exceeds
``v + ctx.M``. A number whose digits all cancelled is "zero to precision"
(``u == 0``, ``v == prec``); the exact zero has ``prec == inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from qtwist.errors import DomainError, PrecisionError

INF = math.inf


def vp(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class PadicContext:
    p: int
    M: int = 30
    allow_p2: bool = False

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.p == 2 and not self.allow_p2:
            raise ValueError("p = 2 needs allow_p2=True (then v(q-1) >= 2 is required)")
        if self.M < 1:
            raise ValueError("precision M must be >= 1")

    @property
    def min_qv(self) -> int:
        """Smallest v(q - 1) accepted for q, and smallest v(x) accepted by exp."""
        return 2 if self.p == 2 else 1

    def __call__(self, x, den: int = 1) -> "PadicNumber":
        if isinstance(x, PadicNumber):
            return x
        if isinstance(x, Fraction):
            return padic_from_rational(x.numerator, x.denominator, self)
        return padic_from_rational(x, den, self)

    def zero(self) -> "PadicNumber":
        return PadicNumber(self, 0, 0, INF)

    def one(self) -> "PadicNumber":
        return PadicNumber(self, 0, 1, self.M)


Scalar = Union[int, Fraction, "PadicNumber"]


class PadicNumber:
    __slots__ = ("ctx", "v", "u", "prec")

    def __init__(self, ctx: PadicContext, v, u: int, prec):
        self.ctx = ctx
        self.v = v
        self.u = u
        self.prec = prec

    # -- construction helpers -------------------------------------------------

    @classmethod
    def _make(cls, ctx: PadicContext, v: int, u: int, prec) -> "PadicNumber":
        """Normalize ``p**v * u`` known to absolute precision ``prec``."""
        p = ctx.p
        prec = min(prec, INF)
        if u == 0:
            if prec == INF:
                return cls(ctx, 0, 0, INF)
            return cls(ctx, prec, 0, prec)
        while u % p == 0:
            u //= p
            v += 1
        prec = min(prec, v + ctx.M)
        if v >= prec:
            return cls(ctx, prec, 0, prec)
        return cls(ctx, v, u % p ** (prec - v), prec)

    # -- predicates -------------------------------------------------------------

    @property
    def p(self) -> int:
        return self.ctx.p

    def is_exact_zero(self) -> bool:
        return self.prec == INF

    def is_zero(self) -> bool:
        """True when zero to the known precision (includes exact zero)."""
        return self.u == 0

    def valuation(self):
        return INF if self.is_exact_zero() else self.v

    @property
    def rel(self) -> int:
        return 0 if self.u == 0 else self.prec - self.v

    # -- arithmetic ---------------------------------------------------------------

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.ctx.p != self.ctx.p:
                raise ValueError("mixing p-adic numbers for different primes")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        prec = min(self.prec, other.prec)
        v0 = min(self.v, other.v)
        if v0 >= prec:
            return PadicNumber(self.ctx, prec, 0, prec)
        p = self.ctx.p
        n = self.u * p ** (self.v - v0) + other.u * p ** (other.v - v0)
        return PadicNumber._make(self.ctx, v0, n % p ** (prec - v0), prec)

    __radd__ = __add__

    def __neg__(self):
        if self.u == 0:
            return self
        return PadicNumber(self.ctx, self.v, (-self.u) % self.p ** self.rel, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero() or other.is_exact_zero():
            return self.ctx.zero()
        if self.u == 0 or other.u == 0:
            return PadicNumber._make(self.ctx, 0, 0, min(self.prec + other.v, other.prec + self.v))
        rel = min(self.rel, other.rel)
        v = self.v + other.v
        return PadicNumber(self.ctx, v, (self.u * other.u) % self.p ** rel, v + rel)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.is_exact_zero():
            raise ZeroDivisionError("inverse of exact zero")
        if self.u == 0:
            raise PrecisionError("inverse of a number that is zero to precision")
        rel = self.rel
        return PadicNumber(self.ctx, -self.v, pow(self.u, -1, self.p ** rel), rel - self.v)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return self.ctx.one()
        if self.is_exact_zero():
            return self
        if self.u == 0:
            return PadicNumber._make(self.ctx, 0, 0, self.prec + (n - 1) * self.v if self.v > 0 else self.prec)
        rel = self.rel
        v = self.v * n
        return PadicNumber(self.ctx, v, pow(self.u, n, self.p ** rel), v + rel)

    # -- comparison and conversion ---------------------------------------------

    def agreement(self, other) -> float:
        """Valuation of ``self - other``, capped at the known precision."""
        d = self - self._coerce(other)
        return d.prec if d.u == 0 else d.v

    def __eq__(self, other):
        other = self._coerce(other) if isinstance(other, (int, Fraction, PadicNumber)) else NotImplemented
        if other is NotImplemented:
            return other
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.p, self.v, self.u))

    def lift(self) -> Fraction:
        """A rational representative (exact for the known digits)."""
        if self.u == 0:
            return Fraction(0)
        return Fraction(self.u) * Fraction(self.p) ** self.v

    def to_int(self, modulus_exp: int) -> int:
        """Representative modulo ``p**modulus_exp``; requires an integral value."""
        if self.u == 0:
            return 0
        if self.v < 0:
            raise DomainError("not a p-adic integer")
        if self.prec < modulus_exp:
            raise PrecisionError(f"known to O(p^{self.prec}) only, needed O(p^{modulus_exp})")
        return (self.u * self.p ** self.v) % self.p ** modulus_exp

    def digits(self) -> list[int]:
        """Base-p digits of the unit part, least significant first."""
        out, u = [], self.u
        for _ in range(self.rel):
            out.append(u % self.p)
            u //= self.p
        return out

    def render(self) -> str:
        """Little-endian expansion ``c_v*p^v + ... + O(p^k)``."""
        if self.is_exact_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.digits()):
            if c:
                e = self.v + i
                terms.append(str(c) if e == 0 else f"{c}*{self.p}^{e}")
        terms.append(f"O({self.p}^{self.prec})")
        return " + ".join(terms)

    def __repr__(self):
        return f"PadicNumber({self.render()})"


def padic_from_rational(num: int, den: int, ctx: PadicContext) -> PadicNumber:
    if den == 0:
        raise ValueError("zero denominator")
    if num == 0:
        return ctx.zero()
    p = ctx.p
    vn, vd = vp(num, p), vp(den, p)
    un, ud = num // p ** vn, den // p ** vd
    mod = p ** ctx.M
    u = (un * pow(ud, -1, mod)) % mod
    v = vn - vd
    return PadicNumber(ctx, v, u, v + ctx.M)


# -- analytic functions ------------------------------------------------------------


def log_p(x: PadicNumber) -> PadicNumber:
    """p-adic logarithm on the disc v(x - 1) >= 1, truncated at the known precision."""
    ctx = x.ctx
    z = x - 1
    if z.is_exact_zero() or z.is_zero():
        return PadicNumber._make(ctx, 0, 0, x.prec)
    if z.v < 1 or (ctx.p == 2 and z.v < 2):
        raise DomainError(f"log_p needs v(x-1) >= {ctx.min_qv}, got {z.v}")
    target = x.prec
    total = ctx.zero()
    power = z
    n = 1
    # term valuation n*v(z) - v(n) is increasing once n*v(z) - log_p(n) is
    while n * z.v - math.floor(math.log(n, ctx.p) + 1e-12) < target:
        term = power / n
        total = total + (term if n % 2 else -term)
        n += 1
        power = power * z
    return PadicNumber._make(ctx, total.v, total.u, min(total.prec, target)) if total.u else total


def _v_factorial(n: int, p: int) -> int:
    s, m = 0, n
    while m:
        s += m % p
        m //= p
    return (n - s) // (p - 1)


def exp_p(x: PadicNumber) -> PadicNumber:
    """p-adic exponential on v(x) >= 1 (>= 2 when p = 2)."""
    ctx = x.ctx
    if x.is_exact_zero():
        return ctx.one()
    target = x.prec
    if x.u == 0:
        return PadicNumber._make(ctx, 0, 1, target)
    if x.v < ctx.min_qv:
        raise DomainError(f"exp_p needs v(x) >= {ctx.min_qv}, got {x.v}")
    total = ctx.one()
    term = ctx.one()
    n = 1
    # v(n!) <= (n - 1)/(p - 1) keeps the stopping rule valid for all later terms
    while n * x.v - (n - 1) / (ctx.p - 1) < target:
        term = term * x / n
        total = total + term
        n += 1
    return PadicNumber._make(ctx, total.v, total.u, min(total.prec, target))


def q_admissible(q: PadicNumber) -> bool:
    d = q - 1
    return d.is_zero() or d.v >= q.ctx.min_qv


def _require_admissible(q: PadicNumber) -> None:
    if not q_admissible(q):
        raise DomainError(f"q is not admissible: need v(q-1) >= {q.ctx.min_qv}")


def _is_one(q: PadicNumber) -> bool:
    return (q - 1).is_zero()


def qpow(q: PadicNumber, x) -> PadicNumber:
    """``q**x`` for integer x, or ``exp(x log q)`` for x in Z_p (Fraction or PadicNumber)."""
    if isinstance(x, int):
        return q ** x
    _require_admissible(q)
    if _is_one(q):
        return q.ctx.one()
    arg = q.ctx(x) * log_p(q)
    return exp_p(arg)


def _qnum_int(n: int, q: PadicNumber):
    """([n; q], q**n) by binary splitting, avoiding the division by 1 - q."""
    if n == 0:
        return q.ctx.zero(), q.ctx.one()
    half, qh = _qnum_int(n // 2, q)
    total, power = half * (1 + qh), qh * qh     # [2k] = [k](1 + q^k)
    if n % 2:
        total, power = 1 + q * total, power * q
    return total, power


def qnum(x, q: PadicNumber) -> PadicNumber:
    """The q-number ``[x; q] = (1 - q**x) / (1 - q)``."""
    _require_admissible(q)
    ctx = q.ctx
    if _is_one(q):
        return ctx(x)
    if isinstance(x, int):
        if x >= 0:
            return _qnum_int(x, q)[0]
        return -(q ** x) * qnum(-x, q)
    return (1 - qpow(q, x)) / (1 - q)


@lru_cache(maxsize=None)
def _teich_int(a: int, p: int, M: int) -> int:
    mod = p ** M
    x = a % p
    while True:
        y = pow(x, p, mod)
        if y == x:
            return x
        x = y


def teichmuller(a, ctx: PadicContext) -> PadicNumber:
    """Teichmüller lift: the (p-1)-th root of unity congruent to ``a`` mod p."""
    if isinstance(a, PadicNumber):
        if a.v != 0:
            raise DomainError("Teichmüller character needs a p-adic unit")
        a = a.u
    if a % ctx.p == 0:
        raise DomainError(f"{a} is divisible by p={ctx.p}")
    return PadicNumber(ctx, 0, _teich_int(a % ctx.p, ctx.p, ctx.M), ctx.M)


def angle(x, q: PadicNumber) -> PadicNumber:
    """``<x; q> = [x; q] / omega(x)`` for a unit x."""
    ctx = q.ctx
    xv = x if isinstance(x, (int, Fraction)) else x
    if isinstance(xv, PadicNumber):
        if xv.v != 0:
            raise DomainError("<x> needs a p-adic unit")
        w = teichmuller(xv.u, ctx)
    else:
        if ctx(xv).v != 0:
            raise DomainError(f"<x> needs a p-adic unit, got {xv}")
        w = teichmuller(ctx(xv).u % ctx.p, ctx)
    return qnum(xv, q) / w


def angle_pow(x, s, q: PadicNumber) -> PadicNumber:
    """``<x>**s``: plain powers for integer s, ``exp(s log <x>)`` otherwise."""
    a = angle(x, q)
    if isinstance(s, int):
        return a ** s
    return exp_p(q.ctx(s) * log_p(a))
