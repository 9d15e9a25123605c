"""Cyclotomic arithmetic, p-adic and exact.

p-adic side: the tower ``K = Q_p(zeta_m', zeta_{p^r})`` as the quotient
``Z_p[x, y] / (u(x), Phi_{p^r}(y))`` where ``u`` is a Hensel-lifted irreducible
factor of ``Phi_m'`` mod p. Elements are coefficient vectors on the basis
``x^i y^j`` (index ``i*e + j``) with a common power-of-p shift.

Exact side: ``Q(zeta_m)`` as rational polynomials modulo ``Phi_m`` and truncated
power series over it, used as oracles for the classical Bernoulli numbers and
for formal q-expansions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from sympy import Poly, cyclotomic_poly, symbols
from sympy.polys.domains import ZZ
from sympy.polys.factortools import dup_zz_hensel_lift
from sympy.polys.galoistools import gf_factor_sqf, gf_from_int_poly

from qtwist.errors import PrecisionError, UnsupportedOrder
from qtwist.padic import INF, PadicContext, PadicNumber, vp

_X = symbols("x")


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first."""
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(n, _X), _X).all_coeffs()))


def multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    k, x = 1, a % n
    while x != 1:
        x = (x * a) % n
        k += 1
    return k


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def _poly_reduce(c: list, mod: tuple) -> list:
    """Remainder of c modulo a monic polynomial (both constant-term first)."""
    c = list(c)
    deg = len(mod) - 1
    for k in range(len(c) - 1, deg - 1, -1):
        t = c[k]
        if t:
            for i in range(deg):
                c[k - deg + i] -= t * mod[i]
        c[k] = 0
    return c[:deg]


# ---------------------------------------------------------------------------
# small exact linear algebra


def _det_int(rows: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    a = [list(r) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _solve(rows: list[list], rhs: list) -> list[Fraction]:
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [a[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# p-adic tower


class ExtensionTower:
    """``Q_p(zeta_m', zeta_{p^r})`` at coefficientwise precision ``ctx.M``."""

    def __init__(self, ctx: PadicContext, mprime: int = 1, r: int = 0):
        p = ctx.p
        if math.gcd(mprime, p) != 1 or mprime < 1:
            raise ValueError(f"m'={mprime} must be a positive integer prime to p={p}")
        if r < 0:
            raise ValueError("r must be >= 0")
        self.ctx, self.p, self.mprime, self.r = ctx, p, mprime, r
        self.M = ctx.M
        self.mod = p ** ctx.M
        self.f = multiplicative_order(p, mprime)
        self.e = euler_phi(p ** r) if r else 1
        self.d = self.f * self.e
        self.u_mod_p, self.u = self._unramified_factor()
        self.phi_pr = cyclotomic_coeffs(p ** r) if r else (-1, 1)
        self._build_tables()
        self._roots: dict[int, RootOfUnity] = {}

    def _unramified_factor(self):
        if self.mprime == 1:
            return (-1, 1), (-1, 1)
        phi = list(reversed(cyclotomic_coeffs(self.mprime)))
        _, factors = gf_factor_sqf(gf_from_int_poly(phi, self.p), self.p, ZZ)
        factors = sorted([[int(c) for c in fac] for fac in factors])
        chosen = factors[0]
        if len(factors) == 1:
            lifted = [int(c) for c in phi]
        else:
            lifted_all = dup_zz_hensel_lift(ZZ(self.p), [ZZ(c) for c in phi],
                                            [[ZZ(c) for c in fac] for fac in factors], self.M, ZZ)
            lifted = [int(c) for c in lifted_all[0]]
        u = tuple(c % self.mod for c in reversed(lifted))
        return tuple(reversed(chosen)), u

    def _build_tables(self):
        f, e, mod = self.f, self.e, self.mod
        self._xpow = []
        for k in range(2 * f - 1):
            c = [0] * k + [1]
            red = _poly_reduce(c, self.u) if k >= f else c + [0] * (f - 1 - k)
            self._xpow.append([(i, v % mod) for i, v in enumerate(red) if v % mod])
        self._ypow = []
        for k in range(2 * e - 1):
            c = [0] * k + [1]
            red = _poly_reduce(c, self.phi_pr) if k >= e else c + [0] * (e - 1 - k)
            self._ypow.append([(j, v) for j, v in enumerate(red) if v])

    # -- metadata ---------------------------------------------------------------

    def metadata(self) -> dict:
        return {
            "p": self.p,
            "M": self.M,
            "m_prime": self.mprime,
            "r": self.r,
            "f": self.f,
            "e": self.e,
            "unramified_factor_mod_p": list(self.u_mod_p),
            "ramified_poly": list(self.phi_pr),
        }

    def __repr__(self):
        return f"ExtensionTower(p={self.p}, m'={self.mprime}, r={self.r}, M={self.M})"

    # -- raw arithmetic on integral coefficient vectors --------------------------

    def raw_mul(self, a, b, mod: int) -> list[int]:
        if self.d == 1:
            return [(a[0] * b[0]) % mod]
        f, e = self.f, self.e
        conv = [[0] * (2 * e - 1) for _ in range(2 * f - 1)]
        for ia in range(f):
            for ja in range(e):
                ca = a[ia * e + ja]
                if not ca:
                    continue
                for ib in range(f):
                    row = conv[ia + ib]
                    for jb in range(e):
                        cb = b[ib * e + jb]
                        if cb:
                            row[ja + jb] += ca * cb
        out = [0] * self.d
        for i, row in enumerate(conv):
            yred = [0] * e
            for j, c in enumerate(row):
                if c:
                    for jj, yc in self._ypow[j]:
                        yred[jj] += c * yc
            for ii, xc in self._xpow[i]:
                for jj in range(e):
                    if yred[jj]:
                        out[ii * e + jj] += xc * yred[jj]
        return [c % mod for c in out]

    def raw_pow(self, a, n: int, mod: int) -> list[int]:
        result = self.raw_one()
        base = list(a)
        while n:
            if n & 1:
                result = self.raw_mul(result, base, mod)
            n >>= 1
            if n:
                base = self.raw_mul(base, base, mod)
        return result

    def raw_one(self) -> list[int]:
        return [1] + [0] * (self.d - 1)

    def raw_scalar(self, c: int) -> list[int]:
        return [c] + [0] * (self.d - 1)

    def mult_matrix(self, a, mod: int) -> list[list[int]]:
        """Columns are ``a * basis_w``."""
        cols = []
        for w in range(self.d):
            bw = [0] * self.d
            bw[w] = 1
            cols.append(self.raw_mul(a, bw, mod))
        return [[cols[w][k] for w in range(self.d)] for k in range(self.d)]

    # -- elements -------------------------------------------------------------------

    def element(self, coeffs, s: int = 0, prec=None) -> "ExtElement":
        if prec is None:
            prec = s + self.M
        return ExtElement._make(self, s, list(coeffs), prec)

    def zero(self) -> "ExtElement":
        return ExtElement(self, 0, (0,) * self.d, INF)

    def one(self) -> "ExtElement":
        return self.element(self.raw_one())

    def scalar(self, x) -> "ExtElement":
        if isinstance(x, ExtElement):
            return x
        x = self.ctx(x)
        if x.is_exact_zero():
            return self.zero()
        if x.u == 0:
            return ExtElement(self, x.prec, (0,) * self.d, x.prec)
        return ExtElement(self, x.v, (x.u,) + (0,) * (self.d - 1), x.prec)

    def gen_x(self) -> "ExtElement":
        c = [0] * self.d
        c[self.e if self.f > 1 else 0] = 1
        return self.element(c) if self.f > 1 else self.element(self._x_linear_root())

    def _x_linear_root(self):
        # f == 1: x is the root of the linear factor x + u0
        return [(-self.u[0]) % self.mod] + [0] * (self.d - 1)

    def gen_y(self) -> "ExtElement":
        if self.r == 0:
            return self.one()
        c = [0] * self.d
        c[1] = 1
        return self.element(c)

    def supports_order(self, n: int) -> bool:
        n1, n2 = _split_order(n, self.p)
        return n2 <= (self.p ** self.r) and (self.p ** self.r) % n2 == 0 and (
            self.mprime % n1 == 0 or n1 <= 2)

    def raw_root(self, n: int, k: int = 1) -> list[int]:
        """Raw vector of ``zeta_n ** k`` for the canonical ``zeta_n``."""
        return list(self.root_of_unity(n).power(k).value.coeffs_int())

    def root_of_unity(self, n: int) -> "RootOfUnity":
        if n in self._roots:
            return self._roots[n]
        if n < 1 or not self.supports_order(n):
            raise UnsupportedOrder(f"no root of unity of order {n} in {self!r}")
        n1, n2 = _split_order(n, self.p)
        mod = self.mod
        # zeta_n = (x y)^(m' p^r / n) keeps the choice compatible across orders
        xr = self.gen_x().coeffs_int() if self.mprime > 1 else self.raw_one()
        xy = self.raw_mul(xr, self.gen_y().coeffs_int(), mod)
        full = self.mprime * self.p ** self.r
        if self.mprime % n1 == 0:
            value = self.raw_pow(xy, full // n, mod)
        else:
            # n1 == 2 with m' odd: -1 times the p-power part
            value = [(mod - c) % mod for c in self.raw_pow(xy, full // n2, mod)]
        root = RootOfUnity(n, 1, self.element(value))
        self._roots[n] = root
        return root


def _split_order(n: int, p: int) -> tuple[int, int]:
    n2 = 1
    while n % p == 0:
        n //= p
        n2 *= p
    return n, n2


def _rational_digits(c: Fraction, p: int, t: int, k: int) -> int:
    """``c / p**t`` modulo ``p**k``; c/p**t must be p-integral."""
    if c == 0 or k <= 0:
        return 0
    vn, vd = vp(c.numerator, p), vp(c.denominator, p)
    ex = vn - vd - t
    assert ex >= 0
    mod = p ** k
    unit = (c.numerator // p ** vn) * pow(c.denominator // p ** vd, -1, mod)
    return (unit * p ** ex) % mod


class ExtElement:
    """Element ``p**s * sum c_w b_w`` of a tower, coefficients known mod ``p**(prec - s)``."""

    __slots__ = ("tower", "s", "c", "prec", "_val")

    def __init__(self, tower: ExtensionTower, s, coeffs: tuple, prec):
        self.tower, self.s, self.c, self.prec = tower, s, coeffs, prec
        self._val = None

    @classmethod
    def _make(cls, tower, s, coeffs, prec):
        p = tower.p
        if prec == INF and not any(coeffs):
            return tower.zero()
        if not any(coeffs):
            return cls(tower, prec, (0,) * tower.d, prec)
        g = 0
        for x in coeffs:
            g = math.gcd(g, x)
        k = vp(g, p)
        if k:
            coeffs = [x // p ** k for x in coeffs]
            s += k
        prec = min(prec, s + tower.M)
        if s >= prec:
            return cls(tower, prec, (0,) * tower.d, prec)
        mod = p ** (prec - s)
        return cls(tower, s, tuple(x % mod for x in coeffs), prec)

    # -- predicates -----------------------------------------------------------------

    def is_exact_zero(self) -> bool:
        return self.prec == INF

    def is_zero(self) -> bool:
        return not any(self.c)

    @property
    def rel(self) -> int:
        return 0 if self.is_zero() else self.prec - self.s

    def coeffs_int(self) -> list[int]:
        """Integer coefficient vector modulo ``p**M`` (the element must be integral)."""
        T = self.tower
        if self.is_zero():
            return [0] * T.d
        if self.s < 0:
            raise PrecisionError("element is not integral")
        return [(x * T.p ** self.s) % T.mod for x in self.c]

    def coefficient(self, i: int, j: int = 0) -> PadicNumber:
        T = self.tower
        x = self.c[i * T.e + j]
        return PadicNumber._make(T.ctx, self.s, x, self.prec) if x else \
            PadicNumber._make(T.ctx, 0, 0, self.prec)

    # -- arithmetic -----------------------------------------------------------------

    def _coerce(self, other) -> "ExtElement":
        if isinstance(other, ExtElement):
            if other.tower is not self.tower:
                raise ValueError("elements of different towers")
            return other
        if isinstance(other, (int, Fraction, PadicNumber)):
            return self.tower.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        T = self.tower
        prec = min(self.prec, other.prec)
        s0 = min(self.s, other.s)
        if s0 >= prec:
            return ExtElement(T, prec, (0,) * T.d, prec)
        a = T.p ** (self.s - s0)
        b = T.p ** (other.s - s0)
        mod = T.p ** (prec - s0)
        return ExtElement._make(T, s0, [(x * a + y * b) % mod for x, y in zip(self.c, other.c)], prec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        mod = self.tower.p ** self.rel
        return ExtElement(self.tower, self.s, tuple((-x) % mod for x in self.c), self.prec)

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
        T = self.tower
        if self.is_exact_zero() or other.is_exact_zero():
            return T.zero()
        if self.is_zero() or other.is_zero():
            return ExtElement._make(T, 0, [0] * T.d, min(self.prec + other.s, other.prec + self.s))
        rel = min(self.rel, other.rel)
        mod = T.p ** rel
        prod = T.raw_mul(self.c, other.c, mod)
        s = self.s + other.s
        return ExtElement._make(T, s, prod, s + rel)

    __rmul__ = __mul__

    def norm_valuation_int(self) -> int:
        """v_p of the norm of the unit-shifted coefficient vector."""
        T = self.tower
        mod = T.p ** self.rel
        det = _det_int(T.mult_matrix(self.c, mod))
        if det % mod == 0:
            raise PrecisionError("element is zero to working precision (norm vanishes)")
        return vp(det, T.p)

    def valuation(self) -> Fraction:
        """Valuation normalized by v(p) = 1, computed from the norm."""
        if self.is_zero():
            if self.is_exact_zero():
                raise ValueError("valuation of exact zero is undefined")
            raise PrecisionError("valuation of an element that is zero to precision")
        if self._val is None:
            self._val = self.s + Fraction(self.norm_valuation_int(), self.tower.d)
        return self._val

    def inverse(self) -> "ExtElement":
        T = self.tower
        if self.is_exact_zero():
            raise ZeroDivisionError("inverse of exact zero")
        if self.is_zero():
            raise PrecisionError("inverse of an element that is zero to precision")
        v = self.valuation()
        if T.d == 1:
            rel = self.rel
            return ExtElement(T, -self.s, (pow(self.c[0], -1, T.p ** rel),), rel - self.s)
        mod = T.p ** self.rel
        mat = T.mult_matrix(self.c, mod)
        sol = _solve(mat, T.raw_one())
        t = min(vp(x.numerator, T.p) - vp(x.denominator, T.p) for x in sol if x)
        prec = math.floor(self.prec - 2 * v)
        s_new = t - self.s
        k = prec - s_new
        if k <= 0:
            raise PrecisionError("inverse has no significant digits left")
        coeffs = [_rational_digits(x, T.p, t, k) for x in sol]
        return ExtElement._make(T, s_new, coeffs, prec)

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
        result = self.tower.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison -------------------------------------------------------------------

    def agreement(self, other):
        """Valuation of ``self - other`` (rational), or its precision when zero to precision."""
        d = self - self._coerce(other)
        if d.is_zero():
            return d.prec
        try:
            return d.valuation()
        except PrecisionError:
            return d.prec

    def __eq__(self, other):
        if not isinstance(other, (ExtElement, int, Fraction, PadicNumber)):
            return NotImplemented
        return (self - self._coerce(other)).is_zero()

    def __hash__(self):
        return hash((self.s, self.c))

    def to_padic(self) -> PadicNumber:
        """The coefficient of the basis element 1, when the others vanish."""
        if any(self.c[1:]):
            raise ValueError("element does not lie in Q_p")
        return self.coefficient(0, 0)

    def render(self) -> str:
        T = self.tower
        if self.is_exact_zero():
            return "0"
        if T.d == 1:
            return self.coefficient(0).render()
        parts = []
        for i in range(T.f):
            for j in range(T.e):
                x = self.c[i * T.e + j]
                if x:
                    parts.append(f"({PadicNumber._make(T.ctx, self.s, x, self.prec).render()})*x^{i}y^{j}")
        return " + ".join(parts) if parts else f"O({T.p}^{self.prec})"

    def __repr__(self):
        return f"ExtElement({self.render()})"


class RootOfUnity:
    """``zeta_N ** k`` for the tower's canonical ``zeta_N``; ``order`` is its exact order."""

    __slots__ = ("N", "k", "value")

    def __init__(self, N: int, k: int, value: ExtElement):
        self.N = N
        self.k = k % N
        self.value = value

    @property
    def order(self) -> int:
        return self.N // math.gcd(self.N, self.k) if self.k else 1

    @property
    def tower(self) -> ExtensionTower:
        return self.value.tower

    def power(self, j: int) -> "RootOfUnity":
        k = (self.k * j) % self.N
        jj = j % self.order
        value = self.value ** jj if jj else self.tower.one()
        return RootOfUnity(self.N, k, value)

    def inv_power(self, a: int) -> "RootOfUnity":
        """``xi ** (1/a)``: the power by the inverse of a modulo the order."""
        if self.order == 1:
            return self
        if math.gcd(a, self.order) != 1:
            from qtwist.errors import DomainError

            raise DomainError(f"{a} is not invertible modulo the order {self.order}")
        return self.power(pow(a, -1, self.order))

    def exact(self, m: int | None = None) -> ExactCyclotomic:
        """The same root in Q(zeta_m) (m a multiple of N; default N)."""
        m = m or self.N
        if m % self.N:
            raise UnsupportedOrder(f"zeta_{self.N} is not in Q(zeta_{m})")
        return ExactCyclotomic.zeta(m, self.k * (m // self.N))

    def __repr__(self):
        return f"RootOfUnity(zeta_{self.N}^{self.k}, order={self.order})"


def xi_power(xi: RootOfUnity, k, alpha: int | None = None) -> RootOfUnity:
    """``xi**k`` for integer k; with ``alpha`` given, ``xi**(k/alpha)``."""
    if alpha is None:
        return xi.power(k)
    return xi.inv_power(alpha).power(k)


def build_tower(p: int, mprime: int = 1, r: int = 0, M: int = 30, allow_p2: bool = False) -> ExtensionTower:
    return ExtensionTower(PadicContext(p, M, allow_p2), mprime, r)


def tower_for_orders(ctx: PadicContext, *orders: int) -> ExtensionTower:
    """Smallest tower of this construction holding roots of unity of the given orders."""
    mprime, r = 1, 0
    for n in orders:
        n1, n2 = _split_order(n, ctx.p)
        mprime = math.lcm(mprime, n1)
        r = max(r, vp(n2, ctx.p) if n2 > 1 else 0)
    return ExtensionTower(ctx, mprime, r)


# ---------------------------------------------------------------------------
# exact Q(zeta_m)


class ExactCyclotomic:
    """Exact element of ``Q(zeta_m)`` as a rational polynomial of degree < phi(m)."""

    __slots__ = ("m", "c")

    def __init__(self, m: int, coeffs):
        self.m = m
        phi = cyclotomic_coeffs(m)
        c = [Fraction(x) for x in coeffs]
        if len(c) >= len(phi):
            c = _poly_reduce(c, phi)
        c += [Fraction(0)] * (len(phi) - 1 - len(c))
        self.c = tuple(c)

    @classmethod
    def rational(cls, m: int, x) -> "ExactCyclotomic":
        return cls(m, [x])

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "ExactCyclotomic":
        k %= m
        return cls(m, [0] * k + [1])

    def _coerce(self, other):
        if isinstance(other, ExactCyclotomic):
            if other.m != self.m:
                raise ValueError("mixing different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return ExactCyclotomic.rational(self.m, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ExactCyclotomic(self.m, [a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return ExactCyclotomic(self.m, [-a for a in self.c])

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
        n = len(self.c)
        prod = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    if b:
                        prod[i + j] += a * b
        return ExactCyclotomic(self.m, prod)

    __rmul__ = __mul__

    def inverse(self) -> "ExactCyclotomic":
        if not any(self.c):
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        n = len(self.c)
        cols = []
        for w in range(n):
            basis = ExactCyclotomic(self.m, [0] * w + [1])
            cols.append((self * basis).c)
        mat = [[cols[w][k] for w in range(n)] for k in range(n)]
        return ExactCyclotomic(self.m, _solve(mat, [1] + [0] * (n - 1)))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ExactCyclotomic.rational(self.m, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other) if isinstance(other, (ExactCyclotomic, int, Fraction)) else NotImplemented
        if other is NotImplemented:
            return other
        return self.c == other.c

    def __hash__(self):
        return hash((self.m, self.c))

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def lift_to(self, m2: int) -> "ExactCyclotomic":
        """Image in Q(zeta_m2) for m | m2, sending zeta_m to zeta_m2**(m2/m)."""
        if m2 % self.m:
            raise UnsupportedOrder(f"Q(zeta_{self.m}) does not embed in Q(zeta_{m2})")
        k = m2 // self.m
        out = [Fraction(0)] * (k * len(self.c))
        for i, a in enumerate(self.c):
            out[i * k] = a
        return ExactCyclotomic(m2, out)

    def __repr__(self):
        terms = [f"{a}*z^{i}" if i else str(a) for i, a in enumerate(self.c) if a]
        return f"ExactCyclotomic[{self.m}](" + (" + ".join(terms) or "0") + ")"


def embed_exact(z: ExactCyclotomic, tower: ExtensionTower) -> ExtElement:
    """Ring map Q(zeta_m) -> K sending zeta_m to the tower's canonical order-m root."""
    zeta = tower.root_of_unity(z.m).value if z.m > 1 else tower.one()
    out = tower.zero()
    power = tower.one()
    for a in z.c:
        if a:
            out = out + power * tower.scalar(a)
        power = power * zeta
    return out


class FormalQSeries:
    """Power series truncated at degree D with ExactCyclotomic coefficients."""

    __slots__ = ("m", "D", "c")

    def __init__(self, m: int, D: int, coeffs=()):
        self.m, self.D = m, D
        c = [x if isinstance(x, ExactCyclotomic) else ExactCyclotomic.rational(m, x) for x in list(coeffs)[:D + 1]]
        zero = ExactCyclotomic.rational(m, 0)
        c += [zero] * (D + 1 - len(c))
        self.c = c

    @classmethod
    def geometric(cls, m: int, D: int, c, j: int) -> "FormalQSeries":
        """Expansion of ``1 / (1 - c q**j)``; j = 0 gives the constant ``1/(1 - c)``."""
        c = c if isinstance(c, ExactCyclotomic) else ExactCyclotomic.rational(m, c)
        if j == 0:
            return cls(m, D, [1 / (1 - c)])
        out = [ExactCyclotomic.rational(m, 0)] * (D + 1)
        power = ExactCyclotomic.rational(m, 1)
        for i in range(0, D // j + 1):
            out[i * j] = power
            power = power * c
        return cls(m, D, out)

    def _coerce(self, other):
        if isinstance(other, FormalQSeries):
            if (other.m, other.D) != (self.m, self.D):
                raise ValueError("series of different field or truncation degree")
            return other
        if isinstance(other, (int, Fraction, ExactCyclotomic)):
            return FormalQSeries(self.m, self.D, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FormalQSeries(self.m, self.D, [a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return FormalQSeries(self.m, self.D, [-a for a in self.c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ExactCyclotomic)):
            return FormalQSeries(self.m, self.D, [a * other for a in self.c])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        zero = ExactCyclotomic.rational(self.m, 0)
        out = [zero] * (self.D + 1)
        for i, a in enumerate(self.c):
            if not any(a.c):
                continue
            for j in range(self.D + 1 - i):
                b = other.c[j]
                if any(b.c):
                    out[i + j] = out[i + j] + a * b
        return FormalQSeries(self.m, self.D, out)

    __rmul__ = __mul__

    def inverse(self) -> "FormalQSeries":
        from qtwist.errors import DomainError

        c0 = self.c[0]
        if not any(c0.c):
            raise DomainError("series with zero constant term is not invertible")
        inv0 = c0.inverse()
        zero = ExactCyclotomic.rational(self.m, 0)
        out = [inv0] + [zero] * self.D
        for n in range(1, self.D + 1):
            acc = zero
            for k in range(1, n + 1):
                if any(self.c[k].c):
                    acc = acc + self.c[k] * out[n - k]
            out[n] = -acc * inv0
        return FormalQSeries(self.m, self.D, out)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, n: int):
        out = FormalQSeries(self.m, self.D, [1])
        for _ in range(n):
            out = out * self
        return out

    def coefficient(self, k: int) -> ExactCyclotomic:
        return self.c[k]

    def __eq__(self, other):
        if not isinstance(other, FormalQSeries):
            return NotImplemented
        return self.D == other.D and self.c == other.c

    def __repr__(self):
        return f"FormalQSeries(D={self.D}, {self.c[:4]}...)"
