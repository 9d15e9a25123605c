"""Dirichlet characters mod l and their Teichmüller twists chi_n = chi * omega^(-n)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

from sympy import factorint, primitive_root

from qtwist.cyclotomic import ExactCyclotomic, ExtElement, ExtensionTower
from qtwist.errors import InsufficientLevel
from qtwist.padic import teichmuller


def unit_group_generators(l: int) -> list[tuple[int, int]]:
    """Generators of (Z/l)^* as (residue, order) pairs, one cyclic factor each (CRT)."""
    gens = []
    for q, k in sorted(factorint(l).items()):
        qk = q ** k
        rest = l // qk
        if q == 2 and k >= 3:
            local = [(qk - 1, 2), (5, qk // 4)]
        elif q == 2:
            local = [(qk - 1, 2)] if k == 2 else []
        else:
            local = [(int(primitive_root(qk)), qk - qk // q)]
        for g, order in local:
            # g mod q^k, 1 mod the rest
            x = g if rest == 1 else (g * rest * pow(rest, -1, qk) + qk * pow(qk, -1, rest)) % l
            gens.append((x, order))
    return gens


@dataclass(frozen=True)
class DirichletCharacter:
    l: int
    exponents: tuple[int, ...]
    generators: tuple[tuple[int, int], ...] = field(repr=False)
    index: int = 0

    @cached_property
    def exponent(self) -> int:
        """Exponent of the unit group; values are powers of zeta_exponent."""
        return math.lcm(1, *(o for _, o in self.generators))

    @cached_property
    def _log_table(self) -> dict[int, int]:
        """a -> k with chi(a) = zeta_exponent**k."""
        E = self.exponent
        table = {1 % self.l: 0}
        for powers in itertools.product(*(range(o) for _, o in self.generators)):
            a, k = 1, 0
            for (g, o), t, ex in zip(self.generators, powers, self.exponents):
                a = (a * pow(g, t, self.l)) % self.l
                k += ex * t * (E // o)
            table[a] = k % E
        return table

    @cached_property
    def order(self) -> int:
        E = self.exponent
        g = E
        for k in self._log_table.values():
            g = math.gcd(g, k)
        return E // g

    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def period(self) -> int:
        return self.l

    def value_exponent(self, a: int):
        """k with chi(a) = zeta_order**k, or None when gcd(a, l) > 1."""
        a %= self.l
        if math.gcd(a, self.l) != 1:
            return None
        k = self._log_table[a]
        return k // (self.exponent // self.order)

    def evaluate(self, a: int, tower: ExtensionTower) -> ExtElement:
        k = self.value_exponent(a)
        if k is None:
            return tower.zero()
        if self.order == 1:
            return tower.one()
        return tower.root_of_unity(self.order).power(k).value

    __call__ = evaluate

    def exact(self, a: int, m: int | None = None) -> ExactCyclotomic:
        """Value in Q(zeta_m), m a multiple of the order (default: the order)."""
        m = m or self.order
        k = self.value_exponent(a)
        if k is None:
            return ExactCyclotomic.rational(m, 0)
        return ExactCyclotomic.zeta(m, k * (m // self.order))

    def raw(self, a: int, tower: ExtensionTower) -> list[int] | None:
        k = self.value_exponent(a)
        if k is None:
            return None
        if self.order == 1:
            return tower.raw_one()
        return tower.raw_root(self.order, k)

    def value_orders(self) -> list[int]:
        return [self.order]

    def inverse_residue(self, alpha: int) -> int:
        return pow(alpha, -1, self.l) if self.l > 1 else 0


def enumerate_characters(l: int) -> list[DirichletCharacter]:
    """All characters mod l, in lexicographic order of exponent vectors."""
    if l < 1:
        raise ValueError("modulus must be >= 1")
    gens = tuple(unit_group_generators(l)) if l > 2 else ()
    out = []
    for i, ex in enumerate(itertools.product(*(range(o) for _, o in gens))):
        out.append(DirichletCharacter(l, tuple(ex), gens, i))
    return out


def character(l: int, index: int) -> DirichletCharacter:
    chars = enumerate_characters(l)
    if not 0 <= index < len(chars):
        raise ValueError(f"character index {index} out of range for modulus {l} ({len(chars)} characters)")
    return chars[index]


def trivial_character() -> DirichletCharacter:
    return enumerate_characters(1)[0]


@dataclass(frozen=True)
class TwistedCharacter:
    """``chi_n = chi * omega**(-n)``, a character of period l*p vanishing on p and non-units of l."""

    base: DirichletCharacter
    n: int
    p: int

    @property
    def n_class(self) -> int:
        return self.n % (self.p - 1)

    @property
    def period(self) -> int:
        return self.base.l * self.p

    def omega_part(self, a: int, tower: ExtensionTower) -> ExtElement:
        w = teichmuller(a % self.p, tower.ctx)
        return tower.scalar(w ** (-self.n_class) if self.n_class else w ** 0)

    def evaluate(self, a: int, tower: ExtensionTower) -> ExtElement:
        if a % self.p == 0:
            return tower.zero()
        c = self.base.evaluate(a, tower)
        if c.is_exact_zero():
            return c
        return c * self.omega_part(a, tower)

    __call__ = evaluate

    def raw(self, a: int, tower: ExtensionTower) -> list[int] | None:
        if a % self.p == 0:
            return None
        c = self.base.raw(a, tower)
        if c is None:
            return None
        w = teichmuller(a % self.p, tower.ctx) ** (-self.n_class)
        return [(x * w.to_int(tower.M)) % tower.mod for x in c]

    def value_orders(self) -> list[int]:
        return [self.base.order]

    def inverse_residue(self, alpha: int) -> int:
        return pow(alpha, -1, self.period)


def evaluate_on_X(chi, x: int, N: int, tower: ExtensionTower, l: int | None = None) -> ExtElement:
    """Value at an element of X known by its residue mod l*p^N."""
    if N < 1:
        raise InsufficientLevel("level N >= 1 is needed to determine residues mod l and mod p")
    l = l if l is not None else (chi.base.l if isinstance(chi, TwistedCharacter) else chi.l)
    x %= l * tower.p ** N
    return chi.evaluate(x, tower)
