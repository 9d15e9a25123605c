import math

import pytest

from qtwist.characters import (
    TwistedCharacter,
    character,
    enumerate_characters,
    evaluate_on_X,
    trivial_character,
)
from qtwist.cyclotomic import ExactCyclotomic, tower_for_orders
from qtwist.errors import InsufficientLevel
from qtwist.padic import PadicContext, teichmuller
from sympy import totient

CTX = PadicContext(5, 15)


@pytest.mark.parametrize("l", [1, 2, 3, 4, 7, 8, 12, 15, 16])
def test_character_count(l):
    assert len(enumerate_characters(l)) == totient(l)


@pytest.mark.parametrize("l", [4, 7, 8, 12])
def test_multiplicative_and_orthogonal(l):
    chars = enumerate_characters(l)
    m = max(c.order for c in chars)
    units = [a for a in range(l) if math.gcd(a, l) == 1]
    for chi in chars:
        for a in units:
            for b in units:
                assert chi.exact(a * b, m) == chi.exact(a, m) * chi.exact(b, m)
        total = sum((chi.exact(a, m) for a in range(l)), ExactCyclotomic.rational(m, 0))
        assert total == ExactCyclotomic.rational(m, len(units) if chi.is_trivial() else 0)
    # distinct characters are distinct functions
    tables = {tuple(c.value_exponent(a) * (m // c.order) % m for a in units) for c in chars}
    assert len(tables) == len(chars)


def test_vanishes_off_units():
    chi = character(12, 1)
    assert chi.value_exponent(6) is None
    t = tower_for_orders(CTX, chi.order)
    assert chi.evaluate(4, t).is_exact_zero()
    assert trivial_character().evaluate(7, t) == 1


def test_index_out_of_range():
    with pytest.raises(ValueError):
        character(4, 2)


def test_twisted_character():
    chi = character(4, 1)
    t = tower_for_orders(CTX, chi.order)
    tw = TwistedCharacter(chi, 3, 5)
    assert tw.period == 20
    assert tw.evaluate(10, t).is_exact_zero()
    for a in (3, 7, 13, 19):
        expect = chi.evaluate(a, t) * t.scalar(teichmuller(a % 5, CTX) ** -3)
        assert tw.evaluate(a, t) == expect
    # n and n + (p - 1) give the same character
    tw2 = TwistedCharacter(chi, 7, 5)
    assert all(tw.evaluate(a, t) == tw2.evaluate(a, t) for a in range(1, 20))


def test_evaluate_on_X_needs_level():
    t = tower_for_orders(CTX, 1)
    with pytest.raises(InsufficientLevel):
        evaluate_on_X(trivial_character(), 3, 0, t)
