import random
from fractions import Fraction

import pytest

from overlog import DESK, INF, NotAUnit, NotDivisible, PadicScalar, ZeroInput
from overlog.scalars import vp


def test_vp():
    assert vp(0, 3, 99) == INF
    assert vp(1, 3, 99) == 0
    assert vp(18, 3, 99) == 2
    assert vp(-27, 3, 99) == 3
    assert vp(3**12, 3, 8) == 8  # capped


def test_construction_reduces_mod_p_to_the_prec():
    a = PadicScalar(DESK, 3**8 + 5)
    assert a.residue == 5
    assert a.prec == 8
    b = PadicScalar(DESK, -1)
    assert b.residue == 3**8 - 1


def test_ring_identities_random():
    rng = random.Random(7)
    for _ in range(200):
        a = PadicScalar(DESK, rng.randrange(-(3**8), 3**8))
        b = PadicScalar(DESK, rng.randrange(-(3**8), 3**8))
        c = PadicScalar(DESK, rng.randrange(-(3**8), 3**8))
        assert (a + b) - b == a
        assert a * b == b * a
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert a + (-a) == PadicScalar.zero(DESK)


def test_precision_join_is_min():
    a = PadicScalar(DESK, 10, prec=5)
    b = PadicScalar(DESK, 4, prec=3)
    assert (a + b).prec == 3
    assert (a * b).prec == 3


def test_valuation():
    assert PadicScalar(DESK, 18).valuation() == 2
    assert PadicScalar(DESK, 1).valuation() == 0
    assert PadicScalar.zero(DESK).valuation() == INF


def test_divide_exact_spends_precision():
    a = PadicScalar(DESK, 18)
    q = a.divide_exact(2)
    assert q.residue == 2
    assert q.prec == 6
    with pytest.raises(NotDivisible):
        PadicScalar(DESK, 4).divide_exact(1)


def test_invert():
    a = PadicScalar(DESK, 2)
    assert (a * a.invert()) == PadicScalar.one(DESK)
    with pytest.raises(NotAUnit):
        PadicScalar(DESK, 6).invert()
    with pytest.raises(ZeroInput):
        PadicScalar.zero(DESK).invert()


def test_invert_random_units():
    rng = random.Random(11)
    one = PadicScalar.one(DESK)
    for _ in range(100):
        r = rng.randrange(1, 3**8)
        if r % 3 == 0:
            continue
        a = PadicScalar(DESK, r)
        assert a * a.invert() == one


def test_mul_rational():
    a = PadicScalar(DESK, 9)
    half = a.mul_rational(Fraction(1, 2))
    assert half * PadicScalar(DESK, 2) == a
    assert half.prec == 8  # unit denominator costs nothing
    third = a.mul_rational(Fraction(1, 3))
    assert third.residue == 3
    assert third.prec == 7  # p in the denominator hits the ledger
    with pytest.raises(NotDivisible):
        PadicScalar(DESK, 1).mul_rational(Fraction(1, 3))


def test_eq_at_min_precision():
    a = PadicScalar(DESK, 5, prec=8)
    b = PadicScalar(DESK, 5 + 27, prec=3)
    assert a.eq_at_min_precision(b)
    assert not a.eq_at_min_precision(PadicScalar(DESK, 6, prec=3))


def test_json_round_trip():
    a = PadicScalar(DESK, 1234, prec=6)
    assert PadicScalar.from_json(DESK, a.to_json()) == a
