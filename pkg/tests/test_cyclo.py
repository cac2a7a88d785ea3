import random
from fractions import Fraction
from math import inf

import pytest

from helpers import rand_plus, t_gen
from overlog import (
    DESK,
    CoeffElement,
    CyclotomicRing,
    EvaluationDiverges,
    EvaluationMap,
    InputError,
    MilnorSymbol,
    NotEisenstein,
    SeriesElement,
    cyclotomic_modulus,
    diagram_check_trace_compat,
    dual_exp,
    evaluate,
    field_trace,
    kato_scaled_trace,
    kummer_trace,
)

ONE = SeriesElement.one(DESK, "pi")
PI = SeriesElement.monomial(DESK, "pi", 1)
T1 = t_gen(DESK)


def test_layer_moduli():
    assert cyclotomic_modulus(3, 1) == (3, 3, 1)
    assert cyclotomic_modulus(3, 2) == (3, 9, 18, 21, 15, 6, 1)


def test_ring_construction():
    assert CyclotomicRing(DESK, 0).degree == 1
    assert CyclotomicRing(DESK, 1).ramification_degree() == 2
    assert CyclotomicRing(DESK, 2).ramification_degree() == 6
    assert CyclotomicRing(DESK, 3).ramification_degree() == 18
    with pytest.raises(InputError):
        CyclotomicRing(DESK, -1)
    with pytest.raises(NotEisenstein):
        CyclotomicRing(DESK, 1, modulus=(3, 3, 2))  # not monic
    with pytest.raises(NotEisenstein):
        CyclotomicRing(DESK, 1, modulus=(1, 3, 1))  # unit constant term
    with pytest.raises(NotEisenstein):
        CyclotomicRing(DESK, 1, modulus=(9, 3, 1))  # constant term too deep


def test_valuations():
    ring = CyclotomicRing(DESK, 1)
    assert ring.x_class().valuation() == Fraction(1, 2)
    assert CyclotomicRing(DESK, 2).x_class().valuation() == Fraction(1, 6)
    assert ring.one().valuation() == 0
    assert ring.zero().valuation() == inf
    assert ring.from_scalar(9).valuation() == 2
    assert ring.one().shift_denominator(1).valuation() == -1
    assert not ring.one().shift_denominator(1).is_integral()
    assert ring.from_scalar(3).shift_denominator(1).is_integral()


def test_x_inverse():
    for m in (1, 2):
        ring = CyclotomicRing(DESK, m)
        prod = ring.x_inverse() * ring.x_class()
        assert prod.eq_at_min_precision(ring.one())
    with pytest.raises(InputError):
        CyclotomicRing(DESK, 0).x_inverse()


def test_u_inverse():
    for m in (1, 2):
        ring = CyclotomicRing(DESK, m)
        u = ring.one() + ring.x_class()
        assert (u * ring.u_inverse()).eq_at_min_precision(ring.one())


def test_element_validation():
    ring = CyclotomicRing(DESK, 1)
    with pytest.raises(InputError):
        ring.element([CoeffElement.zero(DESK)])  # wrong coordinate count
    with pytest.raises(InputError):
        ring.element([CoeffElement.zero(DESK)] * 2, s=-1)


def test_denominator_bookkeeping():
    ring = CyclotomicRing(DESK, 1)
    half = ring.one().shift_denominator(1)
    assert (half + half).eq_at_min_precision(ring.from_scalar(2).shift_denominator(1))
    assert ring.from_scalar(3).shift_denominator(1) == ring.one()
    assert (half * half).s == 2


def test_power_matches_repeated_multiplication():
    ring = CyclotomicRing(DESK, 2)
    a = ring.one() + ring.x_class()
    by_hand = ring.one()
    for _ in range(5):
        by_hand = by_hand * a
    assert a.power(5).eq_at_min_precision(by_hand)
    with pytest.raises(InputError):
        a.power(-1)


def test_evaluation_map_validation():
    EvaluationMap(1, 2, 0)
    with pytest.raises(InputError):
        EvaluationMap(1, 2, 3)  # j > i
    with pytest.raises(InputError):
        EvaluationMap(0, 1, 0)  # source level below 1
    with pytest.raises(InputError):
        EvaluationMap(3, 2, 1)  # source level above target


def test_evaluate_sends_pi_to_x():
    for m in (1, 2):
        ring = CyclotomicRing(DESK, m)
        got = evaluate(PI, (m, m))
        assert got.eq_at_min_precision(ring.x_class())
        f = ONE + PI + PI * PI
        want = ring.one() + ring.x_class() + ring.x_class().power(2)
        assert evaluate(f, (m, m)).eq_at_min_precision(want)


def test_evaluate_pole_collapses_exactly():
    # 1 + 3 pi^-2 at layer 1: 3/x^2 = 2 + x on the nose
    f = SeriesElement.from_dict(DESK, "pi", {0: 1, -2: 3})
    ring = CyclotomicRing(DESK, 1)
    got = evaluate(f, (1, 1))
    assert got.eq_at_min_precision(ring.from_scalar(3) + ring.x_class())
    assert got.is_integral()


def test_evaluate_divergence_gate():
    with pytest.raises(EvaluationDiverges):
        evaluate(SeriesElement.from_dict(DESK, "pi", {-1: 1}), (1, 1))
    deep = SeriesElement.from_dict(DESK, "pi", {-6: 3})  # level 2, not 1
    with pytest.raises(EvaluationDiverges):
        evaluate(deep, (1, 1))
    evaluate(deep, (2, 2))
    evaluate(deep, EvaluationMap(2, 3, 1))


def test_field_trace_pinned():
    ring = CyclotomicRing(DESK, 1)
    assert field_trace(ring.one(), 0).eq_at_min_precision(
        CyclotomicRing(DESK, 0).from_scalar(2)
    )
    assert field_trace(ring.x_class(), 0).eq_at_min_precision(
        CyclotomicRing(DESK, 0).from_scalar(-3)
    )
    ring2 = CyclotomicRing(DESK, 2)
    assert field_trace(ring2.one(), 1).eq_at_min_precision(
        CyclotomicRing(DESK, 1).from_scalar(3)
    )
    assert field_trace(ring2.x_class(), 1).eq_at_min_precision(
        CyclotomicRing(DESK, 1).from_scalar(-3)
    )
    assert field_trace(ring2.one(), 0).eq_at_min_precision(
        CyclotomicRing(DESK, 0).from_scalar(6)
    )
    with pytest.raises(InputError):
        field_trace(ring.one(), 2)  # up the tower


def test_kato_scaled_trace_integrality():
    rng = random.Random(23)
    for _ in range(20):
        ring = CyclotomicRing(DESK, rng.choice((2, 3)))
        coeffs = [
            CoeffElement.const(DESK, rng.randrange(-500, 500))
            for _ in range(ring.degree)
        ]
        y = ring.element(coeffs)
        m = rng.randrange(1, ring.m + 1)
        assert kato_scaled_trace(y, m).is_integral()
    ring = CyclotomicRing(DESK, 2)
    with pytest.raises(InputError):
        kato_scaled_trace(ring.one(), 0)
    with pytest.raises(InputError):
        kato_scaled_trace(ring.one(), 3)


def test_kummer_trace():
    ring = CyclotomicRing(DESK, 1)
    c = CoeffElement(DESK, {(3,): 2, (1,): 5}, 1)
    y = ring.element([c, CoeffElement.zero(DESK)])
    down = kummer_trace(y, 1, 0)
    want = ring.element(
        [CoeffElement(DESK, {(1,): 6}), CoeffElement.zero(DESK)]
    )
    assert down.eq_at_min_precision(want)
    assert kummer_trace(y, 1, 1) is y
    with pytest.raises(InputError):
        kummer_trace(y, 0, 1)


def test_trace_diagram_commutes():
    rng = random.Random(29)
    for t in range(15):
        f = rand_plus(rng, DESK)
        for m in (1, 2):
            assert diagram_check_trace_compat(f, m), f"trial {t}, m={m}"


def test_trace_diagram_rejections():
    with pytest.raises(InputError):
        diagram_check_trace_compat(SeriesElement.from_dict(DESK, "pi", {-1: 1}), 1)
    with pytest.raises(InputError):
        diagram_check_trace_compat(ONE, 0)


def test_dual_exp_volume_fixture():
    sym = MilnorSymbol(DESK, (T1, ONE + PI))
    for m in (1, 2):
        quo = dual_exp(sym, m, reading="quotient")
        ring = quo.scalar.ring
        assert quo.scalar.eq_at_min_precision(ring.one().shift_denominator(m))
        assert quo.valuation() == -m
        assert quo.t_level == m
        assert quo.legs == (1,)
        assert not quo.is_zero()
        pole = dual_exp(sym, m)
        assert pole.reading == "pole"
        u = ring.one() + ring.x_class()
        assert (pole.scalar * u).eq_at_min_precision(
            ring.one().shift_denominator(m)
        )


def test_dual_exp_validation():
    sym = MilnorSymbol(DESK, (T1, ONE + PI))
    with pytest.raises(InputError):
        dual_exp(sym, 1, reading="sideways")
    with pytest.raises(InputError):
        dual_exp(sym, 1, source_level=2)
    dual_exp(sym, 2, source_level=1)
