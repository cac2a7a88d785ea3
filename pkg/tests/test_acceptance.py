"""The seven gate checks, one test per criterion, pinned tolerances inline.

Each test finishes with a single ACCEPTANCE line; a failed assert means the
criterion is red and the line is withheld.
"""
import json
import random
import time

from helpers import conjugate_sum_trace, rand_overconv, rand_plus, rand_unit, t_gen
from overlog import (
    DESK,
    CoeffElement,
    CyclotomicRing,
    EisensteinData,
    LogForm,
    MilnorSymbol,
    RamificationConfig,
    SeriesElement,
    SymbolProduct,
    cli,
    cyclotomic_modulus,
    derivative_structure,
    diagram_check_trace_compat,
    expand_pi,
    factor_p_power,
    frobenius,
    frobenius_lift,
    invertibility_check,
    kato_scaled_trace,
    log_derivative,
    minimal_level,
    overconvergence_of_limit,
    psi_form,
    run_suite,
    symbol_dlog,
    trace_form,
    trace_phi,
    volume_form,
)
from overlog.serialize import dumps

ONE = SeriesElement.one(DESK, "pi")
PI = SeriesElement.monomial(DESK, "pi", 1)
T1 = t_gen(DESK)


def test_criterion_1_frobenius_trace():
    # projection formula and Tr(phi(a)) = p^n a on 200 pairs, then the
    # independent conjugate-sum oracle on 100 inputs; budget 10s
    t0 = time.monotonic()
    rng = random.Random(101)
    for t in range(200):
        a = rand_plus(rng, DESK)
        b = rand_plus(rng, DESK)
        lhs = trace_phi(frobenius(a) * b)
        rhs = a * trace_phi(b)
        assert lhs.eq_at_min_precision(rhs), f"projection failed at pair {t}"
        assert trace_phi(frobenius(a)).eq_at_min_precision(
            a.scale(9)
        ), f"section formula failed at pair {t}"
    for t in range(100):
        x = rand_plus(rng, DESK)
        assert trace_phi(x).eq_at_min_precision(
            conjugate_sum_trace(x)
        ), f"oracle disagreement at input {t}"
    elapsed = time.monotonic() - t0
    assert elapsed < 10.0, f"trace checks took {elapsed:.1f}s"
    print("ACCEPTANCE 1 (frobenius-trace): PASS")


def test_criterion_2_overconvergence():
    # radius / unit-criterion / factorization round-trips on 200 series plus
    # the three pinned fixtures, then 100 stability draws; zero failures
    rng = random.Random(202)
    for t in range(200):
        if t % 2:
            x = rand_overconv(rng, DESK, level=rng.randrange(1, 4))
        else:
            x = rand_plus(rng, DESK)
        rep = minimal_level(x)
        assert rep.minimal_level is not None, f"draw {t} lost overconvergence"
        k, L, unit, inc = factor_p_power(x)
        back = unit.scale(DESK.p**k).shift(-L)
        assert back.eq_at_min_precision(x), f"draw {t} failed to recompose"
        assert inc < DESK.level_cap, f"draw {t} unit level ran away"
        assert invertibility_check(unit, 1 + inc), f"draw {t} unit not a unit"

    fix = SeriesElement.from_dict(DESK, "pi", {0: 1, -2: 3})
    rep = minimal_level(fix)
    assert rep.minimal_level == 1 and rep.binding_exponent == -2
    assert not invertibility_check(fix, 1)
    assert invertibility_check(fix, 2)
    assert minimal_level(SeriesElement.from_dict(DESK, "pi", {-1: 1})).minimal_level is None
    deep = SeriesElement.from_dict(DESK, "pi", {-3: 9, 1: 27})
    k, L, unit, _ = factor_p_power(deep)
    assert (k, L) == (2, 3)
    assert unit.eq_at_min_precision(SeriesElement.from_dict(DESK, "pi", {0: 1, 4: 3}))
    assert invertibility_check(unit, 1)
    assert minimal_level(deep).minimal_level == 2

    for t in range(100):
        N = rng.randrange(1, 4)
        x = rand_overconv(rng, DESK, level=N)
        drep = minimal_level(x.formal_derivative())
        assert drep.minimal_level is not None and drep.minimal_level <= N, (
            f"derivative left level {N} at draw {t}"
        )
        if N <= 2:
            frep = minimal_level(frobenius(x))
            assert frep.minimal_level is not None and frep.minimal_level <= N + 1, (
                f"frobenius shifted past {N + 1} at draw {t}"
            )
    print("ACCEPTANCE 2 (overconvergence): PASS")


def test_criterion_3_eisenstein_lift():
    # X^2 - pi at p = 3: exact Newton residual, derivative structure, unit
    # cofactor, and reduction to the p-th power; budget 5s
    t0 = time.monotonic()
    square = EisensteinData(
        DESK,
        2,
        [SeriesElement.from_dict(DESK, "pi", {1: -1}), SeriesElement.zero(DESK, "pi")],
    )
    square.validate()
    y = frobenius_lift(square)
    E = expand_pi(square).pi_series
    one = SeriesElement.one(DESK, "piK")
    residual = y * y - ((one + E).power(3) - one)
    assert residual.is_zero(), "Newton residual visible at working precision"
    # derivative_structure refuses any p-power besides exactly one, so a
    # normal return certifies the exact-power shape
    st = derivative_structure(square)
    assert st.I == -2
    assert abs(st.I) % 3 != 0
    assert invertibility_check(st.unit, 2, RamificationConfig(2))
    red = y - SeriesElement.monomial(DESK, "piK", 3)
    assert red.is_zero() or red.gauss_valuation() >= 1
    elapsed = time.monotonic() - t0
    assert elapsed < 5.0, f"lift checks took {elapsed:.1f}s"
    print("ACCEPTANCE 3 (eisenstein-lift): PASS")


def test_criterion_4_form_calculus():
    rng = random.Random(404)
    for t in range(100):
        a = rand_unit(rng, DESK, 2)
        sym = MilnorSymbol(DESK, (a, ONE - a))
        assert symbol_dlog(sym).coeff.is_zero(), f"Steinberg trial {t}"
    for t in range(100):
        b = rand_unit(rng, DESK, 1 + 3 * rng.randrange(1, 3))
        s = MilnorSymbol(DESK, (b, T1))
        fwd = symbol_dlog(s).coeff
        bwd = symbol_dlog(s.swap(0, 1)).coeff
        assert (fwd + bwd).is_zero(), f"antisymmetry trial {t}"
    for t in range(100):
        f = LogForm(DESK, rand_plus(rng, DESK), "t", "log")
        traced = trace_form(f)
        assert traced.coeff.is_zero() or traced.coeff.gauss_valuation() >= 1, (
            f"contraction trial {t} left p * forms"
        )
    vol = volume_form(DESK)
    out = psi_form(vol)
    diff = out.coeff - vol.coeff
    # pinned tolerance: agreement to precision M - n = 6
    assert diff.is_zero() or diff.gauss_valuation() >= DESK.M - DESK.n
    assert out.coeff.eq_at_min_precision(vol.coeff)
    print("ACCEPTANCE 4 (form-calculus): PASS")


def test_criterion_5_symbol_limits():
    rng = random.Random(505)
    volume = MilnorSymbol(DESK, (T1, ONE + PI))
    pik = MilnorSymbol(DESK, (T1, "piK"))
    products = [
        SymbolProduct(((volume, 1),)),
        SymbolProduct(((pik, 1),)),
        SymbolProduct(((volume, 2),)),
        SymbolProduct(((volume, -1),)),
        SymbolProduct(((volume, 1), (pik, -2))),
        SymbolProduct(((MilnorSymbol(DESK, (ONE + PI.scale(3), T1)), 1),)),
    ]
    while len(products) < 20:
        unit = rand_unit(rng, DESK, 1 + 3 * rng.randrange(1, 3))
        sym = MilnorSymbol(DESK, (T1, unit))
        exp = rng.choice((-2, -1, 1, 2))
        products.append(SymbolProduct(((sym, exp), (volume, rng.choice((-1, 1))))))
    assert len(products) >= 20
    for i, sp in enumerate(products):
        led = log_derivative(sp)
        assert led.converged, f"product {i} diverged: {led.report}"
        assert len(led.iterates) <= DESK.M + 1, f"product {i} overran M iterations"
        assert led.schedule_holds(), f"product {i} broke the valuation schedule"
        lim = led.limit
        assert psi_form(lim).coeff.eq_at_min_precision(lim.coeff), (
            f"product {i} limit is not psi-fixed"
        )
        rep = overconvergence_of_limit(led)
        assert rep.minimal_level is not None, f"product {i} limit not overconvergent"
    print("ACCEPTANCE 5 (symbol-limits): PASS")


def test_criterion_6_cyclotomic_tower():
    # trace diagrams on 100 series at both layers, 100 scaled-trace
    # integrality draws, and the exact layer-2 modulus; budget 30s
    t0 = time.monotonic()
    assert cyclotomic_modulus(3, 2) == (3, 9, 18, 21, 15, 6, 1)
    rng = random.Random(606)
    for t in range(100):
        f = rand_plus(rng, DESK)
        for m in (1, 2):
            assert diagram_check_trace_compat(f, m), f"diagram trial {t}, m={m}"
    for t in range(100):
        ring = CyclotomicRing(DESK, rng.choice((2, 3)))
        coeffs = [
            CoeffElement.const(DESK, rng.randrange(-500, 500))
            for _ in range(ring.degree)
        ]
        m = rng.randrange(1, ring.m + 1)
        assert kato_scaled_trace(ring.element(coeffs), m).is_integral(), (
            f"integrality trial {t}"
        )
    elapsed = time.monotonic() - t0
    assert elapsed < 30.0, f"tower checks took {elapsed:.1f}s"
    print("ACCEPTANCE 6 (cyclotomic-tower): PASS")


def test_criterion_7_determinism(tmp_path, capsys):
    first = dumps(run_suite(DESK, 7))
    second = dumps(run_suite(DESK, 7))
    assert first == second, "suite output is not byte-identical across runs"
    assert run_suite(DESK, 0)["failed"] == 0

    fixture = tmp_path / "radius.json"
    fixture.write_text(dumps({
        "terms": [
            {"pi_exp": 0, "t_exps": [0], "coeff": {"residue": "1", "prec": 8}},
            {"pi_exp": -2, "t_exps": [0], "coeff": {"residue": "3", "prec": 8}},
        ]
    }))
    rc = cli.main(["radius", str(fixture)])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0 and out["report"]["minimal_level"] == 1

    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    rc = cli.main(["radius", str(broken)])
    out = json.loads(capsys.readouterr().out)
    assert rc == 2 and out["error"] == "parse"
    print("ACCEPTANCE 7 (determinism): PASS")
