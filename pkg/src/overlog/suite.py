"""Seeded verification battery behind the `suite` subcommand.

Each case draws its randomness from the run seed folded with the case id, so
the whole report is a pure function of (config, seed); details are short
value summaries, never wall-clock times.
"""

from __future__ import annotations

import random
import zlib

from .coeffs import CoeffElement
from .config import RingConfig
from .cyclo import (
    CyclotomicRing,
    cyclotomic_modulus,
    diagram_check_trace_compat,
    dual_exp,
    kato_scaled_trace,
)
from .eisenstein import EisensteinData, derivative_structure, frobenius_lift
from .forms import LogForm, MilnorSymbol, psi_form, symbol_dlog, trace_form, volume_form
from .frobenius import frobenius, trace_phi
from .logderiv import log_derivative
from .overconv import factor_p_power, invertibility_check, minimal_level
from .series import SeriesElement


def _case_rng(seed: int, case_id: str) -> random.Random:
    return random.Random(zlib.crc32(f"{seed}:{case_id}".encode()) & 0xFFFFFFFF)


def _rand_plus(
    rng: random.Random,
    cfg: RingConfig,
    deg: int = 5,
    tspan: int = 6,
    t_lo: int | None = None,
):
    lo = -tspan if t_lo is None else t_lo
    coeffs = {}
    for k in range(deg + 1):
        terms = {}
        for _ in range(2):
            exps = tuple(rng.randrange(lo, tspan + 1) for _ in range(cfg.n - 1))
            terms[exps] = terms.get(exps, 0) + rng.randrange(-200, 200)
        coeffs[k] = CoeffElement(cfg, terms, 0, cfg.M)
    return SeriesElement(cfg, "pi", coeffs, cfg.M, None)


def _rand_overconv(rng: random.Random, cfg: RingConfig):
    """Random series overconvergent at level 1: the pole part carries enough
    p-valuation to clear the slope."""
    x = _rand_plus(rng, cfg, deg=4)
    pole = {}
    for k in (-1, -2):
        need = (-k + 1) // 2 + 1  # v + k/2 >= 0 with margin
        pole[k] = CoeffElement.const(cfg, rng.randrange(1, 30) * cfg.p**need)
    return x + SeriesElement(cfg, "pi", pole, cfg.M, None)


def _unit_with_constant(rng: random.Random, cfg: RingConfig, residue: int):
    # nonnegative T-exponents only: dropping T-terms above the window is then
    # an exact quotient, so the symbol identities these units feed stay exact
    x = _rand_plus(rng, cfg, deg=4, tspan=4, t_lo=0)
    shiftc = CoeffElement.const(cfg, residue - x.coeff_at(0).constant_residue())
    fix = SeriesElement(cfg, "pi", {0: shiftc}, cfg.M, None)
    return x + fix


def _ok(detail: str = "") -> dict:
    return {"ok": True, "detail": detail}


def _fail(detail: str) -> dict:
    return {"ok": False, "detail": detail}


def _case_frobenius_projection(cfg: RingConfig, seed: int) -> dict:
    rng = _case_rng(seed, "frobenius-projection")
    pn = cfg.p**cfg.n
    for t in range(20):
        a = _rand_plus(rng, cfg)
        b = _rand_plus(rng, cfg)
        lhs = trace_phi(frobenius(a) * b)
        rhs = a * trace_phi(b)
        if not lhs.eq_at_min_precision(rhs):
            return _fail(f"projection formula failed at trial {t}")
        if not trace_phi(frobenius(a)).eq_at_min_precision(a.scale(pn)):
            return _fail(f"trace of a Frobenius image failed at trial {t}")
    return _ok("20 pairs")


def _case_frobenius_pinned(cfg: RingConfig, seed: int) -> dict:
    one = SeriesElement.one(cfg, "pi")
    pi = SeriesElement.monomial(cfg, "pi", 1)
    pn = cfg.p**cfg.n
    checks = [
        (trace_phi(one), one.scale(pn), "1"),
        (trace_phi(pi), pi.scale(0) - one.scale(pn), "pi"),
        (trace_phi(pi * pi), one.scale(pn), "pi^2"),
        (trace_phi(pi * pi * pi), pi.scale(pn), "pi^3"),
    ]
    for got, want, name in checks:
        if not got.eq_at_min_precision(want):
            return _fail(f"pinned trace of {name} mismatched")
    return _ok("4 pinned values")


def _case_overconv_fixtures(cfg: RingConfig, seed: int) -> dict:
    f1 = SeriesElement.from_dict(cfg, "pi", {0: 1, -2: 3})
    f2 = SeriesElement.from_dict(cfg, "pi", {-1: 1})
    f3 = SeriesElement.from_dict(cfg, "pi", {-3: 9, 1: 27})
    if minimal_level(f1).minimal_level != 1:
        return _fail("1+3pi^-2 should sit at level 1")
    if minimal_level(f2).minimal_level is not None:
        return _fail("pi^-1 should not be overconvergent")
    if invertibility_check(f1, 1) or not invertibility_check(f1, 2):
        return _fail("1+3pi^-2 invertibility levels wrong")
    k, L, unit, _ = factor_p_power(f3)
    expect_unit = SeriesElement.from_dict(cfg, "pi", {0: 1, 4: 3})
    if (k, L) != (2, 3) or not unit.eq_at_min_precision(expect_unit):
        return _fail(f"9pi^-3+27pi factored as (k={k}, L={L})")
    return _ok("3 fixtures")


def _case_overconv_properties(cfg: RingConfig, seed: int) -> dict:
    rng = _case_rng(seed, "overconv-properties")
    for t in range(20):
        x = _rand_overconv(rng, cfg)
        rep = minimal_level(x)
        if rep.minimal_level != 1:
            return _fail(f"constructed level-1 series reported {rep.minimal_level}")
        if minimal_level(x.formal_derivative()).minimal_level != 1:
            return _fail(f"derivative left level 1 at trial {t}")
        if minimal_level(frobenius(x)).minimal_level not in (1, 2):
            return _fail(f"Frobenius image left level <= 2 at trial {t}")
        k, L, unit, _ = factor_p_power(x)
        back = unit.shift(-L).scale(cfg.p**k)
        if not back.eq_at_min_precision(x):
            return _fail(f"factorization round-trip failed at trial {t}")
    return _ok("20 series")


def _case_eisenstein_square(cfg: RingConfig, seed: int) -> dict:
    f = EisensteinData(
        cfg,
        2,
        [
            SeriesElement.from_dict(cfg, "pi", {1: -1}),  # a_0 = -pi
            SeriesElement.zero(cfg, "pi"),  # a_1 = 0
        ],
    )
    y = frobenius_lift(f)
    pinned = {3: 1, 1: 3282, -1: 4101, -3: 3690}
    for e, r in pinned.items():
        got = y.coeff_at(e).constant_residue()
        if got != r % cfg.modulus:
            return _fail(f"lift coefficient at exponent {e} is {got}")
    st = derivative_structure(f)
    if st.I != -2 or st.regime != "coprime" or st.witness != -1:
        return _fail(f"derivative structure (I={st.I}, regime={st.regime})")
    return _ok("lift and structure pinned")


def _case_forms(cfg: RingConfig, seed: int) -> dict:
    rng = _case_rng(seed, "forms")
    T1 = SeriesElement(cfg, "pi", {0: CoeffElement.gen(cfg, 0)}, cfg.M, None)
    for t in range(10):
        a = _unit_with_constant(rng, cfg, 2)
        sym = MilnorSymbol(cfg, (a, SeriesElement.one(cfg, "pi") - a))
        if not symbol_dlog(sym).coeff.is_zero():
            return _fail(f"Steinberg symbol survived at trial {t}")
        b = _unit_with_constant(rng, cfg, 1 + cfg.p * rng.randrange(1, cfg.p))
        s2 = MilnorSymbol(cfg, (b, T1))
        swapped = symbol_dlog(s2.swap(0, 1))
        if not (symbol_dlog(s2).coeff + swapped.coeff).is_zero():
            return _fail(f"antisymmetry failed at trial {t}")
        tform = LogForm(cfg, _rand_plus(rng, cfg), "t", "log")
        traced = trace_form(tform)
        gv = traced.coeff.gauss_valuation()
        if not (traced.coeff.is_zero() or gv >= 1):
            return _fail(f"(n-1)-form trace not p-divisible at trial {t}")
    vol = volume_form(cfg)
    if not psi_form(vol).coeff.eq_at_min_precision(vol.coeff):
        return _fail("psi does not fix the volume form")
    return _ok("10 trials each")


def _case_logderiv(cfg: RingConfig, seed: int) -> dict:
    one = SeriesElement.one(cfg, "pi")
    pi = SeriesElement.monomial(cfg, "pi", 1)
    T1 = SeriesElement(cfg, "pi", {0: CoeffElement.gen(cfg, 0)}, cfg.M, None)
    led = log_derivative(MilnorSymbol(cfg, (T1, one + pi)))
    if not led.converged or not led.limit.coeff.eq_at_min_precision(one):
        return _fail("the volume symbol did not stabilize at 1")
    led = log_derivative(MilnorSymbol(cfg, (T1, "piK")))
    if not led.converged:
        return _fail("the uniformizer symbol did not stabilize")
    led = log_derivative(MilnorSymbol(cfg, (one + pi.scale(cfg.p), T1)))
    if not led.converged or not led.limit.coeff.is_zero():
        return _fail("the 1-unit symbol did not contract to zero")
    if not led.schedule_holds():
        return _fail("difference valuations fell below the step index")
    return _ok("3 fixtures")


def _case_cyclo_diagram(cfg: RingConfig, seed: int) -> dict:
    rng = _case_rng(seed, "cyclo-diagram")
    if cyclotomic_modulus(3, 2) != (3, 9, 18, 21, 15, 6, 1):
        return _fail("layer-2 modulus mismatch")
    for t in range(10):
        f = _rand_plus(rng, cfg)
        for m in (1, 2):
            if not diagram_check_trace_compat(f, m):
                return _fail(f"trace diagram failed at trial {t}, m={m}")
    for t in range(10):
        ring = CyclotomicRing(cfg, rng.choice((2, 3)))
        coeffs = [
            CoeffElement.const(cfg, rng.randrange(-500, 500))
            for _ in range(ring.degree)
        ]
        y = ring.element(coeffs)
        m = rng.randrange(1, ring.m)
        if not kato_scaled_trace(y, m).is_integral():
            return _fail(f"scaled trace left the integers at trial {t}")
    return _ok("10 diagram + 10 integrality")


def _case_dualexp(cfg: RingConfig, seed: int) -> dict:
    T1 = SeriesElement(cfg, "pi", {0: CoeffElement.gen(cfg, 0)}, cfg.M, None)
    u = SeriesElement.from_dict(cfg, "pi", {0: 1, 1: 1})
    sym = MilnorSymbol(cfg, (T1, u))
    for m in (1, 2):
        d = dual_exp(sym, m, reading="quotient")
        ring = d.scalar.ring
        if not d.scalar.eq_at_min_precision(ring.one().shift_denominator(m)):
            return _fail(f"quotient scalar at m={m} is not p^-{m}")
        if d.valuation() != -m:
            return _fail(f"valuation at m={m} is {d.valuation()}")
        dp = dual_exp(sym, m)
        uclass = ring.one() + ring.x_class()
        if not (dp.scalar * uclass).eq_at_min_precision(
            ring.one().shift_denominator(m)
        ):
            return _fail(f"pole scalar at m={m} mismatched")
    return _ok("m=1,2 both readings")


_CASES = (
    ("cyclo-diagram", _case_cyclo_diagram),
    ("dualexp-volume", _case_dualexp),
    ("eisenstein-square", _case_eisenstein_square),
    ("forms-calculus", _case_forms),
    ("frobenius-pinned", _case_frobenius_pinned),
    ("frobenius-projection", _case_frobenius_projection),
    ("logderiv-fixtures", _case_logderiv),
    ("overconv-fixtures", _case_overconv_fixtures),
    ("overconv-properties", _case_overconv_properties),
)


def run_suite(cfg: RingConfig, seed: int) -> dict:
    cases = []
    passed = failed = 0
    for case_id, fn in _CASES:
        try:
            result = fn(cfg, seed)
        except Exception as err:  # a crashing case is a failing case
            result = _fail(f"raised {type(err).__name__}: {err}")
        result["id"] = case_id
        cases.append(result)
        if result["ok"]:
            passed += 1
        else:
            failed += 1
    return {
        "seed": seed,
        "passed": passed,
        "failed": failed,
        "cases": sorted(cases, key=lambda c: c["id"]),
    }
