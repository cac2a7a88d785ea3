import json
from fractions import Fraction
from math import inf

import pytest

from helpers import t_gen
from overlog import (
    DESK,
    CoeffElement,
    CyclotomicRing,
    EisensteinData,
    InputError,
    LogForm,
    MilnorSymbol,
    PadicScalar,
    SeriesElement,
    SymbolProduct,
    dual_exp,
    log_derivative,
)
from overlog.serialize import (
    config_from_json,
    config_to_json,
    dual_exp_to_json,
    dumps,
    eisenstein_from_json,
    eisenstein_to_json,
    exact_str,
    form_from_json,
    form_to_json,
    layer_to_json,
    ledger_to_json,
    scalar_from_json,
    series_from_json,
    series_to_json,
    symbol_product_from_json,
    symbol_product_to_json,
)

ONE = SeriesElement.one(DESK, "pi")
PI = SeriesElement.monomial(DESK, "pi", 1)
T1 = t_gen(DESK)


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}\n'
    assert dumps(config_to_json(DESK)) == dumps(config_to_json(DESK))


def test_exact_str():
    assert exact_str(inf) == "inf"
    assert exact_str(Fraction(7, 27)) == "7/27"
    assert exact_str(Fraction(4, 2)) == "2"
    assert exact_str(-3) == "-3"


def test_config_round_trip():
    assert config_from_json(config_to_json(DESK)) == DESK
    assert config_from_json({}) == DESK  # all defaults
    assert config_from_json({"seed": 5}) == DESK  # seed rides along


def test_config_rejections():
    with pytest.raises(InputError):
        config_from_json({"prime": 3})  # unknown key
    with pytest.raises(InputError):
        config_from_json({"pi_window": [1]})
    with pytest.raises(InputError):
        config_from_json({"pi_window": "wide"})
    with pytest.raises(InputError):
        config_from_json({"p": True})  # bools are not integers
    with pytest.raises(InputError):
        config_from_json({"M": "8"})


def test_scalar_codec():
    s = PadicScalar(DESK, 123, 6)
    assert PadicScalar.from_json(DESK, s.to_json()).eq_at_min_precision(s)
    with pytest.raises(InputError):
        scalar_from_json(DESK, {"residue": "many", "prec": 8})
    with pytest.raises(InputError):
        scalar_from_json(DESK, {"residue": "5", "prec": 99})
    with pytest.raises(InputError):
        scalar_from_json(DESK, {"residue": "5", "prec": -1})
    with pytest.raises(InputError):
        scalar_from_json(DESK, {"prec": 8})


def test_series_round_trip():
    mixed = CoeffElement(DESK, {(1,): 2, (-2,): 7}, 1)
    x = SeriesElement(
        DESK,
        "pi",
        {0: CoeffElement.const(DESK, 5), -3: mixed, 5: mixed},
        DESK.M,
        (-10, 10),
    )
    y = series_from_json(DESK, series_to_json(x))
    assert y.eq_at_min_precision(x)
    assert y.window == x.window
    assert y.var == x.var
    assert y.prec == x.prec
    # the wire form itself is stable
    assert dumps(series_to_json(y)) == dumps(series_to_json(x))


def test_series_round_trip_pik_var():
    x = SeriesElement.from_dict(DESK, "piK", {2: 1, 0: 4})
    y = series_from_json(DESK, series_to_json(x))
    assert y.var == "piK"
    assert y.eq_at_min_precision(x)


def test_series_duplicate_terms_accumulate():
    term = {"pi_exp": 0, "t_exps": [0], "coeff": {"residue": "1", "prec": 8}}
    twin = {"pi_exp": 0, "t_exps": [0], "coeff": {"residue": "2", "prec": 8}}
    x = series_from_json(DESK, {"terms": [term, twin]})
    assert x.eq_at_min_precision(SeriesElement.from_dict(DESK, "pi", {0: 3}))


def test_series_rejections():
    good = {"pi_exp": 0, "t_exps": [0], "coeff": {"residue": "1", "prec": 8}}
    with pytest.raises(InputError):
        series_from_json(DESK, {"series": {"terms": [good]}})  # stray wrapper
    with pytest.raises(InputError):
        series_from_json(DESK, {"var": "tau"})
    with pytest.raises(InputError):
        series_from_json(DESK, {"level": -1})
    with pytest.raises(InputError):
        series_from_json(DESK, {"terms": [{"t_exps": [0], "coeff": good["coeff"]}]})
    with pytest.raises(InputError):
        series_from_json(
            DESK, {"terms": [{"pi_exp": 0, "t_exps": [0, 1], "coeff": good["coeff"]}]}
        )
    with pytest.raises(InputError):
        series_from_json(DESK, {"terms": [good], "window": [1]})
    with pytest.raises(InputError):
        series_from_json(DESK, {"terms": "none"})


def test_symbol_product_round_trip():
    a = MilnorSymbol(DESK, (T1, "piK"))
    b = MilnorSymbol(DESK, (ONE + PI, "p"))
    sp = SymbolProduct(((a, 2), (b, -1)))
    back = symbol_product_from_json(DESK, symbol_product_to_json(sp))
    assert len(back.factors) == 2
    (s1, k1), (s2, k2) = back.factors
    assert (k1, k2) == (2, -1)
    assert s1.entries[0].eq_at_min_precision(T1) and s1.entries[1] == "piK"
    assert s2.entries[0].eq_at_min_precision(ONE + PI) and s2.entries[1] == "p"
    # a bare symbol serializes as a one-factor product
    assert symbol_product_to_json(a) == symbol_product_to_json(SymbolProduct(((a, 1),)))


def test_symbol_product_rejections():
    with pytest.raises(InputError):
        symbol_product_from_json(DESK, {"factors": []})
    with pytest.raises(InputError):
        symbol_product_from_json(
            DESK, {"factors": [{"entries": ["piK", "q"], "exp": 1}]}
        )
    with pytest.raises(InputError):
        symbol_product_from_json(
            DESK, {"factors": [{"entries": ["piK", "p"], "exp": 0}]}
        )
    with pytest.raises(InputError):
        symbol_product_from_json(DESK, {})


def test_form_round_trip():
    f = LogForm(DESK, ONE + PI, "t", "plus")
    g = form_from_json(DESK, form_to_json(f))
    assert (g.kind, g.basis) == ("t", "plus")
    assert g.coeff.eq_at_min_precision(f.coeff)
    with pytest.raises(InputError):
        form_from_json(DESK, {"coeff": series_to_json(ONE), "kind": "z"})
    with pytest.raises(InputError):
        form_from_json(DESK, {})


def test_eisenstein_round_trip():
    square = EisensteinData(
        DESK,
        2,
        [SeriesElement.from_dict(DESK, "pi", {1: -1}), SeriesElement.zero(DESK, "pi")],
    )
    square.validate()
    back = eisenstein_from_json(DESK, eisenstein_to_json(square))
    assert back.e == 2
    assert all(
        x.eq_at_min_precision(y) for x, y in zip(back.coeffs, square.coeffs)
    )
    with pytest.raises(InputError):
        eisenstein_from_json(DESK, {"e": 2, "coeffs": [series_to_json(ONE)]})
    with pytest.raises(InputError):
        eisenstein_from_json(DESK, {"coeffs": []})


def test_ledger_json_shape():
    led = log_derivative(MilnorSymbol(DESK, (T1, ONE + PI)))
    out = ledger_to_json(led)
    assert out["verdict"] == "converged"
    assert out["iterates"][0]["step"] == 0
    assert out["iterates"][0]["difference_valuation"] is None
    assert out["limit"]["kind"] == "n"
    assert "report" not in out
    json.loads(dumps(out))

    starved = log_derivative(
        MilnorSymbol(DESK, (ONE + PI.scale(3), T1)), max_iters=1
    )
    out = ledger_to_json(starved)
    assert out["verdict"] == "diverged"
    assert out["limit"] is None
    assert "report" in out
    json.loads(dumps(out))


def test_layer_and_dual_exp_json():
    ring = CyclotomicRing(DESK, 1)
    y = ring.one().shift_denominator(1)
    out = layer_to_json(y)
    assert out["layer"] == 1 and out["degree"] == 2
    assert out["denominator_exp"] == 1
    assert out["valuation"] == "-1"
    json.loads(dumps(out))

    d = dual_exp(MilnorSymbol(DESK, (T1, ONE + PI)), 1)
    out = dual_exp_to_json(d)
    assert out["reading"] == "pole" and out["t_level"] == 1
    assert out["legs"] == ["T1^(1/p^1)"]
    assert out["valuation"] == "-1"
    json.loads(dumps(out))
