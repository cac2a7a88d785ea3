"""Deterministic JSON encoding for every interchange object.

One rule everywhere: emit with sorted keys and fixed list orders, so equal
inputs produce byte-equal reports; parse defensively, turning any shape
surprise into InputError.  Residue-carrying numbers always travel with their
precision; exact quantities (valuations, levels, exponents) travel as exact
strings or ints.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .coeffs import CoeffElement
from .config import PrimeConfig, RingConfig
from .cyclo import DualExpForm, LayerElement
from .eisenstein import EisensteinData
from .errors import InputError
from .forms import LogForm, MilnorSymbol, SymbolProduct
from .logderiv import ConvergenceLedger
from .scalars import INF, PadicScalar
from .series import SeriesElement

_VARS = ("pi", "piK")


def dumps(obj) -> str:
    """The one canonical writer: sorted keys, tight separators, newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def exact_str(v) -> str:
    """Exact rendering of a valuation-like quantity."""
    if v == INF:
        return "inf"
    if isinstance(v, Fraction) and v.denominator != 1:
        return f"{v.numerator}/{v.denominator}"
    return str(int(v))


def _expect(obj, typ, what: str):
    if not isinstance(obj, typ):
        raise InputError(f"{what}: expected {typ.__name__}, got {type(obj).__name__}")
    return obj


def _expect_int(obj, what: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise InputError(f"{what}: expected an integer")
    return obj


# -- config -----------------------------------------------------------------

def config_to_json(cfg: RingConfig) -> dict:
    return {
        "p": cfg.p,
        "M": cfg.M,
        "n": cfg.n,
        "pi_window": list(cfg.pi_window),
        "t_window": list(cfg.t_window),
        "level_cap": cfg.level_cap,
        "strict_windows": cfg.strict_windows,
        "phi_trivial_on_t": cfg.phi_trivial_on_t,
    }


def config_from_json(obj: dict) -> RingConfig:
    _expect(obj, dict, "config")
    known = {
        "p", "M", "n", "pi_window", "t_window", "level_cap",
        "strict_windows", "phi_trivial_on_t", "seed",
    }
    unknown = set(obj) - known
    if unknown:
        raise InputError(f"config: unknown keys {sorted(unknown)}")
    prime = PrimeConfig(
        _expect_int(obj.get("p", 3), "config.p"),
        _expect_int(obj.get("M", 8), "config.M"),
        _expect_int(obj.get("n", 2), "config.n"),
    )

    def window(key, default):
        w = obj.get(key, list(default))
        _expect(w, list, f"config.{key}")
        if len(w) != 2:
            raise InputError(f"config.{key}: expected [lo, hi]")
        return (_expect_int(w[0], key), _expect_int(w[1], key))

    return RingConfig(
        prime,
        window("pi_window", (-64, 64)),
        window("t_window", (-32, 32)),
        _expect_int(obj.get("level_cap", 12), "config.level_cap"),
        bool(obj.get("strict_windows", False)),
        bool(obj.get("phi_trivial_on_t", False)),
    )


# -- scalars / coefficients / series ---------------------------------------

def scalar_from_json(cfg: RingConfig, obj: dict) -> PadicScalar:
    _expect(obj, dict, "scalar")
    try:
        return PadicScalar.from_json(cfg, obj)
    except (KeyError, TypeError, ValueError) as err:
        raise InputError(f"scalar: {err}")


def series_to_json(x: SeriesElement) -> dict:
    level = max((c.level for c in x.coeffs.values()), default=0)
    terms = []
    for k in sorted(x.coeffs):
        c = x.coeffs[k].align_level(level)
        for exps in sorted(c.terms):
            s = c.scalar_at(exps)
            terms.append({
                "pi_exp": k,
                "t_exps": list(exps),
                "coeff": s.to_json(),
            })
    out = {"var": x.var, "level": level, "terms": terms}
    if x.window is not None:
        out["window"] = list(x.window)
    return out


def series_from_json(cfg: RingConfig, obj: dict) -> SeriesElement:
    _expect(obj, dict, "series")
    unknown = set(obj) - {"var", "level", "terms", "window"}
    if unknown:
        raise InputError(f"series: unknown keys {sorted(unknown)}")
    var = obj.get("var", "pi")
    if var not in _VARS:
        raise InputError(f"series.var: expected one of {_VARS}")
    level = _expect_int(obj.get("level", 0), "series.level")
    if level < 0:
        raise InputError("series.level: negative")
    terms = _expect(obj.get("terms", []), list, "series.terms")
    buckets: dict[int, dict[tuple[int, ...], int]] = {}
    precs: dict[int, int] = {}
    for t in terms:
        _expect(t, dict, "series term")
        k = _expect_int(t.get("pi_exp"), "term.pi_exp")
        raw = _expect(t.get("t_exps", []), list, "term.t_exps")
        if len(raw) != cfg.n - 1:
            raise InputError(f"term.t_exps: expected {cfg.n - 1} entries")
        exps = tuple(_expect_int(e, "term.t_exps") for e in raw)
        s = scalar_from_json(cfg, _expect(t.get("coeff"), dict, "term.coeff"))
        buckets.setdefault(k, {})
        buckets[k][exps] = buckets[k].get(exps, 0) + s.residue
        precs[k] = min(precs.get(k, cfg.M), s.prec)
    window = None
    if "window" in obj:
        w = _expect(obj["window"], list, "series.window")
        if len(w) != 2:
            raise InputError("series.window: expected [lo, hi]")
        window = (_expect_int(w[0], "window"), _expect_int(w[1], "window"))
    coeffs = {
        k: CoeffElement(cfg, raw, level, precs[k]) for k, raw in buckets.items()
    }
    prec = min(precs.values(), default=cfg.M)
    return SeriesElement(cfg, var, coeffs, prec, window)


# -- symbols / forms --------------------------------------------------------

def symbol_product_to_json(s: MilnorSymbol | SymbolProduct) -> dict:
    if isinstance(s, MilnorSymbol):
        s = SymbolProduct(((s, 1),))
    factors = []
    for sym, k in s.factors:
        entries = [
            a if isinstance(a, str) else series_to_json(a) for a in sym.entries
        ]
        factors.append({"entries": entries, "exp": k})
    return {"factors": factors}


def symbol_product_from_json(cfg: RingConfig, obj: dict) -> SymbolProduct:
    _expect(obj, dict, "symbol")
    factors = _expect(obj.get("factors"), list, "symbol.factors")
    if not factors:
        raise InputError("symbol.factors: empty")
    out = []
    for f in factors:
        _expect(f, dict, "symbol factor")
        raw = _expect(f.get("entries"), list, "factor.entries")
        entries = []
        for a in raw:
            if isinstance(a, str):
                if a not in ("piK", "p"):
                    raise InputError(f"factor entry: unknown marker {a!r}")
                entries.append(a)
            else:
                entries.append(series_from_json(cfg, _expect(a, dict, "factor entry")))
        exp = _expect_int(f.get("exp", 1), "factor.exp")
        if exp == 0:
            raise InputError("factor.exp: zero")
        out.append((MilnorSymbol(cfg, tuple(entries)), exp))
    return SymbolProduct(tuple(out))


def form_to_json(f: LogForm) -> dict:
    return {
        "coeff": series_to_json(f.coeff),
        "basis": f.basis,
        "kind": f.kind,
    }


def form_from_json(cfg: RingConfig, obj: dict) -> LogForm:
    _expect(obj, dict, "form")
    coeff = series_from_json(cfg, _expect(obj.get("coeff"), dict, "form.coeff"))
    basis = obj.get("basis", "log")
    kind = obj.get("kind", "n")
    if basis not in ("log", "plus") or kind not in ("n", "t", "u"):
        raise InputError("form: bad basis or kind")
    return LogForm(cfg, coeff, kind, basis)


# -- Eisenstein data --------------------------------------------------------

def eisenstein_to_json(f: EisensteinData) -> dict:
    return {"e": f.e, "coeffs": [series_to_json(a) for a in f.coeffs]}


def eisenstein_from_json(cfg: RingConfig, obj: dict) -> EisensteinData:
    _expect(obj, dict, "eisenstein data")
    e = _expect_int(obj.get("e"), "eisenstein.e")
    coeffs = _expect(obj.get("coeffs"), list, "eisenstein.coeffs")
    if len(coeffs) != e:
        raise InputError(f"eisenstein.coeffs: expected {e} series, got {len(coeffs)}")
    series = [series_from_json(cfg, _expect(a, dict, "eisenstein coeff")) for a in coeffs]
    return EisensteinData(cfg, e, series)


# -- ledgers / layers -------------------------------------------------------

def ledger_to_json(led: ConvergenceLedger) -> dict:
    iterates = []
    for step, form, val in led.iterates:
        iterates.append({
            "step": step,
            "difference_valuation": None if val is None else exact_str(val),
            "form": form_to_json(form),
        })
    out = {
        "verdict": led.verdict,
        "iterates": iterates,
        "limit": None if led.limit is None else form_to_json(led.limit),
    }
    if led.report is not None:
        out["report"] = led.report
    return out


def _coeff_to_json(c: CoeffElement) -> dict:
    terms = []
    for exps in sorted(c.terms):
        terms.append({"t_exps": list(exps), "coeff": c.scalar_at(exps).to_json()})
    return {"level": c.level, "terms": terms}


def layer_to_json(y: LayerElement) -> dict:
    return {
        "layer": y.ring.m,
        "degree": y.ring.degree,
        "denominator_exp": y.s,
        "coeffs": [_coeff_to_json(c) for c in y.coeffs],
        "valuation": exact_str(y.valuation()),
        "prec": y.prec,
    }


def dual_exp_to_json(d: DualExpForm) -> dict:
    return {
        "scalar": layer_to_json(d.scalar),
        "t_level": d.t_level,
        "reading": d.reading,
        "legs": [f"T{k}^(1/p^{d.t_level})" for k in d.legs],
        "valuation": exact_str(d.valuation()),
    }
