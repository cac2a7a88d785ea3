"""Batch driver: JSON in, deterministic JSON report out.

Exit codes: 0 success, 1 domain error (the computation itself refused), 2
malformed input or configuration.  All randomness flows from --seed, echoed
in every report.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import RingConfig
from .cyclo import diagram_check_trace_compat, dual_exp
from .eisenstein import derivative_structure, expand_pi, frobenius_lift
from .errors import DomainError, InputError
from .frobenius import phi_decompose, trace_phi
from .logderiv import log_derivative
from .overconv import minimal_level
from .serialize import (
    config_from_json,
    config_to_json,
    dual_exp_to_json,
    dumps,
    eisenstein_from_json,
    ledger_to_json,
    series_from_json,
    series_to_json,
    symbol_product_from_json,
)
from .suite import _case_rng, _rand_plus, run_suite


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise InputError(f"cannot read {path}: {err}")
    except json.JSONDecodeError as err:
        raise InputError(f"parse: {err}")


def _cmd_radius(cfg: RingConfig, payload, seed: int) -> dict:
    x = series_from_json(cfg, payload)
    return {"report": minimal_level(x).to_json()}


def _cmd_trace(cfg: RingConfig, payload, seed: int) -> dict:
    x = series_from_json(cfg, payload)
    dec = phi_decompose(x)
    components = [
        {
            "u_exp": j,
            "t_residues": list(r),
            "series": series_to_json(c),
        }
        for (j, r), c in sorted(dec.components.items())
        if not c.is_zero()
    ]
    return {
        "trace": series_to_json(trace_phi(x)),
        "decomposition": components,
    }


def _cmd_lift(cfg: RingConfig, payload, seed: int) -> dict:
    f = eisenstein_from_json(cfg, payload)
    exp = expand_pi(f)
    y = frobenius_lift(f)
    st = derivative_structure(f)
    return {
        "expansion": series_to_json(exp.pi_series),
        "frobenius_lift": series_to_json(y),
        "derivative_structure": {
            "I": st.I,
            "unit": series_to_json(st.unit),
            "witness": st.witness,
            "regime": st.regime,
        },
    }


def _cmd_logderiv(cfg: RingConfig, payload, seed: int) -> dict:
    s = symbol_product_from_json(cfg, payload)
    return {"ledger": ledger_to_json(log_derivative(s))}


def _cmd_dualexp(cfg: RingConfig, payload, seed: int) -> dict:
    if not isinstance(payload, dict):
        raise InputError("dualexp payload: expected an object")
    sym = symbol_product_from_json(cfg, payload.get("symbol"))
    m = payload.get("m")
    if not isinstance(m, int) or isinstance(m, bool):
        raise InputError("dualexp payload: m must be an integer")
    source = payload.get("N")
    if source is not None and (not isinstance(source, int) or isinstance(source, bool)):
        raise InputError("dualexp payload: N must be an integer")
    reading = payload.get("reading", "pole")
    d = dual_exp(sym, m, source, reading)
    return {"form": dual_exp_to_json(d)}


def _cmd_diagram(cfg: RingConfig, payload, seed: int) -> dict:
    count = 20
    layers = (1, 2)
    if payload is not None:
        if not isinstance(payload, dict):
            raise InputError("diagram payload: expected an object")
        count = payload.get("count", count)
        layers = tuple(payload.get("layers", layers))
        if not isinstance(count, int) or count < 1:
            raise InputError("diagram payload: bad count")
        if not all(isinstance(m, int) and m >= 1 for m in layers):
            raise InputError("diagram payload: bad layers")
    rng = _case_rng(seed, "diagram")
    checks = passed = 0
    failures = []
    for t in range(count):
        f = _rand_plus(rng, cfg)
        for m in layers:
            checks += 1
            if diagram_check_trace_compat(f, m):
                passed += 1
            else:
                failures.append({"trial": t, "layer": m})
    return {
        "checks": checks,
        "passed": passed,
        "failed": checks - passed,
        "failures": failures,
        "layers": list(layers),
    }


def _cmd_suite(cfg: RingConfig, payload, seed: int) -> dict:
    return run_suite(cfg, seed)


_COMMANDS = {
    "radius": (_cmd_radius, True),
    "trace": (_cmd_trace, True),
    "lift": (_cmd_lift, True),
    "logderiv": (_cmd_logderiv, True),
    "dualexp": (_cmd_dualexp, True),
    "diagram": (_cmd_diagram, False),
    "suite": (_cmd_suite, False),
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="overlog",
        description="batch driver for the overconvergent-form desk library",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("input", nargs="?", help="input JSON path")
    parser.add_argument("--config", help="config JSON path")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--strict-windows", action="store_true")
    args = parser.parse_args(argv)

    try:
        cfg_obj = _load_json(args.config) if args.config else {}
        if not isinstance(cfg_obj, dict):
            raise InputError("config: expected an object")
        seed = args.seed
        if seed is None:
            s = cfg_obj.get("seed", 0)
            if not isinstance(s, int) or isinstance(s, bool):
                raise InputError("config.seed: expected an integer")
            seed = s
        cfg = config_from_json(cfg_obj)
        if args.strict_windows:
            cfg = RingConfig(
                cfg.prime,
                cfg.pi_window,
                cfg.t_window,
                cfg.level_cap,
                True,
                cfg.phi_trivial_on_t,
            )
        handler, needs_input = _COMMANDS[args.command]
        payload = None
        if args.input is not None:
            payload = _load_json(args.input)
        elif needs_input:
            raise InputError(f"{args.command} needs an input JSON path")
        report = handler(cfg, payload, seed)
    except InputError as err:
        sys.stdout.write(dumps({"error": "parse", "message": str(err)}))
        return 2
    except DomainError as err:
        sys.stdout.write(
            dumps({
                "error": "domain",
                "kind": type(err).__name__,
                "message": str(err),
            })
        )
        return 1
    report["seed"] = seed
    report["config"] = config_to_json(cfg)
    sys.stdout.write(dumps(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
