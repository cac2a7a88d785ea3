"""Frobenius action, the rank-p^n module decomposition, and partial traces.

phi sends pi -> (1+pi)^p - 1 and T_i -> T_i^p; it factors as sigma (pi
direction) after tau (T direction).  Over phi(R) the ring is free on the
monomials T^r(1+pi)^j with 0 <= r_i, j < p.  The traces below are the
base-ring-valued ones (trace followed by phi^{-1}), so the projection
formula reads trace(phi(a)*x) = a*trace(x) and trace(phi(a)) = p^n*a.

Negative pi-powers are cleared before decomposing: multiplying by
phi(pi)^m shifts the component/trace by pi^m, so one clearing round plus a
shift handles any Laurent tail that fits the window.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb

from .coeffs import CoeffElement, coeff_sum
from .config import RingConfig
from .errors import DecompositionOverflow, RamifiedUnsupported, WindowOverflow
from .series import SeriesElement


def phi_pi(cfg: RingConfig, var: str = "pi") -> SeriesElement:
    """(1 + pi)^p - 1."""
    p = cfg.p
    return SeriesElement.from_dict(cfg, var, {k: comb(p, k) for k in range(1, p + 1)})


def _require_trace_domain(x: SeriesElement) -> None:
    if x.var != "pi":
        raise RamifiedUnsupported(
            "trace engine runs over the base uniformizer; expand ramified "
            "input through its Frobenius lift first"
        )
    if x.window is not None:
        raise WindowOverflow(
            "trace needs an exact element: truncated tails would leak into "
            "every basis component"
        )


def frobenius(x: SeriesElement) -> SeriesElement:
    """Apply phi: substitute (1+pi)^p - 1 for pi and raise each T to p."""
    if x.var != "pi":
        raise RamifiedUnsupported("base Frobenius acts on pi-series only")
    cfg = x.cfg
    out = SeriesElement.zero(cfg, x.var, x.prec)
    if not x.coeffs:
        return out
    fpi = phi_pi(cfg, x.var)
    powers: dict[int, SeriesElement] = {0: SeriesElement.one(cfg, x.var, x.prec)}
    exps = x.support()
    if exps[-1] > 0:
        acc = powers[0]
        for e in range(1, exps[-1] + 1):
            acc = acc * fpi
            if e in x.coeffs:
                powers[e] = acc
    if exps[0] < 0:
        inv = fpi.laurent_inverse()
        acc = powers[0]
        for e in range(-1, exps[0] - 1, -1):
            acc = acc * inv
            if e in x.coeffs:
                powers[e] = acc
    for e in exps:
        out = out + powers[e].scale_coeff(x.coeffs[e].frobenius_t())
    return out


# -- the u = 1 + pi coordinate ---------------------------------------------


def u_rewrite(x: SeriesElement) -> dict[int, CoeffElement]:
    """Coefficients of a tail-free series in powers of u = 1 + pi."""
    ms = x.min_support()
    if ms is not None and ms < 0:
        raise DecompositionOverflow("u-rewrite needs a tail-free element")
    out: dict[int, list[CoeffElement]] = {}
    for k, c in x.coeffs.items():
        sign = -1 if (k % 2) else 1
        for j in range(k + 1):
            # pi^k = (u-1)^k contributes C(k,j)(-1)^(k-j) at u^j
            s = sign if (j % 2 == 0) else -sign
            out.setdefault(j, []).append(c.scale(s * comb(k, j)))
    return {
        j: total
        for j, parts in out.items()
        if not (total := coeff_sum(x.cfg, parts)).is_zero()
    }


def u_unrewrite(
    cfg: RingConfig, d: dict[int, CoeffElement], var: str = "pi", prec: int | None = None
) -> SeriesElement:
    """Inverse of u_rewrite: expand each u^j back into powers of pi."""
    out: dict[int, list[CoeffElement]] = {}
    for j, c in d.items():
        for k in range(j + 1):
            out.setdefault(k, []).append(c.scale(comb(j, k)))
    coeffs = {k: coeff_sum(cfg, parts) for k, parts in out.items()}
    return SeriesElement(cfg, var, coeffs, prec)


# -- partial traces ---------------------------------------------------------


def _clearing_exponent(x: SeriesElement) -> int:
    ms = x.min_support()
    return -ms if ms is not None and ms < 0 else 0


def _clear_tail(x: SeriesElement) -> tuple[SeriesElement, int]:
    """Multiply by phi(pi)^m so the support becomes tail-free."""
    m = _clearing_exponent(x)
    if m == 0:
        return x, 0
    cfg = x.cfg
    top = x.max_support() + cfg.p * m
    if top > cfg.pi_window[1]:
        raise DecompositionOverflow(
            f"clearing the pi^-{m} tail needs support up to {top}, beyond the window"
        )
    return x * phi_pi(cfg, x.var).power(m), m


def sigma_select(x: SeriesElement) -> SeriesElement:
    """The pi-direction selection sum (the sigma-trace divided by its p):
    keep u-exponents divisible by p and divide them by p."""
    _require_trace_domain(x)
    cfg = x.cfg
    y, m = _clear_tail(x)
    d = u_rewrite(y)
    p = cfg.p
    kept = {j // p: c for j, c in d.items() if j % p == 0}
    return u_unrewrite(cfg, kept, x.var, x.prec).shift(-m)


def sigma_trace(x: SeriesElement) -> SeriesElement:
    """Trace along the pi-direction subextension (rank p), base-valued."""
    return sigma_select(x).scale(x.cfg.p)


def tau_select(x: SeriesElement) -> SeriesElement:
    """The T-direction selection sum: T^a -> T^(a/p) on p-divisible numerator
    tuples, without the rank factor."""
    _require_trace_domain(x)
    cfg = x.cfg
    if cfg.phi_trivial_on_t:
        return x
    p = cfg.p
    coeffs = {}
    for k, c in x.coeffs.items():
        terms = {
            tuple(a // p for a in exps): r
            for exps, r in c.terms.items()
            if all(a % p == 0 for a in exps)
        }
        coeffs[k] = CoeffElement(cfg, terms, c.level, c.prec)
    return SeriesElement(cfg, x.var, coeffs, x.prec)


def tau_trace(x: SeriesElement) -> SeriesElement:
    """Trace along the T-direction subextension (rank p^(n-1)), base-valued."""
    if x.cfg.phi_trivial_on_t:
        _require_trace_domain(x)
        return x
    return tau_select(x).scale(x.cfg.p ** (x.cfg.n - 1))


def trace_phi(x: SeriesElement) -> SeriesElement:
    """Full base-valued trace over the rank-p^n decomposition."""
    return tau_trace(sigma_trace(x))


def trace_phi_select(x: SeriesElement) -> SeriesElement:
    """trace_phi divided by its p^n factor, computed without any division,
    so repeated application never erodes working precision."""
    return tau_select(sigma_select(x))


def sigma_tau_split(x: SeriesElement) -> tuple[SeriesElement, SeriesElement]:
    return sigma_trace(x), tau_trace(x)


def psi_classical(x: SeriesElement) -> SeriesElement:
    """p^{-1} times the sigma-trace: the classical one-variable projector."""
    return sigma_select(x)


# -- full decomposition -----------------------------------------------------


@dataclass(frozen=True)
class PhiBasis:
    cfg: RingConfig

    @property
    def elements(self) -> list[tuple[int, tuple[int, ...]]]:
        """(j, T-residues) pairs for (1+pi)^j * T^r, identity first."""
        cfg = self.cfg
        p = cfg.p
        t_range = (
            [tuple([0] * (cfg.n - 1))]
            if cfg.phi_trivial_on_t
            else [tuple(r) for r in product(range(p), repeat=cfg.n - 1)]
        )
        return [(j, r) for j in range(p) for r in t_range]

    def as_series(self, elem: tuple[int, tuple[int, ...]], var: str = "pi") -> SeriesElement:
        j, r = elem
        cfg = self.cfg
        u = SeriesElement.from_dict(cfg, var, {0: 1, 1: 1})
        t = CoeffElement(cfg, {r: 1}, 0)
        return u.power(j).scale_coeff(t)


@dataclass(frozen=True)
class PhiDecomposition:
    basis: PhiBasis
    components: dict[tuple[int, tuple[int, ...]], SeriesElement]
    var: str = "pi"

    def component(self, elem: tuple[int, tuple[int, ...]]) -> SeriesElement:
        c = self.components.get(elem)
        if c is None:
            return SeriesElement.zero(self.basis.cfg, self.var)
        return c

    def recompose(self) -> SeriesElement:
        cfg = self.basis.cfg
        out = SeriesElement.zero(cfg, self.var)
        for elem, comp in self.components.items():
            out = out + frobenius(comp) * self.basis.as_series(elem, self.var)
        return out


def sigma_components(x: SeriesElement) -> list[SeriesElement]:
    """x = sum_j phi_sigma(x_j) (1+pi)^j over j < p; returns [x_0 .. x_{p-1}]."""
    _require_trace_domain(x)
    cfg = x.cfg
    p = cfg.p
    y, m = _clear_tail(x)
    d = u_rewrite(y)
    out = []
    for r in range(p):
        kept = {j // p: c for j, c in d.items() if j % p == r}
        out.append(u_unrewrite(cfg, kept, x.var, x.prec).shift(-m))
    return out


def tau_components(
    x: SeriesElement,
) -> dict[tuple[int, ...], SeriesElement]:
    """x = sum_r phi_tau(x_r) T^r over T-exponent residues r mod p."""
    cfg = x.cfg
    if cfg.phi_trivial_on_t:
        return {tuple([0] * (cfg.n - 1)): x}
    p = cfg.p
    split: dict[tuple[int, ...], dict[int, dict[tuple[int, ...], int]]] = {}
    for k, c in x.coeffs.items():
        for exps, r in c.terms.items():
            res = tuple(a % p for a in exps)
            quo = tuple((a - b) // p for a, b in zip(exps, res))
            split.setdefault(res, {}).setdefault(k, {})[quo] = r
    out = {}
    for res, coeffs in split.items():
        out[res] = SeriesElement(
            cfg,
            x.var,
            {
                k: CoeffElement(cfg, terms, x.coeffs[k].level, x.prec)
                for k, terms in coeffs.items()
            },
            x.prec,
        )
    return out


def phi_decompose(x: SeriesElement) -> PhiDecomposition:
    """Components of x over the T^r(1+pi)^j basis of the free phi-module."""
    _require_trace_domain(x)
    basis = PhiBasis(x.cfg)
    components: dict[tuple[int, tuple[int, ...]], SeriesElement] = {}
    for j, xj in enumerate(sigma_components(x)):
        if xj.is_zero():
            continue
        for res, y in tau_components(xj).items():
            if not y.is_zero():
                components[(j, res)] = y
    return PhiDecomposition(basis, components, x.var)
