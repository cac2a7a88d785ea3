"""Ramified uniformizers: pi expanded in pi_K, the Frobenius lift, and the
structure of its derivative.

Input is the monic polynomial f(X) = X^e + a_{e-1}X^{e-1} + ... + a_0 that
pi_K satisfies over the base, with a_0 = pi * (plus-part unit) and a
separability witness mod p.  Everything else is iteration: the expansion of
pi is a fixed point in the pi_K-adic direction, the lift phi(pi_K) is a
Newton solve seeded at pi_K^p (which picks the root congruent to it mod p),
and the derivative factors as p * pi_K^I * unit through factor_p_power.
"""
from __future__ import annotations

from dataclasses import dataclass

from .config import RingConfig
from .errors import NewtonStall, NotDivisible, NotEisenstein, WindowOverflow
from .overconv import factor_p_power
from .series import SeriesElement

_EXPAND_CAP = 400
_NEWTON_CAP = 64


def _drop_above(x: SeriesElement, bound: int) -> SeriesElement:
    """Forget coefficients above the trusted band of an adic-top computation."""
    kept = {k: c for k, c in x.coeffs.items() if k <= bound}
    return SeriesElement(x.cfg, x.var, kept, x.prec, x.window)


@dataclass(frozen=True)
class EisensteinData:
    cfg: RingConfig
    e: int
    coeffs: list[SeriesElement]  # a_0 .. a_{e-1}, series in pi over the base

    def validate(self) -> None:
        if self.e < 1 or len(self.coeffs) != self.e:
            raise NotEisenstein(f"need exactly e={self.e} lower coefficients")
        for i, a in enumerate(self.coeffs):
            if a.var != "pi":
                raise NotEisenstein("coefficients must be series in the base pi")
            ms = a.min_support()
            if ms is not None and ms < 0:
                raise NotEisenstein(f"a_{i} has a pole; plus-part required")
        a0 = self.coeffs[0]
        if a0.min_support() != 1:
            raise NotEisenstein("a_0 must be pi times a unit")
        if a0.coeff_at(1).constant_residue() % self.cfg.p == 0:
            raise NotEisenstein("a_0/pi must be a unit of the plus part")
        # separability witness: some p-coprime index with unit coefficient;
        # the leading a_e = 1 counts when p does not divide e
        if self.e % self.cfg.p != 0:
            return
        for i in range(1, self.e):
            if i % self.cfg.p != 0 and self.coeffs[i].gauss_valuation() == 0:
                return
        raise NotEisenstein("reduction mod p is inseparable")


@dataclass(frozen=True)
class PiExpansion:
    e: int
    pi_series: SeriesElement  # pi as a series in pi_K
    ratio: SeriesElement  # pi * pi_K^(-e), constant coefficient 1 mod p

    def b(self, k: int) -> int:
        """Scalar coefficient of pi_K^k in the ratio."""
        return self.ratio.coeff_at(k).constant_residue()


def expand_pi(f: EisensteinData) -> PiExpansion:
    """Solve f(pi_K) = 0 for pi as a series in pi_K by successive substitution."""
    f.validate()
    cfg = f.cfg
    h = f.coeffs[0].shift(-1)  # a_0 / pi, a plus-part unit
    lead = SeriesElement.monomial(cfg, "piK", f.e)
    cur = SeriesElement.zero(cfg, "piK")
    for _ in range(_EXPAND_CAP):
        rhs = lead
        for i in range(1, f.e):
            ai = f.coeffs[i].substitute(cur)
            if not ai.is_zero():
                rhs = rhs + ai.shift(i)
        nxt = (-rhs) * h.substitute(cur).formal_inverse()
        if nxt.eq_at_min_precision(cur):
            break
        cur = nxt
    else:
        raise NewtonStall("pi expansion did not reach a fixed point")
    ratio = cur.shift(-f.e)
    if ratio.coeff_at(0).constant_residue() % cfg.p != 1:
        raise NotEisenstein("expansion ratio does not start at 1 mod p")
    return PiExpansion(f.e, cur, ratio)


def _residual_measure(r: SeriesElement) -> tuple:
    gv = r.gauss_valuation()
    ms = r.min_support()
    return (gv, ms if ms is not None else 0)


def frobenius_lift(
    f: EisensteinData, window: tuple[int, int] | None = None
) -> SeriesElement:
    """phi(pi_K) as a series in pi_K, by Newton iteration from pi_K^p.

    Solves  E(y) = (1 + E(pi_K))^p - 1  where E is the expansion of pi, i.e.
    the image of the base Frobenius relation under the change of uniformizer.
    """
    rcfg = f.cfg if window is None else f.cfg.with_window(window)
    # Expansions with denominators have infinite tails upward; run the whole
    # iteration with the top edge treated as adic working precision and keep a
    # guard band so every coefficient we return is good to full precision
    # (contamination reaching depth d below the edge carries valuation at
    # least d / ((p-1) * e) at level one).
    cfg = rcfg.with_adic_top()
    guard = cfg.M * (cfg.p - 1) * f.e
    trusted_hi = cfg.pi_window[1] - guard
    if trusted_hi < cfg.p + 2:
        raise WindowOverflow(
            f"window top {cfg.pi_window[1]} cannot absorb the guard band "
            f"{guard} at precision {cfg.M}"
        )
    f = EisensteinData(
        cfg,
        f.e,
        [SeriesElement(cfg, a.var, a.coeffs, a.prec, a.window) for a in f.coeffs],
    )
    exp = expand_pi(f)
    E = exp.pi_series
    Eprime = E.formal_derivative()
    one = SeriesElement.one(cfg, "piK")
    target = (one + E).power(cfg.p) - one
    y = SeriesElement.monomial(cfg, "piK", cfg.p)
    best = None
    stale = 0
    for _ in range(_NEWTON_CAP):
        r = _drop_above(E.substitute(y) - target, trusted_hi)
        if r.is_zero():
            break
        measure = _residual_measure(r)
        if best is None or measure > best:
            best, stale = measure, 0
        else:
            stale += 1
            if stale >= 3:
                raise NewtonStall(
                    f"no contraction: residual valuation stuck at {best}"
                )
        try:
            k, L, unit, _ = factor_p_power(Eprime.substitute(y))
            delta = r.divide_exact(k).shift(L) * unit.laurent_inverse()
        except NotDivisible as err:
            raise NewtonStall(f"residual not divisible by the derivative: {err}")
        y = y - delta
    else:
        raise NewtonStall("Newton iteration hit the round cap")
    y = _drop_above(y, trusted_hi)
    red = y - SeriesElement.monomial(cfg, "piK", cfg.p)
    if not red.is_zero() and red.gauss_valuation() < 1:
        raise NewtonStall("lift does not reduce to pi_K^p mod p")
    return SeriesElement(rcfg, "piK", y.coeffs, y.prec, y.window)


@dataclass(frozen=True)
class DerivativeStructure:
    I: int
    unit: SeriesElement
    witness: int | None  # a coefficient index certifying exact p-divisibility
    regime: str  # "p-divides-e" or "coprime"


def derivative_structure(
    f: EisensteinData, window: tuple[int, int] | None = None
) -> DerivativeStructure:
    """Factor d(phi(pi_K))/d(pi_K) as p * pi_K^I * unit."""
    lift = frobenius_lift(f, window)
    g = lift.formal_derivative()
    k, L, unit, _ = factor_p_power(g)
    if k != 1:
        raise NotDivisible(f"derivative is divisible by p^{k}, expected exactly p")
    I = -L
    regime = "p-divides-e" if f.e % f.cfg.p == 0 else "coprime"
    witness = None
    for i in sorted(lift.coeffs):
        if i <= -1 and i % f.cfg.p != 0:
            if lift.coeffs[i].gauss_valuation() == 1:
                witness = i
                break
    return DerivativeStructure(I, unit, witness, regime)
