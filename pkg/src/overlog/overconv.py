"""Radius-of-convergence bookkeeping for Laurent series with negative tails.

A series with negative exponents lives at level N when every stored i < 0
satisfies  v(f_i) + i/((p-1)*e*p^(N-1)) >= 0.  Units additionally need the
strict inequality and a unit constant coefficient.  The finite stored window
stands in for the tail condition; that choice is part of the fixtures.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .config import RamificationConfig
from .errors import ZeroInput
from .series import SeriesElement


@dataclass(frozen=True)
class OverconvergenceReport:
    minimal_level: int | None  # None = not overconvergent within the cap
    binding_exponent: int | None
    margin: Fraction | None
    cap: int

    @property
    def overconvergent(self) -> bool:
        return self.minimal_level is not None

    def to_json(self) -> dict:
        return {
            "minimal_level": (
                self.minimal_level
                if self.minimal_level is not None
                else "NotOverconvergent"
            ),
            "binding_exponent": self.binding_exponent,
            "margin": str(self.margin) if self.margin is not None else None,
            "cap": self.cap,
        }


def _negative_profile(x: SeriesElement) -> list[tuple[int, int]]:
    """(exponent, coefficient valuation) for stored negative exponents."""
    return [
        (i, c.gauss_valuation())
        for i, c in x.coeffs.items()
        if i < 0 and not c.is_zero()
    ]


def _slack(i: int, v: int, p: int, e: int, level: int) -> Fraction:
    return Fraction(v) + Fraction(i, (p - 1) * e * p ** (level - 1))


def minimal_level(
    x: SeriesElement, ram: RamificationConfig | None = None
) -> OverconvergenceReport:
    """Smallest level N >= 1 at which every stored negative exponent passes."""
    ram = ram or RamificationConfig()
    p, e, cap = x.cfg.p, ram.e, x.cfg.level_cap
    profile = _negative_profile(x)
    if not profile:
        return OverconvergenceReport(1, None, None, cap)
    for level in range(1, cap + 1):
        slacks = [(_slack(i, v, p, e, level), i) for i, v in profile]
        worst, binding = min(slacks)
        if worst >= 0:
            return OverconvergenceReport(level, binding, worst, cap)
    worst, binding = min((_slack(i, v, p, e, cap), i) for i, v in profile)
    return OverconvergenceReport(None, binding, worst, cap)


def invertibility_check(
    x: SeriesElement, level: int, ram: RamificationConfig | None = None
) -> bool:
    """Unit criterion at a given level: unit constant term, strict tail slack."""
    ram = ram or RamificationConfig()
    p, e = x.cfg.p, ram.e
    c0 = x.coeffs.get(0)
    if c0 is None or c0.gauss_valuation() != 0:
        return False
    return all(
        _slack(i, v, p, e, level) > 0 for i, v in _negative_profile(x)
    )


def _unit_level(
    x: SeriesElement, ram: RamificationConfig, cap: int
) -> int | None:
    for level in range(1, cap + 1):
        if invertibility_check(x, level, ram):
            return level
    return None


def factor_p_power(
    x: SeriesElement, level: int = 1, ram: RamificationConfig | None = None
) -> tuple[int, int, SeriesElement, int]:
    """Write x = p^k * pi^(-L) * unit.

    k is the minimal Gauss valuation over all stored terms; the pivot is the
    lowest exponent realizing it, L its negation.  The returned level_increase
    says how far past `level` the unit needs to go to pass the unit criterion.
    """
    ram = ram or RamificationConfig()
    if x.is_zero():
        raise ZeroInput("cannot factor the zero series")
    k = x.gauss_valuation()
    pivot = min(e for e, c in x.coeffs.items() if c.gauss_valuation() == k)
    L = -pivot
    unit = x.divide_exact(k).shift(L)
    unit_at = _unit_level(unit, ram, x.cfg.level_cap)
    if unit_at is None:
        # within-cap fallback; desk inputs are overconvergent, so the unit
        # criterion holds at some finite level whenever the pivot is lowest
        level_increase = x.cfg.level_cap
    else:
        level_increase = max(0, unit_at - level)
    return k, L, unit, level_increase
