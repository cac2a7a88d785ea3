"""Exact truncated p-adic scalars.

A scalar is a residue mod p^prec together with the precision prec <= M at
which it is trusted.  Residues are kept canonical (reduced mod p^prec), so
"zero at precision k" is the distinct observable state (residue 0, prec k < M)
and is never silently promoted to the exact zero at full precision.

The precision ledger: exact division by p^k lowers the known precision by k.
Equality compares residues at the minimum of the two precisions.
"""
from __future__ import annotations

from fractions import Fraction

from .config import RingConfig
from .errors import NotAUnit, NotDivisible, ZeroInput

INF = float("inf")


def vp(value: int, p: int, cap: int) -> int | float:
    """p-adic valuation of an integer, INF for 0, capped at cap."""
    if value == 0:
        return INF
    v = 0
    while value % p == 0 and v < cap:
        value //= p
        v += 1
    return v


class PadicScalar:
    __slots__ = ("cfg", "residue", "prec")

    def __init__(self, cfg: RingConfig, value: int, prec: int | None = None):
        if prec is None:
            prec = cfg.M
        if prec < 0:
            raise NotDivisible("precision exhausted: division exceeded the ledger")
        self.cfg = cfg
        self.prec = prec
        self.residue = value % (cfg.p ** prec) if prec > 0 else 0

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, cfg: RingConfig) -> "PadicScalar":
        return cls(cfg, 0)

    @classmethod
    def one(cls, cfg: RingConfig) -> "PadicScalar":
        return cls(cfg, 1)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        """Zero at the scalar's own precision (includes the exact zero)."""
        return self.residue == 0

    def is_zero_at_precision(self) -> bool:
        return self.residue == 0

    # -- arithmetic ---------------------------------------------------------

    def _join(self, other: "PadicScalar") -> int:
        return min(self.prec, other.prec)

    def __add__(self, other: "PadicScalar") -> "PadicScalar":
        return PadicScalar(self.cfg, self.residue + other.residue, self._join(other))

    def __sub__(self, other: "PadicScalar") -> "PadicScalar":
        return PadicScalar(self.cfg, self.residue - other.residue, self._join(other))

    def __mul__(self, other: "PadicScalar") -> "PadicScalar":
        return PadicScalar(self.cfg, self.residue * other.residue, self._join(other))

    def __neg__(self) -> "PadicScalar":
        return PadicScalar(self.cfg, -self.residue, self.prec)

    def scale(self, k: int) -> "PadicScalar":
        return PadicScalar(self.cfg, self.residue * k, self.prec)

    # -- the spec operations ------------------------------------------------

    def valuation(self) -> int | float:
        """Largest k with p^k | residue, capped by prec; INF when zero at precision."""
        return vp(self.residue, self.cfg.p, self.prec)

    def divide_exact(self, k: int) -> "PadicScalar":
        """Divide by p^k; requires p^k | residue.  Known precision drops by k."""
        if k < 0:
            raise NotDivisible("k must be >= 0")
        if k == 0:
            return self
        pk = self.cfg.p ** k
        if self.residue % pk != 0:
            raise NotDivisible(
                f"residue {self.residue} not divisible by {self.cfg.p}^{k}"
            )
        if self.prec - k < 0:
            raise NotDivisible("precision exhausted by division ledger")
        return PadicScalar(self.cfg, self.residue // pk, self.prec - k)

    def invert(self) -> "PadicScalar":
        """Inverse mod p^prec; requires valuation 0."""
        if self.is_zero():
            raise ZeroInput("cannot invert zero at precision")
        if self.residue % self.cfg.p == 0:
            raise NotAUnit(f"residue {self.residue} is divisible by {self.cfg.p}")
        m = self.cfg.p ** self.prec
        return PadicScalar(self.cfg, pow(self.residue, -1, m), self.prec)

    def mul_rational(self, q: Fraction | int) -> "PadicScalar":
        """Multiply by an exact rational.

        The p-part of the denominator triggers the division ledger; the unit
        parts act by modular multiplication at full remaining precision.
        """
        q = Fraction(q)
        num, den = q.numerator, q.denominator
        p = self.cfg.p
        vd = 0
        while den % p == 0:
            den //= p
            vd += 1
        out = self.scale(num)
        if vd:
            out = out.divide_exact(vd)
        if den != 1:
            out = out * PadicScalar(self.cfg, den, out.prec).invert()
        return out

    # -- comparison / io ----------------------------------------------------

    def eq_at_min_precision(self, other: "PadicScalar") -> bool:
        prec = self._join(other)
        pk = self.cfg.p ** prec
        return (self.residue - other.residue) % pk == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PadicScalar):
            return NotImplemented
        return self.prec == other.prec and self.residue == other.residue

    def __hash__(self) -> int:
        return hash((self.residue, self.prec))

    def __repr__(self) -> str:
        return f"PadicScalar({self.residue} mod {self.cfg.p}^{self.prec})"

    def to_json(self) -> dict:
        return {"residue": str(self.residue), "prec": self.prec}

    @classmethod
    def from_json(cls, cfg: RingConfig, obj: dict) -> "PadicScalar":
        from .errors import InputError

        try:
            residue = int(obj["residue"])
            prec = int(obj["prec"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad scalar object: {obj!r}") from exc
        if prec < 0 or prec > cfg.M:
            raise InputError(f"scalar prec {prec} outside [0, {cfg.M}]")
        return cls(cfg, residue, prec)
