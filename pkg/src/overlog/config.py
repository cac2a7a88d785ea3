"""Configuration objects threaded through every element and operation.

The desk scale is deliberately small: residues mod p^M, Laurent windows of a
couple hundred exponents, level caps in the low teens.  Defaults follow the
standing desk convention p=3, M=8, n=2.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import InputError

DEFAULT_PI_WINDOW = (-64, 64)
DEFAULT_T_WINDOW = (-32, 32)
DEFAULT_LEVEL_CAP = 12


def _is_odd_prime(m: int) -> bool:
    if m < 3 or m % 2 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeConfig:
    """Odd prime p, working precision M (residues mod p^M), dimension n >= 2."""

    p: int = 3
    M: int = 8
    n: int = 2

    def __post_init__(self) -> None:
        if not _is_odd_prime(self.p):
            raise InputError(f"p must be an odd prime, got {self.p}")
        if self.M < 1:
            raise InputError(f"M must be >= 1, got {self.M}")
        if self.n < 2:
            raise InputError(f"n must be >= 2, got {self.n}")

    @property
    def modulus(self) -> int:
        return self.p ** self.M


@dataclass(frozen=True)
class RamificationConfig:
    """Ramification index e of K over the base; e=1 is the unramified desk case."""

    e: int = 1

    def __post_init__(self) -> None:
        if self.e < 1:
            raise InputError(f"e must be >= 1, got {self.e}")


@dataclass(frozen=True)
class RingConfig:
    """Prime data plus windows and mode flags; every element holds one of these.

    pi_window / t_window bound the *actual* exponents (T-exponents are compared
    after dividing the stored numerator by p^level).  strict_windows turns
    silent truncation at the window edge into WindowOverflow.
    phi_trivial_on_t selects the test simplification where the Frobenius fixes
    the T-variables; the default action is T -> T^p.
    """

    prime: PrimeConfig = PrimeConfig()
    pi_window: tuple[int, int] = DEFAULT_PI_WINDOW
    t_window: tuple[int, int] = DEFAULT_T_WINDOW
    level_cap: int = DEFAULT_LEVEL_CAP
    strict_windows: bool = False
    phi_trivial_on_t: bool = False
    adic_top: bool = False

    def __post_init__(self) -> None:
        lo, hi = self.pi_window
        if lo > 0 or hi < 0 or lo >= hi:
            raise InputError(f"bad pi_window {self.pi_window}")
        lo, hi = self.t_window
        if lo > 0 or hi < 0 or lo >= hi:
            raise InputError(f"bad t_window {self.t_window}")
        if self.level_cap < 1:
            raise InputError("level_cap must be >= 1")

    @property
    def p(self) -> int:
        return self.prime.p

    @property
    def M(self) -> int:
        return self.prime.M

    @property
    def n(self) -> int:
        return self.prime.n

    @property
    def modulus(self) -> int:
        return self.prime.modulus

    def with_precision(self, M: int) -> "RingConfig":
        return replace(self, prime=replace(self.prime, M=M))

    def with_window(self, pi_window: tuple[int, int]) -> "RingConfig":
        return replace(self, pi_window=pi_window)

    def with_adic_top(self) -> "RingConfig":
        # Treat the upper window edge as uniformizer-adic working precision:
        # dropping terms there is a precision statement, not a validity loss,
        # so products don't shrink the valid range from above.  Sound when
        # every negative-support coefficient gains valuation at slope at least
        # 1/((p-1)*e*p^(N-1)); then a coefficient at exponent s is trusted to
        # min(M, (hi - s) * slope) digits.  Used by the ramified lift, where
        # denominators create genuinely infinite positive tails.
        return replace(self, adic_top=True)


DESK = RingConfig()
