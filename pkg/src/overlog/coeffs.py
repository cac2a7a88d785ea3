"""Laurent coefficient layer: polynomials in the T-variables over p-adic scalars.

A CoeffElement holds terms T^(t/p^level) -> residue for exponent numerator
tuples t of length n-1.  Exponents live on the (1/p^level)-grid; the actual
exponent t/p^level must stay inside the configured T-window.  All residues are
canonical mod p^prec with exact zeros dropped, so the element-level prec is the
precision of every stored coefficient.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .config import RingConfig
from .errors import NotDivisible, NotInvertible, WindowOverflow
from .scalars import INF, PadicScalar, vp

_INVERSE_CAP = 1024


class CoeffElement:
    __slots__ = ("cfg", "level", "prec", "terms")

    def __init__(
        self,
        cfg: RingConfig,
        terms: dict[tuple[int, ...], int] | None = None,
        level: int = 0,
        prec: int | None = None,
    ):
        self.cfg = cfg
        self.level = level
        self.prec = cfg.M if prec is None else prec
        if self.prec < 0:
            raise NotDivisible("precision exhausted: division exceeded the ledger")
        self.terms = self._reduce(terms or {})

    # -- normalization ------------------------------------------------------

    def _reduce(self, raw: dict[tuple[int, ...], int]) -> dict[tuple[int, ...], int]:
        pk = self.cfg.p ** self.prec
        lo, hi = self.cfg.t_window
        bound_lo, bound_hi = lo * self.cfg.p ** self.level, hi * self.cfg.p ** self.level
        out: dict[tuple[int, ...], int] = {}
        for exps, residue in raw.items():
            if any(e < bound_lo or e > bound_hi for e in exps):
                if self.cfg.strict_windows:
                    raise WindowOverflow(
                        f"T-exponent {exps} outside window at level {self.level}"
                    )
                continue
            r = residue % pk
            if r:
                out[exps] = r
        return out

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, cfg: RingConfig, level: int = 0, prec: int | None = None):
        return cls(cfg, {}, level, prec)

    @classmethod
    def const(cls, cfg: RingConfig, value: int, prec: int | None = None):
        zero_exp = (0,) * (cfg.n - 1)
        return cls(cfg, {zero_exp: value}, 0, prec)

    @classmethod
    def gen(cls, cfg: RingConfig, index: int = 0, power: int = 1, level: int = 0):
        """The monomial T_index^(power/p^level)."""
        exps = [0] * (cfg.n - 1)
        exps[index] = power
        return cls(cfg, {tuple(exps): 1}, level)

    # -- predicates / views -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        zero_exp = (0,) * (self.cfg.n - 1)
        return all(e == zero_exp for e in self.terms)

    def constant_residue(self) -> int:
        zero_exp = (0,) * (self.cfg.n - 1)
        return self.terms.get(zero_exp, 0)

    def gauss_valuation(self) -> int | float:
        if not self.terms:
            return INF
        p, prec = self.cfg.p, self.prec
        return min(vp(r, p, prec) for r in self.terms.values())

    def scalar_at(self, exps: tuple[int, ...]) -> PadicScalar:
        return PadicScalar(self.cfg, self.terms.get(exps, 0), self.prec)

    # -- level handling -----------------------------------------------------

    def align_level(self, level: int) -> "CoeffElement":
        """Re-express on the finer (1/p^level)-grid; level must be >= self.level."""
        if level == self.level:
            return self
        if level < self.level:
            raise WindowOverflow("cannot coarsen an exponent grid")
        scale = self.cfg.p ** (level - self.level)
        terms = {tuple(e * scale for e in exps): r for exps, r in self.terms.items()}
        return CoeffElement(self.cfg, terms, level, self.prec)

    @staticmethod
    def _common(a: "CoeffElement", b: "CoeffElement"):
        level = max(a.level, b.level)
        return a.align_level(level), b.align_level(level), level

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "CoeffElement") -> "CoeffElement":
        a, b, level = self._common(self, other)
        terms = dict(a.terms)
        for exps, r in b.terms.items():
            terms[exps] = terms.get(exps, 0) + r
        return CoeffElement(self.cfg, terms, level, min(a.prec, b.prec))

    def __sub__(self, other: "CoeffElement") -> "CoeffElement":
        return self + (-other)

    def __neg__(self) -> "CoeffElement":
        return CoeffElement(
            self.cfg, {e: -r for e, r in self.terms.items()}, self.level, self.prec
        )

    def __mul__(self, other: "CoeffElement") -> "CoeffElement":
        a, b, level = self._common(self, other)
        out: dict[tuple[int, ...], int] = {}
        if self.cfg.n == 2:
            for (ea,), ra in a.terms.items():
                for (eb,), rb in b.terms.items():
                    key = (ea + eb,)
                    out[key] = out.get(key, 0) + ra * rb
            return CoeffElement(self.cfg, out, level, min(a.prec, b.prec))
        for ea, ra in a.terms.items():
            for eb, rb in b.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                out[key] = out.get(key, 0) + ra * rb
        return CoeffElement(self.cfg, out, level, min(a.prec, b.prec))

    def scale(self, k: int) -> "CoeffElement":
        return CoeffElement(
            self.cfg, {e: r * k for e, r in self.terms.items()}, self.level, self.prec
        )

    def mul_rational(self, q: Fraction | int) -> "CoeffElement":
        q = Fraction(q)
        num, den = q.numerator, q.denominator
        p = self.cfg.p
        vd = 0
        while den % p == 0:
            den //= p
            vd += 1
        out = self.scale(num)
        if den != 1:
            inv = pow(den, -1, self.cfg.p ** out.prec) if out.prec else 0
            out = out.scale(inv)
        if vd:
            out = out.divide_exact(vd)
        return out

    def divide_exact(self, k: int) -> "CoeffElement":
        """Divide every residue by p^k; precision drops by k (the ledger)."""
        if k == 0:
            return self
        pk = self.cfg.p ** k
        out = {}
        for exps, r in self.terms.items():
            if r % pk != 0:
                raise NotDivisible(f"coefficient at {exps} not divisible by p^{k}")
            out[exps] = r // pk
        return CoeffElement(self.cfg, out, self.level, self.prec - k)

    # -- structure maps -----------------------------------------------------

    def frobenius_t(self) -> "CoeffElement":
        """T_i -> T_i^p on the actual exponents (identity in trivial mode)."""
        if self.cfg.phi_trivial_on_t:
            return self
        p = self.cfg.p
        terms = {tuple(e * p for e in exps): r for exps, r in self.terms.items()}
        return CoeffElement(self.cfg, terms, self.level, self.prec)

    def t_weight(self, index: int) -> "CoeffElement":
        """Multiply each term by its actual T_index-exponent (the T d/dT weight)."""
        terms = {e: r * e[index] for e, r in self.terms.items()}
        out = CoeffElement(self.cfg, terms, self.level, self.prec)
        if self.level:
            out = out.divide_exact(self.level)
        return out

    def substitute_t(self, images: list["CoeffElement"]) -> "CoeffElement":
        """Substitute T_i -> images[i]; exponent numerators become plain powers,
        so this is only defined at level 0."""
        if self.level != 0:
            raise WindowOverflow("substitution requires level 0 exponents")
        acc = CoeffElement.zero(self.cfg, prec=self.prec)
        for exps, r in self.terms.items():
            term = CoeffElement.const(self.cfg, r, self.prec)
            for i, e in enumerate(exps):
                term = term * images[i].power(e)
            acc = acc + term
        return acc

    def power(self, k: int) -> "CoeffElement":
        if k < 0:
            return self.inverse().power(-k)
        out = CoeffElement.const(self.cfg, 1, self.prec)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def inverse(self) -> "CoeffElement":
        """Geometric inverse against the lowest unit-valuation monomial.

        Converges when every other term is p-divisible or T-larger than the
        pivot; the iteration terminates by precision decay or window exit,
        which in strict mode raises WindowOverflow instead.
        """
        p = self.cfg.p
        pivots = [e for e, r in self.terms.items() if r % p != 0]
        if not pivots:
            raise NotInvertible("no unit coefficient: Gauss valuation is positive")
        pivot = min(pivots)
        c = self.terms[pivot]
        y0 = CoeffElement(
            self.cfg,
            {tuple(-e for e in pivot): pow(c, -1, p ** self.prec)},
            self.level,
            self.prec,
        )
        one = CoeffElement.const(self.cfg, 1, self.prec).align_level(self.level)
        r = one - (self * y0)
        acc, t = one, r
        for _ in range(_INVERSE_CAP):
            if t.is_zero():
                return acc * y0
            acc = acc + t
            t = t * r
        raise NotInvertible("geometric inverse did not terminate at desk scale")

    # -- comparison ---------------------------------------------------------

    def eq_at_min_precision(self, other: "CoeffElement") -> bool:
        a, b, _ = self._common(self, other)
        prec = min(a.prec, b.prec)
        pk = self.cfg.p ** prec
        keys = set(a.terms) | set(b.terms)
        return all((a.terms.get(k, 0) - b.terms.get(k, 0)) % pk == 0 for k in keys)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoeffElement):
            return NotImplemented
        a, b, _ = self._common(self, other)
        return a.prec == b.prec and a.terms == b.terms

    def __repr__(self) -> str:
        if not self.terms:
            return f"Coeff(0 @prec {self.prec})"
        bits = []
        for exps in sorted(self.terms):
            mono = "*".join(
                f"T{i + 1}^({e}/p^{self.level})" if self.level else f"T{i + 1}^{e}"
                for i, e in enumerate(exps)
                if e
            )
            bits.append(f"{self.terms[exps]}{'*' + mono if mono else ''}")
        return f"Coeff({' + '.join(bits)} @prec {self.prec})"


def coeff_sum(cfg: RingConfig, items: Iterable[CoeffElement]) -> CoeffElement:
    acc = CoeffElement.zero(cfg)
    for item in items:
        acc = acc + item
    return acc
