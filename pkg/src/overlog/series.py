"""Laurent series layer: finite windows in the uniformizer over CoeffElements.

An element stores coefficients pi-exponent -> CoeffElement.  window=None means
the stored dictionary *is* the element (an exact Laurent polynomial at working
precision); a finite window (lo, hi) marks the range on which the coefficients
are trusted after some lossy operation (geometric inverse tails, substitution,
series that left the configured global window).  Products propagate the
computable-range intersection; in strict mode truncation raises WindowOverflow
instead of being recorded.

Equality always means: equal coefficients at the minimum known precision on
the overlap of the valid windows.
"""
from __future__ import annotations

from fractions import Fraction

from .coeffs import CoeffElement
from .config import RingConfig
from .errors import InputError, NotInvertible, WindowOverflow
from .scalars import INF, PadicScalar

_INVERSE_CAP = 4096


class SeriesElement:
    __slots__ = ("cfg", "var", "prec", "coeffs", "window")

    def __init__(
        self,
        cfg: RingConfig,
        var: str,
        coeffs: dict[int, CoeffElement] | None = None,
        prec: int | None = None,
        window: tuple[int, int] | None = None,
    ):
        if var not in ("pi", "piK"):
            raise InputError(f"unknown uniformizer tag {var!r}")
        self.cfg = cfg
        self.var = var
        self.prec = cfg.M if prec is None else prec
        glo, ghi = cfg.pi_window
        if window is not None:
            lo, hi = max(window[0], glo), min(window[1], ghi)
            if cfg.adic_top:
                # upper edge is working precision, never a validity bound
                hi = ghi
            if lo > hi:
                raise WindowOverflow("valid window vanished")
            window = (lo, hi)
        self.window = window
        self.coeffs = self._reduce(coeffs or {})

    # -- normalization ------------------------------------------------------

    def _reduce(self, raw: dict[int, CoeffElement]) -> dict[int, CoeffElement]:
        glo, ghi = self.cfg.pi_window
        lo, hi = self.window if self.window is not None else (glo, ghi)
        out: dict[int, CoeffElement] = {}
        dropped = False
        for k, c in raw.items():
            if k < lo or k > hi:
                if not c.is_zero() and not (self.cfg.adic_top and k > hi):
                    dropped = True
                continue
            if c.prec != self.prec:
                c = CoeffElement(self.cfg, c.terms, c.level, self.prec)
            if not c.is_zero():
                out[k] = c
        if dropped:
            if self.cfg.strict_windows:
                raise WindowOverflow("series support left the valid window")
            if self.window is None:
                # an exact element no longer fits: record the truncation
                self.window = (glo, ghi)
        return out

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, cfg: RingConfig, var: str = "pi", prec: int | None = None):
        return cls(cfg, var, {}, prec)

    @classmethod
    def one(cls, cfg: RingConfig, var: str = "pi", prec: int | None = None):
        return cls(cfg, var, {0: CoeffElement.const(cfg, 1)}, prec)

    @classmethod
    def monomial(
        cls,
        cfg: RingConfig,
        var: str,
        exp: int,
        coeff: int | CoeffElement = 1,
        prec: int | None = None,
    ):
        if isinstance(coeff, int):
            coeff = CoeffElement.const(cfg, coeff)
        return cls(cfg, var, {exp: coeff}, prec)

    @classmethod
    def from_dict(
        cls,
        cfg: RingConfig,
        var: str,
        mapping: dict[int, int | dict[tuple[int, ...], int]],
        level: int = 0,
        prec: int | None = None,
    ):
        """Convenience builder; values are ints (T-constant) or T-term dicts."""
        coeffs: dict[int, CoeffElement] = {}
        for k, v in mapping.items():
            if isinstance(v, int):
                c = CoeffElement.const(cfg, v)
            else:
                c = CoeffElement(cfg, dict(v), level)
            coeffs[k] = c
        return cls(cfg, var, coeffs, prec)

    # -- views --------------------------------------------------------------

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def min_support(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def max_support(self) -> int | None:
        return max(self.coeffs) if self.coeffs else None

    def effective_window(self) -> tuple[int, int]:
        return self.window if self.window is not None else self.cfg.pi_window

    @property
    def exact(self) -> bool:
        return self.window is None

    def coeff_at(self, k: int) -> CoeffElement:
        c = self.coeffs.get(k)
        if c is None:
            return CoeffElement.zero(self.cfg, prec=self.prec)
        return c

    def is_zero(self) -> bool:
        """Zero at this element's precision on its valid window."""
        return not self.coeffs

    def gauss_valuation(self) -> int | float:
        if not self.coeffs:
            return INF
        return min(c.gauss_valuation() for c in self.coeffs.values())

    def max_level(self) -> int:
        return max((c.level for c in self.coeffs.values()), default=0)

    # -- arithmetic ---------------------------------------------------------

    def _check_var(self, other: "SeriesElement") -> None:
        if self.var != other.var:
            raise InputError(f"uniformizer mismatch: {self.var} vs {other.var}")

    def __add__(self, other: "SeriesElement") -> "SeriesElement":
        self._check_var(other)
        if self.window is None and other.window is None:
            window = None
        else:
            wa, wb = self.effective_window(), other.effective_window()
            window = (max(wa[0], wb[0]), min(wa[1], wb[1]))
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            cur = out.get(k)
            out[k] = c if cur is None else cur + c
        return SeriesElement(
            self.cfg, self.var, out, min(self.prec, other.prec), window
        )

    def __sub__(self, other: "SeriesElement") -> "SeriesElement":
        return self + (-other)

    def __neg__(self) -> "SeriesElement":
        return SeriesElement(
            self.cfg,
            self.var,
            {k: -c for k, c in self.coeffs.items()},
            self.prec,
            self.window,
        )

    def __mul__(self, other: "SeriesElement") -> "SeriesElement":
        self._check_var(other)
        # plain-int accumulation per slot on the common single-level fast path;
        # coefficient objects are built once per slot at the end
        one_t = self.cfg.n == 2
        raw: dict[int, dict[tuple[int, ...], int]] = {}
        levs: dict[int, int] = {}
        precs: dict[int, int] = {}
        slow: dict[int, CoeffElement] = {}
        for ka, ca in self.coeffs.items():
            ta, la, pa = ca.terms, ca.level, ca.prec
            for kb, cb in other.coeffs.items():
                k = ka + kb
                if cb.level != la or levs.get(k, la) != la:
                    prod = ca * cb
                    cur = slow.get(k)
                    slow[k] = prod if cur is None else cur + prod
                    continue
                slot = raw.get(k)
                if slot is None:
                    slot = raw[k] = {}
                    levs[k] = la
                    precs[k] = min(pa, cb.prec)
                elif cb.prec < precs[k] or pa < precs[k]:
                    precs[k] = min(pa, cb.prec)
                if one_t:
                    for (ea,), ra in ta.items():
                        for (eb,), rb in cb.terms.items():
                            key = (ea + eb,)
                            slot[key] = slot.get(key, 0) + ra * rb
                else:
                    for ea, ra in ta.items():
                        for eb, rb in cb.terms.items():
                            key = tuple(x + y for x, y in zip(ea, eb))
                            slot[key] = slot.get(key, 0) + ra * rb
        out: dict[int, CoeffElement] = {
            k: CoeffElement(self.cfg, t, levs[k], precs[k]) for k, t in raw.items()
        }
        for k, c in slow.items():
            cur = out.get(k)
            out[k] = c if cur is None else cur + c
        window = self._mul_window(other)
        return SeriesElement(
            self.cfg, self.var, out, min(self.prec, other.prec), window
        )

    def _mul_window(self, other: "SeriesElement") -> tuple[int, int] | None:
        # products keep the intersection window; the band edges act as a
        # quotient boundary, so truncation stays silent unless strict mode bites
        if self.window is None and other.window is None:
            return None
        wa, wb = self.effective_window(), other.effective_window()
        return (max(wa[0], wb[0]), min(wa[1], wb[1]))

    def scale(self, k: int) -> "SeriesElement":
        return SeriesElement(
            self.cfg,
            self.var,
            {e: c.scale(k) for e, c in self.coeffs.items()},
            self.prec,
            self.window,
        )

    def scale_coeff(self, c: CoeffElement) -> "SeriesElement":
        return SeriesElement(
            self.cfg,
            self.var,
            {e: x * c for e, x in self.coeffs.items()},
            min(self.prec, c.prec),
            self.window,
        )

    def mul_rational(self, q: Fraction | int) -> "SeriesElement":
        q = Fraction(q)
        num, den = q.numerator, q.denominator
        p = self.cfg.p
        vd = 0
        while den % p == 0:
            den //= p
            vd += 1
        out = self.scale(num)
        if den != 1 and out.prec:
            out = out.scale(pow(den, -1, p ** out.prec))
        if vd:
            out = out.divide_exact(vd)
        return out

    def shift(self, k: int) -> "SeriesElement":
        """Multiply by the k-th power of the uniformizer (exponent shift)."""
        window = self.window
        if window is not None:
            glo, ghi = self.cfg.pi_window
            window = (max(window[0] + k, glo), min(window[1] + k, ghi))
        return SeriesElement(
            self.cfg,
            self.var,
            {e + k: c for e, c in self.coeffs.items()},
            self.prec,
            window,
        )

    def divide_exact(self, k: int) -> "SeriesElement":
        """Divide every coefficient by p^k; known precision drops by k."""
        if k == 0:
            return self
        return SeriesElement(
            self.cfg,
            self.var,
            {e: c.divide_exact(k) for e, c in self.coeffs.items()},
            self.prec - k,
            self.window,
        )

    def power(self, k: int) -> "SeriesElement":
        if k < 0:
            return self.laurent_inverse().power(-k)
        out = SeriesElement.one(self.cfg, self.var, self.prec)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- calculus -----------------------------------------------------------

    def formal_derivative(self) -> "SeriesElement":
        """d/d(uniformizer); the valid window shifts down by one."""
        window = self.window
        if window is not None:
            glo, ghi = self.cfg.pi_window
            window = (max(window[0] - 1, glo), min(window[1] - 1, ghi))
        out = {e - 1: c.scale(e) for e, c in self.coeffs.items() if e != 0}
        return SeriesElement(self.cfg, self.var, out, self.prec, window)

    def pi_weight(self) -> "SeriesElement":
        """Multiply each term by its exponent (the pi d/dpi weight)."""
        return SeriesElement(
            self.cfg,
            self.var,
            {e: c.scale(e) for e, c in self.coeffs.items() if e != 0},
            self.prec,
            self.window,
        )

    def t_weight(self, index: int) -> "SeriesElement":
        """Apply the T_index d/dT_index weight to every coefficient."""
        return SeriesElement(
            self.cfg,
            self.var,
            {e: c.t_weight(index) for e, c in self.coeffs.items()},
            self.prec,
            self.window,
        )

    def formal_inverse(self) -> "SeriesElement":
        """Geometric-series inverse.

        Requires the constant-in-pi coefficient to be a Gauss-valuation-0 unit
        of the T-layer; convergence of the accumulation is exactly the strict
        overconvergence criterion, and a failing tail runs the iteration into
        the cap, reported as NotInvertible.  Plus-part units take the slot
        recurrence shortcut, which sums the same geometric series one output
        exponent at a time.
        """
        c0 = self.coeffs.get(0)
        if c0 is None or c0.gauss_valuation() != 0:
            raise NotInvertible(
                "constant-in-pi coefficient must have Gauss valuation 0"
            )
        if self.min_support() == 0:
            return self._inverse_plus(c0)
        y0 = SeriesElement(self.cfg, self.var, {0: c0.inverse()}, self.prec)
        one = SeriesElement.one(self.cfg, self.var, self.prec)
        r = one - self * y0
        acc, t = one, r
        for _ in range(_INVERSE_CAP):
            if t.is_zero():
                return acc * y0
            acc = acc + t
            t = t * r
        raise NotInvertible("geometric accumulation did not terminate")

    def _inverse_plus(self, c0: CoeffElement) -> "SeriesElement":
        """Back-substitution y_k = -c0^{-1} * sum_j a_j y_{k-j} for units with
        no pole part.  A zero run as long as the degree certifies that the tail
        vanishes for good (the recurrence has that order); otherwise the window
        mark records that content beyond the band was cut."""
        cfg, var, prec = self.cfg, self.var, self.prec
        ghi = cfg.pi_window[1]
        c0inv = c0.inverse()
        rest = {k: c for k, c in self.coeffs.items() if k > 0}
        ys = {0: c0inv}
        if not rest:
            return SeriesElement(cfg, var, ys, prec)
        deg = max(rest)
        zero_run = 0
        for k in range(1, ghi + deg + 1):
            acc = None
            for j, aj in rest.items():
                prev = ys.get(k - j)
                if prev is None:
                    continue
                term = aj * prev
                acc = term if acc is None else acc + term
            yk = None if acc is None else c0inv * acc
            if yk is None or yk.is_zero():
                zero_run += 1
                if zero_run >= deg:
                    return SeriesElement(cfg, var, ys, prec)
                continue
            zero_run = 0
            if k > ghi:
                break
            ys[k] = -yk
        return SeriesElement(cfg, var, ys, prec, cfg.pi_window)

    def laurent_inverse(self) -> "SeriesElement":
        """Inverse after factoring out a uniformizer power.

        Handles elements like pi itself or the image of pi under a lift: we
        pull out pi^L at the lowest exponent whose coefficient is a unit, so
        the cofactor meets the usual constant-coefficient criterion.  Elements
        with positive Gauss valuation have no inverse in the integral model.
        """
        if not self.coeffs:
            raise NotInvertible("cannot invert zero")
        if self.gauss_valuation() != 0:
            raise NotInvertible("Gauss valuation is positive: a p-power factor remains")
        pivot = min(e for e, c in self.coeffs.items() if c.gauss_valuation() == 0)
        if pivot == 0:
            return self.formal_inverse()
        return self.shift(-pivot).formal_inverse().shift(-pivot)

    def dlog(self) -> "SeriesElement":
        """Logarithmic derivative x'/x in the uniformizer direction."""
        return self.formal_derivative() * self.laurent_inverse()

    def substitute(
        self,
        pi_image: "SeriesElement",
        t_images: list[CoeffElement] | None = None,
    ) -> "SeriesElement":
        """Substitute uniformizer -> pi_image and optionally T_i -> t_images[i].

        The stored support is treated as the element for composition purposes;
        the result's window/exactness comes from the computed powers.
        """
        cfg = self.cfg
        out = SeriesElement.zero(cfg, pi_image.var, self.prec)
        if not self.coeffs:
            return out
        exps = self.support()
        powers: dict[int, SeriesElement] = {
            0: SeriesElement.one(cfg, pi_image.var, self.prec)
        }
        pos = [e for e in exps if e > 0]
        if pos:
            acc = powers[0]
            for e in range(1, max(pos) + 1):
                acc = acc * pi_image
                if e in self.coeffs:
                    powers[e] = acc
        neg = [e for e in exps if e < 0]
        if neg:
            inv = pi_image.laurent_inverse()
            acc = powers[0]
            for e in range(-1, min(neg) - 1, -1):
                acc = acc * inv
                if e in self.coeffs:
                    powers[e] = acc
        identity = t_images is None or all(
            im.level == 0 and im.terms == {_unit_exp(cfg, i): 1}
            for i, im in enumerate(t_images)
        )
        for e in exps:
            c = self.coeffs[e]
            if not identity:
                c = c.substitute_t(t_images)
            out = out + powers[e].scale_coeff(c)
        return out

    # -- comparison ---------------------------------------------------------

    def eq_at_min_precision(self, other: "SeriesElement") -> bool:
        self._check_var(other)
        wa, wb = self.effective_window(), other.effective_window()
        lo, hi = max(wa[0], wb[0]), min(wa[1], wb[1])
        prec = min(self.prec, other.prec)
        pk = self.cfg.p ** prec
        zero = CoeffElement.zero(self.cfg, prec=prec)
        for k in set(self.coeffs) | set(other.coeffs):
            if k < lo or k > hi:
                continue
            a = self.coeffs.get(k, zero)
            b = other.coeffs.get(k, zero)
            aa, bb, _ = CoeffElement._common(a, b)
            keys = set(aa.terms) | set(bb.terms)
            if any((aa.terms.get(t, 0) - bb.terms.get(t, 0)) % pk for t in keys):
                return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SeriesElement):
            return NotImplemented
        return (
            self.var == other.var
            and self.prec == other.prec
            and self.window == other.window
            and self.coeffs == other.coeffs
        )

    def __repr__(self) -> str:
        sym = self.var
        if not self.coeffs:
            body = "0"
        else:
            body = " + ".join(
                f"({self.coeffs[k]!r})*{sym}^{k}" for k in self.support()
            )
        w = "" if self.window is None else f" window={self.window}"
        return f"Series[{body} @prec {self.prec}{w}]"


def _unit_exp(cfg: RingConfig, index: int) -> tuple[int, ...]:
    e = [0] * (cfg.n - 1)
    e[index] = 1
    return tuple(e)


def series_eq(a: SeriesElement, b: SeriesElement) -> bool:
    return a.eq_at_min_precision(b)
