"""Arithmetic in the cyclotomic layers and the dual-exponential readout.

Layer m is Z_p[x]/(F_m) with F_m the minimal polynomial of zeta_{p^m}-1, an
Eisenstein modulus of degree (p-1)p^{m-1}; the class of x plays the role the
uniformizer plays upstairs, so evaluating a pi-series in a layer is plain
substitution.  T-coefficients ride along with their exponent grid refined to
the layer's fractional level.  Field-level denominators are bookkept as an
explicit power of p (the `s` slot) instead of being divided into the
residues, which keeps every operation here exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .coeffs import CoeffElement
from .config import RingConfig
from .errors import EvaluationDiverges, InputError, NotEisenstein
from .forms import MilnorSymbol, SymbolProduct
from .frobenius import psi_classical
from .logderiv import log_derivative
from .overconv import minimal_level
from .scalars import INF
from .series import SeriesElement


def cyclotomic_modulus(p: int, m: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the degree-(p-1)p^{m-1} layer modulus.

    Expand sum_{k<p} (1+x)^{k p^{m-1}} with exact integers: the minimal
    polynomial of zeta_{p^m}-1, monic with constant term exactly p.
    """
    if m < 1:
        raise InputError("layer indices start at 1")
    step = p ** (m - 1)
    degree = (p - 1) * step
    out = [0] * (degree + 1)
    for k in range(p):
        for t in range(k * step + 1):
            out[t] += comb(k * step, t)
    return tuple(out)


class CyclotomicRing:
    """One layer of the tower: polynomials of degree < deg(modulus) over
    CoeffElement, reduced canonically.  Layer 0 is the base (degree 1).

    A user-supplied modulus stands in for the default tower when the base
    field is ramified; it must still be monic Eisenstein at p.
    """

    __slots__ = ("cfg", "m", "modulus", "degree")

    def __init__(self, cfg: RingConfig, m: int, modulus: tuple[int, ...] | None = None):
        if m < 0:
            raise InputError("layer indices are nonnegative")
        self.cfg = cfg
        self.m = m
        if m == 0:
            self.modulus = (0, 1)  # x = 0: the base ring itself
            self.degree = 1
            return
        mod = tuple(modulus) if modulus is not None else cyclotomic_modulus(cfg.p, m)
        if mod[-1] != 1:
            raise NotEisenstein("layer modulus must be monic")
        if any(c % cfg.p for c in mod[:-1]):
            raise NotEisenstein("non-leading modulus coefficients must be divisible by p")
        if mod[0] % cfg.p**2 == 0:
            raise NotEisenstein("modulus constant term must be p times a unit")
        self.modulus = mod
        self.degree = len(mod) - 1

    # -- elements -----------------------------------------------------------

    def element(self, coeffs, s: int = 0) -> "LayerElement":
        return LayerElement(self, tuple(coeffs), s)

    def zero(self) -> "LayerElement":
        return self.element([CoeffElement.zero(self.cfg)] * self.degree)

    def from_scalar(self, value: int) -> "LayerElement":
        coeffs = [CoeffElement.zero(self.cfg)] * self.degree
        coeffs[0] = CoeffElement.const(self.cfg, value)
        return self.element(coeffs)

    def one(self) -> "LayerElement":
        return self.from_scalar(1)

    def x_class(self) -> "LayerElement":
        if self.degree == 1:
            return self.zero()
        coeffs = [CoeffElement.zero(self.cfg)] * self.degree
        coeffs[1] = CoeffElement.const(self.cfg, 1)
        return self.element(coeffs)

    def x_inverse(self) -> "LayerElement":
        """1/x as -Q/p, from modulus = x*Q + constant-term; exact because the
        division by p lives in the denominator slot."""
        if self.degree == 1:
            raise InputError("the base layer's x is zero, not a unit")
        c0 = self.modulus[0]
        unit = c0 // self.cfg.p  # modulus constant term = p * unit
        inv_unit = pow(unit, -1, self.cfg.p ** self.cfg.M)
        coeffs = [
            CoeffElement.const(self.cfg, -c * inv_unit) for c in self.modulus[1:]
        ]
        return self.element(coeffs, s=1)

    def u_inverse(self) -> "LayerElement":
        """1/(1+x): a unit, inverted without touching the denominator slot."""
        if self.degree == 1:
            return self.one()
        u = self.one() + self.x_class()
        return u.power(self.cfg.p**self.m - 1)

    def ramification_degree(self) -> int:
        return self.degree

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CyclotomicRing)
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.m, self.modulus))

    def __repr__(self) -> str:
        return f"CyclotomicRing(m={self.m}, degree={self.degree})"


class LayerElement:
    """A layer-ring element coeffs[0] + coeffs[1] x + ... divided by p^s."""

    __slots__ = ("ring", "coeffs", "s")

    def __init__(self, ring: CyclotomicRing, coeffs: tuple, s: int = 0):
        if len(coeffs) != ring.degree:
            raise InputError(
                f"layer-{ring.m} elements have {ring.degree} coordinates"
            )
        if s < 0:
            raise InputError("denominator exponent is nonnegative")
        self.ring = ring
        self.coeffs = tuple(coeffs)
        self.s = s

    # -- views --------------------------------------------------------------

    @property
    def prec(self) -> int:
        return min(c.prec for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def valuation(self) -> Fraction | float:
        """p-adic valuation, v(p) = 1; exact because coordinate valuations
        are pairwise distinct mod 1 on an Eisenstein basis."""
        phi = self.ring.degree
        vals = [
            Fraction(c.gauss_valuation()) + Fraction(k, phi)
            for k, c in enumerate(self.coeffs)
            if not c.is_zero()
        ]
        if not vals:
            return INF
        return min(vals) - self.s

    def is_integral(self) -> bool:
        v = self.valuation()
        return v == INF or v >= 0

    # -- arithmetic ---------------------------------------------------------

    def _common(self, other: "LayerElement"):
        if self.ring != other.ring:
            raise InputError("layer mismatch")
        s = max(self.s, other.s)
        a = self._raise_s(s)
        b = other._raise_s(s)
        return a, b, s

    def _raise_s(self, s: int) -> "LayerElement":
        if s == self.s:
            return self
        pk = self.ring.cfg.p ** (s - self.s)
        return LayerElement(self.ring, tuple(c.scale(pk) for c in self.coeffs), s)

    def __add__(self, other: "LayerElement") -> "LayerElement":
        a, b, s = self._common(other)
        return LayerElement(
            self.ring, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), s
        )

    def __sub__(self, other: "LayerElement") -> "LayerElement":
        return self + (-other)

    def __neg__(self) -> "LayerElement":
        return LayerElement(self.ring, tuple(-c for c in self.coeffs), self.s)

    def __mul__(self, other: "LayerElement") -> "LayerElement":
        a, b, _ = self._common(other)
        D = self.ring.degree
        prod = [CoeffElement.zero(self.ring.cfg) for _ in range(2 * D - 1)]
        for i, ca in enumerate(a.coeffs):
            if ca.is_zero():
                continue
            for j, cb in enumerate(b.coeffs):
                if not cb.is_zero():
                    prod[i + j] = prod[i + j] + ca * cb
        # fold x^D = -(lower modulus coefficients), top down
        mod = self.ring.modulus
        for d in range(2 * D - 2, D - 1, -1):
            top = prod[d]
            if top.is_zero():
                continue
            for k in range(D):
                if mod[k]:
                    prod[d - D + k] = prod[d - D + k] + top.scale(-mod[k])
            prod[d] = CoeffElement.zero(self.ring.cfg)
        return LayerElement(self.ring, tuple(prod[:D]), a.s + b.s)

    def scale(self, k: int) -> "LayerElement":
        return LayerElement(self.ring, tuple(c.scale(k) for c in self.coeffs), self.s)

    def coeff_scale(self, c: CoeffElement) -> "LayerElement":
        return LayerElement(self.ring, tuple(a * c for a in self.coeffs), self.s)

    def shift_denominator(self, k: int) -> "LayerElement":
        """Divide by p^k in the field: pure bookkeeping, no residue changes."""
        return LayerElement(self.ring, self.coeffs, self.s + k)

    def power(self, k: int) -> "LayerElement":
        if k < 0:
            raise InputError("negative powers need an explicit inverse")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- comparison ---------------------------------------------------------

    def eq_at_min_precision(self, other: "LayerElement") -> bool:
        a, b, _ = self._common(other)
        return all(
            x.eq_at_min_precision(y) for x, y in zip(a.coeffs, b.coeffs)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LayerElement):
            return NotImplemented
        a, b, _ = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        return hash((self.ring, self.coeffs, self.s))

    def __repr__(self) -> str:
        body = " + ".join(
            f"({c!r})*x^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero()
        )
        tail = f" / p^{self.s}" if self.s else ""
        return f"Layer[{self.ring.m}: {body or '0'}{tail}]"


@dataclass(frozen=True)
class EvaluationMap:
    """Substitution data: the uniformizer goes to layer i's x-class, every
    T goes to its p^j-th root; admissible for series overconvergent at a
    level <= source_level <= i."""

    source_level: int
    i: int
    j: int

    def __post_init__(self):
        if self.j < 0 or self.i < self.j:
            raise InputError("target layers must satisfy i >= j >= 0")
        if not (1 <= self.source_level <= self.i):
            raise InputError("source level must lie between 1 and the target layer")


def evaluate(
    x: SeriesElement,
    target: EvaluationMap | tuple[int, int],
    ring: CyclotomicRing | None = None,
) -> LayerElement:
    """Push a pi-series into a cyclotomic layer.

    Negative powers of the uniformizer land on 1/x = -Q/p, so each one costs
    a p in the denominator slot; the overconvergence level of the input is
    what guarantees those denominators are spurious, and the level check is
    the divergence gate.
    """
    em = target if isinstance(target, EvaluationMap) else EvaluationMap(
        target[0], target[0], target[1]
    )
    if ring is None:
        if x.var != "pi":
            raise InputError(
                "the default tower evaluates base-field series; pass the "
                "matching modulus tower for a ramified variable"
            )
        ring = CyclotomicRing(x.cfg, em.i)
    report = minimal_level(x)
    if report.minimal_level is None or report.minimal_level > em.source_level:
        raise EvaluationDiverges(
            f"series is overconvergent at level {report.minimal_level}, "
            f"the map admits {em.source_level}"
        )
    xk = ring.x_class()
    xinv = None
    out = ring.zero()
    for k, c in sorted(x.coeffs.items()):
        if c.is_zero():
            continue
        lifted = CoeffElement(x.cfg, dict(c.terms), c.level + em.j, c.prec)
        if k >= 0:
            term = xk.power(k)
        else:
            if xinv is None:
                xinv = ring.x_inverse()
            term = xinv.power(-k)
        out = out + term.coeff_scale(lifted)
    return out


def _to_binomial_basis(coeffs: tuple, cfg: RingConfig) -> list:
    """Rewrite sum a_k x^k as sum b_t (1+x)^t (exact integer transform)."""
    D = len(coeffs)
    out = [CoeffElement.zero(cfg) for _ in range(D)]
    for k, a in enumerate(coeffs):
        if a.is_zero():
            continue
        for t in range(k + 1):
            sign = 1 if (k - t) % 2 == 0 else -1
            out[t] = out[t] + a.scale(sign * comb(k, t))
    return out


def _trace_step(y: LayerElement) -> LayerElement:
    """One rung down the tower.

    Conjugates over the next layer multiply 1+x by a p-th root of unity, so
    on the (1+x)-power basis the trace keeps exponents divisible by p with a
    factor p (and (1+x)^p is the next layer's 1+x); the bottom rung instead
    pairs exponent 0 with p-1 and the rest with -1.
    """
    ring = y.ring
    cfg = ring.cfg
    if ring.m == 0:
        raise InputError("the base layer has nothing below it")
    tilde = _to_binomial_basis(y.coeffs, cfg)
    down = CyclotomicRing(cfg, ring.m - 1)
    if ring.m == 1:
        total = CoeffElement.zero(cfg)
        for b in tilde:
            total = total + b
        return down.element([tilde[0].scale(cfg.p) - total], y.s)
    out = [CoeffElement.zero(cfg) for _ in range(down.degree)]
    for b, c in enumerate(tilde):
        if b % cfg.p or c.is_zero():
            continue
        # p * (1+x_down)^(b/p), expanded back to x-powers
        for t in range(b // cfg.p + 1):
            out[t] = out[t] + c.scale(cfg.p * comb(b // cfg.p, t))
    return down.element(out, y.s)


def field_trace(y: LayerElement, j: int) -> LayerElement:
    """Trace from the element's layer down to layer j (T-part untouched)."""
    if j > y.ring.m:
        raise InputError("trace goes down the tower, not up")
    while y.ring.m > j:
        y = _trace_step(y)
    return y


def kato_scaled_trace(y: LayerElement, m: int) -> LayerElement:
    """p^{m-i} Tr down to layer m >= 1; integral for integral input because
    every rung above m contributes a visible factor p."""
    i = y.ring.m
    if not 1 <= m <= i:
        raise InputError("the integrality bound needs 1 <= target <= source layer")
    return field_trace(y, m).shift_denominator(i - m)


def kummer_trace(y: LayerElement, from_level: int, to_level: int) -> LayerElement:
    """Trace of the T-part from grid 1/p^from down to 1/p^to: fractional
    monomials with exponents on the coarser grid pick up the extension
    degree, the rest die against root-of-unity sums."""
    if to_level > from_level:
        raise InputError("the T-trace goes down the levels, not up")
    cfg = y.ring.cfg
    d = from_level - to_level
    if d == 0:
        return y
    pd = cfg.p**d
    degree = pd ** (cfg.n - 1)
    out = []
    for c in y.coeffs:
        a = c.align_level(from_level)
        kept = {
            tuple(e // pd for e in exps): r
            for exps, r in a.terms.items()
            if all(e % pd == 0 for e in exps)
        }
        out.append(CoeffElement(cfg, kept, to_level, a.prec).scale(degree))
    return LayerElement(y.ring, tuple(out), y.s)


@dataclass(frozen=True)
class DualExpForm:
    """The dual-exponential readout: a field-level scalar against the wedge
    of dlog T_k^{1/p^m} legs (one leg per T variable)."""

    scalar: LayerElement
    t_level: int
    reading: str

    @property
    def legs(self) -> tuple[int, ...]:
        return tuple(range(1, self.scalar.ring.cfg.n))

    def valuation(self) -> Fraction | float:
        return self.scalar.valuation()

    def is_zero(self) -> bool:
        return self.scalar.is_zero()


def dual_exp(
    x: MilnorSymbol | SymbolProduct,
    m: int,
    source_level: int | None = None,
    reading: str = "pole",
) -> DualExpForm:
    """Evaluate the stable logarithmic derivative of a symbol at layer m and
    divide by p^m.

    The iteration limit is a coefficient against dlog T ^ dlog(pi+1); the
    "pole" reading rewrites it against dlog T ^ d pi / pi (an extra 1/(1+x)
    after evaluation), the "quotient" reading takes it as it stands.  The
    denominator p^m may push the valuation negative: that is a report, not
    an error.
    """
    if reading not in ("pole", "quotient"):
        raise InputError("reading is 'pole' or 'quotient'")
    N = m if source_level is None else source_level
    if not 1 <= N <= m:
        raise InputError("the evaluation layer must dominate the source level")
    led = log_derivative(x)
    if not led.converged:
        raise InputError(f"symbol has no stable logarithmic derivative: {led.report}")
    c = led.limit.coeff
    ring = CyclotomicRing(c.cfg, m)
    value = evaluate(c, EvaluationMap(N, m, m), ring)
    if reading == "pole":
        value = value * ring.u_inverse()
    return DualExpForm(value.shift_denominator(m), m, reading)


def diagram_check_trace_compat(f: SeriesElement, m: int) -> bool:
    """Does one Frobenius-trace step match one tower rung after evaluation?

    Compares p * (sigma-selected f evaluated at layer m) with the field trace
    of f evaluated one layer up (same T-grid on both sides).
    """
    ms = f.min_support()
    if ms is not None and ms < 0:
        raise InputError("the compatibility check wants a pole-free series")
    if m < 1:
        raise InputError("layer indices start at 1")
    lhs = evaluate(psi_classical(f), EvaluationMap(m, m, m)).scale(f.cfg.p)
    rhs = field_trace(evaluate(f, EvaluationMap(m + 1, m + 1, m)), m)
    return lhs.eq_at_min_precision(rhs)
