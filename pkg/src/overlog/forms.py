"""Milnor symbols and logarithmic differential forms in rank-one presentation.

A symbol is an ordered tuple of n entries: unit series, the uniformizer marker
"piK", or the prime marker "p".  Its dlog is a single series coefficient on
the canonical wedge dlog T_1 ^ ... ^ dlog T_{n-1} ^ dlog pi: every entry
contributes a row of logarithmic partial derivatives and the wedge is the
determinant.  The prime marker contributes a zero row (we work in the quotient
where dlog p dies), so symbols containing p map to zero.

Forms come in three shapes, tracked by `kind`:
  "n"  full n-form, coefficient against dlog T_1 ^ ... ^ dlog pi
  "t"  (n-1)-form with all T-legs and no uniformizer leg
  "u"  (n-1)-form with the uniformizer leg (one T-leg dropped)
and two uniformizer-leg bases: "log" (dlog pi, pole allowed at the origin)
and "plus" (dlog(pi+1)); the two differ by the unit (pi+1)/pi.

The phi-trace on forms divides out the leg count in p and corrects the
uniformizer leg with p*omega (plus basis) or p*omega~ (log basis); psi is the
trace on log n-forms.  Kurihara's exponential map sends a plus-part (n-1)-form
alpha on the T-basis to the symbol {exp(p*alpha), T_1, ..., T_{n-1}}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial

from .config import RingConfig
from .errors import InputError, NotAUnit, NotPlusPart
from .frobenius import phi_pi, trace_phi_select
from .overconv import invertibility_check
from .series import SeriesElement

PIK_MARKER = "piK"
P_MARKER = "p"

_EXP_CAP = 256

Entry = "SeriesElement | str"


@dataclass(frozen=True)
class MilnorSymbol:
    cfg: RingConfig
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.cfg.n:
            raise InputError(
                f"symbol needs exactly {self.cfg.n} entries, got {len(self.entries)}"
            )
        for a in self.entries:
            if isinstance(a, str) and a not in (PIK_MARKER, P_MARKER):
                raise InputError(f"unknown symbol marker {a!r}")

    def validate(self) -> None:
        """Check that series entries are units (overconvergent-invertible or
        plus-part 1 + p-divisible); markers are exempt."""
        for a in self.entries:
            if isinstance(a, str):
                continue
            if _is_plus_unit(a):
                continue
            try:
                ok = invertibility_check(a, 1)
            except Exception:
                ok = False
            if not ok:
                raise NotAUnit("symbol entry is not a recognized unit")

    def swap(self, i: int, j: int) -> "MilnorSymbol":
        ent = list(self.entries)
        ent[i], ent[j] = ent[j], ent[i]
        return MilnorSymbol(self.cfg, tuple(ent))


def _is_plus_unit(a: SeriesElement) -> bool:
    ms = a.min_support()
    if ms is not None and ms < 0:
        return False
    one = SeriesElement.one(a.cfg, a.var, a.prec)
    diff = a - one
    return diff.is_zero() or diff.gauss_valuation() >= 1


@dataclass(frozen=True)
class SymbolProduct:
    factors: tuple  # of (MilnorSymbol, int) pairs

    def __post_init__(self):
        for _, k in self.factors:
            if k == 0:
                raise InputError("symbol product exponents must be nonzero")

    @classmethod
    def of(cls, *symbols: MilnorSymbol) -> "SymbolProduct":
        return cls(tuple((s, 1) for s in symbols))


@dataclass(frozen=True)
class LogForm:
    cfg: RingConfig
    coeff: SeriesElement
    kind: str = "n"  # "n" | "t" | "u"
    basis: str = "log"  # "log" | "plus"

    def __post_init__(self):
        if self.kind not in ("n", "t", "u"):
            raise InputError(f"unknown form kind {self.kind!r}")
        if self.basis not in ("log", "plus"):
            raise InputError(f"unknown form basis {self.basis!r}")

    def __add__(self, other: "LogForm") -> "LogForm":
        if (self.kind, self.basis) != (other.kind, other.basis):
            raise InputError("cannot add forms on different bases")
        return LogForm(self.cfg, self.coeff + other.coeff, self.kind, self.basis)

    def __neg__(self) -> "LogForm":
        return LogForm(self.cfg, -self.coeff, self.kind, self.basis)

    def __sub__(self, other: "LogForm") -> "LogForm":
        return self + (-other)

    def scale(self, k: int) -> "LogForm":
        return LogForm(self.cfg, self.coeff.scale(k), self.kind, self.basis)

    def is_zero(self) -> bool:
        return self.coeff.is_zero()

    def eq_at_min_precision(self, other: "LogForm") -> bool:
        return (self.kind, self.basis) == (other.kind, other.basis) and (
            self.coeff.eq_at_min_precision(other.coeff)
        )

    def to_basis(self, basis: str) -> "LogForm":
        """Rewrite the uniformizer leg: dlog pi = ((pi+1)/pi) dlog(pi+1)."""
        if basis not in ("log", "plus"):
            raise InputError(f"unknown form basis {basis!r}")
        if basis == self.basis or self.kind == "t":
            return LogForm(self.cfg, self.coeff, self.kind, basis)
        one = SeriesElement.one(self.cfg, self.coeff.var, self.coeff.prec)
        u = one + SeriesElement.monomial(self.cfg, self.coeff.var, 1)
        if basis == "plus":
            c = (self.coeff * u).shift(-1)
        else:
            c = self.coeff.shift(1) * u.laurent_inverse()
        return LogForm(self.cfg, c, self.kind, basis)


def volume_form(cfg: RingConfig, var: str = "pi", basis: str = "log") -> LogForm:
    return LogForm(cfg, SeriesElement.one(cfg, var), "n", basis)


def _entry_as_series(cfg: RingConfig, a, var: str) -> SeriesElement:
    if isinstance(a, SeriesElement):
        return a
    if a == PIK_MARKER:
        return SeriesElement.monomial(cfg, var, 1)
    return SeriesElement.from_dict(cfg, var, {0: cfg.p})


def check_steinberg(s: MilnorSymbol) -> bool:
    """True when two entries sum to one at working precision."""
    cfg = s.cfg
    var = next(
        (a.var for a in s.entries if isinstance(a, SeriesElement)), "pi"
    )
    series = [_entry_as_series(cfg, a, var) for a in s.entries]
    one = SeriesElement.one(cfg, var)
    for i in range(len(series)):
        for j in range(i + 1, len(series)):
            if (series[i] + series[j]).eq_at_min_precision(one):
                return True
    return False


def _dlog_row(a, cfg: RingConfig, var: str):
    """Logarithmic gradient of one entry against (dlog T_1, ..., dlog T_{n-1},
    dlog(pi+1)), returned as (numerator row, entry, inverse) with the common
    1/entry factor pulled out; None flags the prime marker's zero row.

    The uniformizer column is the u d/du weight (u = pi+1): on that basis the
    marker's row and every 1-unit's row stay finite, which keeps the dlog
    image inside the exact domain of the trace engines."""
    n = cfg.n
    if isinstance(a, str):
        if a == P_MARKER:
            return None
        row = [SeriesElement.zero(cfg, var) for _ in range(n)]
        # dlog pi = ((pi+1)/pi) dlog(pi+1)
        row[n - 1] = SeriesElement.from_dict(cfg, var, {0: 1, -1: 1})
        return row, None, None
    if a.max_level() > 0:
        raise InputError("symbol entries must carry level-0 exponents")
    u = SeriesElement.from_dict(cfg, var, {0: 1, 1: 1})
    row = [a.t_weight(i) for i in range(n - 1)]
    row.append(u * a.formal_derivative())
    return row, a, a.laurent_inverse()


def _entry_key(x: SeriesElement):
    """Content-derived sort key, so inverse factors multiply in an order
    independent of the symbol's entry order."""
    return tuple(
        (k, x.coeffs[k].level, tuple(sorted(x.coeffs[k].terms.items())))
        for k in sorted(x.coeffs)
    )


def _certify_quotient(q: SeriesElement, num: SeriesElement,
                      den: SeriesElement) -> SeriesElement:
    """Strip q's window mark whenever the visible support multiplies back to
    num exactly (so the truncated tail of the inverse cancelled)."""
    if q.window is None:
        return q
    cand = SeriesElement(q.cfg, q.var, dict(q.coeffs), q.prec, None)
    if cand.window is None and (cand * den) == num:
        return cand
    return q


def _symbol_dlog_coeff(s: MilnorSymbol, var: str) -> SeriesElement:
    cfg = s.cfg
    n = cfg.n
    rows, dens, invs = [], [], []
    for a in s.entries:
        got = _dlog_row(a, cfg, var)
        if got is None:
            return SeriesElement.zero(cfg, var)
        row, den, inv = got
        rows.append(row)
        if den is not None:
            dens.append(den)
            invs.append(inv)
    # determinant of the small numerator rows first; the entry inverses come
    # in once at the end, so their long tails are multiplied a single time
    acc = SeriesElement.zero(cfg, var)
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = None
        for r in range(n):
            cell = rows[r][perm[r]]
            if cell.is_zero():
                term = None
                break
            term = cell if term is None else term * cell
        if term is not None:
            acc = acc + (term if sign > 0 else -term)
    num = acc
    ordered = sorted(zip(dens, invs), key=lambda t: _entry_key(t[0]))
    for _, inv in ordered:
        acc = acc * inv
    if ordered:
        den = ordered[0][0]
        for d, _ in ordered[1:]:
            den = den * d
        acc = _certify_quotient(acc, num, den)
    return acc


def symbol_dlog(s: MilnorSymbol | SymbolProduct) -> LogForm:
    """Wedge of entry-dlogs, as a coefficient on the plus n-form basis.

    Assembled on dlog T_1 ^ ... ^ dlog(pi+1): there the rows of every unit
    congruent to 1 and of the uniformizer marker are finite Laurent data, so
    symbols built from them land exactly in the trace domain.  Read the same
    form on dlog pi via to_basis("log")."""
    if isinstance(s, MilnorSymbol):
        s = SymbolProduct(((s, 1),))
    cfg = s.factors[0][0].cfg
    var = next(
        (
            a.var
            for sym, _ in s.factors
            for a in sym.entries
            if isinstance(a, SeriesElement)
        ),
        "pi",
    )
    acc = SeriesElement.zero(cfg, var)
    for sym, k in s.factors:
        acc = acc + _symbol_dlog_coeff(sym, var).scale(k)
    return LogForm(cfg, acc, "n", "plus")


def exp_series(x: SeriesElement) -> SeriesElement:
    """exp(p*x) for plus-part x, by the truncated exponential series.

    Terms p^k x^k / k! are formed with exact rational bookkeeping before
    reduction; v(p^k/k!) grows linearly for p >= 3, so the sum terminates at
    working precision.
    """
    cfg = x.cfg
    ms = x.min_support()
    if ms is not None and ms < 0:
        raise NotPlusPart("exponential argument must have no pole")
    acc = SeriesElement.one(cfg, x.var, x.prec)
    power = SeriesElement.one(cfg, x.var, x.prec)
    for k in range(1, _EXP_CAP):
        power = power * x
        term = power.mul_rational(Fraction(cfg.p**k, factorial(k)))
        if term.is_zero():
            break
        acc = acc + term
    else:
        raise InputError("exponential series failed to terminate")
    return acc


def exp_map(form: LogForm) -> SymbolProduct:
    """A plus-part (n-1)-form on the T-basis maps to the symbol
    {exp(p*coefficient), T_1, ..., T_{n-1}}."""
    if form.kind != "t":
        raise InputError("the exponential map takes forms on the T-basis")
    cfg = form.cfg
    first = exp_series(form.coeff)
    from .coeffs import CoeffElement

    gens = [
        SeriesElement(
            cfg, form.coeff.var, {0: CoeffElement.gen(cfg, i)}, form.coeff.prec
        )
        for i in range(cfg.n - 1)
    ]
    sym = MilnorSymbol(cfg, tuple([first] + gens))
    return SymbolProduct(((sym, 1),))


def p_omega(cfg: RingConfig, basis: str, var: str = "pi") -> SeriesElement:
    """The uniformizer-leg correction p*omega ("plus") or p*omega~ ("log").

    Over the base (e = 1) these are exact: p*omega = 1 and
    p*omega~ = phi(pi)/pi."""
    if basis == "plus":
        return SeriesElement.one(cfg, var)
    terms = phi_pi(cfg, var)
    return SeriesElement(
        cfg, var, {e - 1: c for e, c in terms.coeffs.items()}, terms.prec
    )


def trace_form(x: LogForm) -> LogForm:
    """Push a form through the phi-trace.

    Each dlog-leg soaks up one factor p of the p^n-valued coefficient trace;
    a uniformizer leg is additionally corrected by p*omega (or p*omega~ on
    the log basis).  Everything is assembled from the division-free selection
    trace, so no precision is spent: an n-form keeps its p^{-n}-normalized
    coefficient exactly, an (n-1)-form keeps one overall factor of p.
    """
    cfg = x.cfg
    c = x.coeff
    if x.kind == "n":
        w = p_omega(cfg, x.basis, c.var)
        return LogForm(cfg, trace_phi_select(c * w), "n", x.basis)
    if x.kind == "t":
        return LogForm(cfg, trace_phi_select(c).scale(cfg.p), "t", x.basis)
    w = p_omega(cfg, x.basis, c.var)
    return LogForm(cfg, trace_phi_select(c * w).scale(cfg.p), "u", x.basis)


def psi_form(x: LogForm) -> LogForm:
    """The psi operator: the trace on n-forms, in whichever basis the form
    is presented (p*omega~ corrects a dlog pi leg, p*omega a dlog(pi+1) one)."""
    if x.kind != "n":
        raise InputError("psi acts on n-forms")
    return trace_form(x)
