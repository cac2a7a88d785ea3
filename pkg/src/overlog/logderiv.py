"""Iterated logarithmic derivative on symbols.

dlog sends a symbol product to an n-form; applying psi repeatedly contracts
toward the psi-fixed module, gaining (at least) one p-digit per step.  The
iteration keeps a ledger of every step's successive-difference valuation so a
broken contraction schedule is visible in the artifact rather than silently
absorbed.  Divergence is a verdict, not an exception.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, WindowOverflow
from .forms import LogForm, MilnorSymbol, SymbolProduct, psi_form, symbol_dlog
from .overconv import OverconvergenceReport, minimal_level
from .scalars import INF

CONVERGED = "converged"
DIVERGED = "diverged"


@dataclass(frozen=True)
class ConvergenceLedger:
    iterates: tuple  # (step, LogForm snapshot, successive-difference valuation)
    verdict: str
    limit: LogForm | None = None
    report: str | None = None

    @property
    def converged(self) -> bool:
        return self.verdict == CONVERGED

    def schedule_holds(self) -> bool:
        """The contraction estimate: the k-th difference valuation is >= k."""
        return all(
            val is None or val >= k for k, _, val in self.iterates
        )

    def difference_valuations(self) -> list:
        return [val for _, _, val in self.iterates if val is not None]


def log_derivative(
    x: MilnorSymbol | SymbolProduct, max_iters: int | None = None
) -> ConvergenceLedger:
    """Iterate psi on dlog(x) until the sequence is stationary at working
    precision; max_iters defaults to the precision M, past which successive
    differences are indistinguishable from zero anyway."""
    y = symbol_dlog(x)
    iters = max_iters if max_iters is not None else y.cfg.M
    steps = [(0, y, None)]
    limit = None
    for k in range(1, iters + 1):
        try:
            z = psi_form(y)
        except WindowOverflow as err:
            return ConvergenceLedger(
                tuple(steps),
                DIVERGED,
                None,
                f"iterate left the exact trace domain at step {k}: {err}",
            )
        d = z.coeff - y.coeff
        val = INF if d.is_zero() else d.gauss_valuation()
        steps.append((k, z, val))
        if d.is_zero():
            limit = z
            break
        y = z
    if limit is None:
        last = steps[-1][2]
        return ConvergenceLedger(
            tuple(steps),
            DIVERGED,
            None,
            f"difference valuation still {last} after {iters} psi-steps",
        )
    return ConvergenceLedger(tuple(steps), CONVERGED, limit)


def overconvergence_of_limit(
    ledger: ConvergenceLedger, declared_level: int = 1
) -> OverconvergenceReport:
    """Overconvergence of a converged limit, measured on its pole numerator.

    The log leg allows at most a simple pole, so the object with a decay
    condition is coeff * pi.  declared_level is the level claimed for the
    symbol entries going in; when that claim holds, the limit admits some
    finite level — compare it against report.minimal_level in the caller.
    """
    if declared_level < 1:
        raise InputError("overconvergence levels start at 1")
    if not ledger.converged:
        raise InputError("overconvergence of a diverged iteration is undefined")
    return minimal_level(ledger.limit.coeff.shift(1))
