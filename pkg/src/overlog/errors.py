"""Exception types shared across the package.

Everything raised on bad mathematical input derives from DomainError so the
CLI can map it to a single exit code; malformed input (bad JSON, wrong shape)
derives from InputError instead.
"""


class DeskError(Exception):
    """Base class for all overlog errors."""


class DomainError(DeskError):
    """The input is well-formed but outside the operation's domain."""


class InputError(DeskError):
    """Malformed input: bad JSON, wrong field types, unknown tags."""


class NotDivisible(DomainError):
    """Exact division by a power of p failed."""


class NotAUnit(DomainError):
    """Scalar inversion requested for a residue divisible by p."""


class ZeroInput(DomainError):
    """The operation is undefined on (zero-at-precision) input."""


class NotInvertible(DomainError):
    """Series inversion failed: the unit criterion does not hold."""


class WindowOverflow(DomainError):
    """Strict mode: an exponent left the configured window."""


class DecompositionOverflow(DomainError):
    """Frobenius-module decomposition cannot be held in the window."""


class NotEisenstein(DomainError):
    """The polynomial data fails the Eisenstein/separability checks."""


class NewtonStall(DomainError):
    """Newton iteration stopped contracting before the residual vanished."""


class NotPlusPart(DomainError):
    """A plus-part (no negative exponents) element was required."""


class EvaluationDiverges(DomainError):
    """Layer evaluation rejected: the overconvergence level exceeds the layer."""


class RamifiedUnsupported(DomainError):
    """The trace engines run on the base-uniformizer representation only."""
