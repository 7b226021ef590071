"""Exception hierarchy shared by all modules.

The CLI maps these onto its exit-code contract: input problems exit 2,
numeric/capacity problems exit 3.
"""


class SpectralPartError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SpectralPartError):
    """Invalid user input: malformed files, out-of-range ids, bad parameters."""


class DegenerateError(InputError):
    """Input is structurally unusable (e.g. fewer distinct points than clusters)."""


class CapacityError(SpectralPartError):
    """Problem size exceeds what an exact/brute-force routine supports."""


class NumericError(SpectralPartError):
    """Numerical failure: non-convergence, rank collapse, singular systems."""


class GapError(NumericError):
    """No usable spectral gap (lambda_k >= lambda_{k+1})."""


class SpanCollapseError(NumericError):
    """Indicator projections do not span the leading eigenspace."""
