"""
Errors Module
Exception hierarchy shared by the series, modular-form and VOA modules
"""

import logging

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


class VoaModularError(ValueError):
    """Base class for every computational error raised by the library."""


class IncompatibleOffset(VoaModularError):
    """Two q-series whose offsets differ by a non-integer were combined."""


class ZeroLeadingTerm(VoaModularError):
    """A q-series with vanishing constant term was inverted."""


class InvalidWeight(VoaModularError):
    """A weight outside the supported range was requested."""


class InhomogeneousInput(VoaModularError):
    """An operation requiring a homogeneous quasimodular form got a mixed-weight one."""


class NonPositiveImaginaryPart(VoaModularError):
    """A point outside the upper half plane was supplied."""


class OddArity(VoaModularError):
    """A perfect matching was requested on an odd number of points."""


class CoincidentPoints(VoaModularError):
    """A correlation function was evaluated at coincident insertion points."""


class NotCoprime(VoaModularError):
    """Discrete-series data was requested for a non-coprime pair."""


class RangeError(VoaModularError):
    """An index lies outside its admissible range."""


class CutoffTooSmall(VoaModularError):
    """The matrix cutoff K cannot resolve the requested epsilon order."""


class OutsideDomain(VoaModularError):
    """A sewing point lies outside the convergence domain."""


class ResonantIndicialRoots(VoaModularError):
    """The indicial roots of the differential equation differ by a positive integer."""


class InvalidC(VoaModularError):
    """A central charge at which the construction breaks down."""


class PoleAtC(VoaModularError):
    """A rational function of c was evaluated at one of its poles."""


class NotPositiveDefinite(VoaModularError):
    """A Gram matrix is not a positive-definite even lattice."""


class PartitionSyntaxError(VoaModularError):
    """A partition string could not be parsed."""


class GramFileError(VoaModularError):
    """A Gram matrix file is missing or malformed."""
