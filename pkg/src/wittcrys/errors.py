"""Exception hierarchy shared by all wittcrys modules.

Every domain failure raises a subclass of :class:`WittcrysError`; the CLI
maps these to exit code 1 and prints the class name on stderr.
"""


class WittcrysError(Exception):
    """Base class for all domain errors raised by this package."""


class NotPrime(WittcrysError):
    """The requested characteristic is not a prime number."""


class ReducibleModulus(WittcrysError):
    """A supplied field modulus is not irreducible (or not monic of the stated degree)."""


class IncompatibleFields(WittcrysError):
    """Operands live in fields with no declared embedding between them."""


class MismatchedStructure(WittcrysError):
    """Witt vectors from different (p, m) structures or coefficient fields were combined."""


class NotSingular(WittcrysError):
    """Variable elimination was requested but the p-th-root matrix is invertible."""


class NotACycle(WittcrysError):
    """An operation requiring a single-cycle permutation received several cycles."""


class OracleMismatch(WittcrysError):
    """Closed-form valuations disagree with the recurrence oracle; indicates a transcription bug."""


class BadShape(WittcrysError):
    """Shape parameters violate the standing assumptions of the construction."""


class FieldTooSmall(WittcrysError):
    """The coefficient field cannot host the independent scalars an embedding needs."""


class BadR(WittcrysError):
    """Tensor rank parameter is not a positive multiple of the minimum admissible value."""


class InconsistentInput(WittcrysError):
    """Connection input data fails its defining relation."""


class RankDeficientLie(WittcrysError):
    """The supplied Lie-algebra basis matrices are linearly dependent."""


class UsageError(WittcrysError):
    """Bad command-line usage or unparseable input files; CLI exit code 2."""
