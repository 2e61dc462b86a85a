"""Domain error types.

Every error carries a stable machine-readable ``kind`` string; the CLI
emits it as ``error_kind`` in error JSON and exits with status 2.
"""


class GmfError(Exception):
    """Base class for all domain errors raised by this package."""

    kind = "error"


class IncompatibleSeriesError(GmfError):
    """Two series disagree on level or coefficient field."""

    kind = "incompatible-series"


class DivisionByZeroSeriesError(GmfError):
    """Inversion or logarithmic derivative of the zero series."""

    kind = "division-by-zero"


class NotExponentiableError(GmfError):
    """Exponential recursion fed a series with a constant or
    negative-exponent term."""

    kind = "not-exponentiable"


class InvalidAutomorphismError(GmfError):
    """Galois exponent not coprime to the conductor."""

    kind = "invalid-automorphism"


class BadLevelError(GmfError):
    """Level rescaling target is not a multiple (or divisor) of the
    current level, or exponents do not fit the target lattice."""

    kind = "bad-level"


class PrecisionError(GmfError):
    """Requested data lies beyond the known coefficient window."""

    kind = "insufficient-precision"


class NotRationalError(GmfError):
    """A coefficient expected to be rational-valued is not."""

    kind = "not-rational"


class NotCyclotomicError(GmfError):
    """Operation requires a cyclotomic-tagged series."""

    kind = "not-cyclotomic"


class NotNormalizedError(GmfError):
    """Input series must have leading coefficient 1."""

    kind = "not-normalized"


class BadMatrixError(GmfError):
    """Matrix argument does not have determinant 1."""

    kind = "not-unimodular"


class BadGroupError(GmfError):
    """Unparseable or unsupported group descriptor."""

    kind = "bad-group-descriptor"


class GroupMismatchError(GmfError):
    """Operands are attached to different congruence subgroups."""

    kind = "group-mismatch"


class NoBasisAvailableError(GmfError):
    """No shipped cusp-form basis for the group and no data file given."""

    kind = "no-basis-available"


class CorruptBasisError(GmfError):
    """Basis data failed validation (rank, rationality, or leads)."""

    kind = "corrupt-basis"


class UnsupportedGroupError(GmfError):
    """Operation requires a group property that does not hold."""

    kind = "unsupported-group"


class MalformedInputError(GmfError):
    """Unreadable or schema-violating input data."""

    kind = "malformed-input"


class PrefixInconsistentError(GmfError):
    """The supplied unitary-part prefix admits no cusp-form fit."""

    kind = "prefix-inconsistent"

    def __init__(self, witness):
        super().__init__(
            "prefix is not the leading part of any decomposition "
            f"(first failing coefficient: n = {witness.row})"
        )
        self.witness = witness
