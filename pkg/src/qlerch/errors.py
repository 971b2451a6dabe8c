"""Exception hierarchy shared by every layer of the package."""


class QLerchError(Exception):
    """Base class for all package errors."""


class EmptySeries(QLerchError):
    """Inversion (or a lowest-term query) was asked of a series that is
    identically zero up to its truncation order."""


class BeyondTruncation(QLerchError):
    """A coefficient or comparison was requested past the exact window."""


class PoleAtSpecialization(QLerchError):
    """A specialization makes a denominator vanish; the message names the
    violated genericity hypothesis."""


class NegativeExponentProduct(QLerchError):
    """An infinite Pochhammer product was requested with a negative leading
    q-exponent; normalize through the theta shift law first."""


class DegenerateZ(QLerchError):
    """The z argument of an Appell-Lerch sum makes j(z; q^m) vanish."""


class DivergentSpec(QLerchError):
    """A multi-sum specification fails its exponent growth validation, so
    truncation would not terminate."""


class NonconvergentPoint(QLerchError):
    """A numeric evaluation point lies outside the region where the defining
    sums and products converge."""


class PoleTooClose(QLerchError):
    """A numeric evaluation in a residue ladder hit (or got too close to)
    another singularity."""


class NoConvergence(QLerchError):
    """Richardson extrapolants failed to contract."""


class ConstraintViolation(QLerchError):
    """A specialization violates an identity's stated hypotheses."""


class ConfigError(QLerchError):
    """Malformed suite configuration or unknown identity id."""


class LexError(QLerchError):
    """Tokenizer hit an unexpected byte.  Carries the offset."""

    def __init__(self, offset, message):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ParseError(QLerchError):
    """Parser failure; carries the offset and the set of expected tokens."""

    def __init__(self, offset, expected, message=None):
        msg = message or f"expected one of {sorted(expected)}"
        super().__init__(f"{msg} (at offset {offset})")
        self.offset = offset
        self.expected = frozenset(expected)


class UnboundVariable(QLerchError):
    """An expression uses a variable with no binding."""


class EvalError(QLerchError):
    """Evaluation of an expression failed; wraps a library error with the
    source span of the offending call."""

    def __init__(self, span, message):
        super().__init__(f"{message} (at offsets {span[0]}..{span[1]})")
        self.span = span
