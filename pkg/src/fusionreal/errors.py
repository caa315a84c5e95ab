"""Exception types shared across the package."""


class FusionRealError(Exception):
    """Base class for all package errors."""


class ParseError(FusionRealError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NotAGroup(FusionRealError):
    """A multiplication table violates a group axiom.

    ``axiom`` names the failed check and ``witness`` holds the offending
    indices (row, column or triple) when available.
    """

    def __init__(self, axiom: str, witness: tuple | None, message: str | None = None):
        text = message or axiom
        if witness:
            text = f"{text} (witness {witness})"
        super().__init__(text)
        self.axiom = axiom
        self.witness = witness


class DomainError(FusionRealError):
    """An argument lies outside the domain of the operation."""


class NotAPGroup(FusionRealError):
    """A fusion base group must have prime power order."""


class InvalidMorphism(FusionRealError):
    """A map is not an injective homomorphism on its stated domain."""


class InvalidGenerator(FusionRealError):
    """A fusion generator is not a valid morphism between subgroups."""


class NotBifree(FusionRealError):
    """A biset point has a stabilizer that is not a twisted diagonal."""


class NotABiset(FusionRealError):
    """Coefficients are not those of a genuine finite biset."""


class PreconditionViolated(FusionRealError):
    """Input counts are not constant on a fusion class outside the repair set."""

    def __init__(self, message: str, witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


class HNotClosed(FusionRealError):
    """The repair collection is not closed under fusion or under subgroups."""


class TooLarge(FusionRealError):
    """An explicit search exceeds the configured size bound."""


class UnknownCatalogEntry(FusionRealError):
    """No catalog entry with the requested name."""
