from typing import Any, Optional


class ExtensionCalculusError(ValueError):
    """A precondition of a group or extension operation failed."""


class MalformedTable(ExtensionCalculusError):
    pass


class NotAssociative(ExtensionCalculusError):
    def __init__(self, a: int, b: int, c: int) -> None:
        super().__init__(f"(a*b)*c != a*(b*c) for (a, b, c) = ({a}, {b}, {c})")
        self.triple = (a, b, c)


class NoIdentity(ExtensionCalculusError):
    pass


class NoInverse(ExtensionCalculusError):
    def __init__(self, element: int) -> None:
        super().__init__(f"element {element} has no two-sided inverse")
        self.element = element


class NotAHomomorphism(ExtensionCalculusError):
    pass


class NotNormal(ExtensionCalculusError):
    pass


class DomainMismatch(ExtensionCalculusError):
    pass


class CodomainMismatch(ExtensionCalculusError):
    pass


class NotInjective(ExtensionCalculusError):
    pass


class NotSurjective(ExtensionCalculusError):
    pass


class NotExact(ExtensionCalculusError):
    pass


class KernelNotNormalInE(ExtensionCalculusError):
    pass


class SignatureMismatch(ExtensionCalculusError):
    pass


class DoesNotFactor(ExtensionCalculusError):
    pass


class ActionMismatch(ExtensionCalculusError):
    pass


class NotAbelian(ExtensionCalculusError):
    pass


class BoundExceeded(ExtensionCalculusError):
    pass


class NotASection(ExtensionCalculusError):
    pass


class QuotientNotSplit(ExtensionCalculusError):
    pass


class UnknownGroup(ExtensionCalculusError):
    pass


class ViolationFound(Exception):
    """A verified statement failed on valid input; carries the report and counterexample."""

    def __init__(self, message: str, report: Optional[Any] = None, counterexample: Optional[dict] = None) -> None:
        super().__init__(message)
        self.report = report
        self.counterexample = counterexample or {}
