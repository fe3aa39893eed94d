"""Exception hierarchy shared by every module."""


class FGSpaceError(Exception):
    pass


class CapExceeded(FGSpaceError):
    def __init__(self, size, cap):
        super().__init__(f"universe of size {size} exceeds enumeration cap {cap}")
        self.size = size
        self.cap = cap


class UniverseMismatch(FGSpaceError):
    pass


class InvalidClosure(FGSpaceError):
    pass


class TauUndefined(FGSpaceError):
    def __init__(self, subset):
        super().__init__(f"tau is not defined on {subset}")
        self.subset = subset


class NotATopology(FGSpaceError):
    pass


class InvalidSpace(FGSpaceError):
    """Raised when an operation needs a validated space and gets one that failed."""

    def __init__(self, report):
        first = report.violations[0].message if report.violations else "unvalidated"
        super().__init__(first)
        self.report = report


class NotRegular(FGSpaceError):
    pass


class NotInFamily(FGSpaceError):
    pass


class MNotInHull(FGSpaceError):
    pass


class EmptyPoset(FGSpaceError):
    pass


class NotAPartialOrder(FGSpaceError):
    pass


class InvalidBasis(FGSpaceError):
    pass


class SpaceMismatch(FGSpaceError):
    pass


class NotScottContinuous(FGSpaceError):
    pass


class NoGreatestElement(FGSpaceError):
    pass


class SupMissing(FGSpaceError):
    pass


class EmptyF(FGSpaceError):
    pass


class MOutsideHull(FGSpaceError):
    pass


class ParseError(FGSpaceError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column
