class GroupoidError(Exception):
    """Base class for all errors raised by this package."""


class StructureError(GroupoidError):
    """Input tables are malformed: an id does not resolve, a table is ragged."""


class UnknownObjectError(GroupoidError, KeyError):
    pass


class BoundaryError(GroupoidError):
    """Spans or groupoids-over do not share the required boundary groupoid."""


class ResourceLimitError(GroupoidError):
    """A construction would exceed the configured size cap."""


class BoundError(GroupoidError):
    """A size parameter is outside the supported range."""
