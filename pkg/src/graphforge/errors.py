"""Exception hierarchy shared across graphforge modules."""


class GraphForgeError(Exception):
    """Base class for all graphforge errors."""


class DataError(GraphForgeError):
    """Malformed or inconsistent input data (CSV parse failures, bad labels, ...)."""


class DimensionMismatchError(GraphForgeError):
    """Operands with incompatible feature dimensions."""


class ConstructionError(GraphForgeError):
    """A graph constructor could not run on the given input."""


class CoincidentPointsError(ConstructionError):
    """Duplicate feature rows where a construction requires distinct points."""


class BundleError(GraphForgeError):
    """GraphBundle read/write failure: checksum, version or format violations."""
