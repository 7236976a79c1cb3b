"""Exception types raised by graphon_core."""


class GraphonError(ValueError):
    """Base class for all input and precondition errors."""


class NonSymmetric(GraphonError):
    pass


class OutOfRange(GraphonError):
    pass


class BadBoundaries(GraphonError):
    pass


class IndexOutOfRange(GraphonError, IndexError):
    pass


class MismatchedBlockCount(GraphonError):
    pass


class UnequalBlockMasses(GraphonError):
    pass


class TooManyBlocks(GraphonError):
    pass


class PointOutOfRange(GraphonError):
    pass


class BadGrid(GraphonError):
    pass


class BadParameter(GraphonError):
    pass


class BadDepth(GraphonError):
    pass


class SpecParseError(GraphonError):
    pass
