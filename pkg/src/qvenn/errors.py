"""Exception hierarchy shared by every qvenn module."""


class QVennError(ValueError):
    """Base class for all validation failures raised by qvenn."""


class LayoutConflictError(QVennError):
    """Two layouts share a label, or a fresh label is already in use."""


class AddressingError(QVennError):
    """A label or index does not exist in the addressed layout."""


class InvalidStateError(QVennError):
    """A state violates normalization, Hermiticity or positivity."""


class InvalidChannelError(QVennError):
    """A Kraus set is empty or fails the completeness relation."""


class DimensionMismatchError(QVennError):
    """Operand dimensions are incompatible."""


class OverlapError(QVennError):
    """Label sets that must be disjoint share a member."""
