"""Exception types raised across the library."""


class PolychainError(Exception):
    """Base class; the CLI maps these to exit code 1."""


class GroupMismatch(PolychainError):
    pass


class DimensionMismatch(PolychainError):
    pass


class TypeMismatch(PolychainError):
    pass


class DegenerateCell(PolychainError):
    pass


class ZeroDimensional(PolychainError):
    pass


class NonGenericLevel(PolychainError):
    pass


class NonGenericPoint(NonGenericLevel):
    pass


class NonGenericBox(NonGenericLevel):
    pass


class NotTensorRepresentable(PolychainError):
    pass


class NotGridAligned(PolychainError):
    pass


class Infeasible(PolychainError):
    pass


class SpecInvalid(PolychainError):
    pass


class SearchBudgetExceeded(PolychainError):
    pass
