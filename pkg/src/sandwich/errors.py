"""Exception hierarchy shared by all modules."""


class SandwichError(Exception):
    pass


class InvalidRing(SandwichError, ValueError):
    pass


class InvalidLambda(InvalidRing):
    pass


class InvalidInvolution(InvalidRing):
    pass


class BudgetExceeded(SandwichError):
    pass


class DimMismatch(SandwichError, ValueError):
    pass


class NotInvertible(SandwichError, ArithmeticError):
    pass


class BadIndex(SandwichError, ValueError):
    pass


class BadVector(SandwichError, ValueError):
    pass


class NotMember(SandwichError, ValueError):
    pass


class NotIsotropic(SandwichError, ValueError):
    pass


class FormParamViolation(SandwichError, ValueError):
    pass


class GuardFailed(SandwichError, AssertionError):
    """A construction produced a matrix that contradicts an identity it relies on."""


class ExpansionMismatch(GuardFailed):
    pass
