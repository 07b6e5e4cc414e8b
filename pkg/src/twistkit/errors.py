"""Exception types shared across the package."""


class TwistkitError(Exception):
    pass


class NonMonicModulus(TwistkitError, ValueError):
    def __init__(self, modulus):
        super().__init__(f"NonMonicModulus: leading coefficient of {modulus} is not 1")
        self.modulus = modulus


class NotDivisible(TwistkitError, ArithmeticError):
    """A coefficient failed an exact division; `degree` locates it."""

    def __init__(self, degree, divisor, coefficient=None):
        super().__init__(
            f"NotDivisible: coefficient {coefficient} in degree {degree} is not divisible by {divisor}"
        )
        self.degree = degree
        self.divisor = divisor
        self.coefficient = coefficient


class NoSolution(TwistkitError, ArithmeticError):
    def __init__(self, detail=""):
        super().__init__(f"NoSolution: {detail}" if detail else "NoSolution")


class UnsupportedVartheta(TwistkitError, NotImplementedError):
    def __init__(self, d):
        super().__init__(f"UnsupportedVartheta: no construction of vartheta_{d}")
        self.d = d


class NotInGhostImage(TwistkitError, ValueError):
    def __init__(self, index, detail=""):
        super().__init__(f"NotInGhostImage at index {index}" + (f": {detail}" if detail else ""))
        self.index = index


class NotInImage(TwistkitError, ValueError):
    def __init__(self, level, detail=""):
        super().__init__(f"NotInImage at level {level}" + (f": {detail}" if detail else ""))
        self.level = level


class NoWitnessFound(TwistkitError, LookupError):
    """Search exhausted without a witness. Inconclusive, never a pass."""

    def __init__(self, searched):
        super().__init__(f"NoWitnessFound({searched})")
        self.searched = searched
