"""Exception types shared across the package.

ParameterError covers bad arguments and domain violations (CLI exit code 1),
NumericalError covers runtime numerical failures such as quadrature
non-convergence or a lost root bracket (CLI exit code 2).
"""


class ParameterError(ValueError):
    """Invalid parameter or argument outside its documented domain."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its stated guarantee."""


class BracketFailure(NumericalError):
    """Root bracketing did not isolate the expected number of solutions."""
