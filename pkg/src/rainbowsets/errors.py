"""Exception taxonomy shared across the package.

The CLI maps these onto its exit-code contract: validation and parameter
problems exit 2, budget/resource refusals exit 3, anything unexpected 1.
"""


class ParameterError(ValueError):
    """An argument value is out of range or malformed."""


class BudgetError(RuntimeError):
    """An exhaustive operation would exceed its enumeration or attempt budget."""


class DegenerateInputError(ValueError):
    """Geometric input is degenerate (affinely dependent points)."""


class ValidationError(ValueError):
    """An instance fails the validity requirements of a colouring."""
