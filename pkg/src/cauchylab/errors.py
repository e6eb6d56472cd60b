"""Exception types shared across the package."""


class InputError(ValueError):
    """A rejected input: precondition violation, not a failed bound."""


class GridAlignmentError(InputError):
    """A point or shift does not sit on the required grid lattice."""


class SingularityError(InputError):
    """Kernel evaluated on the diagonal x == y."""
