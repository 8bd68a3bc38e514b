"""Exception hierarchy shared by every subpackage.

Each class carries a short ``code`` that the command line prints as a
machine-parsable prefix and maps to an exit status.
"""


class CfxError(Exception):
    """Base class for all cfxlab errors."""

    code = "error"


class ParseError(CfxError, ValueError):
    """Malformed input file (JSON model, problem spec, DIMACS)."""

    code = "parse"


class DimensionMismatch(CfxError, ValueError):
    """An instance or array does not match a model's input dimension."""

    code = "dimension"


class InvalidModel(CfxError, ValueError):
    """A model violates one of its structural invariants."""

    code = "invalid-model"

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class CapExceeded(CfxError, RuntimeError):
    """An exhaustive enumeration would exceed the configured dimension cap."""

    code = "cap"

    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: dimension {size} exceeds cap {cap}")


class InvariantViolation(CfxError, AssertionError):
    """An internal consistency check failed (a bug, not a user error)."""

    code = "invariant"


class InvalidSpec(CfxError, ValueError):
    """A problem specification violates its invariants (e.g. lambda <= 0)."""

    code = "spec"
