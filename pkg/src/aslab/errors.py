"""Exception hierarchy shared by the whole package.

InputError covers malformed input and violated preconditions; its subclass
CapExceededError marks inputs that are well formed but beyond the documented
size caps.  ConsistencyError is reserved for situations where an internal
cross-check fails, i.e. the library itself produced two answers that should
agree and do not.  The command line maps InputError to exit code 2 and
ConsistencyError to exit code 3.
"""


class AslabError(Exception):
    pass


class InputError(AslabError):
    """Malformed input or violated precondition."""


class CapExceededError(InputError):
    """Input exceeds a documented size cap."""


class ConsistencyError(AslabError):
    """An internal cross-check failed; results cannot be trusted."""
