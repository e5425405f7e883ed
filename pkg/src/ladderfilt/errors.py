"""Exception types shared by all modules; the CLI maps them to exit codes."""


class LadderfiltError(Exception):
    exit_code = 1


class StructureError(LadderfiltError, ValueError):
    """Malformed dart structure or exchange record."""
    exit_code = 4


class ParseError(LadderfiltError, ValueError):
    """Schema or table file that does not parse; carries a line number."""
    exit_code = 4

    def __init__(self, msg, lineno=None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"{lineno}: "
        elif where:
            where += " "
        super().__init__(where + msg)
        self.lineno = lineno


class CapacityError(LadderfiltError, RuntimeError):
    """A resource cap (generator count or memory) would be exceeded."""
    exit_code = 2


class InfeasibleError(LadderfiltError, RuntimeError):
    """Bound below an exact value: an implementation inconsistency."""
    exit_code = 3


class PreconditionError(LadderfiltError, ValueError):
    """Operation applied outside its domain (e.g. reducing a 3-ladder)."""
    exit_code = 5
