"""Process-wide resource caps, adjustable from the command line."""

MAX_GENERATORS = 10 ** 7
MAX_MEMORY = 4 * 2 ** 30


def generators(limit=None) -> int:
    return MAX_GENERATORS if limit is None else limit
