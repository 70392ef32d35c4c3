"""Exception types shared by all wlkit modules.

Every error carries a short machine-readable ``code`` (e.g. ``"SELF_LOOP"``)
so the CLI can map failures onto exit codes without string matching.
"""

from __future__ import annotations


class WLKitError(Exception):
    code = "ERROR"

    def __init__(self, message: str = "", code: str | None = None):
        if code is not None:
            self.code = code
        super().__init__(f"{self.code}: {message}" if message else self.code)


class GraphFormatError(WLKitError, ValueError):
    """Raised for malformed edge-list or graph6 input."""

    code = "MALFORMED_LINE"


class InvalidGraphError(WLKitError, ValueError):
    code = "INVALID_GRAPH"


class ResourceGuardError(WLKitError):
    """Instance exceeds the desk-scale bound an exact routine was built for."""

    code = "RESOURCE_GUARD"


class PreconditionError(WLKitError, ValueError):
    code = "PRECONDITION_FAILED"


class TheoremViolation(WLKitError):
    """An exhaustive check found a counterexample to a claimed theorem.

    This should never happen; if it does, the message carries the witness.
    """

    code = "THEOREM_VIOLATION"
