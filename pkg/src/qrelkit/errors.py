"""Exception types shared by the whole package.

Two failure modes are kept apart on purpose:

* ``ValidationError`` -- the caller handed us something malformed or outside
  a documented precondition (bad shapes, a non-positive density, a map that
  is not completely positive where one is required, ...).  CLI exit code 1.

* ``InternalConsistencyError`` -- two independent computations of the same
  object disagreed beyond tolerance.  This signals a bug (usually a
  convention mismatch), never bad user input.  CLI exit code 2.
"""


class ValidationError(ValueError):
    """Input rejected by a documented precondition."""


class InternalConsistencyError(RuntimeError):
    """Two independent code paths disagreed; indicates a library bug."""
