"""Exception types shared across the package.

The CLI maps these onto process exit codes, so samplers and parsers
should raise these rather than bare ValueError/RuntimeError wherever the
failure is meaningful to a caller.
"""

from __future__ import annotations


class ParameterError(ValueError):
    """A caller-supplied parameter is outside the supported domain."""


class FormatError(ValueError):
    """Malformed input data (edge lists, serialized records).

    ``position`` locates the problem: a byte/character offset for syntax
    errors, a line number or element index for semantic ones.
    """

    def __init__(self, message: str, position: int = 0):
        super().__init__(message)
        self.position = position


class CapacityError(RuntimeError):
    """A guarded computation would exceed its size cap (e.g. enumeration)."""


class BudgetExhaustedError(RuntimeError):
    """A sampling run hit its level/sweep/iteration budget before finishing.

    ``stats`` carries whatever run statistics were accumulated up to the
    abort, which is usually enough to tell an undersized budget apart from
    an infeasible instance.
    """

    def __init__(self, message: str, stats=None):
        super().__init__(message)
        self.stats = stats


class SolverTimeoutError(RuntimeError):
    """A component solver could not finish within its coalescence budget."""


class SupercriticalError(ParameterError):
    """Percolation-style quantities requested in the supercritical regime."""
