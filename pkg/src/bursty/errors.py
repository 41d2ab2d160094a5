"""Exception taxonomy.

ConfigError maps to CLI exit code 2, NumericalError and its subclasses
to exit code 3.
"""

from __future__ import annotations


class ConfigError(Exception):
    """Bad or missing configuration, flags, or input files."""


class NumericalError(Exception):
    """Base class for runtime numerical failures."""


class SingularityError(NumericalError):
    """Evaluation requested at a pole or on an excluded parameter set."""


class ConvergenceError(NumericalError):
    """An iterative scheme failed to reach tolerance within its budget."""


class PartitionError(NumericalError):
    """Domain partition could not be constructed to tolerance."""


class AliasingError(NumericalError):
    """Distribution grid too small; boundary mass above tolerance."""


class SupportError(NumericalError):
    """Data support extends beyond the model grid by more than tolerance."""


class EventLimitError(NumericalError):
    """Stochastic simulation exceeded its event-count cap."""
