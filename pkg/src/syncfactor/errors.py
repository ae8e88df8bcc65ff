"""Exception hierarchy shared by the whole package.

Two kinds of failure are kept strictly apart:

* ``UsageError`` subclasses signal bad input or unmet preconditions (malformed
  files, graphs that are not strongly connected, search/size budgets, ...).
  The CLI maps them to exit code 1.
* ``TheoremViolation`` signals that an internal consistency assertion backed
  by a proved statement failed.  It should never fire; when it does, the
  offending instance is attached so it can be reported verbatim.  The CLI
  maps it to exit code 2.
"""

from __future__ import annotations


class SyncfactorError(Exception):
    """Base class for every error raised by this package."""


class UsageError(SyncfactorError):
    """Bad input or an unmet precondition; the caller can fix and retry."""


class GraphFormatError(UsageError):
    """Malformed graph/resolver payload (bad JSON shape, dangling ids, ...)."""


class NotStronglyConnected(UsageError):
    """An operation that requires strong connectivity received a graph without it."""


class ResolverValidationError(UsageError):
    """Candidate maps do not form a right resolver.

    The message names the violated clause and a witness (vertex or edge id).
    """


class UnsupportedInput(UsageError):
    """A mathematical hypothesis of the requested construction does not hold."""


class DeskScaleExceeded(UsageError):
    """Input is larger than the configured bound for an exhaustive routine."""


class BudgetExceeded(UsageError):
    """A rejection-sampling or search budget ran out before success."""


class SynchronizerNotFound(UsageError):
    """The randomized fallback failed to find a synchronizing resolver.

    Carries the offending graph as a JSON-ready dict in ``graph_payload`` so
    the instance can be preserved for later study: a reproducible failure
    here would be of independent interest.
    """

    def __init__(self, message: str, graph_payload: dict | None = None):
        super().__init__(message)
        self.graph_payload = graph_payload


class TheoremViolation(SyncfactorError):
    """An assertion backed by a proved statement failed on a concrete instance.

    ``payload`` holds a JSON-ready description of the instance.  Never caught
    and repaired internally; surfaced so the instance can be reported.
    """

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload
