"""Exception types shared across the package."""


class MatintError(Exception):
    """Base class for all package-specific errors."""


class InputError(MatintError):
    """Structurally malformed input: bad indices, length mismatches, bad rationals."""


class InfeasibleRestrictionError(MatintError):
    """The ground set minus the removed elements no longer contains a full-rank basis."""


class UnboundedPolytopeError(MatintError):
    """Vertex enumeration hit a recession direction outside the designated one."""


class DegeneratePolytopeError(MatintError):
    """The polytope is empty or not full-dimensional where full dimension is required."""


class DomainError(MatintError):
    """A query point lies outside the parameter polytope."""


class ValidationError(MatintError):
    """The instance failed assumption validation.

    Carries the full report so callers can show per-assumption results.
    """

    def __init__(self, report):
        self.report = report
        failed = ", ".join(c.name for c in report.checks if not c.passed)
        super().__init__(f"instance validation failed: {failed}")


class OracleContractError(MatintError):
    """An oracle returned an answer violating its contract (wrong size, infeasible strategy)."""


class FingerprintMismatchError(MatintError):
    """A result file does not belong to the given instance."""
