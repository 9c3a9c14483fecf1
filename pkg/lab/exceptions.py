"""Failures raised by the lab. Management commands map them to exit codes."""


class LabError(Exception):
    """Base class for every lab failure."""


class DimensionError(LabError):
    """Shapes or subsystem dimensions do not fit the operation."""


class NonHermitianError(LabError):
    def __init__(self, deviation, tolerance):
        self.deviation = deviation
        self.tolerance = tolerance
        super().__init__(
            f"matrix is not Hermitian: max |h - h^dagger| = {deviation:.3e} > {tolerance:.1e}"
        )


class ConvergenceError(LabError):
    def __init__(self, sweeps, off_norm):
        self.sweeps = sweeps
        self.off_norm = off_norm
        super().__init__(
            f"Jacobi eigensolver did not converge after {sweeps} sweeps "
            f"(off-diagonal norm {off_norm:.3e})"
        )


class NonFiniteError(LabError):
    """NaN or infinite entries in a numeric carrier."""


class InvalidCutError(LabError):
    """A bipartition that is empty, overlapping or not covering."""


class InvalidStateError(LabError):
    """A state vector or density operator that violates its invariants."""


class UnknownStateError(LabError):
    """Name not known to the named-state factory."""


class OutOfRangeError(LabError):
    """A parameter (p, index, rank) outside its allowed range."""


class NonUnitaryError(LabError):
    def __init__(self, deviation):
        self.deviation = deviation
        super().__init__(f"correction is not unitary: max |U^dagger U - I| = {deviation:.3e}")


class RejectionBudgetExceeded(LabError):
    def __init__(self, attempts, seed, diagnostics=None):
        self.attempts = attempts
        self.seed = seed
        self.diagnostics = diagnostics or {}
        super().__init__(
            f"canonical sampler exhausted {attempts} attempts for seed {seed}: {self.diagnostics}"
        )


class MonogamyViolation(LabError):
    """A sampled state whose residual falls below the violation threshold."""

    def __init__(self, record, state):
        self.record = record
        self.state = state
        super().__init__(
            f"monogamy violated by sample {record.sample_id} (seed {record.seed}): "
            f"residual {record.residual:.6e}"
        )


class EmitterError(LabError):
    """An output file that cannot be written or has nothing to write."""


class AnalyticMismatch(LabError):
    def __init__(self, family, rows, tolerance):
        self.family = family
        self.rows = rows
        self.tolerance = tolerance
        worst = max(abs(r.analytic_residual - r.numeric_residual) for r in rows)
        super().__init__(
            f"{family}: {len(rows)} sweep points differ from the closed form by more than "
            f"{tolerance:.1e} (worst {worst:.3e})"
        )
