"""Error hierarchy shared by every phase of the pipeline."""


class CircuitCutError(Exception):
    """Base error. ``phase`` names the pipeline phase that raised it."""

    phase = "pipeline"

    def __init__(self, message: str, phase: str | None = None):
        super().__init__(message)
        if phase is not None:
            self.phase = phase


class ConfigError(CircuitCutError):
    phase = "config"


class CircuitSyntaxError(CircuitCutError):
    """Malformed circuit text. Carries the offending 1-based line number."""

    phase = "parse"

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class QubitIndexError(CircuitCutError):
    phase = "parse"


class GateArityError(CircuitCutError):
    phase = "parse"


class SimulatorWidthError(CircuitCutError):
    phase = "simulate"


class InfeasiblePartitionError(CircuitCutError):
    phase = "cut"


class SolverTimeoutError(CircuitCutError):
    """The time limit elapsed before any feasible assignment was found."""

    phase = "cut"


class ContractionError(CircuitCutError):
    phase = "contract"


class MissingEntryError(ContractionError):
    pass


class DimensionMismatchError(ContractionError):
    pass


class MemoryLimitError(ContractionError):
    """Even with every eligible index sliced the network does not fit."""


class SamplingError(CircuitCutError):
    phase = "sample"


class StateListTooLargeError(CircuitCutError):
    phase = "merge"
