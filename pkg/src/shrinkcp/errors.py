from dataclasses import dataclass
from typing import List, Optional


class ShrinkcpError(Exception):
    """Base class for every error raised by shrinkcp"""


@dataclass(frozen=True)
class Issue:
    code: str  # SeriesTooShort | NonFinite | BadBounds | BadDesign | BadPi
    message: str


class ValidationError(ShrinkcpError):
    """All violated invariants of a (config, series) pair, reported together."""

    def __init__(self, issues: List[Issue]):
        self.issues = list(issues)
        super().__init__(self.issues)

    def __str__(self) -> str:
        return "; ".join(f"{i.code}: {i.message}" for i in self.issues) or "invalid input"

    @property
    def codes(self) -> List[str]:
        return [i.code for i in self.issues]


class TooShortError(ShrinkcpError):
    pass


class BadParamError(ShrinkcpError, ValueError):
    pass


class EmptyIntervalError(ShrinkcpError, ValueError):
    pass


class DegenerateSliceError(ShrinkcpError):
    """Log density is non-finite over the whole slice bracket"""


class NotPositiveDefiniteError(ShrinkcpError):
    def __init__(self, pivot: int):
        self.pivot = pivot
        super().__init__(pivot)

    def __str__(self) -> str:
        return f"matrix is not positive definite (pivot {self.pivot})"


class DimensionMismatchError(ShrinkcpError, ValueError):
    pass


class BadWeightsError(ShrinkcpError, ValueError):
    pass


class ComponentDisabledError(ShrinkcpError):
    pass


class BadCpsError(ShrinkcpError, ValueError):
    pass


class InputFormatError(ShrinkcpError):
    """A data, truth, report or config file could not be read"""


class SamplerError(ShrinkcpError):
    """A sub-sampler failed; carries the sweep it failed in."""

    def __init__(self, iteration: int, step: str, cause: Optional[BaseException] = None):
        self.iteration = iteration
        self.step = step
        self.cause = cause
        super().__init__(iteration, step, cause)

    def __str__(self) -> str:
        return f"sampler failed at iteration {self.iteration} in step '{self.step}': {self.cause}"


class AllZeroWarning(RuntimeWarning):
    """Every griddy conditional value underflowed"""


class DegenerateBoundsWarning(RuntimeWarning):
    pass


class DesignRankWarning(RuntimeWarning):
    pass
