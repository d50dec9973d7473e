from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Optional, Protocol

from ..core import ModelConfig


class SweepStep(Protocol):
    name: str

    def enabled(self, config: ModelConfig) -> bool: ...

    def update(self, chain: Any) -> None: ...


@dataclass
class BaseStep(SweepStep, ABC):
    """Base class for sweep steps with default implementations"""
    name: str

    def enabled(self, config: ModelConfig) -> bool:
        """Whether the step runs under this configuration"""
        return True

    @abstractmethod
    def update(self, chain: Any) -> None:
        """Draw this step's block from its full conditional"""


@dataclass
class FunctionStep(BaseStep):
    fn: Callable[[Any], None]
    when: Optional[Callable[[ModelConfig], bool]] = None

    def enabled(self, config: ModelConfig) -> bool:
        return True if self.when is None else self.when(config)

    def update(self, chain: Any) -> None:
        self.fn(chain)
