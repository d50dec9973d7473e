import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .core import ChangepointReport, ItsConfig, ModelConfig, PosteriorDraws, TimeSeries
from .detect import build_report
from .errors import Issue, ValidationError
from .extensions.interrupted import intervention_summary
from .extensions.regression import RegressionChain
from .samplers.chain import GibbsChain

logger = logging.getLogger(__name__)


@dataclass
class FitResult:
    reports: List[ChangepointReport]
    draws: List[PosteriorDraws]
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def report(self) -> ChangepointReport:
        return self.reports[0]


class FitEngine:
    """Runs one fit end to end: chain construction, sweeps, progress and reports."""

    def __init__(self, config: ModelConfig, its: Optional[ItsConfig] = None):
        self.config = config
        self.its = its
        self.chain: Optional[GibbsChain] = None

    def create_chain(self, series: TimeSeries) -> GibbsChain:
        if series.design is not None:
            if self.its is not None:
                raise ValidationError([Issue("BadDesign", "interrupted mode takes a series without predictors")])
            self.chain = RegressionChain(series, self.config)
        else:
            self.chain = GibbsChain(series, self.config, its=self.its)
        return self.chain

    def progress_logger(self, start: float) -> Callable[[GibbsChain], None]:
        every = self.config.progress_every

        def log_progress(chain: GibbsChain) -> None:
            if every > 0 and chain.iteration % every == 0:
                logger.info("iteration %d/%d (%.1fs)", chain.iteration, self.config.iters, time.time() - start)

        return log_progress

    def run_fit(self, series: TimeSeries,
                on_iteration: Optional[Callable[[GibbsChain], None]] = None) -> FitResult:
        chain = self.create_chain(series)
        start_time = time.time()
        progress = self.progress_logger(start_time)

        def on_sweep(ch: GibbsChain) -> None:
            progress(ch)
            if on_iteration:
                on_iteration(ch)

        if isinstance(chain, RegressionChain):
            draws = chain.run_all(on_sweep)
            reports = [build_report(series, d, self.config) for d in draws]
        else:
            single = chain.run(on_sweep)
            summary = None
            if self.its is not None:
                summary = intervention_summary(single, self.its.pi, chain.upsilon_var)
            draws = [single]
            reports = [build_report(series, single, self.config, summary)]

        end_time = time.time()
        elapsed = end_time - start_time
        logger.debug("fit finished: %d sweeps in %.2fs", chain.iteration, elapsed)
        return FitResult(
            reports=reports,
            draws=draws,
            timing={
                "duration_seconds": elapsed,
                "iterations_per_second": chain.iteration / elapsed if elapsed > 0 else 0.0,
            },
        )
