"""
Monte Carlo engine for the multi-period experimentation process.

Each period draws the tested dimension and an effect vector, adopts the
innovation when its measured primary effect strictly exceeds the applicable
hurdle, and accumulates every dimension's effect of adopted innovations.
Periods are simulated in vectorised chunks; running moments are merged across
chunks so memory stays bounded unless a trajectory is requested.
"""

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from seesaw.config.settings import settings
from seesaw.models.regimes import HurdlePolicy, RegimeModel, model_parameters
from seesaw.simulation.sampler import BIT_GENERATOR, make_streams, sample_effects, sample_priorities

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimulationConfig:
    """
    Everything that determines a simulation run.

    Identical configs give bitwise-identical results on the same build.
    """

    model: RegimeModel
    policy: HurdlePolicy
    horizon: int
    seed: int
    batch: int = 1
    chunk_size: Optional[int] = None
    t_scaling: Optional[str] = None
    trajectory: bool = False
    workers: Optional[int] = None

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be at least 1, got {self.horizon}")
        if self.batch < 1:
            raise ValueError(f"batch must be at least 1, got {self.batch}")
        if self.workers is not None and self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        if self.chunk_size is not None and self.chunk_size < 1:
            raise ValueError(f"chunk_size must be at least 1, got {self.chunk_size}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        self.policy.thresholds(self.model.dimensions)

    def to_dict(self) -> Dict[str, object]:
        return {
            **model_parameters(self.model),
            **self.policy.model_dump(exclude_none=True),
            "horizon": self.horizon,
            "seed": self.seed,
            "batch": self.batch,
            "chunk_size": self.chunk_size or settings.simulation_chunk_size,
            "t_scaling": self.t_scaling or settings.t_sampler_scaling,
            "generator": BIT_GENERATOR,
        }


@dataclass
class Trajectory:
    """Per-period record of a single replication."""

    cumulative: np.ndarray  # (T, dimensions) partial sums of adopted effects
    adopted: np.ndarray  # (T,) adoption flags
    contributions: np.ndarray  # (T,) combined effect added each period


@dataclass
class SimulationResult:
    """
    Outcome of one replication.

    Attributes:
        cumulative: Final cumulative performance per dimension (U_T, V_T, ...)
        adoption_count: Periods in which the innovation was adopted
        mean_per_period: Sum of adopted combined effects divided by the horizon
        std_error: Standard error of mean_per_period from i.i.d. periods
    """

    cumulative: Tuple[float, ...]
    adoption_count: int
    mean_per_period: float
    std_error: float
    horizon: int
    replication: int = 0
    trajectory: Optional[Trajectory] = field(default=None, repr=False)

    def to_dict(self) -> Dict[str, object]:
        return {
            "replication": self.replication,
            "horizon": self.horizon,
            "cumulative": list(self.cumulative),
            "adoption_count": self.adoption_count,
            "mean_per_period": self.mean_per_period,
            "std_error": self.std_error,
        }


@dataclass
class BatchResult:
    """Independent replications and their pooled estimate."""

    replications: List[SimulationResult]

    @property
    def batch(self) -> int:
        return len(self.replications)

    @property
    def pooled_mean(self) -> float:
        return float(np.mean([r.mean_per_period for r in self.replications]))

    @property
    def pooled_std_error(self) -> float:
        if self.batch < 2:
            return self.replications[0].std_error
        means = np.array([r.mean_per_period for r in self.replications])
        return float(np.std(means, ddof=1) / math.sqrt(self.batch))

    def to_dict(self) -> Dict[str, object]:
        return {
            "batch": self.batch,
            "pooled_mean": self.pooled_mean,
            "pooled_std_error": self.pooled_std_error,
            "replications": [r.to_dict() for r in self.replications],
        }


class _RunningMoments:
    """Mean and sum of squared deviations merged chunk by chunk."""

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0

    def merge(self, values: np.ndarray):
        n_b = values.size
        if n_b == 0:
            return
        mean_b = float(values.mean())
        m2_b = float(((values - mean_b) ** 2).sum())
        n = self.count + n_b
        diff = mean_b - self.mean
        self.mean += diff * n_b / n
        self.m2 += m2_b + diff * diff * self.count * n_b / n
        self.count = n

    @property
    def std_error(self) -> float:
        if self.count < 2:
            return math.nan
        return math.sqrt(self.m2 / (self.count - 1)) / math.sqrt(self.count)


def simulate_replication(config: SimulationConfig, replication: int = 0) -> SimulationResult:
    """
    Run a single replication of the process.

    Args:
        config: Simulation configuration
        replication: Index used to key this replication's random streams

    Returns:
        SimulationResult (with a Trajectory when config.trajectory is set)
    """
    model = config.model
    dimensions = model.dimensions
    hurdles = np.asarray(config.policy.thresholds(dimensions), dtype=float)
    chunk_size = config.chunk_size or settings.simulation_chunk_size
    streams = make_streams(config.seed, replication)

    totals = np.zeros(dimensions)
    adoption_count = 0
    moments = _RunningMoments()
    pieces: List[Tuple[np.ndarray, np.ndarray, np.ndarray]] = []

    remaining = config.horizon
    while remaining > 0:
        count = min(chunk_size, remaining)
        priorities = sample_priorities(model, count, streams.priority)
        effects = sample_effects(model, count, streams.effects, config.t_scaling)
        primary = effects[np.arange(count), priorities]
        # strictly greater: an effect equal to the hurdle is not adopted
        adopted = primary > hurdles[priorities]
        gained = np.where(adopted[:, None], effects, 0.0)
        contributions = gained.sum(axis=1)

        if config.trajectory:
            pieces.append((gained, adopted, contributions))
        totals += gained.sum(axis=0)
        adoption_count += int(adopted.sum())
        moments.merge(contributions)
        remaining -= count
        logger.debug(f"Replication {replication}: {config.horizon - remaining}/{config.horizon} periods")

    trajectory = None
    if config.trajectory:
        gained = np.concatenate([p[0] for p in pieces])
        trajectory = Trajectory(
            cumulative=np.cumsum(gained, axis=0),
            adopted=np.concatenate([p[1] for p in pieces]),
            contributions=np.concatenate([p[2] for p in pieces]),
        )

    return SimulationResult(
        cumulative=tuple(float(x) for x in totals),
        adoption_count=adoption_count,
        mean_per_period=float(totals.sum()) / config.horizon,
        std_error=moments.std_error,
        horizon=config.horizon,
        replication=replication,
        trajectory=trajectory,
    )


def run_batch(config: SimulationConfig) -> BatchResult:
    """
    Run config.batch independent replications, possibly concurrently.

    Results are ordered by replication index regardless of completion order.
    """
    workers = min(config.workers or settings.simulation_workers, config.batch)
    logger.info(f"Running {config.batch} replications x {config.horizon} periods on {workers} worker(s)")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        replications = list(pool.map(lambda i: simulate_replication(config, i), range(config.batch)))
    result = BatchResult(replications)
    logger.info(f"Pooled mean {result.pooled_mean:.6g} (SE {result.pooled_std_error:.3g})")
    return result


def run(config: SimulationConfig) -> Union[SimulationResult, BatchResult]:
    """
    Simulate the process described by config.

    Args:
        config: Simulation configuration

    Returns:
        SimulationResult for a single replication, BatchResult when batch > 1
    """
    if config.batch > 1:
        return run_batch(config)
    logger.info(f"Simulating {config.model.regime.value} regime for {config.horizon} periods (seed {config.seed})")
    return simulate_replication(config, 0)


@dataclass(frozen=True)
class ConvergencePoint:
    periods: int
    running_mean: float
    std_error: float

    def to_dict(self) -> Dict[str, object]:
        return {"periods": self.periods, "running_mean": self.running_mean, "std_error": self.std_error}


def convergence_report(config: SimulationConfig, checkpoints: Sequence[int]) -> List[ConvergencePoint]:
    """
    Running mean and standard error of per-period performance at each checkpoint.

    Args:
        config: Simulation configuration; the horizon must cover the last checkpoint
        checkpoints: Strictly increasing period counts

    Returns:
        One ConvergencePoint per checkpoint
    """
    checkpoints = [int(c) for c in checkpoints]
    if not checkpoints or any(b <= a for a, b in zip(checkpoints, checkpoints[1:])) or checkpoints[0] < 2:
        raise ValueError(f"checkpoints must be strictly increasing and at least 2, got {checkpoints}")
    if checkpoints[-1] > config.horizon:
        raise ValueError(f"last checkpoint {checkpoints[-1]} exceeds horizon {config.horizon}")

    traced = SimulationConfig(
        model=config.model, policy=config.policy, horizon=config.horizon, seed=config.seed,
        chunk_size=config.chunk_size, t_scaling=config.t_scaling, trajectory=True,
    )
    contributions = simulate_replication(traced, 0).trajectory.contributions
    sums = np.cumsum(contributions)
    squares = np.cumsum(contributions ** 2)

    report = []
    for periods in checkpoints:
        mean = sums[periods - 1] / periods
        variance = max(0.0, (squares[periods - 1] - periods * mean * mean) / (periods - 1))
        report.append(ConvergencePoint(periods, float(mean), math.sqrt(variance / periods)))
    return report


def export_trajectory(result: SimulationResult, destination: Union[str, Path, TextIO]) -> int:
    """
    Write a replication's trajectory as CSV.

    Bivariate regimes use columns t,U_t,V_t,adopted; n-dimensional runs use
    t,X1_t..Xn_t,adopted.

    Returns:
        Number of rows written
    """
    if result.trajectory is None:
        raise ValueError("result carries no trajectory; run with trajectory=True")
    cumulative = result.trajectory.cumulative
    dimensions = cumulative.shape[1]
    columns = ["U_t", "V_t"] if dimensions == 2 else [f"X{i + 1}_t" for i in range(dimensions)]
    fieldnames = ["t", *columns, "adopted"]

    def write(stream: TextIO):
        writer = csv.writer(stream)
        writer.writerow(fieldnames)
        for t in range(cumulative.shape[0]):
            row = [t + 1, *(repr(float(x)) for x in cumulative[t]), int(result.trajectory.adopted[t])]
            writer.writerow(row)

    if isinstance(destination, (str, Path)):
        path = Path(destination)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            write(f)
        logger.info(f"Exported trajectory: {path} ({cumulative.shape[0]} rows)")
    else:
        write(destination)
    return cumulative.shape[0]
