"""
Synthetic experiment histories drawn from a known bivariate model.
"""

import logging
from typing import List, Optional

import numpy as np

from seesaw.estimation.history import DIMENSIONS, HistoricalRecord
from seesaw.models.regimes import HurdlePolicy, RegimeModel
from seesaw.simulation.sampler import make_streams, sample_effects, sample_priorities

logger = logging.getLogger(__name__)


def synthesize_history(
    model: RegimeModel,
    count: int,
    seed: int,
    policy: Optional[HurdlePolicy] = None,
    include_secondary: bool = True,
    adopted_only: bool = False,
) -> List[HistoricalRecord]:
    """
    Draw past A/B tests from a bivariate model.

    Args:
        model: Validated bivariate model (sym, asym or t)
        count: Number of tests to draw
        seed: Stream seed
        policy: Hurdle used to fill the adopted column (left empty when None)
        include_secondary: Record the effect on the untested dimension
        adopted_only: Keep only adopted tests (requires a policy)

    Returns:
        List of HistoricalRecord, test ids "T000001", "T000002", ...
    """
    if model.dimensions != 2:
        raise ValueError(f"histories are bivariate, model has {model.dimensions} dimensions")
    if adopted_only and policy is None:
        raise ValueError("adopted_only needs a hurdle policy")

    streams = make_streams(seed, 0)
    priorities = sample_priorities(model, count, streams.priority)
    effects = sample_effects(model, count, streams.effects)
    rows = np.arange(count)
    primary = effects[rows, priorities]
    secondary = effects[rows, 1 - priorities]

    adopted = None
    if policy is not None:
        hurdles = np.asarray(policy.thresholds(2), dtype=float)
        adopted = primary > hurdles[priorities]

    width = max(6, len(str(count)))
    records = []
    for i in range(count):
        flag = None if adopted is None else bool(adopted[i])
        if adopted_only and not flag:
            continue
        records.append(HistoricalRecord(
            test_id=f"T{i + 1:0{width}d}",
            primary_dim=DIMENSIONS[priorities[i]],
            primary_effect=float(primary[i]),
            secondary_effect=float(secondary[i]) if include_secondary else None,
            adopted=flag,
        ))

    logger.info(f"Synthesized {len(records)} historical record(s) from {count} draws")
    return records
