"""
Sample-moment estimation from historical records and hurdle recommendations.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from seesaw.analysis.hurdles import OptimalHurdle, optimal_hurdle
from seesaw.exceptions import (
    AssumptionViolationError,
    DomainError,
    HypothesisError,
    RecommendationRefused,
    Violation,
)
from seesaw.estimation.history import HistoricalRecord
from seesaw.models.regimes import Regime, build_model, model_parameters

logger = logging.getLogger(__name__)

SAMPLING_CAVEAT = (
    "estimates carry sampling error; the recommended hurdle inherits it "
    "(see z_star_std_error where reported)"
)
SELECTION_BIAS_CAVEAT = (
    "every record is an adopted test: moments describe the truncated distribution "
    "of shipped innovations, not the population of ideas"
)
MISSING_SECONDARY_CAVEAT = (
    "no secondary-dimension effects recorded: correlation is not estimable and "
    "spillovers are unobserved"
)


@dataclass
class EstimatedModel:
    """
    Point estimates with sample sizes and completeness flags.

    Fields that could not be estimated are None and flagged False in
    `estimable`; nothing is filled in.
    """

    mu_u: Optional[float]
    mu_v: Optional[float]
    sigma_u: Optional[float]
    sigma_v: Optional[float]
    rho: Optional[float]
    mu: Optional[float]
    sigma: Optional[float]
    p_u: Optional[float]
    n_u: int
    n_v: int
    n_pairs: int
    n_records: int
    n_adopted_flags: int = 0
    all_adopted: bool = False
    estimable: Dict[str, bool] = field(default_factory=dict)

    @property
    def n_total(self) -> int:
        return self.n_u + self.n_v

    @property
    def has_secondary(self) -> bool:
        return self.n_pairs > 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "mu_u": self.mu_u, "mu_v": self.mu_v,
            "sigma_u": self.sigma_u, "sigma_v": self.sigma_v,
            "rho": self.rho, "mu": self.mu, "sigma": self.sigma, "p_u": self.p_u,
            "n_u": self.n_u, "n_v": self.n_v, "n_pairs": self.n_pairs, "n_records": self.n_records,
            "estimable": dict(self.estimable),
        }


def _mean(values: np.ndarray) -> Optional[float]:
    return float(values.mean()) if values.size >= 1 else None


def _std(values: np.ndarray) -> Optional[float]:
    return float(values.std(ddof=1)) if values.size >= 2 else None


def _pearson(pairs: np.ndarray) -> Optional[float]:
    if pairs.shape[0] < 2:
        return None
    if pairs[:, 0].std() == 0 or pairs[:, 1].std() == 0:
        return None
    return float(np.clip(np.corrcoef(pairs[:, 0], pairs[:, 1])[0, 1], -1.0, 1.0))


def estimate_moments(records: Sequence[HistoricalRecord]) -> EstimatedModel:
    """
    Estimate the bivariate parameters by sample moments.

    Each dimension's sample pools primary effects measured on it and secondary
    effects recorded while the other dimension was tested. The correlation uses
    complete (u, v) pairs only. Variances use the unbiased (N-1) convention.

    Args:
        records: Parsed historical records

    Returns:
        EstimatedModel with completeness flags
    """
    values: Dict[str, List[float]] = {"u": [], "v": []}
    pairs: List[List[float]] = []
    adopted_flags = []
    for record in records:
        values[record.primary_dim].append(record.primary_effect)
        if record.secondary_effect is not None:
            values[record.other_dim].append(record.secondary_effect)
            pairs.append([record.effect_on("u"), record.effect_on("v")])
        if record.adopted is not None:
            adopted_flags.append(record.adopted)

    u = np.asarray(values["u"], dtype=float)
    v = np.asarray(values["v"], dtype=float)
    pooled = np.concatenate([u, v])
    pair_array = np.asarray(pairs, dtype=float).reshape(-1, 2)
    n_records = len(records)
    p_u = sum(1 for r in records if r.primary_dim == "u") / n_records if n_records else None

    estimated = EstimatedModel(
        mu_u=_mean(u), mu_v=_mean(v),
        sigma_u=_std(u), sigma_v=_std(v),
        rho=_pearson(pair_array),
        mu=_mean(pooled), sigma=_std(pooled),
        p_u=p_u,
        n_u=int(u.size), n_v=int(v.size), n_pairs=int(pair_array.shape[0]), n_records=n_records,
        n_adopted_flags=len(adopted_flags),
        all_adopted=bool(adopted_flags) and all(adopted_flags),
    )
    estimated.estimable = {
        name: getattr(estimated, name) is not None
        for name in ("mu_u", "mu_v", "sigma_u", "sigma_v", "rho", "mu", "sigma", "p_u")
    }
    unavailable = [k for k, ok in estimated.estimable.items() if not ok]
    if unavailable:
        logger.warning(f"Not estimable from {n_records} record(s): {', '.join(unavailable)}")
    return estimated


def z_star_std_error(estimated: EstimatedModel) -> Optional[float]:
    """
    Delta-method standard error of the symmetric optimal hurdle.

    Uses Var(mu) = sigma^2 (N + 2 P rho) / N^2 for N pooled effects of which
    P pairs share a record, and Var(rho) = (1 - rho^2)^2 / P.

    Returns:
        Standard error, or None when an input is missing or rho is +-1
    """
    mu, sigma, rho = estimated.mu, estimated.sigma, estimated.rho
    if mu is None or sigma is None or rho is None or not -1.0 < rho < 1.0:
        return None
    n_total = estimated.n_total
    n_pairs = estimated.n_pairs
    var_mu = sigma * sigma * (n_total + 2.0 * n_pairs * rho) / (n_total * n_total)
    var_rho = (1.0 - rho * rho) ** 2 / n_pairs
    d_mu = (rho - 1.0) / (rho + 1.0)
    d_rho = 2.0 * mu / (rho + 1.0) ** 2
    return math.sqrt(d_mu * d_mu * var_mu + d_rho * d_rho * var_rho)


@dataclass
class Recommendation:
    """Recommended hurdle with the estimates behind it and the caveats that apply."""

    hurdle: OptimalHurdle
    estimated: EstimatedModel
    parameters: Dict[str, object]
    caveats: List[str]
    z_star_std_error: Optional[float] = None

    def to_dict(self) -> Dict[str, object]:
        data = self.hurdle.to_dict()
        return {
            "z_star": data["z_star"],
            "performance_at_optimum": data["performance_at_optimum"],
            "estimates": self.estimated.to_dict(),
            "caveats": list(self.caveats),
            "z_star_std_error": self.z_star_std_error,
            "parameters": self.parameters,
        }


def _caveats(estimated: EstimatedModel) -> List[str]:
    caveats = [SAMPLING_CAVEAT]
    if estimated.all_adopted:
        caveats.append(SELECTION_BIAS_CAVEAT)
    if not estimated.has_secondary:
        caveats.append(MISSING_SECONDARY_CAVEAT)
    return caveats


def recommend(estimated: EstimatedModel, regime: str = "sym", relaxed: bool = False) -> Recommendation:
    """
    Recommend a hurdle from estimated parameters.

    Args:
        estimated: Output of estimate_moments
        regime: "sym" (pooled estimates) or "asym" (per-dimension estimates)
        relaxed: Validate with the relaxed mean-sum condition

    Returns:
        Recommendation

    Raises:
        RecommendationRefused: Naming every missing estimate, violated assumption or failed hypothesis
        DomainError: For a regime other than sym or asym
    """
    regime = Regime(regime)
    if regime == Regime.SYMMETRIC:
        needed = {"mu": estimated.mu, "sigma": estimated.sigma, "rho": estimated.rho}
    elif regime == Regime.ASYMMETRIC:
        needed = {
            "mu_u": estimated.mu_u, "mu_v": estimated.mu_v,
            "sigma_u": estimated.sigma_u, "sigma_v": estimated.sigma_v,
            "rho": estimated.rho,
        }
    else:
        raise DomainError(f"recommendations support the sym and asym regimes, got {regime.value}")

    missing = [f"{name} not estimable from the records" for name, value in needed.items() if value is None]
    if missing:
        # Degenerate scales are the usual reason rho is missing; name them too
        missing += [
            str(Violation(name, value, f"{name} > 0", "positive-scale"))
            for name, value in needed.items()
            if name.startswith("sigma") and value is not None and not value > 0
        ]
        raise RecommendationRefused(missing)

    params = dict(needed)
    if estimated.p_u is not None:
        params["p_u"] = estimated.p_u
    try:
        model = build_model(regime, params, relaxed=relaxed)
        hurdle = optimal_hurdle(model)
    except AssumptionViolationError as e:
        raise RecommendationRefused([str(v) for v in e.violations]) from e
    except (HypothesisError, DomainError) as e:
        raise RecommendationRefused([str(e)]) from e

    caveats = _caveats(estimated)
    for caveat in caveats[1:]:
        logger.warning(f"Caveat: {caveat}")

    std_error = z_star_std_error(estimated) if regime == Regime.SYMMETRIC else None
    return Recommendation(
        hurdle=hurdle,
        estimated=estimated,
        parameters={**model_parameters(model), "relaxed": relaxed},
        caveats=caveats,
        z_star_std_error=std_error,
    )
