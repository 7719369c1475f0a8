"""
Sufficient conditions for seesaw experimentation.

Each check computes the largest correlation for which a zero hurdle is
guaranteed to lose on average, and reports it alongside the actual sign of
performance at zero, since the conditions are sufficient rather than necessary.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List

from seesaw.analysis.closed_form import (
    PerformanceValue,
    f_student_t,
    f_symmetric,
    g_asymmetric,
    h_multi,
)
from seesaw.exceptions import DomainError
from seesaw.models.regimes import (
    AsymmetricNormalModel,
    EquicorrelatedModel,
    Regime,
    RegimeModel,
    StudentTModel,
    SymmetricNormalModel,
)
from seesaw.stats.kernels import k_fn, mills_ratio, w_fn

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeesawVerdict:
    """
    Outcome of a seesaw region check.

    Attributes:
        rho_threshold: Largest correlation (exclusive) admitting the sufficient condition
        rho: The model's correlation
        predicted: lower_bound <= rho < rho_threshold
        performance_at_zero: Closed-form performance with a zero hurdle
        lower_bound: Smallest admissible correlation for the regime
        negative_at_zero: Actual sign of performance at zero, independent of the condition
    """

    rho_threshold: float
    rho: float
    predicted: bool
    performance_at_zero: PerformanceValue
    lower_bound: float = -1.0

    @property
    def regime(self) -> Regime:
        return self.performance_at_zero.regime

    @property
    def negative_at_zero(self) -> bool:
        return self.performance_at_zero.value < 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "regime": self.regime.value,
            "rho_threshold": self.rho_threshold,
            "rho": self.rho,
            "lower_bound": self.lower_bound,
            "predicted": self.predicted,
            "performance_at_zero": self.performance_at_zero.value,
            "negative_at_zero": self.negative_at_zero,
        }


def _verdict(threshold: float, rho: float, performance: PerformanceValue, lower_bound: float = -1.0) -> SeesawVerdict:
    predicted = lower_bound <= rho < threshold
    verdict = SeesawVerdict(threshold, rho, predicted, performance, lower_bound)
    if verdict.negative_at_zero and not predicted:
        logger.debug(f"{verdict.regime.value}: negative at zero although rho={rho} >= threshold={threshold:.6g}")
    return verdict


def symmetric_threshold(mu: float, sigma: float) -> float:
    """2 k(-mu/sigma) - 1."""
    return 2.0 * k_fn(-mu / sigma) - 1.0


def seesaw_check_symmetric(model: SymmetricNormalModel) -> SeesawVerdict:
    """
    Region check for the symmetric bivariate normal regime.

    Args:
        model: Validated symmetric model

    Returns:
        SeesawVerdict with threshold 2 k(-mu/sigma) - 1
    """
    threshold = symmetric_threshold(model.mu, model.sigma)
    return _verdict(threshold, model.rho, f_symmetric(model, 0.0))


def asymmetric_thresholds(model: AsymmetricNormalModel) -> tuple:
    """
    Per-dimension correlation bounds (rho_1, rho_2) for the asymmetric regime.

    Raises:
        DomainError: If either mean is zero
    """
    if model.mu_u == 0 or model.mu_v == 0:
        raise DomainError(f"region check needs nonzero means, got mu_u={model.mu_u}, mu_v={model.mu_v}")
    alpha_u = -model.mu_u / model.sigma_u
    alpha_v = -model.mu_v / model.sigma_v
    rho_1 = (alpha_u * mills_ratio(alpha_u) * (1.0 + model.mu_v / model.mu_u) - 1.0) * (model.sigma_u / model.sigma_v)
    rho_2 = (alpha_v * mills_ratio(alpha_v) * (1.0 + model.mu_u / model.mu_v) - 1.0) * (model.sigma_v / model.sigma_u)
    return rho_1, rho_2


def seesaw_check_asymmetric(model: AsymmetricNormalModel) -> SeesawVerdict:
    """Region check for the general bivariate normal regime; threshold min(rho_1, rho_2)."""
    rho_1, rho_2 = asymmetric_thresholds(model)
    return _verdict(min(rho_1, rho_2), model.rho, g_asymmetric(model, 0.0, 0.0))


def seesaw_check_multi(model: EquicorrelatedModel) -> SeesawVerdict:
    """
    Region check for the equicorrelated regime.

    threshold = (n / (n-1)) k(-mu/sigma) - 1 / (n-1), lower bound -1/(n-1)
    """
    n = model.n
    threshold = (n / (n - 1.0)) * k_fn(-model.mu / model.sigma) - 1.0 / (n - 1.0)
    return _verdict(threshold, model.rho, h_multi(model, 0.0), lower_bound=model.rho_floor)


def student_t_threshold(mu: float, sigma: float, delta: float) -> float:
    """2 (-mu/sigma) W(-mu/sigma) - 1."""
    alpha = -mu / sigma
    return 2.0 * alpha * w_fn(alpha, delta) - 1.0


def seesaw_check_student_t(model: StudentTModel) -> SeesawVerdict:
    """Region check for the symmetric bivariate t regime; fatter tails shrink the region."""
    threshold = student_t_threshold(model.mu, model.sigma, model.delta)
    return _verdict(threshold, model.rho, f_student_t(model, 0.0))


def seesaw_check(model: RegimeModel) -> SeesawVerdict:
    """Dispatch to the region check for the model's regime."""
    if isinstance(model, SymmetricNormalModel):
        return seesaw_check_symmetric(model)
    if isinstance(model, AsymmetricNormalModel):
        return seesaw_check_asymmetric(model)
    if isinstance(model, EquicorrelatedModel):
        return seesaw_check_multi(model)
    if isinstance(model, StudentTModel):
        return seesaw_check_student_t(model)
    raise TypeError(f"unsupported model type {type(model).__name__}")


def threshold_curve(alphas: Iterable[float], deltas: Iterable[float]) -> List[Dict[str, float]]:
    """
    Maximum seesaw correlation as a function of the signal-to-noise ratio.

    Rows are grouped by delta in the order given, followed by the normal
    reference 2 alpha M(alpha) - 1 with delta = inf.

    Args:
        alphas: Positive signal-to-noise ratios |mu|/sigma
        deltas: Degrees of freedom, each greater than 2

    Returns:
        List of {"alpha", "delta", "threshold"} rows

    Raises:
        DomainError: For a non-positive alpha or a delta <= 2
    """
    alphas = [float(a) for a in alphas]
    deltas = [float(d) for d in deltas]
    bad_alphas = [a for a in alphas if not a > 0]
    if bad_alphas:
        raise DomainError(f"alpha grid must be positive, got {bad_alphas}")
    bad_deltas = [d for d in deltas if not d > 2]
    if bad_deltas:
        raise DomainError(f"delta must exceed 2, got {bad_deltas}")

    rows = []
    for delta in deltas:
        for alpha in alphas:
            rows.append({"alpha": alpha, "delta": delta, "threshold": 2.0 * alpha * w_fn(alpha, delta) - 1.0})
    for alpha in alphas:
        rows.append({"alpha": alpha, "delta": math.inf, "threshold": 2.0 * k_fn(alpha) - 1.0})

    logger.info(f"Computed threshold curve: {len(alphas)} alphas x {len(deltas)} deltas + normal limit")
    return rows
