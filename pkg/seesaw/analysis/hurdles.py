"""
Optimal hurdle rates for each regime, and a numeric cross-check against them.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple, Union

from seesaw.analysis.closed_form import (
    PerformanceValue,
    f_student_t,
    f_symmetric,
    g_asymmetric,
    h_multi,
)
from seesaw.analysis.optimizer import numeric_argmax
from seesaw.exceptions import HypothesisError
from seesaw.models.regimes import (
    AsymmetricNormalModel,
    EquicorrelatedModel,
    HurdlePolicy,
    Regime,
    RegimeModel,
    StudentTModel,
    SymmetricNormalModel,
)

logger = logging.getLogger(__name__)

Hurdle = Union[float, Tuple[float, float]]


@dataclass(frozen=True)
class OptimalHurdle:
    """Performance-maximizing hurdle and the performance it achieves."""

    z_star: Hurdle
    performance_at_optimum: PerformanceValue

    @property
    def regime(self) -> Regime:
        return self.performance_at_optimum.regime

    @property
    def policy(self) -> HurdlePolicy:
        if isinstance(self.z_star, tuple):
            return HurdlePolicy.pair(*self.z_star)
        return HurdlePolicy.scalar(self.z_star)

    def to_dict(self) -> Dict[str, object]:
        z_star = list(self.z_star) if isinstance(self.z_star, tuple) else self.z_star
        return {
            "regime": self.regime.value,
            "z_star": z_star,
            "performance_at_optimum": self.performance_at_optimum.value,
        }


@dataclass(frozen=True)
class CrossCheck:
    """Closed-form optimum next to an independently located numeric optimum."""

    closed_form: OptimalHurdle
    numeric: Hurdle
    numeric_value: float

    @property
    def gap(self) -> float:
        """Largest absolute coordinate difference between the two optima."""
        if isinstance(self.numeric, tuple):
            return max(abs(a - b) for a, b in zip(self.closed_form.z_star, self.numeric))
        return abs(self.closed_form.z_star - self.numeric)

    def to_dict(self) -> Dict[str, object]:
        numeric = list(self.numeric) if isinstance(self.numeric, tuple) else self.numeric
        return {
            **self.closed_form.to_dict(),
            "numeric_z_star": numeric,
            "numeric_performance": self.numeric_value,
            "gap": self.gap,
        }


def _require_open_interval(rho: float):
    if not -1.0 < rho < 1.0:
        raise HypothesisError("open-correlation-interval", "-1 < rho < 1", f"rho={rho}")


def symmetric_optimum(mu: float, rho: float) -> float:
    """((rho - 1) / (rho + 1)) mu."""
    return (rho - 1.0) / (rho + 1.0) * mu


def optimal_hurdle_symmetric(model: SymmetricNormalModel) -> OptimalHurdle:
    """
    Optimal hurdle for the symmetric bivariate normal regime.

    Args:
        model: Validated symmetric model with -1 < rho < 1

    Returns:
        OptimalHurdle with z* = ((rho-1)/(rho+1)) mu

    Raises:
        HypothesisError: If rho is +-1
    """
    _require_open_interval(model.rho)
    z_star = symmetric_optimum(model.mu, model.rho)
    return OptimalHurdle(z_star, f_symmetric(model, z_star))


def asymmetric_correlation_bounds(model: AsymmetricNormalModel) -> Tuple[float, float]:
    """
    Open correlation interval on which the asymmetric optimum is interior and positive.

    Returns:
        (lower, upper) with lower = -min(sigma_v/sigma_u, sigma_u/sigma_v)
    """
    lower = -min(model.sigma_v / model.sigma_u, model.sigma_u / model.sigma_v)
    if model.mu_u == 0 or model.mu_v == 0:
        raise HypothesisError("upper-correlation-bound", "nonzero means", f"mu_u={model.mu_u}, mu_v={model.mu_v}")
    snr_u = model.mu_u / model.sigma_u
    snr_v = model.mu_v / model.sigma_v
    upper = min(snr_v / snr_u, snr_u / snr_v)
    return lower, upper


def optimal_hurdle_asymmetric(model: AsymmetricNormalModel) -> OptimalHurdle:
    """
    Optimal hurdle pair for the general bivariate normal regime.

    z_u* = (rho mu_u/sigma_u - mu_v/sigma_v) / (rho/sigma_u + 1/sigma_v), z_v* by symmetry.

    Raises:
        HypothesisError: Naming whichever correlation bound failed
    """
    lower, upper = asymmetric_correlation_bounds(model)
    rho = model.rho
    if not rho > lower:
        raise HypothesisError("lower-correlation-bound", f"rho > {lower:.6g}", f"rho={rho}")
    if not rho < upper:
        raise HypothesisError("upper-correlation-bound", f"rho < {upper:.6g}", f"rho={rho}")

    z_u = (rho * model.mu_u / model.sigma_u - model.mu_v / model.sigma_v) / (rho / model.sigma_u + 1.0 / model.sigma_v)
    z_v = (rho * model.mu_v / model.sigma_v - model.mu_u / model.sigma_u) / (rho / model.sigma_v + 1.0 / model.sigma_u)
    return OptimalHurdle((z_u, z_v), g_asymmetric(model, z_u, z_v))


def optimal_hurdle_multi(model: EquicorrelatedModel) -> OptimalHurdle:
    """
    Optimal hurdle for the equicorrelated regime, z* = ((n-1)(rho-1) / ((n-1) rho + 1)) mu.

    Raises:
        HypothesisError: Unless -1/(n-1) < rho < 1
    """
    m = model.n - 1
    if not model.rho_floor < model.rho < 1.0:
        raise HypothesisError(
            "open-correlation-interval", f"{model.rho_floor:.6g} < rho < 1", f"rho={model.rho}")
    z_star = m * (model.rho - 1.0) / (m * model.rho + 1.0) * model.mu
    return OptimalHurdle(z_star, h_multi(model, z_star))


def optimal_hurdle_student_t(model: StudentTModel) -> OptimalHurdle:
    """Optimal hurdle for the bivariate t regime; the location matches the normal case for every delta."""
    _require_open_interval(model.rho)
    z_star = symmetric_optimum(model.mu, model.rho)
    return OptimalHurdle(z_star, f_student_t(model, z_star))


def optimal_hurdle(model: RegimeModel) -> OptimalHurdle:
    """Dispatch to the optimal-hurdle solver for the model's regime."""
    if isinstance(model, SymmetricNormalModel):
        return optimal_hurdle_symmetric(model)
    if isinstance(model, AsymmetricNormalModel):
        return optimal_hurdle_asymmetric(model)
    if isinstance(model, EquicorrelatedModel):
        return optimal_hurdle_multi(model)
    if isinstance(model, StudentTModel):
        return optimal_hurdle_student_t(model)
    raise TypeError(f"unsupported model type {type(model).__name__}")


def search_bracket(z_star: float, scale: float) -> Tuple[float, float]:
    """[0, 10 |z*| + 10 scale], a generous bracket around a positive optimum."""
    return 0.0, 10.0 * abs(z_star) + 10.0 * scale


def cross_check(model: RegimeModel) -> CrossCheck:
    """
    Compare the closed-form optimum with a golden-section search of the evaluator.

    Args:
        model: Validated model satisfying its regime's optimum hypotheses

    Returns:
        CrossCheck holding both optima
    """
    optimum = optimal_hurdle(model)

    if isinstance(model, AsymmetricNormalModel):
        z_u, z_v = optimum.z_star
        result = numeric_argmax(
            lambda a, b: g_asymmetric(model, a, b).value,
            (search_bracket(z_u, model.sigma_u), search_bracket(z_v, model.sigma_v)),
        )
    else:
        evaluators = {
            SymmetricNormalModel: f_symmetric,
            EquicorrelatedModel: h_multi,
            StudentTModel: f_student_t,
        }
        evaluator = evaluators[type(model)]
        result = numeric_argmax(
            lambda z: evaluator(model, z).value,
            search_bracket(optimum.z_star, model.sigma),
        )

    check = CrossCheck(optimum, result.location, result.value)
    logger.info(f"Cross-check {model.regime.value}: closed form {optimum.z_star}, numeric {result.location}, gap {check.gap:.3g}")
    return check
