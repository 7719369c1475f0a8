"""
Closed-form long-run average performance under each distributional regime.

Each evaluator returns the expected per-period overall performance E[D * sum of
effects], where D indicates adoption under the hurdle policy. Derivative
helpers are exposed alongside for gradient checks and the CLI cross-check.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

from seesaw.models.regimes import (
    AsymmetricNormalModel,
    EquicorrelatedModel,
    HurdlePolicy,
    Regime,
    RegimeModel,
    StudentTModel,
    SymmetricNormalModel,
)
from seesaw.stats.kernels import norm_pdf, norm_sf, t_pdf, t_sf

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PerformanceValue:
    """Expected per-period overall performance, tagged with its regime."""

    value: float
    regime: Regime

    def __float__(self) -> float:
        return self.value

    def to_dict(self) -> dict:
        return {"value": self.value, "regime": self.regime.value}


def _standardize(z: float, mu: float, sigma: float) -> float:
    return (float(z) - mu) / sigma


def f_symmetric(model: SymmetricNormalModel, z: float) -> PerformanceValue:
    """
    Long-run average performance in the symmetric bivariate normal regime.

    f(z) = 2 mu (1 - Phi(a)) + sigma (1 + rho) phi(a),  a = (z - mu) / sigma

    Args:
        model: Validated symmetric model
        z: Hurdle applied to the measured primary effect

    Returns:
        PerformanceValue for the symmetric regime
    """
    a = _standardize(z, model.mu, model.sigma)
    value = 2.0 * model.mu * norm_sf(a) + model.sigma * (1.0 + model.rho) * norm_pdf(a)
    return PerformanceValue(value, Regime.SYMMETRIC)


def g_asymmetric(model: AsymmetricNormalModel, z_u: float, z_v: float) -> PerformanceValue:
    """
    Long-run average performance in the general bivariate normal regime.

    Args:
        model: Validated asymmetric model
        z_u: Hurdle when u is the tested dimension
        z_v: Hurdle when v is the tested dimension

    Returns:
        PerformanceValue for the asymmetric regime
    """
    mean_sum = model.mu_u + model.mu_v
    a_u = _standardize(z_u, model.mu_u, model.sigma_u)
    a_v = _standardize(z_v, model.mu_v, model.sigma_v)
    u_term = mean_sum * norm_sf(a_u) + (model.sigma_u + model.rho * model.sigma_v) * norm_pdf(a_u)
    v_term = mean_sum * norm_sf(a_v) + (model.rho * model.sigma_u + model.sigma_v) * norm_pdf(a_v)
    return PerformanceValue(model.p_u * u_term + model.p_v * v_term, Regime.ASYMMETRIC)


def h_multi(model: EquicorrelatedModel, z: float) -> PerformanceValue:
    """
    Long-run average performance in the n-dimensional equicorrelated regime.

    h(z) = n mu (1 - Phi(a)) + sigma (1 + (n-1) rho) phi(a)

    The value does not depend on the priority probabilities.
    """
    a = _standardize(z, model.mu, model.sigma)
    spread = 1.0 + (model.n - 1) * model.rho
    value = model.n * model.mu * norm_sf(a) + model.sigma * spread * norm_pdf(a)
    return PerformanceValue(value, Regime.MULTI)


def f_student_t(model: StudentTModel, z: float) -> PerformanceValue:
    """
    Long-run average performance in the symmetric bivariate t regime.

    f(z) = 2 mu (1 - T_d(a)) + sigma (1 + rho) (d / (d-2)) t_{d-2}(a; 0, d/(d-2))

    Args:
        model: Validated t model (delta > 2)
        z: Hurdle

    Returns:
        PerformanceValue for the t regime
    """
    delta = model.delta
    a = _standardize(z, model.mu, model.sigma)
    tail = t_sf(a, 0.0, 1.0, delta)
    density = t_pdf(a, 0.0, delta / (delta - 2.0), delta - 2.0)
    value = 2.0 * model.mu * tail + model.sigma * (1.0 + model.rho) * (delta / (delta - 2.0)) * density
    return PerformanceValue(value, Regime.STUDENT_T)


# ---------------------------------------------------------------------------
# Derivatives
# ---------------------------------------------------------------------------

def f_prime_symmetric(model: SymmetricNormalModel, z: float) -> float:
    """df/dz = -(1/sigma) phi(a) [2 mu + (1 + rho)(z - mu)]."""
    a = _standardize(z, model.mu, model.sigma)
    return -norm_pdf(a) / model.sigma * (2.0 * model.mu + (1.0 + model.rho) * (float(z) - model.mu))


def g_gradient(model: AsymmetricNormalModel, z_u: float, z_v: float) -> Tuple[float, float]:
    """
    Partial derivatives of g with respect to each hurdle.

    The cross-partial is zero, so each component depends on its own hurdle only.

    Returns:
        (dg/dz_u, dg/dz_v)
    """
    mean_sum = model.mu_u + model.mu_v
    a_u = _standardize(z_u, model.mu_u, model.sigma_u)
    a_v = _standardize(z_v, model.mu_v, model.sigma_v)
    # d/dz [phi(a)] = -a phi(a) / sigma ; d/dz [1 - Phi(a)] = -phi(a) / sigma
    d_u = -model.p_u * norm_pdf(a_u) / model.sigma_u * (
        mean_sum + (model.sigma_u + model.rho * model.sigma_v) * a_u
    )
    d_v = -model.p_v * norm_pdf(a_v) / model.sigma_v * (
        mean_sum + (model.rho * model.sigma_u + model.sigma_v) * a_v
    )
    return d_u, d_v


def h_prime(model: EquicorrelatedModel, z: float) -> float:
    """dh/dz = -(1/sigma) phi(a) [n mu + (1 + (n-1) rho)(z - mu)]."""
    a = _standardize(z, model.mu, model.sigma)
    spread = 1.0 + (model.n - 1) * model.rho
    return -norm_pdf(a) / model.sigma * (model.n * model.mu + spread * (float(z) - model.mu))


def f_prime_student_t(model: StudentTModel, z: float) -> float:
    """df/dz = -(1/sigma) t_d(a; 0, 1) [2 mu + (1 + rho)(z - mu)]."""
    a = _standardize(z, model.mu, model.sigma)
    density = t_pdf(a, 0.0, 1.0, model.delta)
    return -density / model.sigma * (2.0 * model.mu + (1.0 + model.rho) * (float(z) - model.mu))


# ---------------------------------------------------------------------------
# Externality
# ---------------------------------------------------------------------------

def externality_line(model: SymmetricNormalModel, u: float) -> float:
    """
    Expected loss imposed on the unmeasured dimension, E[-V | U = u].

    Args:
        model: Symmetric model
        u: Measured primary effect

    Returns:
        -rho u - (1 - rho) mu
    """
    return -model.rho * float(u) - (1.0 - model.rho) * model.mu


def externality_line_asymmetric(model: AsymmetricNormalModel, u: float) -> float:
    """E[-V | U = u] = rho (sigma_v / sigma_u)(mu_u - u) - mu_v."""
    slope = model.rho * model.sigma_v / model.sigma_u
    return slope * (model.mu_u - float(u)) - model.mu_v


def evaluate(model: RegimeModel, policy: HurdlePolicy) -> PerformanceValue:
    """
    Dispatch to the evaluator for the model's regime.

    Args:
        model: Any validated regime model
        policy: Scalar hurdle, or a (z_u, z_v) pair for the asymmetric regime

    Returns:
        PerformanceValue under the policy
    """
    if isinstance(model, AsymmetricNormalModel):
        z_u, z_v = policy.thresholds(2)
        return g_asymmetric(model, z_u, z_v)
    if policy.is_pair:
        raise ValueError(f"{model.regime.value} regime takes a single hurdle z")
    if isinstance(model, SymmetricNormalModel):
        return f_symmetric(model, policy.z)
    if isinstance(model, EquicorrelatedModel):
        return h_multi(model, policy.z)
    if isinstance(model, StudentTModel):
        return f_student_t(model, policy.z)
    raise TypeError(f"unsupported model type {type(model).__name__}")
