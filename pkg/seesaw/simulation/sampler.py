"""
Random streams and effect-vector samplers for every regime.

Streams are Philox counter-based generators keyed by (seed, replication), so
each replication of a batch owns an independent, reproducible stream no
matter which thread runs it.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from seesaw.config.settings import settings
from seesaw.models.regimes import (
    AsymmetricNormalModel,
    EquicorrelatedModel,
    RegimeModel,
    StudentTModel,
    SymmetricNormalModel,
)

logger = logging.getLogger(__name__)

# numpy BitGenerator behind every stream
BIT_GENERATOR = "Philox4x64-10"


@dataclass(frozen=True)
class SimulationStreams:
    """Independent generators for the priority draw and the effect draw."""

    priority: np.random.Generator
    effects: np.random.Generator


def make_streams(seed: int, replication: int = 0) -> SimulationStreams:
    """
    Deterministically create the streams for one replication.

    Args:
        seed: Master seed (non-negative, up to 64 bits)
        replication: Replication index within a batch

    Returns:
        SimulationStreams with one generator per concern
    """
    root = np.random.SeedSequence([int(seed), int(replication)])
    ss_priority, ss_effects = root.spawn(2)
    return SimulationStreams(
        priority=np.random.Generator(np.random.Philox(ss_priority)),
        effects=np.random.Generator(np.random.Philox(ss_effects)),
    )


def sample_priorities(model: RegimeModel, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw the tested dimension index for each period from the model's priority probabilities."""
    probs = np.asarray(model.priority_probs, dtype=float)
    return rng.choice(len(probs), size=count, p=probs / probs.sum())


def _bivariate_normal(mu_u: float, mu_v: float, sigma_u: float, sigma_v: float,
                      rho: float, count: int, rng: np.random.Generator) -> np.ndarray:
    # Lower-triangular factor of the 2x2 covariance; rank one when |rho| = 1
    z = rng.standard_normal((count, 2))
    effects = np.empty((count, 2))
    effects[:, 0] = mu_u + sigma_u * z[:, 0]
    effects[:, 1] = mu_v + sigma_v * (rho * z[:, 0] + math.sqrt(max(0.0, 1.0 - rho * rho)) * z[:, 1])
    return effects


def _equicorrelated_deviations(n: int, sigma: float, rho: float, count: int,
                               rng: np.random.Generator) -> np.ndarray:
    if rho >= 0:
        common = rng.standard_normal((count, 1))
        own = rng.standard_normal((count, n))
        return sigma * (math.sqrt(rho) * common + math.sqrt(1.0 - rho) * own)
    # Y = aZ + b (1'Z) 1 reproduces sigma^2 [(1 - rho) I + rho J] for any rho >= -1/(n-1)
    z = rng.standard_normal((count, n))
    a = sigma * math.sqrt(1.0 - rho)
    b = (sigma * math.sqrt(max(0.0, 1.0 + (n - 1) * rho)) - a) / n
    return a * z + b * z.sum(axis=1, keepdims=True)


def sample_effects(model: RegimeModel, count: int, rng: np.random.Generator,
                   t_scaling: Optional[str] = None) -> np.ndarray:
    """
    Draw effect vectors for a validated model.

    Args:
        model: Any validated regime model
        count: Number of vectors
        rng: Generator to draw from
        t_scaling: "scale" (Sigma is the scale matrix) or "covariance"
            (draws rescaled so the covariance equals Sigma); t regime only

    Returns:
        Array of shape (count, dimensions)
    """
    if isinstance(model, SymmetricNormalModel):
        return _bivariate_normal(model.mu, model.mu, model.sigma, model.sigma, model.rho, count, rng)

    if isinstance(model, AsymmetricNormalModel):
        return _bivariate_normal(
            model.mu_u, model.mu_v, model.sigma_u, model.sigma_v, model.rho, count, rng)

    if isinstance(model, EquicorrelatedModel):
        return model.mu + _equicorrelated_deviations(model.n, model.sigma, model.rho, count, rng)

    if isinstance(model, StudentTModel):
        t_scaling = t_scaling or settings.t_sampler_scaling
        deviations = _bivariate_normal(0.0, 0.0, model.sigma, model.sigma, model.rho, count, rng)
        # chi-square with real-valued degrees of freedom via gamma(shape delta/2, scale 2)
        chi2 = rng.gamma(shape=model.delta / 2.0, scale=2.0, size=(count, 1))
        deviations = deviations / np.sqrt(chi2 / model.delta)
        if t_scaling == "covariance":
            deviations = deviations * math.sqrt((model.delta - 2.0) / model.delta)
        elif t_scaling != "scale":
            raise ValueError(f"unknown t scaling mode: {t_scaling}")
        return model.mu + deviations

    raise TypeError(f"unsupported model type {type(model).__name__}")
