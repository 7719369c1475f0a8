"""
Typed parameterizations of the four distributional regimes and the hurdle policy.

Models are immutable pydantic objects. Construction enforces only that every
number is finite and well-typed; the modelling assumptions (negative means,
positive scales, admissible correlations, probability vectors, delta > 2) are
checked by validate(), which always reports the complete list of violations.
"""

import logging
import math
from enum import Enum
from typing import ClassVar, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from seesaw.exceptions import AssumptionViolationError, Violation

logger = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-9


class Regime(str, Enum):
    """Distributional regime tags, also used as CLI --regime values."""

    SYMMETRIC = "sym"
    ASYMMETRIC = "asym"
    MULTI = "multi"
    STUDENT_T = "t"


class _FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)


class SymmetricNormalModel(_FrozenModel):
    """Bivariate normal with common mean and standard deviation across both dimensions."""

    regime: ClassVar[Regime] = Regime.SYMMETRIC

    mu: float
    sigma: float
    rho: float
    p_u: float = 0.5

    @property
    def p_v(self) -> float:
        return 1.0 - self.p_u

    @property
    def dimensions(self) -> int:
        return 2

    @property
    def priority_probs(self) -> Tuple[float, ...]:
        return (self.p_u, self.p_v)

    @property
    def degenerate(self) -> bool:
        """Perfect correlation; the effect vector lives on a line."""
        return abs(self.rho) == 1.0


class AsymmetricNormalModel(_FrozenModel):
    """General bivariate normal with dimension-specific means and standard deviations."""

    regime: ClassVar[Regime] = Regime.ASYMMETRIC

    mu_u: float
    mu_v: float
    sigma_u: float
    sigma_v: float
    rho: float
    p_u: float = 0.5

    @property
    def p_v(self) -> float:
        return 1.0 - self.p_u

    @property
    def dimensions(self) -> int:
        return 2

    @property
    def priority_probs(self) -> Tuple[float, ...]:
        return (self.p_u, self.p_v)

    @property
    def degenerate(self) -> bool:
        return abs(self.rho) == 1.0

    @classmethod
    def from_symmetric(cls, model: SymmetricNormalModel) -> "AsymmetricNormalModel":
        """Embed a symmetric model with identical marginals."""
        return cls(
            mu_u=model.mu, mu_v=model.mu,
            sigma_u=model.sigma, sigma_v=model.sigma,
            rho=model.rho, p_u=model.p_u,
        )


class EquicorrelatedModel(_FrozenModel):
    """n-dimensional normal with common mean, variance and pairwise correlation."""

    regime: ClassVar[Regime] = Regime.MULTI

    n: int
    mu: float
    sigma: float
    rho: float
    priority_probs: Tuple[float, ...] = ()

    @model_validator(mode="before")
    @classmethod
    def default_uniform_priorities(cls, data):
        """Fill a uniform priority vector when none is supplied."""
        if isinstance(data, dict) and not data.get("priority_probs"):
            n = data.get("n")
            if isinstance(n, int) and n >= 1:
                data = {**data, "priority_probs": tuple([1.0 / n] * n)}
        return data

    @property
    def dimensions(self) -> int:
        return self.n

    @property
    def rho_floor(self) -> float:
        """Smallest correlation keeping the covariance matrix positive semidefinite."""
        return -1.0 / (self.n - 1) if self.n > 1 else -1.0

    @property
    def degenerate(self) -> bool:
        return self.rho == 1.0 or self.rho == self.rho_floor


class StudentTModel(_FrozenModel):
    """Symmetric bivariate t with location mu, scale matrix built from sigma and rho."""

    regime: ClassVar[Regime] = Regime.STUDENT_T

    mu: float
    sigma: float
    rho: float
    delta: float
    p_u: float = 0.5

    @property
    def p_v(self) -> float:
        return 1.0 - self.p_u

    @property
    def dimensions(self) -> int:
        return 2

    @property
    def priority_probs(self) -> Tuple[float, ...]:
        return (self.p_u, self.p_v)

    @property
    def degenerate(self) -> bool:
        return abs(self.rho) == 1.0


RegimeModel = Union[SymmetricNormalModel, AsymmetricNormalModel, EquicorrelatedModel, StudentTModel]

MODEL_TYPES: Dict[Regime, type] = {
    Regime.SYMMETRIC: SymmetricNormalModel,
    Regime.ASYMMETRIC: AsymmetricNormalModel,
    Regime.MULTI: EquicorrelatedModel,
    Regime.STUDENT_T: StudentTModel,
}

# Bound text reported when a parameter is missing or malformed
FIELD_BOUNDS: Dict[str, str] = {
    "mu": "mu < 0",
    "mu_u": "mu_u < 0",
    "mu_v": "mu_v < 0",
    "sigma": "sigma > 0",
    "sigma_u": "sigma_u > 0",
    "sigma_v": "sigma_v > 0",
    "rho": "-1 <= rho <= 1",
    "p_u": "0 <= p_u <= 1",
    "n": "n >= 2",
    "delta": "delta > 2",
    "priority_probs": "probability vector of length n",
}


class HurdlePolicy(_FrozenModel):
    """
    Adoption threshold applied to the measured primary-dimension effect.

    Either a single hurdle z shared by every dimension, or a pair (z_u, z_v)
    for the asymmetric regime. An innovation is adopted only when its primary
    effect strictly exceeds the applicable hurdle.
    """

    z: Optional[float] = None
    z_u: Optional[float] = None
    z_v: Optional[float] = None

    @model_validator(mode="after")
    def exactly_one_form(self):
        pair = self.z_u is not None or self.z_v is not None
        if self.z is not None and pair:
            raise ValueError("give either z or (z_u, z_v), not both")
        if self.z is None and not (self.z_u is not None and self.z_v is not None):
            raise ValueError("a hurdle needs z or both z_u and z_v")
        return self

    @classmethod
    def scalar(cls, z: float = 0.0) -> "HurdlePolicy":
        return cls(z=z)

    @classmethod
    def pair(cls, z_u: float, z_v: float) -> "HurdlePolicy":
        return cls(z_u=z_u, z_v=z_v)

    @property
    def is_pair(self) -> bool:
        return self.z is None

    def thresholds(self, dimensions: int) -> List[float]:
        """
        Hurdle per primary dimension.

        Args:
            dimensions: Number of performance dimensions in the model

        Returns:
            One hurdle per dimension index
        """
        if self.is_pair:
            if dimensions != 2:
                raise ValueError(f"a (z_u, z_v) hurdle needs 2 dimensions, model has {dimensions}")
            return [self.z_u, self.z_v]
        return [self.z] * dimensions


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _check_scale(violations: List[Violation], name: str, value: float):
    if not value > 0:
        violations.append(Violation(name, value, f"{name} > 0", "positive-scale"))


def _check_rho(violations: List[Violation], rho: float, floor: float = -1.0, floor_tag: str = "correlation-range"):
    if rho > 1.0:
        violations.append(Violation("rho", rho, "rho <= 1", "correlation-range"))
    if rho < floor:
        bound = "rho >= -1" if floor == -1.0 else f"rho >= {floor:.6g}"
        violations.append(Violation("rho", rho, bound, floor_tag))


def _check_probability(violations: List[Violation], name: str, value: float):
    if not 0.0 <= value <= 1.0:
        violations.append(Violation(name, value, f"0 <= {name} <= 1", "priority-probabilities"))


def collect_violations(model: RegimeModel, relaxed: bool = False) -> List[Violation]:
    """
    Check every modelling assumption for a regime model.

    Args:
        model: Any regime model
        relaxed: Require only a negative sum of means instead of every mean negative

    Returns:
        Complete list of violations (empty when the model is valid)
    """
    violations: List[Violation] = []

    if isinstance(model, AsymmetricNormalModel):
        if relaxed:
            if not model.mu_u + model.mu_v < 0:
                violations.append(Violation(
                    "mu_u + mu_v", model.mu_u + model.mu_v, "mu_u + mu_v < 0", "negative-mean-sum"))
        else:
            for name in ("mu_u", "mu_v"):
                value = getattr(model, name)
                if not value < 0:
                    violations.append(Violation(name, value, f"{name} < 0", "negative-means"))
        _check_scale(violations, "sigma_u", model.sigma_u)
        _check_scale(violations, "sigma_v", model.sigma_v)
        _check_rho(violations, model.rho)
        _check_probability(violations, "p_u", model.p_u)
        return violations

    # Remaining regimes share a common mean, so the relaxed sum condition coincides with mu < 0
    if not model.mu < 0:
        tag = "negative-mean-sum" if relaxed else "negative-means"
        violations.append(Violation("mu", model.mu, "mu < 0", tag))
    _check_scale(violations, "sigma", model.sigma)

    if isinstance(model, EquicorrelatedModel):
        if model.n < 2:
            violations.append(Violation("n", model.n, "n >= 2", "dimension-count"))
        else:
            _check_rho(violations, model.rho, model.rho_floor, "equicorrelation-psd")
        probs = model.priority_probs
        if len(probs) != model.n:
            violations.append(Violation(
                "priority_probs", probs, f"length {model.n}", "priority-probabilities"))
        if any(p < 0 or p > 1 for p in probs):
            violations.append(Violation(
                "priority_probs", probs, "each entry in [0, 1]", "priority-probabilities"))
        if abs(math.fsum(probs) - 1.0) > PROBABILITY_TOLERANCE:
            violations.append(Violation(
                "priority_probs", probs, "entries sum to 1", "priority-probabilities"))
        return violations

    _check_rho(violations, model.rho)
    _check_probability(violations, "p_u", model.p_u)
    if isinstance(model, StudentTModel) and not model.delta > 2:
        violations.append(Violation("delta", model.delta, "delta > 2", "finite-variance-tails"))
    return violations


def validate(model: RegimeModel, relaxed: bool = False) -> RegimeModel:
    """
    Return the model unchanged if every assumption holds.

    Args:
        model: Any regime model
        relaxed: Use the negative-mean-sum condition instead of per-dimension negativity

    Returns:
        The same model

    Raises:
        AssumptionViolationError: Listing every violated assumption
    """
    violations = collect_violations(model, relaxed=relaxed)
    if violations:
        raise AssumptionViolationError(violations)
    if model.degenerate:
        logger.debug(f"{type(model).__name__} has degenerate correlation rho={model.rho}")
    return model


def build_model(regime: Union[Regime, str], params: Dict[str, object], relaxed: bool = False) -> RegimeModel:
    """
    Parse and validate a raw parameter bundle.

    Args:
        regime: Regime tag or its string value
        params: Flat parameter mapping (unknown keys are rejected)
        relaxed: Relaxed mean-sum mode for validation

    Returns:
        Validated regime model

    Raises:
        AssumptionViolationError: For malformed, missing, or out-of-bounds parameters
    """
    regime = Regime(regime)
    model_type = MODEL_TYPES[regime]
    cleaned = {k: v for k, v in params.items() if v is not None}
    try:
        model = model_type(**cleaned)
    except ValidationError as e:
        violations = []
        for error in e.errors():
            name = ".".join(str(part) for part in error.get("loc", ())) or "model"
            field = name.split(".")[0]
            bound = FIELD_BOUNDS.get(field, error.get("msg", "well-formed value"))
            value = cleaned.get(field, "missing")
            violations.append(Violation(name, value, f"{bound} ({error.get('msg')})", "well-formed-parameters"))
        raise AssumptionViolationError(violations) from e
    return validate(model, relaxed=relaxed)


def model_parameters(model: RegimeModel) -> Dict[str, object]:
    """Flat, JSON-friendly parameter echo including the regime tag."""
    data = model.model_dump()
    if "priority_probs" in data:
        data["priority_probs"] = list(data["priority_probs"])
    return {"regime": model.regime.value, **data}
