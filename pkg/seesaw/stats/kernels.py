"""
Scalar special functions and truncated-moment formulas.

Standard normal density/cdf, the Mills ratio and its inverse, k(alpha) =
alpha * M(alpha), the location-scale Student-t density/cdf, the t analogue of
the Mills ratio W(alpha), and conditional means of truncated normal and t
variables. All functions are pure and thread-safe.

The Student-t density is parameterized exactly as

    t_delta(z; mu, sigma2) = Gamma((delta+1)/2) / (sqrt(sigma2*delta*pi) Gamma(delta/2))
                             * (1 + (z-mu)^2 / (sigma2*delta))^(-(delta+1)/2)

so sigma2 acts as a squared scale, not a variance.
"""

import math

from scipy import integrate, special

from seesaw.exceptions import DomainError

SQRT2 = math.sqrt(2.0)
SQRT_HALF_PI = math.sqrt(math.pi / 2.0)
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Above this point the Mills ratio switches to the scaled complementary error function
MILLS_CROSSOVER = 8.0

# Gamma-ratio argument beyond which the asymptotic series replaces gammaln differences
_GAMMA_RATIO_ASYMPTOTIC = 1e5

# Tail and density values below this are subnormal-adjacent; W switches to the integral form
_T_TAIL_FLOOR = 1e-280


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    return value


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0 or math.isnan(value):
        raise DomainError(f"{name} must be positive, got {value}")
    return value


def _require_t_moments(delta: float) -> float:
    delta = float(delta)
    if not delta > 2:
        raise DomainError(f"delta must exceed 2 for a finite variance, got {delta}")
    return delta


# ---------------------------------------------------------------------------
# Standard normal
# ---------------------------------------------------------------------------

def norm_pdf(alpha: float) -> float:
    """Standard normal density phi(alpha)."""
    alpha = float(alpha)
    return math.exp(-0.5 * alpha * alpha - LOG_SQRT_2PI)


def norm_cdf(alpha: float) -> float:
    """Standard normal cdf Phi(alpha) via erfc, accurate in both tails."""
    return 0.5 * float(special.erfc(-float(alpha) / SQRT2))


def norm_sf(alpha: float) -> float:
    """Upper tail 1 - Phi(alpha) without cancellation."""
    return 0.5 * float(special.erfc(float(alpha) / SQRT2))


def mills_ratio(alpha: float) -> float:
    """
    Mills ratio of the standard normal, M(alpha) = (1 - Phi(alpha)) / phi(alpha).

    Args:
        alpha: Finite evaluation point

    Returns:
        M(alpha); overflows to inf only for alpha below about -37.5

    Raises:
        DomainError: If alpha is not finite
    """
    alpha = _require_finite("alpha", alpha)
    if alpha > MILLS_CROSSOVER:
        # (1 - Phi)/phi = sqrt(pi/2) * erfcx(alpha/sqrt(2)), stable for large alpha
        return SQRT_HALF_PI * float(special.erfcx(alpha / SQRT2))
    pdf = norm_pdf(alpha)
    if pdf == 0.0:
        return math.inf
    return norm_sf(alpha) / pdf


def inverse_mills(alpha: float) -> float:
    """Inverse Mills ratio lambda(alpha) = 1 / M(alpha) = phi / (1 - Phi)."""
    return 1.0 / mills_ratio(alpha)


def k_fn(alpha: float) -> float:
    """
    k(alpha) = alpha * M(alpha): strictly increasing, k(0) = 0, tends to 1.

    Args:
        alpha: Finite evaluation point

    Returns:
        alpha * M(alpha)
    """
    alpha = _require_finite("alpha", alpha)
    if alpha == 0.0:
        return 0.0
    return alpha * mills_ratio(alpha)


# ---------------------------------------------------------------------------
# Student t (location-scale, displayed parameterization)
# ---------------------------------------------------------------------------

def _log_gamma_half_ratio(x: float) -> float:
    """log(Gamma(x + 1/2) / Gamma(x)), accurate for x up to 1e9 and beyond."""
    if x < _GAMMA_RATIO_ASYMPTOTIC:
        return float(special.gammaln(x + 0.5) - special.gammaln(x))
    inv = 1.0 / x
    return 0.5 * math.log(x) - inv / 8.0 + inv ** 3 / 192.0


def t_pdf(z: float, mu: float, sigma2: float, delta: float) -> float:
    """
    Location-scale t density t_delta(z; mu, sigma2).

    Args:
        z: Evaluation point
        mu: Location
        sigma2: Squared scale (positive)
        delta: Degrees of freedom (positive)

    Returns:
        Density value

    Raises:
        DomainError: If sigma2 or delta is not positive
    """
    sigma2 = _require_positive("sigma2", sigma2)
    delta = _require_positive("delta", delta)
    q = (float(z) - float(mu)) ** 2 / (sigma2 * delta)
    log_norm = _log_gamma_half_ratio(0.5 * delta) - 0.5 * math.log(sigma2 * delta * math.pi)
    return math.exp(log_norm - 0.5 * (delta + 1.0) * math.log1p(q))


def t_cdf(z: float, mu: float, sigma2: float, delta: float) -> float:
    """
    Location-scale t cdf T_delta(z; mu, sigma2), consistent with t_pdf.

    Args:
        z: Evaluation point
        mu: Location
        sigma2: Squared scale (positive)
        delta: Degrees of freedom (positive)

    Returns:
        Probability in [0, 1]
    """
    sigma2 = _require_positive("sigma2", sigma2)
    delta = _require_positive("delta", delta)
    return float(special.stdtr(delta, (float(z) - float(mu)) / math.sqrt(sigma2)))


def t_sf(z: float, mu: float, sigma2: float, delta: float) -> float:
    """Upper tail 1 - T_delta(z; mu, sigma2), evaluated by reflection."""
    sigma2 = _require_positive("sigma2", sigma2)
    delta = _require_positive("delta", delta)
    return float(special.stdtr(delta, -(float(z) - float(mu)) / math.sqrt(sigma2)))


def _t_mills_density(alpha: float, delta: float) -> float:
    """t_{delta-2}(alpha; 0, delta/(delta-2)), the density shared by W and the truncated mean."""
    return t_pdf(alpha, 0.0, delta / (delta - 2.0), delta - 2.0)


def w_fn(alpha: float, delta: float) -> float:
    """
    Student-t analogue of the Mills ratio.

    W(alpha) = ((delta-2)/delta) * (1 - T_delta(alpha; 0, 1)) / t_{delta-2}(alpha; 0, delta/(delta-2))

    Args:
        alpha: Finite evaluation point
        delta: Degrees of freedom, must exceed 2

    Returns:
        W(alpha) > 0

    Raises:
        DomainError: If alpha is not finite or delta <= 2
    """
    alpha = _require_finite("alpha", alpha)
    delta = _require_t_moments(delta)
    tail = t_sf(alpha, 0.0, 1.0, delta)
    density = _t_mills_density(alpha, delta)
    if alpha > 0.0 and min(tail, density) < _T_TAIL_FLOOR:
        return _w_tail_integral(alpha, delta)
    if density == 0.0:
        return math.inf
    return ((delta - 2.0) / delta) * tail / density


def _w_tail_integral(alpha: float, delta: float) -> float:
    """
    W(alpha) for alpha > 0 as the integral of a density ratio built in log space.

    W(alpha) = ((delta-1)/delta) * int_alpha^inf (1 + alpha^2/delta)^((delta-1)/2)
                                               * (1 + x^2/delta)^(-(delta+1)/2) dx

    The gamma-function constants of the two densities cancel to (delta-1)/(delta-2),
    so neither the tail nor the density is ever formed on its own.
    """
    base = 0.5 * (delta - 1.0) * math.log1p(alpha * alpha / delta)
    # decay length of the integrand at x = alpha
    scale = (delta + alpha * alpha) / ((delta + 1.0) * alpha)

    def integrand(v: float) -> float:
        x = alpha + v * scale
        return math.exp(base - 0.5 * (delta + 1.0) * math.log1p(x * x / delta))

    area, _ = integrate.quad(integrand, 0.0, math.inf, epsabs=0.0, epsrel=1e-12, limit=200)
    return ((delta - 1.0) / delta) * scale * area


# ---------------------------------------------------------------------------
# Truncated means
# ---------------------------------------------------------------------------

def truncated_normal_mean(mu: float, sigma: float, z: float) -> float:
    """
    E[X | X > z] for X ~ N(mu, sigma^2).

    Args:
        mu: Mean
        sigma: Standard deviation (positive)
        z: Truncation point

    Returns:
        mu + sigma * lambda((z - mu) / sigma), always greater than z
    """
    sigma = _require_positive("sigma", sigma)
    alpha = (float(z) - float(mu)) / sigma
    return float(mu) + sigma * inverse_mills(alpha)


def truncated_t_mean(mu: float, sigma: float, delta: float, z: float) -> float:
    """
    E[X | X > z] for X = mu + sigma * T with T standard t on delta degrees of freedom.

    Args:
        mu: Location
        sigma: Scale (positive)
        delta: Degrees of freedom, must exceed 2
        z: Truncation point

    Returns:
        mu + sigma * (delta/(delta-2)) * t_{delta-2}(a; 0, delta/(delta-2)) / (1 - T_delta(a; 0, 1)),
        which equals mu + sigma / W(a) and always exceeds z
    """
    sigma = _require_positive("sigma", sigma)
    delta = _require_t_moments(delta)
    alpha = (float(z) - float(mu)) / sigma
    return float(mu) + sigma / w_fn(alpha, delta)
