"""
Derivative-free maximization used to cross-check the closed-form optimal hurdles.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

from seesaw.config.settings import settings
from seesaw.exceptions import BracketError

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQUARE = (3.0 - math.sqrt(5.0)) / 2.0

# Share of the bracket width treated as "at the endpoint"
ENDPOINT_MARGIN = 1e-7

Bracket = Tuple[float, float]


@dataclass(frozen=True)
class ArgmaxResult:
    """Location and value of a located maximum."""

    location: Union[float, Tuple[float, float]]
    value: float
    iterations: int


class GoldenSectionSearch:
    """
    Golden-section search for the maximum of a unimodal function on [a, b].

    Ties move the bracket left, so a flat function collapses onto the lower
    endpoint and is reported as having no interior maximum.
    """

    def __init__(self, func: Callable[[float], float], a: float, b: float,
                 tolerance: Optional[float] = None, max_iter: Optional[int] = None):
        if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
            raise BracketError(f"bracket must be a finite interval with a < b, got [{a}, {b}]")
        self.func = func
        self.a = float(a)
        self.b = float(b)
        self.tolerance = tolerance or settings.argmax_tolerance
        self.max_iter = max_iter or settings.argmax_max_iter

    def run(self) -> ArgmaxResult:
        a, b = self.a, self.b
        h = b - a
        c = a + INV_PHI_SQUARE * h
        d = a + INV_PHI * h
        fc = self.func(c)
        fd = self.func(d)

        iterations = 0
        while iterations < self.max_iter:
            mid = 0.5 * (a + b)
            if b - a <= self.tolerance * max(1.0, abs(mid)):
                break
            iterations += 1
            if fc >= fd:
                b, d, fd = d, c, fc
                h = b - a
                c = a + INV_PHI_SQUARE * h
                fc = self.func(c)
            else:
                a, c, fc = c, d, fd
                h = b - a
                d = a + INV_PHI * h
                fd = self.func(d)
        else:
            logger.warning(f"Golden-section search hit the iteration cap ({self.max_iter})")

        location, value = (c, fc) if fc >= fd else (d, fd)
        margin = ENDPOINT_MARGIN * (self.b - self.a)
        if location - self.a <= margin or self.b - location <= margin:
            raise BracketError(
                f"no interior maximum in [{self.a}, {self.b}]: search converged to {location:.6g}"
            )
        logger.debug(f"Golden-section converged to {location:.12g} after {iterations} iterations")
        return ArgmaxResult(location=location, value=value, iterations=iterations)


def numeric_argmax(
    evaluator: Callable[..., float],
    bracket: Union[Bracket, Sequence[Bracket]],
    tolerance: Optional[float] = None,
    max_iter: Optional[int] = None,
    rounds: int = 3,
) -> ArgmaxResult:
    """
    Locate the maximum of a performance function of one or two hurdles.

    The two-hurdle case alternates one-dimensional searches, which converges
    in a single round when the cross-partial derivative vanishes.

    Args:
        evaluator: Callable returning a float (or an object convertible with float())
        bracket: (lo, hi) for one hurdle, or ((lo_u, hi_u), (lo_v, hi_v)) for two
        tolerance: Relative bracket width at which each search stops
        max_iter: Iteration cap per search
        rounds: Alternation rounds for the two-hurdle case

    Returns:
        ArgmaxResult with a float location or a (z_u, z_v) pair

    Raises:
        BracketError: If the bracket does not contain an interior maximum
    """
    def scalar(*args) -> float:
        return float(evaluator(*args))

    if isinstance(bracket[0], (int, float)):
        lo, hi = bracket
        return GoldenSectionSearch(lambda z: scalar(z), lo, hi, tolerance, max_iter).run()

    (lo_u, hi_u), (lo_v, hi_v) = bracket
    z_v = 0.5 * (lo_v + hi_v)
    z_u = 0.5 * (lo_u + hi_u)
    total = 0
    best = None
    for _ in range(max(1, rounds)):
        fixed_v = z_v
        u_result = GoldenSectionSearch(lambda z: scalar(z, fixed_v), lo_u, hi_u, tolerance, max_iter).run()
        z_u = u_result.location
        fixed_u = z_u
        v_result = GoldenSectionSearch(lambda z: scalar(fixed_u, z), lo_v, hi_v, tolerance, max_iter).run()
        z_v = v_result.location
        total += u_result.iterations + v_result.iterations
        if best is not None and best.location == (z_u, z_v):
            break
        best = ArgmaxResult(location=(z_u, z_v), value=v_result.value, iterations=total)
    return ArgmaxResult(location=best.location, value=best.value, iterations=total)
