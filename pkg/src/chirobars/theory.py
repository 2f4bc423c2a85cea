"""Closed forms for the barcode statistics of drifted Brownian motion.

Every formula is expressed through the exponential character
``em(s) = exp(-2*m*s)``.  The module also carries the finite-difference
machinery used to cross-check each closed form against an independent
numerical route (mixed central differences, Richardson extrapolation for
the fourth-order pair correlation).

The printed closed form for the 2-point correlation density appears to have
dropped its drift factors (it agrees with the mixed fourth derivative of
the covariance only at m = 1/2), so :func:`g2_density` reports the
finite-difference value as authoritative together with the transcribed
expression and their discrepancy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DivergenceError, ValidationError

__all__ = [
    "TheoryParams",
    "em",
    "geometric_parameter",
    "expected_quadrant_content",
    "intensity_density",
    "harmonic",
    "expected_excess",
    "exit_probabilities",
    "two_interval_gf",
    "winding_covariance",
    "g2_density",
    "G2Result",
    "mixed_second_difference",
    "mixed_fourth_richardson",
]


@dataclass(frozen=True)
class TheoryParams:
    """Drift and interval endpoints feeding the closed forms."""

    m: float
    b1: float
    d1: float
    b2: float | None = None
    d2: float | None = None

    def __post_init__(self):
        if self.m <= 0:
            raise ValidationError(f"drift must be positive, got {self.m}")
        if not 0 < self.b1 < self.d1:
            raise ValidationError(f"need 0 < b < d, got ({self.b1}, {self.d1})")
        if (self.b2 is None) != (self.d2 is None):
            raise ValidationError("second interval needs both endpoints")
        if self.b2 is not None:
            if not 0 < self.b2 < self.d2:
                raise ValidationError(f"need 0 < b2 < d2, got ({self.b2}, {self.d2})")
            if not (self.b1 < self.b2 and self.d1 < self.d2):
                raise ValidationError(
                    "intervals must be non-nested with b1 < b2 and d1 < d2; "
                    f"got ({self.b1}, {self.d1}) and ({self.b2}, {self.d2})"
                )

    @property
    def delta(self) -> float:
        return self.d1 - self.b1


def _check_positive(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if value <= 0:
            raise ValidationError(f"{name} must be positive, got {value}")


def em(m: float, s: float) -> float:
    """exp(-2 m s); accepts s = inf."""
    return math.exp(-2.0 * m * s) if s != math.inf else 0.0


def geometric_parameter(m: float, delta: float) -> float:
    """Success parameter of the straddle-count law: 1 - exp(-2 m delta)."""
    _check_positive(m=m, delta=delta)
    return -math.expm1(-2.0 * m * delta)


def expected_quadrant_content(m: float, delta: float) -> float:
    """Mean number of finite bars straddling an interval of length delta:
    1 / (exp(2 m delta) - 1), i.e. (1-p)/p for the geometric parameter p."""
    _check_positive(m=m, delta=delta)
    return 1.0 / math.expm1(2.0 * m * delta)


def intensity_density(m: float, delta: float) -> float:
    """Density of the barcode point process at birth-death gap delta:
    4 m^2 e^{2m delta} (1 + e^{2m delta}) / (e^{2m delta} - 1)^3."""
    _check_positive(m=m, delta=delta)
    x = 2.0 * m * delta
    e = math.exp(x)
    return 4.0 * m * m * e * (1.0 + e) / math.expm1(x) ** 3


def harmonic(k: int) -> Fraction:
    """k-th harmonic sum 1 + 1/2 + ... + 1/k, exact."""
    if k < 0:
        raise ValidationError(f"harmonic index must be >= 0, got {k}")
    return sum((Fraction(1, j) for j in range(1, k + 1)), Fraction(0))


def expected_excess(m: float, delta: float) -> float:
    """Mean excess of F over M bars straddling an interval of length delta:
    -log(1 - exp(-2 m delta))."""
    _check_positive(m=m, delta=delta)
    return -math.log(-math.expm1(-2.0 * m * delta))


def exit_probabilities(m: float, delta_left: float, delta_right: float) -> tuple[float, float]:
    """First-exit split for a drifted path started inside
    [s - delta_left, s + delta_right]: probability p of leaving through the
    top and q = 1 - p through the bottom; delta_right may be inf."""
    _check_positive(m=m, delta_left=delta_left)
    if delta_right != math.inf:
        _check_positive(delta_right=delta_right)
    el = em(m, delta_left)
    es = em(m, delta_left + delta_right) if delta_right != math.inf else 0.0
    p = (1.0 - el) / (1.0 - es)
    q = (el - es) / (1.0 - es)
    return p, q


def _two_interval_weights(m: float, b1: float, d1: float, b2: float, d2: float):
    TheoryParams(m, b1, d1, b2, d2)  # validates ordering
    p, q = exit_probabilities(m, d2 - b2, math.inf)
    p1, q1 = exit_probabilities(m, d1 - b1, d2 - d1)
    p2, q2 = exit_probabilities(m, b2 - b1, d2 - b2)
    return p, q, p1, q1, p2, q2


def two_interval_gf(
    m: float, b1: float, d1: float, b2: float, d2: float, x: float, y: float
) -> float:
    """Joint generating function of winding counts around two non-nested
    intervals: p p1 / (1 - x q1 - y q p2 + x y q (q1 p2 - p1 q2))."""
    p, q, p1, q1, p2, q2 = _two_interval_weights(m, b1, d1, b2, d2)
    denom = 1.0 - x * q1 - y * q * p2 + x * y * q * (q1 * p2 - p1 * q2)
    if denom <= 0.0:
        raise DivergenceError(
            f"generating function diverges at (x, y) = ({x}, {y}): denominator {denom}"
        )
    return p * p1 / denom


def winding_covariance(m: float, b1: float, d1: float, b2: float, d2: float) -> float:
    """Covariance of winding counts around two non-nested intervals:
    exp(-2m(d2-b1)) / ((exp(-2m(d1-b1)) - 1)(exp(-2m(d2-b2)) - 1))."""
    TheoryParams(m, b1, d1, b2, d2)
    return em(m, d2 - b1) / (math.expm1(-2.0 * m * (d1 - b1)) * math.expm1(-2.0 * m * (d2 - b2)))


def g2_transcribed(m: float, b1: float, d1: float, b2: float, d2: float) -> float:
    """Literal transcription of the printed 2-point correlation formula:
    64 m^4 exp(2 b1 + b2 + 2 d1 + d2) /
    ((exp(2m b1) - exp(2m d1))^3 (exp(2m b2) - exp(2m d2))^3).

    Kept verbatim for the discrepancy report; see :func:`g2_density`."""
    num = 64.0 * m**4 * math.exp(2.0 * b1 + b2 + 2.0 * d1 + d2)
    den = (math.exp(2.0 * m * b1) - math.exp(2.0 * m * d1)) ** 3 * (
        math.exp(2.0 * m * b2) - math.exp(2.0 * m * d2)
    ) ** 3
    return num / den


@dataclass(frozen=True)
class G2Result:
    value: float  # Richardson finite difference of the covariance (authoritative)
    transcribed: float  # literal printed formula
    step: float
    refined: float  # Richardson value at half the base step, for convergence checks

    @property
    def discrepancy(self) -> float:
        return self.value - self.transcribed

    @property
    def converged_to(self) -> float:
        """Relative spread between the two Richardson extrapolations."""
        return abs(self.value - self.refined) / max(abs(self.value), 1e-300)


def g2_density(
    m: float, b1: float, d1: float, b2: float, d2: float, step: float = 1e-2
) -> G2Result:
    """2-point correlation density of the barcode point process.

    Computed as the mixed fourth derivative of :func:`winding_covariance`
    with Richardson-extrapolated central differences (the authoritative
    route), reported next to the literal printed closed form."""

    def cov(p1, q1, p2, q2):
        return winding_covariance(m, p1, q1, p2, q2)

    value = mixed_fourth_richardson(cov, (b1, d1, b2, d2), step)
    refined = mixed_fourth_richardson(cov, (b1, d1, b2, d2), step / 2.0)
    return G2Result(
        value=value,
        transcribed=g2_transcribed(m, b1, d1, b2, d2),
        step=step,
        refined=refined,
    )


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------

def mixed_second_difference(f, x: float, y: float, hx: float | None = None, hy: float | None = None) -> float:
    """Central estimate of d^2 f / dx dy; steps default to 1e-4 (1 + |arg|)."""
    hx = 1e-4 * (1.0 + abs(x)) if hx is None else hx
    hy = 1e-4 * (1.0 + abs(y)) if hy is None else hy
    return (
        f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy)
    ) / (4.0 * hx * hy)


def _mixed_fourth_stencil(f, point, h: float) -> float:
    # full tensor-product central stencil: one +-h in each of 4 variables
    total = 0.0
    for s0 in (1, -1):
        for s1 in (1, -1):
            for s2 in (1, -1):
                for s3 in (1, -1):
                    total += (
                        s0 * s1 * s2 * s3
                        * f(point[0] + s0 * h, point[1] + s1 * h,
                            point[2] + s2 * h, point[3] + s3 * h)
                    )
    return total / (16.0 * h**4)


def mixed_fourth_richardson(f, point, h: float) -> float:
    """Mixed 4th derivative over four variables, O(h^4) via Richardson."""
    d_h = _mixed_fourth_stencil(f, point, h)
    d_h2 = _mixed_fourth_stencil(f, point, h / 2.0)
    return (4.0 * d_h2 - d_h) / 3.0
