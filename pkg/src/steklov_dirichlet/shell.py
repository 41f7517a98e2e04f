"""Closed-form Steklov-Dirichlet data for spherical shells.

Everything here is a pure function of its arguments. The shell
``A(R1, R2) = {R1 < |x| < R2}`` in dimension ``n`` has first eigenfunction
``w`` (log for n=2, difference of Newton potentials for n>=3) and an explicit
first eigenvalue. The module also carries the volume upper bound, the radius
cap ``rbar`` under which the shell is known to be the maximiser, and the
profile function whose convexity drives the boundary-integral comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# ratio window around 1 in which log1p/expm1 forms are used
_NEAR_ONE = 1e-4


def unit_ball_volume(n: int) -> float:
    """Volume omega_n of the unit ball in R^n."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def sphere_area(n: int, R: float = 1.0) -> float:
    """(n-1)-measure of the sphere of radius R in R^n."""
    return n * unit_ball_volume(n) * R ** (n - 1)


@dataclass(frozen=True)
class ShellSpec:
    n: int
    R1: float
    R2: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension n must be an integer >= 2, got {self.n}")
        if not self.R1 > 0:
            raise ValueError(f"inner radius R1 must be > 0, got {self.R1}")
        if not self.R2 > self.R1:
            raise ValueError(f"outer radius R2 must exceed R1 (R1={self.R1}, R2={self.R2})")

    @property
    def volume(self) -> float:
        return unit_ball_volume(self.n) * (self.R2**self.n - self.R1**self.n)


@dataclass(frozen=True)
class BoundsReport:
    sigma_upper_volume: float
    rbar: float
    alpha_minus: float
    alpha_plus: float
    inside_rbar: bool


def _log_ratio(R2: float, R1: float) -> float:
    q = R2 / R1
    if abs(q - 1.0) < _NEAR_ONE:
        return math.log1p((R2 - R1) / R1)
    return math.log(q)


def _pow_ratio_minus_one(R2: float, R1: float, p: float) -> float:
    """(R2/R1)**p - 1 without cancellation for R2 ~ R1."""
    return math.expm1(p * _log_ratio(R2, R1))


def shell_sigma1(spec: ShellSpec) -> float:
    """First Steklov-Dirichlet eigenvalue of the shell."""
    n, R1, R2 = spec.n, spec.R1, spec.R2
    if n == 2:
        return 1.0 / (R2 * _log_ratio(R2, R1))
    return (n - 2) / (R2 * _pow_ratio_minus_one(R2, R1, n - 2))


def shell_eigenfunction(spec: ShellSpec, r: float) -> float:
    """Radial first eigenfunction w(r), normalised as ln(r/R1) or R1^(2-n) - r^(2-n)."""
    n, R1 = spec.n, spec.R1
    if r < R1:
        raise ValueError(f"w is defined for r >= R1 (r={r}, R1={R1})")
    if n == 2:
        return _log_ratio(r, R1)
    # R1^(2-n) * (1 - (R1/r)^(n-2))
    return -math.expm1(-(n - 2) * _log_ratio(r, R1)) / R1 ** (n - 2)


def shell_eigenfunction_slope(spec: ShellSpec, r: float) -> float:
    """Radial derivative w'(r) = r^(1-n) (times n-2 for n >= 3)."""
    n = spec.n
    if n == 2:
        return 1.0 / r
    return (n - 2) / r ** (n - 1)


def shell_gradient_energy(spec: ShellSpec) -> float:
    """Dirichlet energy of w over the shell, in closed form."""
    n, R1, R2 = spec.n, spec.R1, spec.R2
    if n == 2:
        return 2 * math.pi * _log_ratio(R2, R1)
    # |S^{n-1}| (n-2)^2 int r^{3-2n} dr = |S^{n-1}| (n-2) (R1^(2-n) - R2^(2-n))
    return sphere_area(n) * (n - 2) * shell_eigenfunction(spec, R2)


def shell_boundary_mass(spec: ShellSpec) -> float:
    """Integral of w^2 over the outer sphere."""
    return sphere_area(spec.n, spec.R2) * shell_eigenfunction(spec, spec.R2) ** 2


def upper_bound_constant(n: int, R1: float, V: float) -> float:
    """The constant C(n, R1, V) of the volume upper bound."""
    if not (V > 0 and R1 > 0):
        raise ValueError("upper bound needs V > 0 and R1 > 0")
    omega = unit_ball_volume(n)
    gap = (V / (2 * omega) + R1**n) ** (1.0 / n) - R1
    return 2.0 / (n * omega ** (1.0 / n) * gap**2)


def upper_bound_volume(n: int, R1: float, V: float) -> float:
    """sigma_1(Omega) <= C(n, R1, V) V^(1/n) for any admissible Omega of volume V."""
    return upper_bound_constant(n, R1, V) * V ** (1.0 / n)


def upper_bound_perimeter_chain(n: int, R1: float, V: float) -> float:
    """Explicit first member of the perimeter-constraint chain.

    Written out independently of :func:`upper_bound_constant`; the two agree
    algebraically, which the tests use as a cross-check.
    """
    if not (V > 0 and R1 > 0):
        raise ValueError("upper bound needs V > 0 and R1 > 0")
    omega = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    outer = (V / (2 * omega) + R1**n) ** (1.0 / n)
    return 2 * V ** (1.0 / n) / (n * omega ** (1.0 / n) * (outer - R1) ** 2)


def _bracket(n: int, sign: int) -> float:
    return ((n - 1) + sign * (n - 2) * math.sqrt(2 * (n - 1))) / (n - 1)


def rbar(n: int, R1: float) -> float:
    """Radius of the ball that must contain the outer body for the shell to be optimal."""
    if n < 2 or not R1 > 0:
        raise ValueError("rbar needs n >= 2 and R1 > 0")
    if n == 2:
        return R1 * math.exp(math.sqrt(2))
    return R1 * _bracket(n, +1) ** (1.0 / (n - 2))


def alpha_pm(n: int) -> tuple[float, float]:
    """Endpoints (alpha_-, alpha_+) of the convexity window of :func:`f_profile` in units of R1^n.

    For n >= 3 the lower root is <= 0 and alpha_- is reported as 0.
    """
    if n < 2:
        raise ValueError("alpha_pm needs n >= 2")
    if n == 2:
        return math.exp(-2 * math.sqrt(2)), math.exp(2 * math.sqrt(2))
    lower = _bracket(n, -1)
    alpha_minus = lower ** (n / (n - 2)) if lower > 0 else 0.0
    return alpha_minus, _bracket(n, +1) ** (n / (n - 2))


def f_profile(t: float, n: int, R1: float) -> float:
    """Boundary density w^2 * rho^(n-1) written as a function of t = rho^n (t = rho^2 in 2D)."""
    if not t > 0:
        raise ValueError(f"f_profile needs t > 0, got {t}")
    if n == 2:
        return math.log(math.sqrt(t) / R1) ** 2 * math.sqrt(t)
    return (1.0 / R1 ** (n - 2) - t ** (-(n - 2) / n)) ** 2 * t ** ((n - 1) / n)


def f_second(t: float, n: int, R1: float) -> float:
    """Analytic second derivative of :func:`f_profile`."""
    if not t > 0:
        raise ValueError(f"f_second needs t > 0, got {t}")
    if n == 2:
        L = math.log(math.sqrt(t) / R1)
        return (2 - L * L) / (4 * t * math.sqrt(t))
    bracket = (
        R1 ** (4 - 2 * n) / n * (1 / n - 1) * t ** (2 - 4 / n)
        + 2 * R1 ** (2 - n) / n * (1 - 1 / n) * t ** (1 - 2 / n)
        + (3 / n - 2) * (3 / n - 1)
    )
    return t ** (3 / n - 3) * bracket


def bounds_report(n: int, R1: float, V: float, max_radius: float) -> BoundsReport:
    """Collect the explicit bounds for a domain of volume V whose outer body reaches max_radius."""
    am, ap = alpha_pm(n)
    rb = rbar(n, R1)
    return BoundsReport(
        sigma_upper_volume=upper_bound_volume(n, R1, V),
        rbar=rb,
        alpha_minus=am,
        alpha_plus=ap,
        inside_rbar=bool(max_radius <= rb),
    )
