"""Planar convex bodies described by a truncated Fourier radial function.

A body is star-shaped about the origin with boundary
``p(theta) = rho(theta) (cos theta, sin theta)`` and

    rho(theta) = a0 + sum_k cos_k cos(k theta) + sin_k sin(k theta).

All integrals over ``[0, 2 pi)`` use the trapezoidal rule on ``M`` uniform
angles, which is spectrally accurate for these periodic integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

CONVEXITY_TOL = 1e-9
# Poisson-kernel parameter used to round off hulls (Fourier multiplier r^|k|)
DEFAULT_SMOOTHING = 0.85
INFLATE = 0.05


def _is_pow2(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


@dataclass(frozen=True)
class StarBody2D:
    a0: float
    cos_coeffs: tuple[float, ...] = ()
    sin_coeffs: tuple[float, ...] = ()
    M: int = 512

    def __post_init__(self):
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "cos_coeffs", tuple(float(c) for c in self.cos_coeffs))
        object.__setattr__(self, "sin_coeffs", tuple(float(c) for c in self.sin_coeffs))
        if not (isinstance(self.M, (int, np.integer)) and self.M >= 64 and _is_pow2(int(self.M))):
            raise ValueError(f"quadrature size M must be a power of two >= 64, got {self.M}")
        object.__setattr__(self, "M", int(self.M))
        rho = self.rho_samples()
        if not np.all(np.isfinite(rho)) or rho.min() <= 0:
            raise ValueError("radial function must be positive (origin must be interior)")

    @property
    def order(self) -> int:
        return max(len(self.cos_coeffs), len(self.sin_coeffs))

    def _padded(self) -> tuple[np.ndarray, np.ndarray]:
        K = self.order
        c = np.zeros(K)
        s = np.zeros(K)
        c[: len(self.cos_coeffs)] = self.cos_coeffs
        s[: len(self.sin_coeffs)] = self.sin_coeffs
        return c, s

    def theta(self, M: int | None = None) -> np.ndarray:
        M = self.M if M is None else M
        return 2 * np.pi * np.arange(M) / M

    def rho_samples(self, M: int | None = None) -> np.ndarray:
        return eval_rho(self, self.theta(M))[0]

    def with_quadrature(self, M: int) -> "StarBody2D":
        return replace(self, M=M)

    def scaled(self, t: float) -> "StarBody2D":
        return StarBody2D(
            self.a0 * t,
            tuple(t * c for c in self.cos_coeffs),
            tuple(t * s for s in self.sin_coeffs),
            self.M,
        )

    def truncated(self, order: int) -> "StarBody2D":
        return StarBody2D(self.a0, self.cos_coeffs[:order], self.sin_coeffs[:order], self.M)

    @property
    def is_convex(self) -> bool:
        return convexity_margin(self) >= -CONVEXITY_TOL

    def to_json(self) -> dict:
        return {
            "type": "fourier",
            "a0": self.a0,
            "cos": list(self.cos_coeffs),
            "sin": list(self.sin_coeffs),
            "M": self.M,
        }


@dataclass(frozen=True)
class AnnularDomain2D:
    R1: float
    outer: StarBody2D

    def __post_init__(self):
        if not self.R1 > 0:
            raise ValueError(f"inner radius must be > 0, got {self.R1}")
        rmin = float(self.outer.rho_samples().min())
        if rmin <= self.R1:
            raise ValueError(
                f"inner ball B_R1 must lie inside the outer body (min rho = {rmin:.6g} <= R1 = {self.R1:.6g})"
            )

    def scaled(self, t: float) -> "AnnularDomain2D":
        return AnnularDomain2D(self.R1 * t, self.outer.scaled(t))


def eval_rho(body: StarBody2D, theta) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """rho, rho', rho'' of the truncated series at the given angles."""
    theta = np.asarray(theta, dtype=float)
    c, s = body._padded()
    flat = theta.reshape(-1)
    rho = np.full(flat.shape, body.a0)
    d1 = np.zeros(flat.shape)
    d2 = np.zeros(flat.shape)
    if len(c):
        k = np.arange(1, len(c) + 1)
        kt = np.outer(flat, k)
        ck, sk = np.cos(kt), np.sin(kt)
        rho = rho + ck @ c + sk @ s
        d1 = sk @ (-k * c) + ck @ (k * s)
        d2 = -(ck @ (k**2 * c) + sk @ (k**2 * s))
    shape = theta.shape
    return rho.reshape(shape), d1.reshape(shape), d2.reshape(shape)


def _coeffs_from_samples(samples: np.ndarray, order: int | None = None) -> tuple[float, list, list]:
    M = len(samples)
    F = np.fft.rfft(samples) / M
    top = M // 2 - 1 if order is None else min(order, M // 2 - 1)
    a0 = float(F[0].real)
    cos = (2 * F[1 : top + 1].real).tolist()
    sin = (-2 * F[1 : top + 1].imag).tolist()
    # drop negligible tail
    scale = abs(a0) * 1e-15
    while cos and abs(cos[-1]) <= scale and abs(sin[-1]) <= scale:
        cos.pop()
        sin.pop()
    return a0, cos, sin


def body_from_samples(samples: Sequence[float], M: int | None = None, order: int | None = None) -> StarBody2D:
    """Fourier interpolant of radial samples on a uniform grid (optionally truncated)."""
    samples = np.asarray(samples, dtype=float)
    a0, cos, sin = _coeffs_from_samples(samples, order)
    return StarBody2D(a0, cos, sin, len(samples) if M is None else M)


def circle(R: float, M: int = 512) -> StarBody2D:
    if not R > 0:
        raise ValueError("circle radius must be > 0")
    return StarBody2D(R, (), (), M)


def body_from_ellipse(a: float, b: float, M: int = 512) -> StarBody2D:
    """Centred ellipse with semi-axis a along x and b along y."""
    if not (a > 0 and b > 0):
        raise ValueError(f"ellipse semi-axes must be positive, got a={a}, b={b}")
    t = 2 * np.pi * np.arange(M) / M
    rho = a * b / np.sqrt((b * np.cos(t)) ** 2 + (a * np.sin(t)) ** 2)
    return body_from_samples(rho, M)


def body_from_disk(R: float, center: Sequence[float] = (0.0, 0.0), M: int = 512) -> StarBody2D:
    """Disk B_R(center) seen from the origin; the origin must be interior."""
    cx, cy = map(float, center)
    if not math.hypot(cx, cy) < R:
        raise ValueError("origin must lie inside the disk")
    t = 2 * np.pi * np.arange(M) / M
    along = cx * np.cos(t) + cy * np.sin(t)
    across = -cx * np.sin(t) + cy * np.cos(t)
    return body_from_samples(along + np.sqrt(R * R - across**2), M)


def ellipse_axis_for_perimeter(perimeter: float, b: float) -> float:
    """Semi-axis a with perimeter_approx_formula(a, b) == perimeter."""
    a2 = 2 * (perimeter / (2 * np.pi)) ** 2 - b * b
    if a2 <= 0:
        raise ValueError(f"no ellipse with b={b} has approximate perimeter {perimeter}")
    return math.sqrt(a2)


# ---------------------------------------------------------------------------
# integrals


def _trapz(values: np.ndarray) -> float:
    return float(2 * np.pi * np.mean(values))


def volume(body: StarBody2D) -> float:
    rho = body.rho_samples()
    return 0.5 * _trapz(rho**2)


def annulus_volume(domain: AnnularDomain2D) -> float:
    return volume(domain.outer) - np.pi * domain.R1**2


def perimeter(body: StarBody2D) -> float:
    rho, d1, _ = eval_rho(body, body.theta())
    return _trapz(np.sqrt(rho**2 + d1**2))


def perimeter_approx_formula(a: float, b: float) -> float:
    """Root-mean-square-radius perimeter approximation 2 pi sqrt((a^2+b^2)/2); never below the true value."""
    if not (a > 0 and b > 0):
        raise ValueError("semi-axes must be positive")
    return 2 * math.pi * math.sqrt((a * a + b * b) / 2)


def boundary_points(body: StarBody2D, M: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    t = body.theta(M)
    rho = eval_rho(body, t)[0]
    return rho * np.cos(t), rho * np.sin(t)


def boundary_integral(body: StarBody2D, f: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
    """Integral of f(x, y) over the boundary, pulled back through the radial map."""
    t = body.theta()
    rho, d1, _ = eval_rho(body, t)
    vals = np.asarray(f(rho * np.cos(t), rho * np.sin(t)), dtype=float)
    return _trapz(vals * np.sqrt(rho**2 + d1**2))


def radial_mean_integral(body: StarBody2D) -> float:
    """Integral of rho over [0, 2 pi]; a lower bound for the perimeter."""
    return _trapz(body.rho_samples())


# ---------------------------------------------------------------------------
# convexity, support function, distances


def convexity_margin(body: StarBody2D, M: int | None = None) -> float:
    """min over samples of (rho^2 + 2 rho'^2 - rho rho'') / max(rho)^2; >= 0 iff convex."""
    rho, d1, d2 = eval_rho(body, body.theta(M))
    return float(np.min(rho**2 + 2 * d1**2 - rho * d2) / rho.max() ** 2)


def support_function(body: StarBody2D, theta) -> np.ndarray:
    """Support value in the normal direction of the boundary point with polar angle theta."""
    rho, d1, _ = eval_rho(body, theta)
    return rho**2 / np.sqrt(rho**2 + d1**2)


def normal_angle(body: StarBody2D, theta) -> np.ndarray:
    """Polar angle of the outer unit normal at p(theta)."""
    theta = np.asarray(theta, dtype=float)
    rho, d1, _ = eval_rho(body, theta)
    return theta - np.arctan2(d1, rho)


def support_in_direction(body: StarBody2D, phi, newton_steps: int = 6) -> np.ndarray:
    """h(phi) = max_theta rho(theta) cos(theta - phi), refined by Newton from a grid maximiser."""
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    t = body.theta()
    x, y = boundary_points(body)
    dots = np.outer(np.cos(phi), x) + np.outer(np.sin(phi), y)
    th = t[np.argmax(dots, axis=1)]
    for _ in range(newton_steps):
        rho, d1, d2 = eval_rho(body, th)
        c, s = np.cos(th - phi), np.sin(th - phi)
        g1 = d1 * c - rho * s
        g2 = d2 * c - 2 * d1 * s - rho * c
        step = np.where(g2 < 0, g1 / np.where(g2 < 0, g2, -1.0), 0.0)
        th = th - step
    rho = eval_rho(body, th)[0]
    return np.maximum(rho * np.cos(th - phi), dots.max(axis=1))


def inradius_origin(body: StarBody2D) -> float:
    """Distance from the origin to the nearest supporting line; a lower bound for the inradius."""
    return float(support_function(body, body.theta()).min())


def diameter(body: StarBody2D) -> float:
    x, y = boundary_points(body)
    pts = np.column_stack([x, y])
    best = 0.0
    for chunk in np.array_split(np.arange(len(pts)), max(1, len(pts) // 256)):
        d = np.linalg.norm(pts[chunk, None, :] - pts[None, :, :], axis=-1)
        best = max(best, float(d.max()))
    return best


def hausdorff_distance(body1: StarBody2D, body2: StarBody2D, n_dirs: int | None = None) -> float:
    """sup |h1 - h2| over directions; the Hausdorff distance for convex bodies."""
    n_dirs = max(body1.M, body2.M) if n_dirs is None else n_dirs
    phi = 2 * np.pi * np.arange(n_dirs) / n_dirs
    return float(np.max(np.abs(support_in_direction(body1, phi) - support_in_direction(body2, phi))))


def max_radius(body: StarBody2D, oversample: int = 4) -> float:
    return float(body.rho_samples(body.M * oversample).max())


def min_radius(body: StarBody2D, oversample: int = 4) -> float:
    return float(body.rho_samples(body.M * oversample).min())


# ---------------------------------------------------------------------------
# hull -> smooth radial function


_HULL_GRID = 8192


def _smoothed_support_series(points: np.ndarray, floor: float, smoothing: float):
    """Fourier series of the Poisson-smoothed support function of conv(points U B_floor)."""
    phi = 2 * np.pi * np.arange(_HULL_GRID) / _HULL_GRID
    h = np.full(_HULL_GRID, floor)
    if len(points):
        h = np.maximum(h, (np.outer(np.cos(phi), points[:, 0]) + np.outer(np.sin(phi), points[:, 1])).max(axis=1))
    F = np.fft.rfft(h) / _HULL_GRID
    K = int(math.ceil(math.log(1e-17) / math.log(smoothing))) if smoothing > 0 else 0
    K = min(K, _HULL_GRID // 4)
    k = np.arange(1, K + 1)
    damp = smoothing**k
    return float(F[0].real), 2 * F[1 : K + 1].real * damp, -2 * F[1 : K + 1].imag * damp


def _eval_series(a0, c, s, phi):
    k = np.arange(1, len(c) + 1)
    kp = np.outer(phi, k)
    ck, sk = np.cos(kp), np.sin(kp)
    h = a0 + ck @ c + sk @ s
    h1 = sk @ (-k * c) + ck @ (k * s)
    h2 = -(ck @ (k**2 * c) + sk @ (k**2 * s))
    return h, h1, h2


def _radial_from_support(a0, c, s, theta: np.ndarray) -> np.ndarray:
    """rho(theta) = min_phi h(phi) / cos(theta - phi) for the body with support series (a0, c, s)."""
    grid = 2 * np.pi * np.arange(1024) / 1024
    hg = _eval_series(a0, c, s, grid)[0]
    cosd = np.cos(theta[:, None] - grid[None, :])
    ratio = np.where(cosd > 0.05, hg[None, :] / np.where(cosd > 0.05, cosd, 1.0), np.inf)
    phi = grid[np.argmin(ratio, axis=1)]
    for _ in range(8):
        h, h1, h2 = _eval_series(a0, c, s, phi)
        cd, sd = np.cos(theta - phi), np.sin(theta - phi)
        F = h1 * cd - h * sd
        dF = (h + h2) * cd
        phi = phi - F / dF
    h = _eval_series(a0, c, s, phi)[0]
    return h / np.cos(theta - phi)


def body_from_hull(points, M: int = 512, smoothing: float = DEFAULT_SMOOTHING, floor: float = 0.0) -> StarBody2D:
    """Smooth convex body approximating conv(points U B_floor).

    The hull's support function is averaged with a Poisson kernel (a positive
    kernel, so convexity and any containing/contained centred disk are kept),
    converted to a radial function on M angles and truncated at order M/8.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    a0, c, s = _smoothed_support_series(pts, floor, smoothing)
    t = 2 * np.pi * np.arange(M) / M
    h_min = _eval_series(a0, c, s, t)[0].min()
    if not h_min > 0:
        raise ValueError("origin must be an interior point of the hull")
    rho = _radial_from_support(a0, c, s, t)
    return body_from_samples(rho, M, order=M // 8)


def random_convex_body(seed: int, R1: float, Rmax: float, M: int = 512, max_tries: int = 20,
                       smoothing: float = DEFAULT_SMOOTHING) -> StarBody2D:
    """Seeded smooth convex body with R1 < rho <= Rmax.

    Built from the hull of B_{R1 (1 + 0.05)} and 3-8 points drawn uniformly in
    B_Rmax; see :func:`body_from_hull`.
    """
    if not Rmax > R1 > 0:
        raise ValueError(f"need Rmax > R1 > 0, got R1={R1}, Rmax={Rmax}")
    rng = np.random.default_rng(seed)
    floor = min(R1 * (1 + INFLATE), Rmax)
    for _ in range(max_tries):
        n_pts = int(rng.integers(3, 9))
        r = Rmax * np.sqrt(rng.random(n_pts))
        ang = 2 * np.pi * rng.random(n_pts)
        pts = np.column_stack([r * np.cos(ang), r * np.sin(ang)])
        body = body_from_hull(pts, M, smoothing, floor)
        top = max_radius(body)
        if top > Rmax:
            body = body.scaled(Rmax / top * (1 - 1e-14))
        if min_radius(body) > R1 and max_radius(body) <= Rmax and body.is_convex:
            return body
    raise RuntimeError(f"could not generate a convex body with R1={R1}, Rmax={Rmax} in {max_tries} tries")


# ---------------------------------------------------------------------------
# JSON


def parse_body(spec: dict, M: int | None = None) -> StarBody2D:
    """Build a body from its JSON description (types: fourier, ellipse, hull, disk)."""
    if not isinstance(spec, dict):
        raise ValueError("body description must be a JSON object")
    try:
        return _parse_body(spec, M)
    except KeyError as exc:
        raise ValueError(f"body of type {spec.get('type')!r} is missing field {exc.args[0]!r}") from None


def _parse_body(spec: dict, M: int | None) -> StarBody2D:
    kind = spec.get("type")
    M = int(spec.get("M", M or 512))
    if kind == "fourier":
        return StarBody2D(spec["a0"], spec.get("cos", ()), spec.get("sin", ()), M)
    if kind == "ellipse":
        return body_from_ellipse(float(spec["a"]), float(spec["b"]), M)
    if kind == "hull":
        return body_from_hull(spec["points"], M, float(spec.get("smoothing", DEFAULT_SMOOTHING)))
    if kind == "disk":
        return body_from_disk(float(spec["r"]), spec.get("center", (0.0, 0.0)), M)
    raise ValueError(f"unknown body type {kind!r}")
