"""Rayleigh-Ritz solver for the first Steklov-Dirichlet eigenvalue on planar annuli.

Trial functions are exactly harmonic and vanish on the inner circle:

    phi_0   = ln(r / R1)
    phi_k^c = ((r/R1)^k - (R1/r)^k) cos(k theta)
    phi_k^s = ((r/R1)^k - (R1/r)^k) sin(k theta)

so by Green's identity both the Dirichlet energy and the boundary mass are
boundary integrals over the outer curve. The discrete problem is the
symmetric-definite pencil ``A c = sigma B c``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .geometry import AnnularDomain2D, eval_rho

log = logging.getLogger(__name__)

DEFAULT_ORDERS = 24
DEFAULT_QUAD = 512
MAX_B_CONDITION = 1e12


class IllConditionedError(RuntimeError):
    """Boundary mass matrix too close to singular for a reliable solve."""

    def __init__(self, condition: float, N: int):
        self.condition = condition
        self.N = N
        super().__init__(
            f"boundary mass matrix condition {condition:.3g} exceeds {MAX_B_CONDITION:.0e} at N={N}; "
            "lower the angular order N"
        )


@dataclass(frozen=True)
class HarmonicTrialBasis:
    R1: float
    N: int
    scale: tuple[float, ...]
    # reference radius used to keep (r/R1)^k in range before per-order scaling
    r_ref: float = 1.0

    @property
    def size(self) -> int:
        return 2 * self.N + 1

    @staticmethod
    def index(k: int, kind: str = "cos") -> int:
        if k == 0:
            return 0
        return 2 * k - 1 if kind == "cos" else 2 * k

    def _radial(self, k: int, r):
        """((r/r_ref)^k - (R1/r_ref)^k (R1/r)^k) and r times its r-derivative."""
        q = (self.R1 / self.r_ref) ** k
        up = (r / self.r_ref) ** k
        down = q * (self.R1 / r) ** k
        return up - down, k * (up + down)

    def eval_polar(self, r, theta, d_rho_over_rho=None):
        """Columns of basis values and, if requested, r*d/dr and d/dtheta."""
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        vals = np.empty(r.shape + (self.size,))
        r_dr = np.empty_like(vals)
        d_th = np.empty_like(vals)
        vals[..., 0] = np.log(r / self.R1)
        r_dr[..., 0] = 1.0
        d_th[..., 0] = 0.0
        for k in range(1, self.N + 1):
            g, rg = self._radial(k, r)
            c, s = np.cos(k * theta), np.sin(k * theta)
            ic, is_ = 2 * k - 1, 2 * k
            vals[..., ic], vals[..., is_] = g * c, g * s
            r_dr[..., ic], r_dr[..., is_] = rg * c, rg * s
            d_th[..., ic], d_th[..., is_] = -k * g * s, k * g * c
        sc = np.asarray(self.scale)
        return vals * sc, r_dr * sc, d_th * sc


def make_basis(R1: float, N: int, r_ref: float | None = None, scale=None) -> HarmonicTrialBasis:
    if N < 0:
        raise ValueError("N must be >= 0")
    r_ref = R1 if r_ref is None else r_ref
    scale = (1.0,) * (2 * N + 1) if scale is None else tuple(scale)
    return HarmonicTrialBasis(R1, N, scale, r_ref)


def basis_eval(basis: HarmonicTrialBasis, k: int, point, kind: str = "cos"):
    """Value and Cartesian gradient of one basis element at a point."""
    x, y = map(float, point)
    r = np.hypot(x, y)
    if r == 0:
        raise ValueError("trial functions are singular at the origin")
    th = np.arctan2(y, x)
    vals, r_dr, d_th = basis.eval_polar(np.array([r]), np.array([th]))
    j = basis.index(k, kind)
    v, dr, dt = vals[0, j], r_dr[0, j] / r, d_th[0, j] / r
    grad = np.array([dr * np.cos(th) - dt * np.sin(th), dr * np.sin(th) + dt * np.cos(th)])
    return float(v), grad


@dataclass(frozen=True)
class SymmetricPencil:
    A: np.ndarray
    B: np.ndarray
    basis: HarmonicTrialBasis
    M: int
    asymmetry: float  # ||A - A^T|| / ||A|| before symmetrisation
    b_min_eig: float
    b_condition: float


@dataclass(frozen=True)
class EigenSolveResult:
    sigma1: float
    coeffs: np.ndarray
    N: int
    M: int
    b_condition: float
    residual: float
    basis: HarmonicTrialBasis

    def to_json(self) -> dict:
        return {
            "sigma1": self.sigma1,
            "N": self.N,
            "M": self.M,
            "b_condition": self.b_condition,
            "residual": self.residual,
        }


def _boundary_samples(domain: AnnularDomain2D, M: int):
    t = 2 * np.pi * np.arange(M) / M
    rho, d1, _ = eval_rho(domain.outer, t)
    return t, rho, d1


def _trace_and_flux(basis, t, rho, d1):
    """Trace phi and flux density (dphi/dnu) ds/dtheta = rho phi_r - (rho'/rho) phi_theta."""
    vals, r_dr, d_th = basis.eval_polar(rho, t)
    flux = r_dr - (d1 / rho)[:, None] * d_th
    return vals, flux


def assemble_pencil(domain: AnnularDomain2D, N: int = DEFAULT_ORDERS, M: int = DEFAULT_QUAD,
                    check_condition: bool = True) -> SymmetricPencil:
    if N < 0:
        raise ValueError("N must be >= 0")
    if M < max(8 * N, 64):
        raise ValueError(f"quadrature size M={M} must be >= max(8N, 64) = {max(8 * N, 64)}")
    t, rho, d1 = _boundary_samples(domain, M)
    w = 2 * np.pi / M
    ds = np.sqrt(rho**2 + d1**2)

    raw = make_basis(domain.R1, N, r_ref=float(rho.max()))
    vals, _, _ = raw.eval_polar(rho, t)
    diag = w * np.einsum("ij,ij,i->j", vals, vals, ds)
    basis = make_basis(domain.R1, N, r_ref=raw.r_ref, scale=1.0 / np.sqrt(diag))

    vals, flux = _trace_and_flux(basis, t, rho, d1)
    B = w * (vals * ds[:, None]).T @ vals
    A = w * vals.T @ flux
    normA = np.linalg.norm(A)
    asym = float(np.linalg.norm(A - A.T) / normA) if normA > 0 else 0.0
    A = 0.5 * (A + A.T)
    B = 0.5 * (B + B.T)
    eigB = np.linalg.eigvalsh(B)
    b_min = float(eigB[0])
    cond = float(eigB[-1] / b_min) if b_min > 0 else np.inf
    if check_condition and not cond <= MAX_B_CONDITION:
        raise IllConditionedError(cond, N)
    return SymmetricPencil(A, B, basis, M, asym, b_min, cond)


def solve_pencil(pencil: SymmetricPencil) -> tuple[float, np.ndarray, float]:
    """Smallest eigenpair via Cholesky reduction B = L L^T, C = L^-1 A L^-T."""
    L = sla.cholesky(pencil.B, lower=True)
    tmp = sla.solve_triangular(L, pencil.A, lower=True)
    C = sla.solve_triangular(L, tmp.T, lower=True)
    C = 0.5 * (C + C.T)
    evals, evecs = np.linalg.eigh(C)
    y = evecs[:, 0]
    c = sla.solve_triangular(L.T, y, lower=False)
    c = c / np.sqrt(c @ pencil.B @ c)
    sigma = float(evals[0])
    if c[0] < 0:
        c = -c
    residual = float(np.linalg.norm(pencil.A @ c - sigma * pencil.B @ c))
    return sigma, c, residual


def solve_sigma1(domain: AnnularDomain2D, N: int = DEFAULT_ORDERS, M: int = DEFAULT_QUAD) -> EigenSolveResult:
    pencil = assemble_pencil(domain, N, M)
    sigma, c, residual = solve_pencil(pencil)
    if not domain.outer.is_convex:
        log.warning("outer body is not convex; eigenvalue computed but theorem checks do not apply")
    return EigenSolveResult(sigma, c, N, M, pencil.b_condition, residual, pencil.basis)


def solve_sigma1_auto(domain: AnnularDomain2D, N: int = DEFAULT_ORDERS, M: int = DEFAULT_QUAD,
                      step: int = 4) -> EigenSolveResult:
    """solve_sigma1, lowering N by `step` while the mass matrix is ill-conditioned."""
    while True:
        try:
            return solve_sigma1(domain, N, M)
        except IllConditionedError:
            if N - step < 0:
                raise
            log.info("lowering N from %d to %d (ill-conditioned mass matrix)", N, N - step)
            N -= step


def boundary_trace(result: EigenSolveResult, domain: AnnularDomain2D, theta) -> np.ndarray:
    """Values of the computed eigenfunction on the outer boundary at polar angles theta."""
    theta = np.asarray(theta, dtype=float)
    rho = eval_rho(domain.outer, theta)[0]
    vals, _, _ = result.basis.eval_polar(rho, theta)
    return vals @ result.coeffs
