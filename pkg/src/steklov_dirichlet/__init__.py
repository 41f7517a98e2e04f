"""First Steklov-Dirichlet eigenvalue on annuli with a spherical hole.

Submodules: ``shell`` (closed forms and bounds), ``geometry`` (planar convex
bodies), ``solver`` (Rayleigh-Ritz on harmonic trial functions), ``harness``
(inequality checks and sweeps) and ``cli``.
"""

from .geometry import AnnularDomain2D, StarBody2D
from .shell import ShellSpec, shell_sigma1
from .solver import EigenSolveResult, solve_sigma1

__all__ = ["AnnularDomain2D", "StarBody2D", "ShellSpec", "shell_sigma1", "EigenSolveResult", "solve_sigma1"]
__version__ = "0.1.0"
