"""Boundary-integral tools for the two-dimensional Stokes resolvent problem.

Layer-potential solver for lambda*u - Delta u + grad(phi) = f, div u = 0
with zero Dirichlet data on bounded Lipschitz domains, plus the special
functions, kernel bounds, operational-calculus routines, and verification
drivers built on top of it.
"""

from .backend import BACKEND_NAME

__version__ = "0.1.0"
__all__ = ["BACKEND_NAME", "__version__"]
