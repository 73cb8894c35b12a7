"""vorokit: Voronoi-summation and L-function kernel toolkit.

Numerical and exact-arithmetic tools for archimedean local factors, Bessel
kernels and Hankel transforms, p-adic Whittaker data, desk-scale verification
of the GL(2)/ℚ Voronoi summation identity, and Dirichlet-series kernels with
a Fourier-duality zero criterion.
"""

__version__ = "0.1.0"
