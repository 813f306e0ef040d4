"""Numerical laboratory for the 3-D stochastic wave equation with spatially
homogeneous Gaussian noise.

Modules
-------
wavekernel
    Fundamental solution of the wave equation and sphere-convolution identities.
kernels
    Covariance kernels and their spectral densities.
quadrature
    Certified quadrature engines.
moments
    Exact second moments of the linear additive-noise solution.
regularity
    Numerical checks of the Hölder-continuity conditions.
simulator
    Spectral Monte Carlo sampler, variograms and exponent estimates.
cli
    Command-line front end.
"""

__version__ = "0.1.0"

from .kernels import KernelSpec, make_kernel  # noqa: E402

__all__ = ["__version__", "KernelSpec", "make_kernel"]
