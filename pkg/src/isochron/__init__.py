"""Spectral computation of limit cycles and their isochrons.

The library solves invariance equations for Fourier-Taylor parameterizations
of planar limit cycles and of their continuations under small
state-dependent-delay perturbations, order by order in the isochron
coordinate.
"""

__version__ = "0.1.0"

from .periodic import PeriodicFunction, dft_forward, dft_inverse  # noqa: F401
from .fourier_taylor import (  # noqa: F401
    FourierTaylor,
    TorusMapFT,
    Parameterization,
)
