"""Closed-form Fourier solvers for the cohomology equations.

The operator (omega d_theta + lambda s d_s - shift) acts diagonally on the
Fourier-Taylor basis e^{2 pi i k theta} s^j with divisor

    D_{jk} = lambda j - shift + 2 pi i omega k,

so u = E / D mode by mode.  Family one (shift = 0) is obstructed at
(j, k) = (0, 0) and family two (shift = lambda) at (1, 0); the pinned
coefficient is set to zero, which realizes the normalizations
int u(theta, 0) dtheta = 0 and int d_s u(theta, 0) dtheta = 0 respectively.
The Nyquist column carries no d_theta action (matching the derivative
convention of the periodic module): its divisor is lambda j - shift alone
and, when that vanishes, the mode is only accepted if the right-hand side is
negligible there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ObstructionError, ResonanceError
from .fourier_taylor import FourierTaylor


@dataclass(frozen=True)
class CohomologySpec:
    """Divisor data for one cohomology solve.

    shift = 0 gives family one, shift = lambda family two; the perturbed
    order-n equations use shift = 0 with the k = 0 divisor n*lambda, and
    shift = lambda0 with divisor n*lambda - lambda0.
    """

    omega: float
    lam: float
    shift: float = 0.0
    obstruction_tol: float = 1e-9
    divisor_floor: float = 1e-13

    def divisors(self, degree: int, n_theta: int) -> np.ndarray:
        j = np.arange(degree + 1)[:, None]
        k = np.arange(n_theta // 2 + 1)[None, :]
        div = self.lam * j - self.shift + 2j * np.pi * self.omega * k
        if n_theta % 2 == 0:
            div[:, -1] = self.lam * j[:, 0] - self.shift
        return div


def solve_cohomology(E: FourierTaylor, spec: CohomologySpec) -> FourierTaylor:
    """Solve (omega d_theta + lambda s d_s - shift) u = E mode by mode.

    Modes with |divisor| below the floor must carry a negligible right-hand
    side: the designated obstruction modes (k = 0 columns) are then pinned to
    zero, any other near-resonance raises.
    """
    div = spec.divisors(E.degree, E.n_theta)
    coeffs = E.spectra
    small = np.abs(div) < spec.divisor_floor
    out = np.empty_like(coeffs)
    if small.any():
        ok = ~small
        out[ok] = coeffs[ok] / div[ok]
        for j, k in zip(*np.nonzero(small)):
            mag = abs(coeffs[j, k])
            if mag > spec.obstruction_tol:
                if k == 0:
                    raise ObstructionError(mag, (int(j), int(k)))
                raise ResonanceError(div[j, k], (int(j), int(k)))
            out[j, k] = 0.0
    else:
        out = coeffs / div
    return FourierTaylor.from_spectra(out, E.n_theta)


def apply_operator(u: FourierTaylor, spec: CohomologySpec) -> FourierTaylor:
    """Spectral application of (omega d_theta + lambda s d_s - shift)."""
    div = spec.divisors(u.degree, u.n_theta)
    return FourierTaylor.from_spectra(u.spectra * div, u.n_theta)


def average_theta(E: FourierTaylor, order: int) -> float:
    """The k = 0 Fourier coefficient (a0 / 2) of the order-j coefficient.

    Equals the theta-average of that coefficient; on the uniform grid this is
    exactly the trapezoid quadrature of its samples.
    """
    if not 0 <= order <= E.degree:
        raise IndexError(f"order {order} outside 0..{E.degree}")
    return float(E.spectra[order, 0].real)
