"""Real 1-periodic functions with dual grid / Fourier representation.

A function S is sampled at theta_k = k / n_theta and stored together with its
normalized complex half-spectrum ``S_hat = rfft(samples) / n_theta`` so that

    S(theta) = S_hat[0]
             + 2 Re sum_{0 < k < ceil(n/2)} S_hat[k] exp(2 pi i k theta)
             + S_hat[n/2] cos(pi n theta)          (last term only if n even)

By Hermitian symmetry S_hat[0] is real and, for even n, so is S_hat[n/2].
The equivalent real layout used for serialization and for the documented DFT
coefficient block is

    a0, (a_{n/2} if n even), a_1, b_1, a_2, b_2, ...

with a_k = 2 Re S_hat[k] and b_k = -2 Im S_hat[k].  Values are immutable
after construction; every operation returns a new function, so instances are
safe to share between threads.
"""

from __future__ import annotations

import numpy as np

from .errors import GridSizeError, RegularityError

# Relative level below which trailing Fourier content is considered
# round-off noise.  Used only to pick effective bandwidths; stored data is
# never modified.
NOISE_REL = 1e-15


def grid(n_theta: int) -> np.ndarray:
    """Uniform angle grid theta_k = k / n_theta on [0, 1)."""
    return np.arange(n_theta) / n_theta


def _n_half(n: int) -> int:
    """Number of stored complex modes: n // 2 + 1."""
    return n // 2 + 1


def _sanitize_spectrum(spec: np.ndarray, n: int) -> np.ndarray:
    """Force the exact Hermitian-symmetry constraints on a half-spectrum."""
    spec = np.asarray(spec, dtype=complex).copy()
    spec[..., 0] = spec[..., 0].real
    if n % 2 == 0:
        spec[..., -1] = spec[..., -1].real
    return spec


# ---------------------------------------------------------------------------
# spectrum padding / truncation between grid sizes (used for dealiasing)
# ---------------------------------------------------------------------------

def pad_spectrum_rows(spec: np.ndarray, n: int, m: int) -> np.ndarray:
    """Embed normalized half-spectra from an n-grid into an m-grid, m >= n.

    The real Nyquist coefficient of an even n splits into the two conjugate
    modes +-n/2, hence the factor 1/2.
    """
    out = np.zeros(spec.shape[:-1] + (_n_half(m),), dtype=complex)
    if n % 2 == 0:
        out[..., : n // 2] = spec[..., : n // 2]
        if m > n:
            out[..., n // 2] = 0.5 * spec[..., n // 2]
        else:
            out[..., n // 2] = spec[..., n // 2]
    else:
        out[..., : (n + 1) // 2] = spec
    return out


def trunc_spectrum_rows(spec: np.ndarray, m: int, n: int) -> np.ndarray:
    """Restrict normalized half-spectra from an m-grid to an n-grid, n <= m.

    Content between the two Nyquist bands is discarded; the modes +-n/2 fold
    onto the single real Nyquist coefficient of the coarse grid.
    """
    out = np.array(spec[..., : _n_half(n)], dtype=complex)
    if n % 2 == 0 and m > n:
        out[..., n // 2] = 2.0 * spec[..., n // 2].real
    return _sanitize_spectrum(out, n)


def upsample_rows(spec: np.ndarray, n: int, m: int) -> np.ndarray:
    """Samples on the m-grid of functions given by n-grid half-spectra."""
    return np.fft.irfft(pad_spectrum_rows(spec, n, m) * m, n=m, axis=-1)


def project_rows(samples_m: np.ndarray, n: int) -> np.ndarray:
    """Band-limit m-grid samples back to the n-grid (returns n-grid spectra)."""
    m = samples_m.shape[-1]
    return trunc_spectrum_rows(np.fft.rfft(samples_m, axis=-1) / m, m, n)


def mul_rows(xs: np.ndarray, ys: np.ndarray, n: int) -> np.ndarray:
    """Dealiased pointwise products of two stacks of half-spectra.

    Both factors are evaluated on the zero-padded 2n grid, multiplied there
    and truncated back, so products of band-limited data do not alias.
    Returns half-spectra of the products.
    """
    m = 2 * n
    a = upsample_rows(xs, n, m)
    b = upsample_rows(ys, n, m)
    return project_rows(a * b, n)


# ---------------------------------------------------------------------------
# the function type
# ---------------------------------------------------------------------------

class PeriodicFunction:
    """Immutable real 1-periodic function of theta on a uniform grid."""

    __slots__ = ("n_theta", "_samples", "_spectrum")

    def __init__(self, samples: np.ndarray, spectrum: np.ndarray):
        self.n_theta = int(samples.shape[-1])
        if self.n_theta < 2:
            raise GridSizeError(f"grid size {self.n_theta} < 2")
        self._samples = np.asarray(samples, dtype=float).copy()
        self._spectrum = _sanitize_spectrum(spectrum, self.n_theta)
        self._samples.setflags(write=False)
        self._spectrum.setflags(write=False)

    # ---- constructors ----
    @classmethod
    def from_samples(cls, samples) -> "PeriodicFunction":
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 1 or samples.size < 2:
            raise GridSizeError("need a 1-d array of at least 2 samples")
        return cls(samples, np.fft.rfft(samples) / samples.size)

    @classmethod
    def from_spectrum(cls, spectrum, n_theta: int) -> "PeriodicFunction":
        if n_theta < 2:
            raise GridSizeError(f"grid size {n_theta} < 2")
        spectrum = _sanitize_spectrum(np.asarray(spectrum, dtype=complex), n_theta)
        if spectrum.shape != (_n_half(n_theta),):
            raise GridSizeError("spectrum length does not match n_theta")
        samples = np.fft.irfft(spectrum * n_theta, n=n_theta)
        return cls(samples, spectrum)

    @classmethod
    def zeros(cls, n_theta: int) -> "PeriodicFunction":
        return cls(np.zeros(n_theta), np.zeros(_n_half(n_theta), dtype=complex))

    @classmethod
    def constant(cls, value: float, n_theta: int) -> "PeriodicFunction":
        spec = np.zeros(_n_half(n_theta), dtype=complex)
        spec[0] = value
        return cls(np.full(n_theta, float(value)), spec)

    @classmethod
    def from_callable(cls, fn, n_theta: int) -> "PeriodicFunction":
        return cls.from_samples(np.asarray(fn(grid(n_theta)), dtype=float))

    # ---- views ----
    @property
    def samples(self) -> np.ndarray:
        return self._samples

    @property
    def spectrum(self) -> np.ndarray:
        return self._spectrum

    def mean(self) -> float:
        return float(self._spectrum[0].real)

    def sup(self) -> float:
        return float(np.max(np.abs(self._samples))) if self.n_theta else 0.0

    def l2(self) -> float:
        """L2(T) norm, i.e. the 2-norm of the full complex coefficient vector."""
        return float(np.sqrt(spectrum_power(self._spectrum, self.n_theta).sum()))

    def kcut(self, rel: float = NOISE_REL) -> int:
        """Effective bandwidth: smallest K with all |S_hat[k]| < rel * max for k > K."""
        mags = np.abs(self._spectrum)
        top = mags.max()
        if top == 0.0:
            return 0
        keep = np.nonzero(mags >= rel * top)[0]
        return int(keep[-1])

    # ---- arithmetic (always returns a new function) ----
    def __add__(self, other):
        if isinstance(other, PeriodicFunction):
            self._check_grid(other)
            return PeriodicFunction(self._samples + other._samples,
                                    self._spectrum + other._spectrum)
        return self._add_const(float(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PeriodicFunction):
            self._check_grid(other)
            return PeriodicFunction(self._samples - other._samples,
                                    self._spectrum - other._spectrum)
        return self._add_const(-float(other))

    def __rsub__(self, other):
        return (-self)._add_const(float(other))

    def __neg__(self):
        return PeriodicFunction(-self._samples, -self._spectrum)

    def __mul__(self, other):
        if isinstance(other, PeriodicFunction):
            self._check_grid(other)
            spec = mul_rows(self._spectrum, other._spectrum, self.n_theta)
            return PeriodicFunction.from_spectrum(spec, self.n_theta)
        c = float(other)
        return PeriodicFunction(self._samples * c, self._spectrum * c)

    __rmul__ = __mul__

    def _add_const(self, c: float) -> "PeriodicFunction":
        spec = self._spectrum.copy()
        spec[0] += c
        return PeriodicFunction(self._samples + c, spec)

    def _check_grid(self, other: "PeriodicFunction"):
        if other.n_theta != self.n_theta:
            raise GridSizeError(
                f"grid mismatch: {self.n_theta} vs {other.n_theta}")

    # ---- analysis ----
    def derivative(self, order: int = 1) -> "PeriodicFunction":
        return differentiate(self, order)

    def shift(self, delta: float) -> "PeriodicFunction":
        """The function theta -> S(theta + delta), computed spectrally."""
        n = self.n_theta
        k = np.arange(_n_half(n))
        factor = np.exp(2j * np.pi * k * delta)
        if n % 2 == 0:
            # the Nyquist mode only carries its cosine projection
            factor[-1] = np.cos(np.pi * n * delta)
        return PeriodicFunction.from_spectrum(self._spectrum * factor, n)

    def eval(self, points, kcut: int | None = None) -> np.ndarray:
        return eval_nonuniform(self, points, kcut=kcut)

    def __repr__(self):
        return f"PeriodicFunction(n_theta={self.n_theta}, mean={self.mean():.6g})"


def spectrum_power(spec: np.ndarray, n: int) -> np.ndarray:
    """|S_hat_k|^2 weights so that their sum is the squared L2(T) norm."""
    w = np.full(spec.shape[-1], 2.0)
    w[0] = 1.0
    if n % 2 == 0:
        w[-1] = 1.0
    return w * np.abs(spec) ** 2


# ---------------------------------------------------------------------------
# DFT in the documented real layout
# ---------------------------------------------------------------------------

def spectrum_to_real(spec: np.ndarray, n: int) -> np.ndarray:
    """Half-spectrum -> sequential layout (a0, [a_{n/2}], a_k, b_k...)."""
    half = (n + 1) // 2  # ceil(n/2); modes 1..half-1 carry (a_k, b_k)
    out = np.empty(n)
    out[0] = 2.0 * spec[0].real
    pos = 1
    if n % 2 == 0:
        out[1] = 2.0 * spec[n // 2].real
        pos = 2
    interior = spec[1:half]
    out[pos::2] = 2.0 * interior.real
    out[pos + 1::2] = -2.0 * interior.imag
    return out


def real_to_spectrum(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Sequential real layout -> normalized complex half-spectrum."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (n,):
        raise GridSizeError("coefficient block length does not match n_theta")
    half = (n + 1) // 2
    spec = np.zeros(_n_half(n), dtype=complex)
    spec[0] = 0.5 * coeffs[0]
    pos = 1
    if n % 2 == 0:
        spec[n // 2] = 0.5 * coeffs[1]
        pos = 2
    a = coeffs[pos::2]
    b = coeffs[pos + 1::2]
    spec[1:half] = 0.5 * (a - 1j * b)
    return spec


def dft_forward(samples) -> np.ndarray:
    """Real DFT of grid samples, returned in the sequential layout.

    Linear in the input; coefficients satisfy Hermitian symmetry by
    construction of the layout.
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    if n < 2:
        raise GridSizeError(f"grid size {n} < 2")
    return spectrum_to_real(np.fft.rfft(samples) / n, n)


def dft_inverse(coeffs) -> np.ndarray:
    """Inverse of :func:`dft_forward`."""
    coeffs = np.asarray(coeffs, dtype=float)
    n = coeffs.size
    if n < 2:
        raise GridSizeError(f"grid size {n} < 2")
    return np.fft.irfft(real_to_spectrum(coeffs, n) * n, n=n)


# ---------------------------------------------------------------------------
# calculus and evaluation
# ---------------------------------------------------------------------------

def differentiate(f: PeriodicFunction, order: int = 1) -> PeriodicFunction:
    """Spectral derivative d^order/d theta^order.

    Mode k maps (a_k, b_k) -> (2 pi k b_k, -2 pi k a_k) per application; the
    Nyquist mode of the derivative is set to zero (its sine partner is not
    representable on the grid).
    """
    n = f.n_theta
    k = np.arange(_n_half(n))
    factor = (2j * np.pi * k) ** order
    if n % 2 == 0:
        factor[-1] = 0.0
    return PeriodicFunction.from_spectrum(f.spectrum * factor, n)


def antiderivative(f: PeriodicFunction) -> PeriodicFunction:
    """Mean-zero antiderivative of a mean-zero function."""
    n = f.n_theta
    spec = f.spectrum.copy()
    k = np.arange(1, _n_half(n))
    spec[1:] = spec[1:] / (2j * np.pi * k)
    if n % 2 == 0:
        spec[-1] = 0.0
    spec[0] = 0.0
    return PeriodicFunction.from_spectrum(spec, n)


def eval_nonuniform(f: PeriodicFunction, points, kcut: int | None = None) -> np.ndarray:
    """Evaluate the trigonometric series at arbitrary angles (mod 1).

    Direct summation, Theta(n_theta * p); a fast nonuniform transform would
    bring this to Theta(n_theta log n_theta) but is not needed at the grid
    sizes this library targets.
    """
    pts = np.mod(np.asarray(points, dtype=float), 1.0)
    scalar = pts.ndim == 0
    pts = np.atleast_1d(pts)
    n = f.n_theta
    spec = f.spectrum
    hi = spec.size - 1 if kcut is None else min(int(kcut), spec.size - 1)
    nyq = n % 2 == 0 and hi == spec.size - 1
    kmax_interior = hi - 1 if nyq else hi
    k = np.arange(1, kmax_interior + 1)
    phases = np.exp(2j * np.pi * np.outer(pts, k))
    out = np.full(pts.shape, spec[0].real)
    if k.size:
        out = out + 2.0 * (phases @ spec[1:kmax_interior + 1]).real
    if nyq:
        out = out + spec[-1].real * np.cos(np.pi * n * pts)
    return out[0] if scalar else out


def weighted_norm(f: PeriodicFunction, order: int) -> float:
    """Weighted coefficient seminorm sum_k ((n-k)^order + k^order) |S_hat_k|.

    The sum runs over 1 <= k < ceil(n/2) plus the Nyquist term
    2 (n/2)^order |S_hat_{n/2}| for even n; the constant mode is excluded, so
    this vanishes exactly on constants.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    n = f.n_theta
    half = (n + 1) // 2
    k = np.arange(1, half)
    mags = np.abs(f.spectrum[1:half])
    total = float((((n - k) ** float(order) + k ** float(order)) * mags).sum())
    if n % 2 == 0:
        total += 2.0 * (n / 2.0) ** float(order) * abs(f.spectrum[n // 2])
    return total


def holder_estimate(f: PeriodicFunction, eta: int, t_grid) -> float:
    """Littlewood-Paley regularity diagnostic.

    Applies the Poisson-type smoothing exp(-t sqrt(-Delta)) (multiplier
    exp(-2 pi k t) on mode k), takes eta time-derivatives, and regresses
    log of the sup norm against log t.  The least-squares slope estimates
    alpha - eta, so the returned value slope + eta estimates the Holder
    exponent alpha.  Diagnostic only: analytic inputs saturate the estimate
    near eta.
    """
    if eta < 0:
        raise ValueError("eta must be >= 0")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size < 2 or np.any(t_grid <= 0):
        raise ValueError("need at least two positive t values")
    n = f.n_theta
    spec = f.spectrum.copy()
    spec[0] = 0.0
    if np.max(np.abs(spec)) == 0.0:
        raise RegularityError("constant function has no regularity estimate")
    k = np.arange(_n_half(n))
    mult = (-2.0 * np.pi * k) ** eta if eta else np.ones_like(k, dtype=float)
    norms = np.empty(t_grid.size)
    for i, t in enumerate(t_grid):
        filt = spec * mult * np.exp(-2.0 * np.pi * k * t)
        smoothed = np.fft.irfft(filt * n, n=n)
        norms[i] = np.max(np.abs(smoothed))
    slope = np.polyfit(np.log(t_grid), np.log(norms), 1)[0]
    return float(slope + eta)


# ---------------------------------------------------------------------------
# text serialization (format "PF v1")
# ---------------------------------------------------------------------------

def pf_to_lines(f: PeriodicFunction) -> list[str]:
    lines = [f"PF v1 n_theta={f.n_theta}"]
    lines.extend(f"{c:.17g}" for c in spectrum_to_real(f.spectrum, f.n_theta))
    return lines


def pf_from_lines(lines, pos: int = 0) -> tuple[PeriodicFunction, int]:
    """Parse a PF v1 block starting at ``lines[pos]``; returns (pf, next_pos)."""
    header = lines[pos].split()
    if header[:2] != ["PF", "v1"]:
        raise ValueError(f"expected 'PF v1' header, got {lines[pos]!r}")
    fields = dict(item.split("=", 1) for item in header[2:])
    n = int(fields["n_theta"])
    coeffs = np.array([float(lines[pos + 1 + i]) for i in range(n)])
    return PeriodicFunction.from_spectrum(real_to_spectrum(coeffs, n), n), pos + 1 + n
