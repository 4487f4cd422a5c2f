"""Truncated power series in s with periodic-function coefficients.

A FourierTaylor value represents W(theta, s) = sum_j W^j(theta) s^j with all
coefficients W^j on one grid.  Coefficient sample rows and half-spectra are
kept together as 2-d arrays so that series arithmetic stays vectorized.
Every operation truncates eagerly to its declared degree; coefficients beyond
it are discarded, never silently kept.

TorusMapFT pairs two series with integer winding numbers, the lift law being
component_i(theta + 1, s) = component_i(theta, s) + winding_i, where only the
order-0 coefficient carries the winding.  Parameterization bundles such a map
with its frequency, stability rate and scaling factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridSizeError, ScaleError, SingularSystemError
from .periodic import (
    PeriodicFunction,
    _n_half,
    _sanitize_spectrum,
    eval_nonuniform,
    mul_rows,
    pad_spectrum_rows,
    project_rows,
    spectrum_to_real,
    pf_from_lines,
    pf_to_lines,
    upsample_rows,
)


class FourierTaylor:
    """Immutable truncated power series in s with PeriodicFunction coefficients."""

    __slots__ = ("n_theta", "degree", "_samples", "_spectra")

    def __init__(self, samples: np.ndarray, spectra: np.ndarray):
        samples = np.asarray(samples, dtype=float)
        self.n_theta = int(samples.shape[-1])
        self.degree = int(samples.shape[0]) - 1
        if self.n_theta < 2:
            raise GridSizeError(f"grid size {self.n_theta} < 2")
        self._samples = samples.copy()
        self._spectra = _sanitize_spectrum(spectra, self.n_theta)
        self._samples.setflags(write=False)
        self._spectra.setflags(write=False)

    # ---- constructors ----
    @classmethod
    def from_sample_rows(cls, rows) -> "FourierTaylor":
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        return cls(rows, np.fft.rfft(rows, axis=-1) / rows.shape[-1])

    @classmethod
    def from_spectra(cls, spectra, n_theta: int) -> "FourierTaylor":
        spectra = np.atleast_2d(np.asarray(spectra, dtype=complex))
        samples = np.fft.irfft(spectra * n_theta, n=n_theta, axis=-1)
        return cls(samples, spectra)

    @classmethod
    def from_coefficients(cls, pfs) -> "FourierTaylor":
        pfs = list(pfs)
        n = pfs[0].n_theta
        for p in pfs:
            if p.n_theta != n:
                raise GridSizeError("coefficients live on different grids")
        return cls(np.stack([p.samples for p in pfs]),
                   np.stack([p.spectrum for p in pfs]))

    @classmethod
    def zeros(cls, degree: int, n_theta: int) -> "FourierTaylor":
        return cls(np.zeros((degree + 1, n_theta)),
                   np.zeros((degree + 1, _n_half(n_theta)), dtype=complex))

    @classmethod
    def s_monomial(cls, order: int, degree: int, n_theta: int, value: float = 1.0):
        """The series value * s^order."""
        rows = np.zeros((degree + 1, n_theta))
        if order <= degree:
            rows[order] = value
        return cls.from_sample_rows(rows)

    # ---- views ----
    @property
    def samples(self) -> np.ndarray:
        return self._samples

    @property
    def spectra(self) -> np.ndarray:
        return self._spectra

    def coefficient(self, j: int) -> PeriodicFunction:
        return PeriodicFunction(self._samples[j], self._spectra[j])

    def coefficients(self) -> list[PeriodicFunction]:
        return [self.coefficient(j) for j in range(self.degree + 1)]

    def truncated(self, degree: int) -> "FourierTaylor":
        """Copy with exactly degree+1 coefficients (pad with zeros or drop)."""
        d = self.degree
        if degree == d:
            return self
        if degree < d:
            return FourierTaylor(self._samples[: degree + 1],
                                 self._spectra[: degree + 1])
        pad_s = np.zeros((degree - d, self.n_theta))
        pad_c = np.zeros((degree - d, _n_half(self.n_theta)), dtype=complex)
        return FourierTaylor(np.vstack([self._samples, pad_s]),
                             np.vstack([self._spectra, pad_c]))

    def order_norms(self) -> np.ndarray:
        """L2 norm of each coefficient."""
        return np.array([self.coefficient(j).l2() for j in range(self.degree + 1)])

    def order_sups(self) -> np.ndarray:
        return np.max(np.abs(self._samples), axis=-1)

    def kcut(self, rel: float = 1e-15) -> int:
        mags = np.abs(self._spectra)
        top = mags.max()
        if top == 0.0:
            return 0
        keep = np.nonzero((mags >= rel * top).any(axis=0))[0]
        return int(keep[-1])

    # ---- derivatives in theta and s ----
    def theta_derivative(self) -> "FourierTaylor":
        n = self.n_theta
        k = 2j * np.pi * np.arange(_n_half(n))
        spec = self._spectra * k
        if n % 2 == 0:
            spec[:, -1] = 0.0
        return FourierTaylor.from_spectra(spec, n)

    def s_derivative(self) -> "FourierTaylor":
        """d/ds: coefficient j of the result is (j+1) W^{j+1}; degree drops by 1."""
        if self.degree == 0:
            return FourierTaylor.zeros(0, self.n_theta)
        j = np.arange(1, self.degree + 1)
        return FourierTaylor(self._samples[1:] * j[:, None],
                             self._spectra[1:] * j[:, None])

    def s_scaled(self) -> "FourierTaylor":
        """s * d/ds: coefficient j multiplied by j (same degree)."""
        j = np.arange(self.degree + 1)
        return FourierTaylor(self._samples * j[:, None],
                             self._spectra * j[:, None])

    def s_shifted(self, k: int, degree: int) -> "FourierTaylor":
        """Multiply by s^k, truncating to the given degree."""
        rows = np.zeros((degree + 1, self.n_theta))
        keep = min(self.degree + 1, degree + 1 - k)
        if keep > 0:
            rows[k: k + keep] = self._samples[:keep]
        return FourierTaylor.from_sample_rows(rows)

    def __repr__(self):
        return f"FourierTaylor(degree={self.degree}, n_theta={self.n_theta})"


def _common_degree(x: FourierTaylor, y: FourierTaylor, degree) -> int:
    if degree is None:
        return max(x.degree, y.degree)
    return int(degree)


def _check_grids(x: FourierTaylor, y: FourierTaylor):
    if x.n_theta != y.n_theta:
        raise GridSizeError(f"grid mismatch: {x.n_theta} vs {y.n_theta}")


# ---------------------------------------------------------------------------
# linear arithmetic
# ---------------------------------------------------------------------------

def ft_add(x: FourierTaylor, y: FourierTaylor, degree: int | None = None):
    _check_grids(x, y)
    d = _common_degree(x, y, degree)
    x, y = x.truncated(d), y.truncated(d)
    return FourierTaylor(x.samples + y.samples, x.spectra + y.spectra)


def ft_sub(x: FourierTaylor, y: FourierTaylor, degree: int | None = None):
    _check_grids(x, y)
    d = _common_degree(x, y, degree)
    x, y = x.truncated(d), y.truncated(d)
    return FourierTaylor(x.samples - y.samples, x.spectra - y.spectra)


def ft_scale(x: FourierTaylor, c: float) -> FourierTaylor:
    c = float(c)
    return FourierTaylor(x.samples * c, x.spectra * c)


def ft_mul(x: FourierTaylor, y: FourierTaylor, degree: int | None = None):
    """Cauchy product in s, each coefficient product dealiased on the 2n grid."""
    _check_grids(x, y)
    n = x.n_theta
    d = _common_degree(x, y, degree)
    m = 2 * n
    xs = upsample_rows(x.spectra, n, m)
    ys = upsample_rows(y.spectra, n, m)
    out = np.zeros((d + 1, m))
    dx, dy = x.degree, y.degree
    for c in range(d + 1):
        lo, hi = max(0, c - dy), min(dx, c)
        if lo > hi:
            continue
        # sum_{a=lo..hi} xs[a] * ys[c-a]
        out[c] = np.einsum("ij,ij->j", xs[lo:hi + 1], ys[c - hi:c - lo + 1][::-1])
    return FourierTaylor.from_spectra(project_rows(out, n), n)


def _mul_pf_rows(a_spec, b_spec, n):
    """Dealiased product of two single coefficient spectra -> samples + spectrum."""
    spec = mul_rows(a_spec, b_spec, n)
    return np.fft.irfft(spec * n, n=n), spec


# ---------------------------------------------------------------------------
# elementary functions by order recurrences
# ---------------------------------------------------------------------------

class _Work:
    """Mutable coefficient workspace on the dealiasing grid for recurrences.

    Holds sample rows on the padded 2n grid; every pairwise product is then
    alias-free for band-limited inputs, and a single band-limiting projection
    at the end returns to the working grid.
    """

    def __init__(self, ft: FourierTaylor, degree: int):
        self.n = ft.n_theta
        self.m = 2 * self.n
        self.degree = degree
        src = ft.truncated(degree)
        self.rows = upsample_rows(src.spectra, self.n, self.m)

    @classmethod
    def empty(cls, like: "_Work"):
        w = object.__new__(cls)
        w.n, w.m, w.degree = like.n, like.m, like.degree
        w.rows = np.zeros((like.degree + 1, like.m))
        return w

    def finish(self) -> FourierTaylor:
        return FourierTaylor.from_spectra(project_rows(self.rows, self.n), self.n)


def ft_exp(p: FourierTaylor, degree: int | None = None) -> FourierTaylor:
    """exp of the series via the standard jet recurrence.

    E_0 = exp P_0 pointwise on the grid and, for j >= 1,
    E_j = (1/j) sum_{k<j} (j-k) P_{j-k} E_k, a Theta(n_s^2) recurrence in
    coefficient products.
    """
    d = p.degree if degree is None else int(degree)
    w = _Work(p, d)
    e = _Work.empty(w)
    e.rows[0] = np.exp(w.rows[0])
    for j in range(1, d + 1):
        acc = np.zeros(w.m)
        for k in range(j):
            acc += (j - k) * w.rows[j - k] * e.rows[k]
        e.rows[j] = acc / j
    return e.finish()


def ft_sin_cos(q: FourierTaylor, degree: int | None = None):
    """Simultaneous sin and cos of a series.

    s_0 = sin q_0 and c_0 = cos q_0 pointwise on the grid; for j >= 1
    s_j = (1/j) sum (j-k) q_{j-k} c_k and c_j = -(1/j) sum (j-k) q_{j-k} s_k.
    """
    d = q.degree if degree is None else int(degree)
    w = _Work(q, d)
    s = _Work.empty(w)
    c = _Work.empty(w)
    s.rows[0] = np.sin(w.rows[0])
    c.rows[0] = np.cos(w.rows[0])
    for j in range(1, d + 1):
        acc_s = np.zeros(w.m)
        acc_c = np.zeros(w.m)
        for k in range(j):
            acc_s += (j - k) * w.rows[j - k] * c.rows[k]
            acc_c += (j - k) * w.rows[j - k] * s.rows[k]
        s.rows[j] = acc_s / j
        c.rows[j] = -acc_c / j
    return s.finish(), c.finish()


def ft_sqrt(p: FourierTaylor, degree: int | None = None) -> FourierTaylor:
    """Square root of a series whose order-0 coefficient is positive."""
    d = p.degree if degree is None else int(degree)
    w = _Work(p, d)
    if np.min(w.rows[0]) <= 0:
        raise ValueError("ft_sqrt needs a strictly positive order-0 coefficient")
    r = _Work.empty(w)
    r.rows[0] = np.sqrt(w.rows[0])
    for j in range(1, d + 1):
        acc = w.rows[j].copy()
        for k in range(1, j):
            acc -= r.rows[k] * r.rows[j - k]
        r.rows[j] = acc / (2.0 * r.rows[0])
    return r.finish()


def ft_recip(p: FourierTaylor, degree: int | None = None) -> FourierTaylor:
    """1 / series, for series with nonvanishing order-0 coefficient."""
    d = p.degree if degree is None else int(degree)
    w = _Work(p, d)
    if np.min(np.abs(w.rows[0])) == 0:
        raise ValueError("ft_recip needs a nonvanishing order-0 coefficient")
    u = _Work.empty(w)
    u.rows[0] = 1.0 / w.rows[0]
    for j in range(1, d + 1):
        acc = np.zeros(w.m)
        for k in range(j):
            acc += w.rows[j - k] * u.rows[k]
        u.rows[j] = -acc / w.rows[0]
    return u.finish()


# ---------------------------------------------------------------------------
# polynomial 2x2 linear systems (order recursion with pointwise A0 inverse)
# ---------------------------------------------------------------------------

def ft_linear_solve(A, b, degree: int | None = None, det_floor: float = 1e-10):
    """Solve A(theta, s) x(theta, s) = b(theta, s) for a 2x2 series matrix.

    The order-k coefficient follows the recursion
    A_0(theta) x_k = b_k - sum_{j=1..k} A_j x_{k-j}, with A_0 inverted
    pointwise on the grid in closed form.  A is ((a11, a12), (a21, a22)) and
    b is (b1, b2), all FourierTaylor on one grid.
    """
    (a11, a12), (a21, a22) = A
    b1, b2 = b
    n = b1.n_theta
    d = max(b1.degree, b2.degree) if degree is None else int(degree)

    det0 = a11.samples[0] * a22.samples[0] - a12.samples[0] * a21.samples[0]
    min_idx = int(np.argmin(np.abs(det0)))
    if np.abs(det0[min_idx]) < det_floor:
        raise SingularSystemError(np.abs(det0[min_idx]), min_idx / n)

    m = 2 * n
    A_rows = [upsample_rows(a.truncated(d).spectra, n, m) for a in (a11, a12, a21, a22)]
    b_rows = [upsample_rows(v.truncated(d).spectra, n, m) for v in (b1, b2)]
    # order-0 inverse on the padded grid (entry-wise closed form)
    det0m = A_rows[0][0] * A_rows[3][0] - A_rows[1][0] * A_rows[2][0]
    inv = (A_rows[3][0] / det0m, -A_rows[1][0] / det0m,
           -A_rows[2][0] / det0m, A_rows[0][0] / det0m)

    x1 = np.zeros((d + 1, m))
    x2 = np.zeros((d + 1, m))
    for k in range(d + 1):
        r1 = b_rows[0][k].copy()
        r2 = b_rows[1][k].copy()
        for j in range(1, k + 1):
            r1 -= A_rows[0][j] * x1[k - j] + A_rows[1][j] * x2[k - j]
            r2 -= A_rows[2][j] * x1[k - j] + A_rows[3][j] * x2[k - j]
        x1[k] = inv[0] * r1 + inv[1] * r2
        x2[k] = inv[2] * r1 + inv[3] * r2
    return (FourierTaylor.from_spectra(project_rows(x1, n), n),
            FourierTaylor.from_spectra(project_rows(x2, n), n))


# ---------------------------------------------------------------------------
# evaluation and rescaling
# ---------------------------------------------------------------------------

def ft_eval(x: FourierTaylor, theta, s, kcut: int | None = None):
    """Horner evaluation of the series at (theta, s); broadcasts over arrays."""
    theta = np.asarray(theta, dtype=float)
    s = np.asarray(s, dtype=float)
    scalar = theta.ndim == 0 and s.ndim == 0
    theta, s = np.atleast_1d(theta), np.atleast_1d(s)
    theta, s = np.broadcast_arrays(theta, s)
    vals = np.stack([eval_nonuniform(x.coefficient(j), theta, kcut=kcut)
                     for j in range(x.degree + 1)])
    out = vals[-1]
    for j in range(x.degree - 1, -1, -1):
        out = out * s + vals[j]
    return float(out[0]) if scalar else out


def rescale(x: FourierTaylor, b_old: float, b_new: float) -> FourierTaylor:
    """Change of scale s -> (b_new / b_old) s: coefficient j gains (b_new/b_old)^j."""
    if b_old <= 0 or b_new <= 0:
        raise ScaleError("scaling factors must be positive")
    r = (b_new / b_old) ** np.arange(x.degree + 1)
    return FourierTaylor(x.samples * r[:, None], x.spectra * r[:, None])


# ---------------------------------------------------------------------------
# torus maps and parameterizations
# ---------------------------------------------------------------------------

class TorusMapFT:
    """A 2-component map (theta, s) -> (value1, value2) with integer winding.

    Component i is winding_i * theta plus a FourierTaylor periodic part;
    K-type maps into the plane carry winding (0, 0), W-type maps into
    (angle, radial) carry (1, 0).
    """

    __slots__ = ("winding", "parts")

    def __init__(self, winding, parts):
        self.winding = (int(winding[0]), int(winding[1]))
        p1, p2 = parts
        if p1.n_theta != p2.n_theta:
            raise GridSizeError("components live on different grids")
        self.parts = (p1, p2)

    @classmethod
    def identity(cls, degree: int, n_theta: int) -> "TorusMapFT":
        """W(theta, s) = (theta, s)."""
        return cls((1, 0), (FourierTaylor.zeros(degree, n_theta),
                            FourierTaylor.s_monomial(1, degree, n_theta)))

    @property
    def n_theta(self) -> int:
        return self.parts[0].n_theta

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.parts)

    def truncated(self, degree: int) -> "TorusMapFT":
        return TorusMapFT(self.winding, (self.parts[0].truncated(degree),
                                         self.parts[1].truncated(degree)))

    def component_values0(self, i: int) -> np.ndarray:
        """Lifted grid values of the order-0 coefficient of component i."""
        from .periodic import grid
        base = self.winding[i] * grid(self.n_theta)
        return base + self.parts[i].samples[0]

    def eval(self, theta, s, kcut: int | None = None):
        """Evaluate both components.

        The angle is split as theta = floor + frac before any trigonometry,
        so the winding contribution is integer bookkeeping and the lift law
        holds exactly whenever theta + 1 is representable.
        """
        theta_arr = np.asarray(theta, dtype=float)
        fl = np.floor(theta_arr)
        frac = theta_arr - fl
        out = []
        for i in (0, 1):
            val = ft_eval(self.parts[i], frac, s, kcut=kcut)
            out.append(self.winding[i] * (fl + frac) + val)
        return out[0], out[1]

    def rescaled(self, b_old: float, b_new: float) -> "TorusMapFT":
        return TorusMapFT(self.winding, (rescale(self.parts[0], b_old, b_new),
                                         rescale(self.parts[1], b_old, b_new)))

    def __repr__(self):
        return (f"TorusMapFT(winding={self.winding}, degree={self.degree}, "
                f"n_theta={self.n_theta})")


@dataclass(frozen=True)
class Parameterization:
    """A torus map together with its frequency, rate and scaling factor.

    The stored coefficients are at scale ``scale_b``: coefficient j equals
    b^j times the canonical (b = 1) coefficient.  ``unscaled()`` undoes the
    scaling.
    """

    map: TorusMapFT
    omega: float
    lam: float
    scale_b: float = 1.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.lam < 0:
            raise ValueError(f"lambda must be negative, got {self.lam}")
        if not self.scale_b > 0:
            raise ScaleError(f"scale_b must be positive, got {self.scale_b}")

    @property
    def n_theta(self) -> int:
        return self.map.n_theta

    @property
    def degree(self) -> int:
        return self.map.degree

    def unscaled(self) -> "Parameterization":
        if self.scale_b == 1.0:
            return self
        return Parameterization(self.map.rescaled(self.scale_b, 1.0),
                                self.omega, self.lam, 1.0)

    def at_scale(self, b: float) -> "Parameterization":
        return Parameterization(self.map.rescaled(self.scale_b, b),
                                self.omega, self.lam, b)


# ---------------------------------------------------------------------------
# text serialization ("FT v1" / "TM v1" / "PARAM v1")
# ---------------------------------------------------------------------------

def ft_to_lines(x: FourierTaylor) -> list[str]:
    lines = [f"FT v1 degree={x.degree} n_theta={x.n_theta}"]
    for j in range(x.degree + 1):
        lines.extend(pf_to_lines(x.coefficient(j)))
    return lines


def ft_from_lines(lines, pos: int = 0) -> tuple[FourierTaylor, int]:
    header = lines[pos].split()
    if header[:2] != ["FT", "v1"]:
        raise ValueError(f"expected 'FT v1' header, got {lines[pos]!r}")
    fields = dict(item.split("=", 1) for item in header[2:])
    degree = int(fields["degree"])
    pos += 1
    pfs = []
    for _ in range(degree + 1):
        pf, pos = pf_from_lines(lines, pos)
        pfs.append(pf)
    return FourierTaylor.from_coefficients(pfs), pos


def tm_to_lines(tm: TorusMapFT) -> list[str]:
    lines = [f"TM v1 winding={tm.winding[0]},{tm.winding[1]}"]
    lines.extend(ft_to_lines(tm.parts[0]))
    lines.extend(ft_to_lines(tm.parts[1]))
    return lines


def tm_from_lines(lines, pos: int = 0) -> tuple[TorusMapFT, int]:
    header = lines[pos].split()
    if header[:2] != ["TM", "v1"]:
        raise ValueError(f"expected 'TM v1' header, got {lines[pos]!r}")
    fields = dict(item.split("=", 1) for item in header[2:])
    w1, w2 = (int(v) for v in fields["winding"].split(","))
    p1, pos = ft_from_lines(lines, pos + 1)
    p2, pos = ft_from_lines(lines, pos)
    return TorusMapFT((w1, w2), (p1, p2)), pos


def param_to_lines(p: Parameterization) -> list[str]:
    lines = [f"PARAM v1 omega={p.omega:.17g} lambda={p.lam:.17g} "
             f"scale_b={p.scale_b:.17g}"]
    lines.extend(tm_to_lines(p.map))
    return lines


def param_from_lines(lines, pos: int = 0) -> tuple[Parameterization, int]:
    header = lines[pos].split()
    if header[:2] != ["PARAM", "v1"]:
        raise ValueError(f"expected 'PARAM v1' header, got {lines[pos]!r}")
    fields = dict(item.split("=", 1) for item in header[2:])
    tm, pos = tm_from_lines(lines, pos + 1)
    return Parameterization(tm, float(fields["omega"]), float(fields["lambda"]),
                            float(fields["scale_b"])), pos
