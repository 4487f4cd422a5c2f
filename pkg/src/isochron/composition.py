"""Composition of periodic functions and maps with Fourier-Taylor arguments.

All compositions here reduce to one pattern: a periodic function S evaluated
at a torus argument q(theta, s) = q0(theta) + Delta(theta, s) whose deviation
Delta has no order-0 part.  Two interchangeable combination schemes are
provided and cross-checked:

* table mode - the triangular composition table with generation rule
  a_ij = (1/(i-1)) (d/ds a_{i-1,j} + a_{i-1,j-1} dq/ds), run per grid point
  (vectorized across the grid).  The cell constants a_ij(0) depend only on
  the deviation, so one table serves any number of functions S.

* ad mode - jets of exp(2 pi i k q) in Fourier: since Delta = O(s), the
  terminating expansion exp(2 pi i k Delta) = sum_d (2 pi i k)^d Delta^d / d!
  combines with the carrier phases exp(2 pi i k q0).  Summing over modes
  first turns the per-mode jet sum into derivative values
  d^l S / d theta^l (q0), which is how it is evaluated here.

Both consume the same nonuniformly-evaluated derivative data; they differ in
the purely polynomial combination step, which is what the cross-check
exercises.  Derivative values amplify mode k content by (2 pi k)^l, so all
nonuniform evaluations truncate trailing spectral content at the relative
round-off floor first.
"""

from __future__ import annotations

import numpy as np

from .errors import ContractViolationError, GridSizeError, RangeViolationError
from .fourier_taylor import (
    FourierTaylor,
    Parameterization,
    TorusMapFT,
    ft_add,
    ft_exp,
    ft_mul,
    ft_scale,
    ft_sin_cos,
)
from .periodic import NOISE_REL, PeriodicFunction, grid


def effective_kcut(spectra: np.ndarray, rel: float = NOISE_REL) -> int:
    """Last mode index carrying content above the relative noise floor."""
    mags = np.abs(np.atleast_2d(spectra))
    top = mags.max()
    if top == 0.0:
        return 0
    keep = np.nonzero((mags >= rel * top).any(axis=0))[0]
    return int(keep[-1])


class ComposeEngine:
    """Nonuniform-evaluation engine bound to one set of order-0 angles.

    Caches the phase matrix exp(2 pi i k theta_p) for the (fixed) evaluation
    angles; repeated compositions against the same base angles then cost one
    matrix product each.
    """

    def __init__(self, arg0_values: np.ndarray, n_theta: int):
        self.n_theta = int(n_theta)
        self.points = np.mod(np.asarray(arg0_values, dtype=float), 1.0)
        self._phases = np.ones((1, self.points.size), dtype=complex)

    def phase_matrix(self, kmax: int) -> np.ndarray:
        have = self._phases.shape[0] - 1
        if kmax > have:
            k = np.arange(have + 1, kmax + 1)
            new = np.exp(2j * np.pi * np.outer(k, self.points))
            self._phases = np.vstack([self._phases, new])
        return self._phases[: kmax + 1]

    def derivative_values(self, spectra: np.ndarray, l_max: int,
                          rel: float = NOISE_REL) -> np.ndarray:
        """Values of d^l S/d theta^l at the engine's angles, l = 0..l_max.

        ``spectra`` is a stack (F, n//2 + 1) of normalized half-spectra on the
        engine's grid; returns a real array (F, l_max + 1, p).
        """
        spectra = np.atleast_2d(np.asarray(spectra, dtype=complex))
        kcut = effective_kcut(spectra, rel)
        n = self.n_theta
        coef = spectra[:, : kcut + 1].copy()
        w = np.full(kcut + 1, 2.0)
        w[0] = 1.0
        if kcut == n // 2 and n % 2 == 0:
            w[-1] = 1.0
        coef *= w
        k = np.arange(kcut + 1, dtype=float)
        dfac = (2j * np.pi * k)[None, :] ** np.arange(l_max + 1)[:, None]
        if kcut == n // 2 and n % 2 == 0:
            dfac[1:, -1] = 0.0  # Nyquist carries no d_theta action
        phases = self.phase_matrix(kcut)
        # (F, l, K) x (K, p) -> (F, l, p)
        weighted = coef[:, None, :] * dfac[None, :, :]
        flat = weighted.reshape(-1, kcut + 1) @ phases
        return flat.real.reshape(spectra.shape[0], l_max + 1, -1)


def _deviation_rows(delta: FourierTaylor, degree: int) -> FourierTaylor:
    """Validate the zero-order-0 contract and pad/truncate to the degree."""
    scale = max(1.0, float(np.max(np.abs(delta.samples))))
    if np.max(np.abs(delta.samples[0])) > 1e-12 * scale:
        raise ContractViolationError(
            "torus-argument deviation must have zero order-0 coefficient")
    return delta.truncated(degree)


def deviation_powers(delta: FourierTaylor, degree: int) -> np.ndarray:
    """Tensor P[d, c, :] with the order-c coefficient samples of Delta^d / d!."""
    delta = _deviation_rows(delta, degree)
    n = delta.n_theta
    out = np.zeros((degree + 1, degree + 1, n))
    out[0, 0] = 1.0
    power = FourierTaylor.s_monomial(0, degree, n)
    for d in range(1, degree + 1):
        power = ft_scale(ft_mul(power, delta, degree=degree), 1.0 / d)
        out[d] = power.samples
    return out


def table_cells(delta: FourierTaylor, degree: int,
                collect: list | None = None) -> np.ndarray:
    """Cell constants C[c, l, :] = a_{c+1, l+1}(0) of the composition table.

    Filled row by row with the generation rule; row i only ever holds
    polynomials of degree k + 1 - i, and every product is plain per-grid-point
    polynomial arithmetic.  If ``collect`` is a list, the full polynomial
    cells are appended as dicts {column j: coefficient rows} per row.
    """
    delta = _deviation_rows(delta, degree)
    k = degree
    n = delta.n_theta
    qp = delta.samples[1:] * np.arange(1, k + 1)[:, None] if k else \
        np.zeros((0, n))
    C = np.zeros((k + 1, k + 1, n))
    C[0, 0] = 1.0
    # previous row cells, keyed by column j (1-based); row 1 is a_{1,1} = 1
    prev = {1: np.concatenate([np.ones((1, n)), np.zeros((k, n))])}
    if collect is not None:
        collect.append(prev)
    for i in range(2, k + 2):
        cap = k + 1 - i
        cur = {}
        for j in range(2, i + 1):
            cell = np.zeros((cap + 1, n))
            up = prev.get(j)
            if up is not None:
                # d/ds of the cell above, truncated to this row's degree
                m = min(cap + 1, up.shape[0] - 1)
                if m > 0:
                    cell[:m] += up[1:m + 1] * np.arange(1, m + 1)[:, None]
            left = prev.get(j - 1)
            if left is not None and k:
                # left-neighbor cell times dq/ds, truncated likewise
                for c in range(cap + 1):
                    hi = min(c, left.shape[0] - 1)
                    lo = max(0, c - (k - 1))
                    for a in range(lo, hi + 1):
                        t = c - a
                        if t < qp.shape[0]:
                            cell[c] += left[a] * qp[t]
            cell /= (i - 1)
            cur[j] = cell
            C[i - 1, j - 1] = cell[0]
        prev = cur
        if collect is not None:
            collect.append(cur)
    return C


def compose_table(derivs, q: FourierTaylor, degree: int | None = None) -> FourierTaylor:
    """Truncated series of S o q from derivative values of S at q's order 0.

    ``derivs`` holds d^l S/dx^l evaluated at q0 per grid point (scalars,
    arrays or PeriodicFunction, l = 0..degree); q supplies the deviation via
    its higher-order coefficients.
    """
    k = q.degree if degree is None else int(degree)
    if len(derivs) < k + 1:
        raise ValueError(f"need {k + 1} derivative values, got {len(derivs)}")
    n = q.n_theta
    U = np.empty((1, k + 1, n))
    for l in range(k + 1):
        v = derivs[l]
        if isinstance(v, PeriodicFunction):
            v = v.samples
        U[0, l] = np.broadcast_to(np.asarray(v, dtype=float), (n,))
    qt = q.truncated(k)
    delta = FourierTaylor.from_sample_rows(
        np.vstack([np.zeros((1, n)), qt.samples[1:]]))
    data = table_cells(delta, k)
    return FourierTaylor.from_sample_rows(combine(U, data, "table")[0])


def combine(U: np.ndarray, data: np.ndarray, mode: str) -> np.ndarray:
    """Contract derivative values with combination data -> sample rows."""
    if mode == "ad":
        # sum_d S^(d)(q0) * [Delta^d / d!]_c
        return np.einsum("Fdn,dcn->Fcn", U, data)
    if mode == "table":
        # p_c = sum_l a_{c+1, l+1}(0) S^(l)(q0)
        return np.einsum("cln,Fln->Fcn", data, U)
    raise ValueError(f"unknown composition mode {mode!r}")


def build_deviation_data(delta: FourierTaylor, degree: int, mode: str) -> np.ndarray:
    if mode == "ad":
        return deviation_powers(delta, degree)
    if mode == "table":
        return table_cells(delta, degree)
    raise ValueError(f"unknown composition mode {mode!r}")


def compose_periodic_with_torus_arg(S: PeriodicFunction, arg0, arg_higher,
                                    degree: int | None = None,
                                    mode: str = "ad") -> FourierTaylor:
    """Series of S(arg0(theta) + arg_higher(theta, s)).

    ``arg0`` is the order-0 angle as lifted grid values (array) or a
    PeriodicFunction; ``arg_higher`` must have zero order-0 coefficient.
    """
    if isinstance(arg0, PeriodicFunction):
        arg0 = arg0.samples
    d = arg_higher.degree if degree is None else int(degree)
    engine = ComposeEngine(arg0, S.n_theta)
    U = engine.derivative_values(S.spectrum[None, :], d)
    data = build_deviation_data(arg_higher, d, mode)
    return FourierTaylor.from_sample_rows(combine(U, data, mode)[0])


def horner_radial(comp_rows, w2: FourierTaylor, degree: int):
    """sum_j comp_rows[j] * w2^j by Horner; comp_rows are FourierTaylor."""
    acc = comp_rows[-1]
    for j in range(len(comp_rows) - 2, -1, -1):
        acc = ft_add(ft_mul(acc, w2, degree=degree), comp_rows[j], degree=degree)
    return acc


def radial_range_bound(w2: FourierTaylor) -> float:
    """Upper bound for sup_{theta, |s|<=1} |w2(theta, s)|."""
    return float(np.sum(np.max(np.abs(w2.samples), axis=-1)))


def compose_K_with_W(K: Parameterization, W, mode: str = "ad",
                     degree: int | None = None,
                     range_slack: float = 1e-9):
    """Fourier-Taylor series of K o W, one series per plane component.

    K is used at its canonical scale; W may be a TorusMapFT or a
    Parameterization (its stored coefficients are composed as given).  The
    radial part must satisfy the domain bound sum_j sup |W2^j| <= 1.
    """
    Wmap = W.map if isinstance(W, Parameterization) else W
    Kc = K.unscaled()
    if Wmap.n_theta != Kc.n_theta:
        raise GridSizeError(f"grid mismatch: {Kc.n_theta} vs {Wmap.n_theta}")
    d = Wmap.degree if degree is None else int(degree)
    w1 = Wmap.parts[0].truncated(d)
    w2 = Wmap.parts[1].truncated(d)
    bound = radial_range_bound(w2)
    if bound > 1.0 + range_slack:
        raise RangeViolationError(bound)

    engine = ComposeEngine(Wmap.component_values0(0), Kc.n_theta)
    delta = FourierTaylor.from_sample_rows(
        np.vstack([np.zeros((1, Kc.n_theta)), w1.samples[1:]]))
    data = build_deviation_data(delta, d, mode)
    spectra = np.vstack([Kc.map.parts[0].spectra, Kc.map.parts[1].spectra])
    U = engine.derivative_values(spectra, d)
    rows = combine(U, data, mode)
    m = Kc.map.parts[0].degree + 1
    comp1 = [FourierTaylor.from_sample_rows(rows[j]) for j in range(m)]
    comp2 = [FourierTaylor.from_sample_rows(rows[m + j]) for j in range(m)]
    return horner_radial(comp1, w2, d), horner_radial(comp2, w2, d)


def shift_and_rescale(W: TorusMapFT, dtheta: float, factor: float) -> TorusMapFT:
    """The map (theta, s) -> W(theta + dtheta, factor * s), spectrally exact.

    This is the direct route to the delayed argument for a constant delay
    beta: dtheta = -omega beta and factor = exp(-lambda beta).
    """
    parts = []
    for i in (0, 1):
        pfs = [c.shift(dtheta) for c in W.parts[i].coefficients()]
        x = FourierTaylor.from_coefficients(pfs)
        x = FourierTaylor(x.samples * factor ** np.arange(x.degree + 1)[:, None],
                          x.spectra * factor ** np.arange(x.degree + 1)[:, None])
        if W.winding[i]:
            spec = x.spectra.copy()
            spec[0, 0] += W.winding[i] * dtheta
            x = FourierTaylor.from_spectra(spec, x.n_theta)
        parts.append(x)
    return TorusMapFT(W.winding, tuple(parts))


def delay_series(delay, u: FourierTaylor, degree: int) -> FourierTaylor:
    """r(u(theta, s)) for a scalar analytic delay function r.

    The model supplies closed-form derivative callbacks d^j r/dx^j; they are
    evaluated at the order-0 coefficient of u and fed to the composition
    table (scalar-derivative inputs, one table for the whole grid).
    """
    derivs = delay.derivs(u.samples[0], degree)
    return compose_table(derivs, u, degree)


def delayed_argument(W: Parameterization, K: Parameterization, delay,
                     degree: int | None = None, mode: str = "ad",
                     KW1: FourierTaylor | None = None) -> TorusMapFT:
    """The delay-shifted map W~(theta, s) = W(theta - omega R, s e^{-lambda R})
    with R = r(K o W).

    Built in four steps: the delay series R from the first component of
    K o W; the shifted angle A = theta - omega R split into its order-0 part
    and higher orders; the radial factor g = exp(-lambda R); and each
    coefficient of W composed at A, multiplied by (s g)^j and summed.
    The result is at the same coefficient scale as W.
    """
    Wmap = W.map
    d = Wmap.degree if degree is None else int(degree)
    n = Wmap.n_theta
    if KW1 is None:
        KW1 = compose_K_with_W(K, Wmap, mode=mode, degree=d)[0]
    R = delay_series(delay, KW1.truncated(d), d)

    theta = grid(n)
    A0 = theta - W.omega * R.samples[0]
    A_higher = FourierTaylor.from_sample_rows(
        np.vstack([np.zeros((1, n)), -W.omega * R.samples[1:]]))
    g = ft_exp(ft_scale(R, -W.lam), degree=d)

    engine = ComposeEngine(A0, n)
    data = build_deviation_data(A_higher, d, mode)
    spectra = np.vstack([Wmap.parts[0].spectra, Wmap.parts[1].spectra])
    U = engine.derivative_values(spectra, d)
    rows = combine(U, data, mode)
    nw = Wmap.parts[0].degree + 1

    gpow = FourierTaylor.s_monomial(0, d, n)
    out1 = FourierTaylor.from_sample_rows(
        np.vstack([(A0 - theta)[None, :], A_higher.samples[1:]]))
    out2 = FourierTaylor.zeros(d, n)
    for j in range(min(nw, d + 1)):
        if j > 0:
            gpow = ft_mul(gpow, g, degree=d - j)
        c1 = FourierTaylor.from_sample_rows(rows[j])
        c2 = FourierTaylor.from_sample_rows(rows[nw + j])
        t1 = ft_mul(c1, gpow, degree=d - j).s_shifted(j, d)
        t2 = ft_mul(c2, gpow, degree=d - j).s_shifted(j, d)
        out1 = ft_add(out1, t1)
        out2 = ft_add(out2, t2)
    return TorusMapFT(Wmap.winding, (out1, out2))


def compose_permode_reference(S: PeriodicFunction, arg0, arg_higher,
                              degree: int) -> FourierTaylor:
    """Literal mode-by-mode trigonometric composition, for validation only.

    Computes sin/cos jets of 2 pi k (q0 + Delta) per Fourier mode with the
    standard recurrences and accumulates a_k cos + b_k sin directly.  Slow
    but structurally independent of the table and of the collapsed-mode-sum
    evaluation used in production.
    """
    if isinstance(arg0, PeriodicFunction):
        arg0 = arg0.samples
    n = S.n_theta
    kcut = effective_kcut(S.spectrum[None, :])
    delta = _deviation_rows(arg_higher, degree)
    base = FourierTaylor.from_sample_rows(
        np.vstack([arg0[None, :], delta.samples[1:]]))
    out = FourierTaylor.zeros(degree, n)
    spec = S.spectrum
    out = ft_add(out, FourierTaylor.s_monomial(0, degree, n, spec[0].real))
    for k in range(1, kcut + 1):
        sk, ck = ft_sin_cos(ft_scale(base, 2.0 * np.pi * k), degree=degree)
        a_k = 2.0 * spec[k].real
        b_k = -2.0 * spec[k].imag
        if k == n // 2 and n % 2 == 0:
            a_k, b_k = spec[k].real, 0.0
        out = ft_add(out, ft_add(ft_scale(ck, a_k), ft_scale(sk, b_k)))
    return out
