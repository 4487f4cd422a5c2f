import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isochron.errors import GridSizeError, RegularityError
from isochron.periodic import (
    PeriodicFunction,
    antiderivative,
    dft_forward,
    dft_inverse,
    differentiate,
    eval_nonuniform,
    grid,
    holder_estimate,
    pf_from_lines,
    pf_to_lines,
    weighted_norm,
)

RNG = np.random.default_rng(12345)


def naive_dft(samples):
    """Direct O(n^2) evaluation of S_hat_k = (1/n) sum_j S_j e^{-2 pi i jk/n}."""
    n = len(samples)
    j = np.arange(n)
    out = np.empty(n // 2 + 1, dtype=complex)
    for k in range(n // 2 + 1):
        out[k] = np.sum(samples * np.exp(-2j * np.pi * j * k / n)) / n
    return out


def random_pf(n, decay=0.0, rng=RNG):
    samples = rng.standard_normal(n)
    f = PeriodicFunction.from_samples(samples)
    if decay:
        k = np.arange(n // 2 + 1)
        f = PeriodicFunction.from_spectrum(f.spectrum * np.exp(-decay * k), n)
    return f


# ---------------------------------------------------------------------------
# dft_forward / dft_inverse
# ---------------------------------------------------------------------------

def test_dft_constant():
    coeffs = dft_forward(np.full(8, 3.5))
    assert coeffs[0] == pytest.approx(7.0, abs=1e-14)
    assert np.max(np.abs(coeffs[1:])) < 1e-14


def test_dft_pure_cosine_mode():
    th = grid(8)
    coeffs = dft_forward(np.cos(2 * np.pi * th))
    # layout: a0, a4, a1, b1, a2, b2, a3, b3
    assert coeffs[2] == pytest.approx(1.0, abs=1e-14)
    mask = np.ones(8, bool)
    mask[2] = False
    assert np.max(np.abs(coeffs[mask])) < 1e-14


def test_dft_matches_naive_summation():
    samples = RNG.standard_normal(8)
    spec = PeriodicFunction.from_samples(samples).spectrum
    assert np.max(np.abs(spec - naive_dft(samples))) < 1e-13


def test_dft_invalid_sizes():
    for bad in ([], [1.0]):
        with pytest.raises(GridSizeError):
            dft_forward(np.asarray(bad))


def test_dft_inverse_zero_and_constant():
    assert np.all(dft_inverse(np.zeros(8)) == 0.0)
    coeffs = np.zeros(8)
    coeffs[0] = 2.0  # a0 = 2 means constant value a0/2 = 1
    assert np.allclose(dft_inverse(coeffs), 1.0, atol=1e-15)


@given(st.integers(min_value=2, max_value=33), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_dft_roundtrip(n, seed):
    samples = np.random.default_rng(seed).standard_normal(n)
    back = dft_inverse(dft_forward(samples))
    scale = max(1.0, np.max(np.abs(samples)))
    assert np.max(np.abs(back - samples)) < 1e-12 * scale


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_dft_linearity(seed):
    rng = np.random.default_rng(seed)
    f, g = rng.standard_normal(16), rng.standard_normal(16)
    c = rng.standard_normal()
    lhs = dft_forward(c * f + g)
    rhs = c * dft_forward(f) + dft_forward(g)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_hermitian_symmetry_of_complex_representation():
    samples = RNG.standard_normal(16)
    full = np.fft.fft(samples) / 16
    assert np.max(np.abs(full[1:] - np.conj(full[1:][::-1]))) < 1e-14
    spec = PeriodicFunction.from_samples(samples).spectrum
    assert spec[0].imag == 0.0
    assert spec[-1].imag == 0.0  # n even


def test_grid_mean_equals_half_a0():
    samples = RNG.standard_normal(64)
    f = PeriodicFunction.from_samples(samples)
    assert abs(f.mean() - samples.mean()) < 1e-14


# ---------------------------------------------------------------------------
# differentiate
# ---------------------------------------------------------------------------

def test_differentiate_constant_is_zero():
    f = PeriodicFunction.constant(4.2, 16)
    assert differentiate(f).sup() == 0.0


def test_differentiate_sine():
    th = grid(32)
    f = PeriodicFunction.from_samples(np.sin(2 * np.pi * th))
    expected = 2 * np.pi * np.cos(2 * np.pi * th)
    assert np.max(np.abs(differentiate(f).samples - expected)) < 1e-12


def test_differentiate_against_finite_differences():
    # strictly band-limited input: modes above k = 6 removed
    f = random_pf(32)
    spec = np.where(np.arange(17) <= 6, f.spectrum, 0.0)
    f = PeriodicFunction.from_spectrum(spec, 32)
    fine = grid(320)
    h = 5e-7
    fd = (eval_nonuniform(f, fine + h) - eval_nonuniform(f, fine - h)) / (2 * h)
    df = eval_nonuniform(differentiate(f), fine)
    assert np.max(np.abs(df - fd)) < 1e-8 * max(1.0, np.max(np.abs(df)))


def test_differentiate_inverts_antiderivative():
    f = random_pf(32)
    f = f - f.mean()
    back = differentiate(antiderivative(f))
    # n even: the Nyquist mode is annihilated by the convention, drop it
    expect = PeriodicFunction.from_spectrum(
        np.where(np.arange(17) == 16, 0.0, f.spectrum), 32)
    assert np.max(np.abs(back.samples - expect.samples)) < 1e-11


# ---------------------------------------------------------------------------
# eval_nonuniform
# ---------------------------------------------------------------------------

def test_eval_pure_cosine_quarter_period():
    f = PeriodicFunction.from_callable(lambda t: np.cos(2 * np.pi * t), 16)
    assert abs(eval_nonuniform(f, 0.25)) < 1e-14


def test_eval_at_grid_matches_samples():
    f = random_pf(24)
    vals = eval_nonuniform(f, grid(24))
    assert np.max(np.abs(vals - f.samples)) < 1e-12


def test_eval_zero_function():
    f = PeriodicFunction.zeros(8)
    assert np.all(eval_nonuniform(f, RNG.random(5)) == 0.0)


def test_eval_periodicity_exact():
    f = random_pf(16)
    # dyadic angles: theta + 1 is exactly representable, so the wrapped
    # residues are identical and evaluation agrees bit for bit
    th = np.arange(7) / 32.0
    assert np.array_equal(eval_nonuniform(f, th), eval_nonuniform(f, th + 1.0))
    # generic angles lose sub-ulp bits in theta + 1
    th = RNG.random(7)
    diff = eval_nonuniform(f, th) - eval_nonuniform(f, th + 1.0)
    assert np.max(np.abs(diff)) < 1e-12


def test_eval_shifted_grid():
    f = random_pf(16)
    same = eval_nonuniform(f, grid(16) + 0.0)
    assert np.array_equal(same, eval_nonuniform(f, grid(16)))
    shifted = eval_nonuniform(f, grid(16) + 0.3)
    assert np.max(np.abs(shifted - f.shift(0.3).samples)) < 1e-12


# ---------------------------------------------------------------------------
# weighted_norm
# ---------------------------------------------------------------------------

def test_weighted_norm_zero_function():
    for order in (0, 1, 3):
        assert weighted_norm(PeriodicFunction.zeros(8), order) == 0.0


def test_weighted_norm_vanishes_on_constants():
    assert weighted_norm(PeriodicFunction.constant(5.0, 8), 2) == 0.0


def test_weighted_norm_hand_value():
    f = PeriodicFunction.from_callable(lambda t: np.cos(2 * np.pi * t), 8)
    # single mode k=1 on n=8, order 0: ((8-1)^0 + 1^0) * |S_hat_1| = 2 * 0.5
    assert weighted_norm(f, 0) == pytest.approx(1.0, abs=1e-14)


def test_weighted_norm_order_monotone():
    for seed in range(5):
        f = random_pf(16, rng=np.random.default_rng(seed))
        assert weighted_norm(f, 2) >= weighted_norm(f, 1)


# ---------------------------------------------------------------------------
# holder_estimate
# ---------------------------------------------------------------------------

def closed_form_single_mode_estimate(eta, t_grid):
    # exp(-t sqrt(-Delta)) cos(2 pi theta) = e^{-2 pi t} cos(2 pi theta)
    norms = (2 * np.pi) ** eta * np.exp(-2 * np.pi * t_grid)
    slope = np.polyfit(np.log(t_grid), np.log(norms), 1)[0]
    return slope + eta


def test_holder_single_mode_matches_closed_form():
    f = PeriodicFunction.from_callable(lambda t: np.cos(2 * np.pi * t), 64)
    t_grid = np.geomspace(0.01, 0.1, 9)
    est = holder_estimate(f, 3, t_grid)
    assert est == pytest.approx(closed_form_single_mode_estimate(3, t_grid), abs=1e-10)
    assert est > 2.0


def synthetic_decay_pf(alpha, n=1024):
    k = np.arange(n // 2 + 1)
    spec = np.zeros(n // 2 + 1, dtype=complex)
    spec[1:] = k[1:] ** (-(alpha + 1.0))
    spec[-1] = 0.0
    return PeriodicFunction.from_spectrum(spec, n)


def closed_form_decay_estimate(alpha, eta, t_grid, n=1024):
    # direct summation of the filtered series, independent of the library
    k = np.arange(1, n // 2)
    norms = []
    for t in t_grid:
        term = k ** (-(alpha + 1.0)) * (2 * np.pi * k) ** eta * np.exp(-2 * np.pi * k * t)
        norms.append(2 * np.sum(term))  # the sup sits at theta = 0 (all cosines)
    slope = np.polyfit(np.log(t_grid), np.log(norms), 1)[0]
    return slope + eta


def test_holder_synthetic_decay():
    alpha = 1.5
    f = synthetic_decay_pf(alpha)
    t_grid = np.geomspace(3e-3, 5e-2, 12)
    est = holder_estimate(f, 2, t_grid)
    oracle = closed_form_decay_estimate(alpha, 2, t_grid)
    assert est == pytest.approx(oracle, abs=1e-6)
    assert abs(est - alpha) <= 0.3


def test_holder_eta_shift_on_saturated_scales():
    f = synthetic_decay_pf(1.5)
    t_grid = np.geomspace(3e-3, 5e-2, 12)
    est0 = holder_estimate(f, 0, t_grid)
    est1 = holder_estimate(f, 1, t_grid)
    assert est1 - est0 == pytest.approx(1.0, abs=0.35)


def test_holder_constant_input_raises():
    with pytest.raises(RegularityError):
        holder_estimate(PeriodicFunction.constant(1.0, 16), 1, [0.01, 0.1])


# ---------------------------------------------------------------------------
# products, immutability, serialization
# ---------------------------------------------------------------------------

def test_dealiased_product_of_modes():
    th = grid(8)
    f = PeriodicFunction.from_samples(np.cos(2 * np.pi * 3 * th))
    g = f * f  # cos^2(6 pi theta) = 1/2 + cos(12 pi theta)/2: mode 6 > Nyquist 4
    assert g.mean() == pytest.approx(0.5, abs=1e-14)
    # a plain pointwise product on the 8-grid would alias mode 6 onto mode 2
    assert abs(g.spectrum[2]) < 1e-14


def test_samples_read_only():
    f = random_pf(8)
    with pytest.raises(ValueError):
        f.samples[0] = 1.0


def test_pf_text_roundtrip():
    # 17 significant digits reproduce every stored coefficient bit for bit;
    # grid samples are re-derived by FFT and agree to roundoff
    for n in (17, 16):  # odd and even grids
        f = random_pf(n)
        g, pos = pf_from_lines(pf_to_lines(f))
        assert pos == n + 1
        assert np.array_equal(g.spectrum, f.spectrum)
        assert np.max(np.abs(g.samples - f.samples)) < 1e-14
