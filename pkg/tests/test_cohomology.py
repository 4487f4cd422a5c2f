import numpy as np
import pytest

from isochron.cohomology import (
    CohomologySpec,
    apply_operator,
    average_theta,
    solve_cohomology,
)
from isochron.errors import ObstructionError, ResonanceError
from isochron.fourier_taylor import FourierTaylor, ft_add, ft_scale
from isochron.periodic import PeriodicFunction, grid

RNG = np.random.default_rng(42)


def random_rhs(degree, n, remove_obstruction=None, rng=RNG):
    x = FourierTaylor.from_sample_rows(rng.standard_normal((degree + 1, n)))
    spec = x.spectra.copy()
    spec[:, -1] = 0.0  # Nyquist column carries no d_theta action: keep it empty
    if remove_obstruction is not None:
        j, k = remove_obstruction
        spec[j, k] = 0.0
    return FourierTaylor.from_spectra(spec, n)


def test_zero_rhs_gives_zero():
    E = FourierTaylor.zeros(3, 16)
    u = solve_cohomology(E, CohomologySpec(omega=1.0, lam=-1.0))
    assert np.max(np.abs(u.samples)) == 0.0


def test_single_mode_formula():
    # omega=1, lambda=-1, shift 0, complex mode E_{0,1} = 1 (i.e. 2 cos(2 pi theta)):
    # u_{0,1} = 1 / (2 pi i), so u = sin(2 pi theta) / pi, real pair (0, 1/pi)
    n = 16
    spec = np.zeros((1, n // 2 + 1), dtype=complex)
    spec[0, 1] = 1.0
    E = FourierTaylor.from_spectra(spec, n)
    u = solve_cohomology(E, CohomologySpec(omega=1.0, lam=-1.0))
    u01 = u.spectra[0, 1]
    assert u01 == pytest.approx(1.0 / (2j * np.pi), abs=1e-15)
    a1 = 2 * u01.real
    b1 = -2 * u01.imag
    assert a1 == pytest.approx(0.0, abs=1e-15)
    assert b1 == pytest.approx(1.0 / np.pi, abs=1e-15)
    expected = np.sin(2 * np.pi * grid(n)) / np.pi
    assert np.max(np.abs(u.samples[0] - expected)) < 1e-14


def test_residual_oracle_family_one():
    spec = CohomologySpec(omega=0.14, lam=-1.68)
    E = random_rhs(4, 32, remove_obstruction=(0, 0))
    u = solve_cohomology(E, spec)
    back = apply_operator(u, spec)
    assert np.max(np.abs(back.spectra - E.spectra)) < 1e-11
    # pinned coefficient is exactly zero
    assert u.spectra[0, 0] == 0.0


def test_residual_oracle_family_two():
    spec = CohomologySpec(omega=0.14, lam=-1.68, shift=-1.68)
    E = random_rhs(4, 32, remove_obstruction=(1, 0))
    u = solve_cohomology(E, spec)
    back = apply_operator(u, spec)
    assert np.max(np.abs(back.spectra - E.spectra)) < 1e-11
    assert u.spectra[1, 0] == 0.0


def test_perturbed_order_operators():
    # order-n equations: shift 0 with divisor n*lambda at k=0 has no pinning;
    # the right-hand side lives at order n only, as in the order-n solves
    n_ord = 3
    spec = CohomologySpec(omega=0.14, lam=-1.68)
    E = random_rhs(n_ord, 32)
    rows = np.zeros_like(E.spectra)
    rows[n_ord] = E.spectra[n_ord]
    E = FourierTaylor.from_spectra(rows, 32)
    u = solve_cohomology(E, spec)
    assert u.spectra[n_ord, 0] == pytest.approx(
        E.spectra[n_ord, 0] / (n_ord * -1.68), abs=1e-15)


def test_solver_linearity():
    spec = CohomologySpec(omega=0.3, lam=-0.7)
    E = random_rhs(3, 16, remove_obstruction=(0, 0))
    F = random_rhs(3, 16, remove_obstruction=(0, 0))
    alpha = 1.7
    lhs = solve_cohomology(ft_add(ft_scale(E, alpha), F), spec)
    rhs = ft_add(ft_scale(solve_cohomology(E, spec), alpha),
                 solve_cohomology(F, spec))
    assert np.max(np.abs(lhs.spectra - rhs.spectra)) < 1e-12


def test_obstruction_error_reports_magnitude():
    spec = CohomologySpec(omega=1.0, lam=-1.0)
    E = random_rhs(2, 16)
    E = ft_add(E, FourierTaylor.s_monomial(0, 2, 16, 0.5))  # E_00 = 0.5
    with pytest.raises(ObstructionError) as err:
        solve_cohomology(E, spec)
    assert err.value.value == pytest.approx(abs(E.spectra[0, 0]), abs=1e-12)


def test_resonance_error_away_from_pinned_mode():
    # lam*2 - shift = 0 with shift = 2*lam: resonance at (j, k) = (2, 0)
    spec = CohomologySpec(omega=1.0, lam=-1.0, shift=-2.0)
    E = random_rhs(3, 16)
    with pytest.raises((ResonanceError, ObstructionError)):
        solve_cohomology(E, spec)


def test_nyquist_column_accepts_negligible_content():
    # family one, order 0: the Nyquist divisor vanishes; noise-level content
    # there is pinned to zero instead of raising
    n = 16
    spec_arr = np.zeros((1, n // 2 + 1), dtype=complex)
    spec_arr[0, 1] = 1.0
    spec_arr[0, -1] = 1e-14
    E = FourierTaylor.from_spectra(spec_arr, n)
    u = solve_cohomology(E, CohomologySpec(omega=1.0, lam=-1.0))
    assert u.spectra[0, -1] == 0.0


def test_average_theta():
    n = 16
    rows = np.vstack([np.full(n, 2.5),
                      np.cos(2 * np.pi * grid(n)),
                      RNG.standard_normal(n)])
    E = FourierTaylor.from_sample_rows(rows)
    assert average_theta(E, 0) == pytest.approx(2.5, abs=1e-14)
    assert average_theta(E, 1) == pytest.approx(0.0, abs=1e-14)
    # matches trapezoid quadrature on the periodic grid (= sample mean)
    assert average_theta(E, 2) == pytest.approx(rows[2].mean(), abs=1e-13)
    with pytest.raises(IndexError):
        average_theta(E, 5)
