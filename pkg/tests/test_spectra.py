import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twophoton.errors import DomainError
from twophoton.spectra import (
    UNIT_DENSITY,
    AsymmetricGaussianProduct,
    RegularizedSpdc,
    SpectralDensity,
    SymmetricBasisPair,
    SymmetricGaussianProduct,
    Tabulated,
    TimeShiftedProduct,
    asymmetry_G,
    eval_f,
    eval_F,
    load_tabulated,
    save_tabulated,
    symmetrize,
)

freqs = st.floats(-20, 40, allow_nan=False)


def test_symmetric_gaussian_peak():
    assert eval_f(SymmetricGaussianProduct(10, 1), 10, 10) == 1.0


def test_asymmetric_gaussian_peak():
    assert eval_f(AsymmetricGaussianProduct(10, 9.5, 1), 10, 9.5) == 1.0


def test_time_shifted_phase():
    value = eval_f(TimeShiftedProduct(10, 1, 2.0), 10, 10)
    assert value == pytest.approx(cmath.exp(-20j), abs=1e-15)
    assert abs(value) == pytest.approx(1.0)


def test_eval_F_unit_density_halves_f():
    spec = AsymmetricGaussianProduct(10, 9, 1)
    assert eval_F(spec, UNIT_DENSITY, 9.7, 8.8) == 0.5 * eval_f(spec, 9.7, 8.8)


def test_eval_F_constant_density():
    flat = Tabulated([0, 1], [0, 1], np.ones((2, 2)))
    assert eval_F(flat, SpectralDensity.constant(2.0), 0.5, 0.5) == pytest.approx(2.0)


def test_eval_F_gaussian_density():
    flat = Tabulated([0, 20], [0, 20], np.ones((2, 2)))
    value = eval_F(flat, SpectralDensity.gaussian(10, 1), 10, 11)
    assert value == pytest.approx(0.5 * math.exp(-0.5), rel=1e-14)
    assert value == pytest.approx(0.3033, abs=1e-4)


def test_negative_density_rejected():
    with pytest.raises(DomainError):
        SpectralDensity(lambda w: -np.ones_like(w))(1.0)


def test_asymmetry_vanishes_on_diagonal():
    spec = AsymmetricGaussianProduct(10, 9, 1)
    assert asymmetry_G(spec, UNIT_DENSITY, 9.3, 9.3) == 0


def test_asymmetry_closed_form():
    spec = AsymmetricGaussianProduct(10, 9, 1)
    expected = 0.5 * (1 - math.exp(-1))
    assert asymmetry_G(spec, UNIT_DENSITY, 10, 9) == pytest.approx(expected, rel=1e-14)


@given(freqs, freqs)
def test_symmetric_gaussian_is_exchange_symmetric(w, wt):
    spec = SymmetricGaussianProduct(10, 1.3)
    assert eval_f(spec, w, wt) == eval_f(spec, wt, w)
    assert asymmetry_G(spec, UNIT_DENSITY, w, wt) == 0


@given(freqs, freqs, st.floats(0.1, 3), st.floats(-5, 5))
def test_asymmetry_is_antisymmetric(w, wt, sigma, shift):
    for spec in (
        AsymmetricGaussianProduct(10, 8.7, sigma),
        TimeShiftedProduct(10, sigma, shift),
        RegularizedSpdc(20, sigma, 0.3),
    ):
        assert asymmetry_G(spec, UNIT_DENSITY, w, wt) == -asymmetry_G(spec, UNIT_DENSITY, wt, w)


@given(freqs, freqs, st.floats(-10, 10))
def test_time_shift_modulus_independent_of_shift(w, wt, shift):
    shifted = abs(eval_f(TimeShiftedProduct(10, 1, shift), w, wt))
    plain = abs(eval_f(TimeShiftedProduct(10, 1, 0.0), w, wt))
    assert shifted == pytest.approx(plain, rel=1e-15, abs=1e-300)


@given(freqs, freqs)
def test_zero_shift_matches_symmetric_gaussian(w, wt):
    assert eval_f(TimeShiftedProduct(10, 1, 0.0), w, wt) == eval_f(SymmetricGaussianProduct(10, 1), w, wt)


def test_spdc_default_epsilon():
    assert RegularizedSpdc(20, 2.0).epsilon == pytest.approx(0.02)


def test_spdc_concentrates_on_antidiagonal():
    eps = 0.05
    spec = RegularizedSpdc(20, 1, eps)
    w = np.linspace(2, 18, 801)
    vals = np.abs(spec(w[:, None], w[None, :]))
    off = np.abs(w[:, None] + w[None, :] - 20) > 6 * eps
    assert vals[off].max() < 1e-6 * vals.max()


def test_basis_pair_peaks_are_normalized(brute):
    spec = SymmetricBasisPair(10, 9, 0.05)
    total = brute(lambda a, b: spec(a, b).real, 8.5, 10.5, 1601)
    assert total == pytest.approx(2 / math.sqrt(2), rel=1e-8)
    assert spec.symmetric


def test_tabulated_bilinear_and_exact_at_nodes():
    x = np.linspace(0, 1, 5)
    vals = x[:, None] + 2j * x[None, :] ** 2
    tab = Tabulated(x, x, vals)
    assert tab(0.25, 0.5) == pytest.approx(vals[1, 2])
    # bilinear between nodes 0.5 and 0.75 in omega2: 2*(0.25 + 0.5625)/2
    assert tab(0.0, 0.625) == pytest.approx(1j * (0.5 + 1.125) / 2 * 1.0)


def test_tabulated_out_of_grid_names_axis():
    x = np.linspace(0, 1, 5)
    tab = Tabulated(x, x, np.ones((5, 5)))
    with pytest.raises(DomainError, match="omega2"):
        tab(0.5, 1.5)
    with pytest.raises(DomainError, match="axis omega "):
        tab(-0.1, 0.5)


def test_tabulated_shape_checked():
    with pytest.raises(DomainError):
        Tabulated([0, 1, 2], [0, 1], np.ones((2, 2)))


def test_symmetrize_fixed_point():
    axis = np.linspace(6, 14, 33)
    sym = symmetrize(SymmetricGaussianProduct(10, 1), axis)
    direct = SymmetricGaussianProduct(10, 1)(axis[:, None], axis[None, :])
    np.testing.assert_array_equal(sym.values, direct)


def test_symmetrize_splits_one_sided_peak():
    axis = np.arange(5.0)
    vals = np.zeros((5, 5), complex)
    vals[1, 3] = 1.0
    sym = symmetrize(Tabulated(axis, axis, vals))
    assert sym.values[1, 3] == 0.5 and sym.values[3, 1] == 0.5
    assert np.count_nonzero(sym.values) == 2


def test_symmetrize_asymmetric_gaussian():
    axis = np.linspace(6, 14, 129)
    sym = symmetrize(AsymmetricGaussianProduct(10, 9.5, 1), axis)
    G = asymmetry_G(sym, UNIT_DENSITY, axis[:, None], axis[None, :])
    assert np.max(np.abs(G)) < 1e-12
    assert sym.symmetric


def test_symmetrize_idempotent():
    axis = np.linspace(6, 14, 65)
    once = symmetrize(TimeShiftedProduct(10, 1, 1.5), axis)
    np.testing.assert_array_equal(symmetrize(once).values, once.values)


def test_symmetrize_needs_square_grid():
    tab = Tabulated(np.linspace(0, 1, 4), np.linspace(0, 2, 4), np.ones((4, 4)))
    with pytest.raises(DomainError):
        symmetrize(tab)


def test_grid_file_roundtrip(tmp_path):
    axis = np.linspace(6, 14, 17)
    axis2 = np.linspace(5, 15, 9)
    spec = TimeShiftedProduct(10, 1, 0.7)
    tab = Tabulated(axis, axis2, spec(axis[:, None], axis2[None, :]))
    path = tmp_path / "grid.txt"
    save_tabulated(tab, path)
    header = path.read_text().splitlines()[0]
    assert header.startswith("# ") and len(header[1:].split()) == 6
    back = load_tabulated(path)
    np.testing.assert_array_equal(back.values, tab.values)
    np.testing.assert_allclose(back.omega2, axis2, rtol=1e-15)


def test_grid_file_row_count_checked(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("# 0 1 2 0 1 2\n1 0\n1 0\n1 0\n")
    with pytest.raises(DomainError):
        load_tabulated(path)
