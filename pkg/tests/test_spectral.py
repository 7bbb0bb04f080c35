import math

import numpy as np
import pytest
from scipy import optimize

from biphoton import HBAR_UEV_PS, Spectrum, fwhm, truncated_decay_spectrum
from biphoton.spectral import GridTooNarrowError, default_grid

LIFETIME = 769.0
NATURAL = HBAR_UEV_PS / LIFETIME  # 0.856 ueV


class TestTruncatedDecaySpectrum:
    def test_untruncated_matches_analytic_lorentzian(self):
        spec = truncated_decay_spectrum(LIFETIME, np.inf)
        s = 1.0 / (2 * LIFETIME) - 1j * spec.energies_ueV / HBAR_UEV_PS
        np.testing.assert_allclose(spec.power, np.abs(1.0 / s) ** 2, rtol=1e-12)

    def test_finite_cut_matches_numerical_quadrature(self):
        # independent oracle: brute-force quadrature of the field integral
        from scipy.integrate import quad
        t_cut = 390.0
        spec = truncated_decay_spectrum(LIFETIME, t_cut,
                                        grid=(-5.0, 5.0, 64))
        for e, p in zip(spec.energies_ueV[::9], spec.power[::9]):
            re, _ = quad(lambda t: math.exp(-t / (2 * LIFETIME))
                         * math.cos(e * t / HBAR_UEV_PS), 0, t_cut)
            im, _ = quad(lambda t: math.exp(-t / (2 * LIFETIME))
                         * math.sin(e * t / HBAR_UEV_PS), 0, t_cut)
            assert p == pytest.approx(re * re + im * im, rel=1e-9)

    def test_vanishing_window_is_flat(self):
        spec = truncated_decay_spectrum(LIFETIME, 1e-3, grid=(-10.0, 10.0, 256))
        assert spec.power.max() / spec.power.min() < 1.01

    def test_symmetric_about_zero(self):
        spec = truncated_decay_spectrum(LIFETIME, 500.0, grid=(-8.0, 8.0, 1025))
        np.testing.assert_allclose(spec.power, spec.power[::-1], atol=1e-10 * spec.power.max())

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            truncated_decay_spectrum(-1.0, np.inf)
        with pytest.raises(ValueError):
            truncated_decay_spectrum(LIFETIME, 0.0)
        with pytest.raises(ValueError):
            truncated_decay_spectrum(LIFETIME, np.inf, grid=(1.0, -1.0, 256))
        with pytest.raises(ValueError):
            truncated_decay_spectrum(LIFETIME, np.inf, grid=(-1.0, 1.0, 32))


class TestFwhm:
    def test_lorentzian_width_within_half_percent(self):
        spec = truncated_decay_spectrum(LIFETIME, np.inf,
                                        grid=default_grid(LIFETIME))
        assert fwhm(spec) == pytest.approx(NATURAL, rel=5e-3)
        assert NATURAL == pytest.approx(0.856, abs=5e-4)

    def test_two_point_peak_tie_is_well_defined(self):
        # symmetric peak sampled twice at the top; half-crossings land at 1 and 4
        e = np.arange(6.0)
        p = np.array([0.0, 0.5, 1.0, 1.0, 0.5, 0.0])
        assert fwhm(Spectrum(e, p)) == pytest.approx(3.0, rel=1e-12)

    def test_monotone_spectrum_rejected(self):
        e = np.linspace(0, 1, 64)
        with pytest.raises(ValueError, match="peak"):
            fwhm(Spectrum(e, np.linspace(0.1, 1.0, 64)))

    def test_narrow_grid_reports_bound(self):
        spec = truncated_decay_spectrum(LIFETIME, np.inf, grid=(-0.2, 0.2, 64))
        with pytest.raises(GridTooNarrowError):
            fwhm(spec)


class TestTruncationBroadening:
    def ladder(self):
        cuts = [100.0, 390.0, 1000.0, 5000.0, np.inf]
        grid = (-40.0, 40.0, 16384)
        return [fwhm(truncated_decay_spectrum(LIFETIME, c, grid=grid)) for c in cuts]

    def test_width_ordering_matches_truncation(self):
        widths = self.ladder()
        assert all(a > b for a, b in zip(widths, widths[1:]))

    def test_which_path_erasure_at_390ps_gate(self):
        # the linewidth exceeds the 2.5 ueV splitting for every cut shorter
        # than the root of fwhm(t_cut) = 2.5, which sits well above 390 ps:
        # a 390 ps gate therefore erases the which-path information
        def width_minus_splitting(t_cut):
            spec = truncated_decay_spectrum(LIFETIME, t_cut, grid=(-60.0, 60.0, 16384))
            return fwhm(spec) - 2.5
        assert width_minus_splitting(390.0) > 0
        threshold = optimize.brentq(width_minus_splitting, 100.0, 5000.0)
        assert threshold > 390.0


def test_spectrum_validation():
    with pytest.raises(ValueError):
        Spectrum(np.array([0.0, 1.0, 1.5]), np.array([1.0, 2.0, 1.0]))  # non-uniform
    with pytest.raises(ValueError):
        Spectrum(np.array([0.0, 1.0]), np.array([1.0, -0.5]))
    spec = Spectrum(np.array([0.0, 1.0, 2.0]), np.array([1.0, 4.0, 1.0]))
    assert spec.normalized().power.max() == 1.0
