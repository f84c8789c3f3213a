import math

import numpy as np
import pytest
from scipy.special import erf

from cwtinv.errors import (
    DivergenceError,
    InputDomainError,
    StructuralError,
    UnsupportedOperationError,
)
from cwtinv.spectral import SampledSignal, forward_spectrum
from cwtinv.wavelets import (
    Gaussian,
    Morlet,
    Tabulated,
    admissibility,
    cross_admissibility,
    delta_prime_freq,
    kernel_from_spec,
    load_tabulated_csv,
    wavelet_freq,
    wavelet_time,
)

OMEGA0S = [0.0, 0.5, 1.0, 2.0, 5.0, 6.0, 10.0]
# dense trapezoid grid, independent of the quad-based construction
XS = np.linspace(-40.0, 40.0, 400001)


def odd_table(n=4001, span=10.0):
    w = np.linspace(-span, span, n)
    return w, w * np.exp(-(w**2))


@pytest.mark.parametrize("omega0", OMEGA0S)
@pytest.mark.parametrize("norm_mode", [1, 2])
def test_morlet_normalization(omega0, norm_mode):
    k = Morlet(omega0, norm_mode)
    vals = np.abs(wavelet_time(k, XS)) ** norm_mode
    assert np.trapezoid(vals, XS) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("c", [0.25, 0.5, 2.0])
@pytest.mark.parametrize("norm_mode", [1, 2])
def test_gaussian_normalization(c, norm_mode):
    k = Gaussian(c, norm_mode)
    vals = np.abs(wavelet_time(k, XS)) ** norm_mode
    assert np.trapezoid(vals, XS) == pytest.approx(1.0, abs=1e-8)


def test_closed_form_constants():
    assert Morlet(5.0, 2).norm_const == pytest.approx(math.pi**-0.25, abs=1e-8)
    assert Morlet(5.0, 2).norm_const == pytest.approx(
        math.pi**-0.25 / math.sqrt(1 + math.exp(-25.0)), abs=1e-8
    )
    assert Gaussian(0.5, 1).norm_const == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-12)
    k = Gaussian(0.7, 2)
    assert k.freq_const == pytest.approx(k.norm_const * math.sqrt(math.pi / 0.7))
    m = Morlet(3.0, 1)
    assert m.freq_const == pytest.approx(m.norm_const * math.sqrt(2 * math.pi))


@pytest.mark.parametrize("kernel", [Morlet(0.0), Morlet(5.0, 2), Gaussian(0.3)])
def test_psi0_cached_exactly(kernel):
    assert kernel.psi0 == wavelet_time(kernel, 0.0)
    assert kernel.psi0.imag == 0 and kernel.psi0.real > 0


def test_morlet_freq_values():
    k = Morlet(5.0)
    assert wavelet_freq(k, 0.0) == pytest.approx(k.freq_const * 3.726653172078671e-06, rel=1e-12)
    assert wavelet_freq(k, 5.0) == pytest.approx(k.freq_const)


@pytest.mark.parametrize(
    "kernel",
    [Morlet(0.0, 1), Morlet(1.0, 2), Morlet(5.0, 1), Morlet(6.0, 2), Gaussian(0.5, 1), Gaussian(2.0, 2)],
)
def test_time_freq_consistency(kernel):
    s = SampledSignal.on_window(lambda x: wavelet_time(kernel, x), 8192, -40.0, 40.0)
    spec = forward_spectrum(s)
    exact = wavelet_freq(kernel, spec.omega)
    band = np.abs(exact) > 1e-10 * np.max(np.abs(exact))
    err = np.linalg.norm(spec.bins[band] - exact[band]) / np.linalg.norm(exact[band])
    assert err <= 1e-6


def test_invalid_parameters():
    with pytest.raises(InputDomainError):
        Morlet(-1.0)
    with pytest.raises(InputDomainError):
        Gaussian(0.0)
    with pytest.raises(InputDomainError):
        Morlet(1.0, norm_mode=3)


class TestTabulated:
    def test_no_time_evaluation(self):
        with pytest.raises(UnsupportedOperationError):
            wavelet_time(Tabulated(*odd_table()), 0.0)

    def test_linear_interpolation_and_zero_extension(self):
        k = Tabulated([0.0, 1.0, 2.0], [0.0, 2.0, 0.0], normalize=False)
        assert wavelet_freq(k, 0.5) == pytest.approx(1.0)
        assert wavelet_freq(k, 2.5) == 0
        assert wavelet_freq(k, -0.1) == 0

    def test_energy_normalization(self):
        w = np.linspace(-12, 12, 6001)
        k = Tabulated(w, np.exp(-0.5 * (w - 6) ** 2), norm_mode=2)
        fine = np.linspace(-12, 12, 200001)
        energy = np.trapezoid(np.abs(wavelet_freq(k, fine)) ** 2, fine) / (2 * math.pi)
        assert energy == pytest.approx(1.0, rel=1e-6)

    def test_amplitude_normalization_matches_closed_form(self):
        w = np.linspace(-12, 12, 6001)
        k = Tabulated(w, np.exp(-0.5 * w**2), norm_mode=1)
        # closed form: C1 = C sqrt(2 pi) with C = 1/sqrt(2 pi), so the table scales to 1
        assert k.norm_const == pytest.approx(1.0, rel=1e-5)
        assert k.psi0 == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-5)

    def test_rejects_bad_tables(self):
        with pytest.raises(InputDomainError):
            Tabulated([0.0, 0.0, 1.0], [1, 2, 3])
        with pytest.raises(StructuralError):
            Tabulated([0.0, 1.0], [1.0])

    def test_csv_round_trip(self, tmp_path):
        w, v = odd_table(201)
        path = tmp_path / "k.csv"
        with open(path, "w") as fh:
            fh.write("omega,re,im\n")
            for a, b in zip(w, v):
                fh.write(f"{float(a)!r},{float(b)!r},0.0\n")
        k = load_tabulated_csv(path, normalize=False)
        np.testing.assert_allclose(wavelet_freq(k, w), v)

    def test_csv_requires_header(self, tmp_path):
        path = tmp_path / "k.csv"
        path.write_text("0,1\n1,2\n2,3\n")
        with pytest.raises(StructuralError):
            load_tabulated_csv(path)


class TestAdmissibility:
    def test_morlet_six_non_admissible(self):
        rep = admissibility(Morlet(6.0))
        assert rep.verdict == "non-admissible"
        assert rep.divergent and math.isinf(rep.c_psi)
        assert abs(rep.psi_hat_at_zero) == pytest.approx(math.exp(-18.0), rel=1e-9)

    @pytest.mark.parametrize("c", [0.1, 0.5, 3.0])
    def test_gaussian_non_admissible_with_log_growth(self, c):
        rep = admissibility(Gaussian(c))
        assert rep.verdict == "non-admissible" and rep.divergent
        t = rep.truncated
        # each radius step is a factor 100, so growth is 2 |psi_hat(0)|^2 ln 100
        assert t[1] - t[0] == pytest.approx(rep.log_growth_rate * math.log(100), rel=1e-3)

    def test_tabulated_admissible_value(self):
        rep = admissibility(Tabulated(*odd_table(), normalize=False))
        assert rep.verdict == "admissible" and not rep.divergent
        assert rep.c_psi == pytest.approx(0.5, abs=1e-4)

    def test_quad_tol_must_be_positive(self):
        with pytest.raises(InputDomainError):
            admissibility(Morlet(6.0), quad_tol=0.0)


class TestCrossAdmissibility:
    @pytest.mark.parametrize("c", [0.25, 0.5, 2.0])
    def test_gaussian_with_delta_prime_vanishes(self, c):
        assert abs(cross_admissibility(Gaussian(c), delta_prime_freq)) <= 1e-10

    def test_morlet_with_delta_prime(self):
        k = Morlet(6.0)
        # i C1 (int_0^inf - int_-inf^0) exp(-(w-6)^2/2) dw
        exact = 1j * k.freq_const * math.sqrt(2 * math.pi) * erf(6 / math.sqrt(2))
        val = cross_admissibility(k, delta_prime_freq)
        assert val != 0
        assert val == pytest.approx(exact, rel=1e-6)

    def test_real_even_self_pair_equals_c_psi(self):
        w = np.linspace(-10, 10, 4001)
        k = Tabulated(w, w**2 * np.exp(-(w**2)), normalize=False)
        val = cross_admissibility(k, k)
        assert abs(val.imag) < 1e-12
        assert val.real == pytest.approx(admissibility(k).c_psi, rel=1e-6)

    def test_divergent_pair(self):
        with pytest.raises(DivergenceError):
            cross_admissibility(Gaussian(0.5), Gaussian(0.5))


def test_kernel_from_spec():
    assert kernel_from_spec("morlet", omega0=2.0) == Morlet(2.0)
    assert kernel_from_spec("gaussian", norm_mode=2, c=1.0) == Gaussian(1.0, 2)
    with pytest.raises(InputDomainError):
        kernel_from_spec("haar")
