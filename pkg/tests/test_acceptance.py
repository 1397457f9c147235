"""Acceptance gates for the full pipeline, one test per criterion.

Each test asserts one contract property at its stated tolerance, so a
``pytest -v`` run prints one pass/fail line per gate.  Tolerances are
contract values and are never loosened; a failing gate documents a real
property of the data at the pinned parameters.

Expected runtime is a few minutes, dominated by two prime-sum samples at
the 4090441 cutoff over 1e5 bin centers and the 1e9-scale constant run.
"""

import math
import os

import numpy as np
import pytest
from scipy.integrate import quad

from zetadiff import (
    Histogram,
    apply_correction,
    atan_kernel,
    atan_kernel_series,
    build_histogram,
    const_C,
    const_for_limit,
    dft,
    eval_F,
    eval_f,
    eval_f_prime,
    fit_amplitude,
    flatness,
    load_binary,
    make_table,
    peak_amplitude,
    sample_function,
    sieve_primes,
    take_first,
)

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data", "zeros_100k.f64")

LN2 = math.log(2.0)
LN3 = math.log(3.0)
LN5 = math.log(5.0)


@pytest.fixture(scope="module")
def zeros_100k():
    return take_first(load_binary(DATA), 100000)


@pytest.fixture(scope="module")
def pt_big():
    return sieve_primes(4090441)


@pytest.fixture(scope="module")
def hist_100k(zeros_100k):
    return build_histogram(zeros_100k, bin_width=0.001, x_max=100.0)


@pytest.fixture(scope="module")
def spectrum_100k(hist_100k):
    return dft(hist_100k.counts, hist_100k.bin_width)


@pytest.fixture(scope="module")
def fit_100k(hist_100k, pt_big):
    return fit_amplitude(hist_100k, pt_big, variant="f_prime", method="spectral_lsq")


@pytest.fixture(scope="module")
def corrected_100k(hist_100k, fit_100k):
    values = apply_correction(hist_100k, fit_100k)
    return values, dft(values, hist_100k.bin_width)


def test_criterion_01_running_constant_reproduction():
    """The kernel constant approaches ~1.572 at large sieve cutoffs."""
    v_small = const_for_limit(10001963)
    assert abs(v_small - 1.572) <= 0.05
    v_large = const_for_limit(1011890441)
    assert abs(v_large - 1.572) <= 0.02


def test_criterion_02_closed_form_constants():
    """Two-prime and three-prime constants match their closed forms."""
    assert abs(const_C(sieve_primes(2)) - (-LN2 * LN2 / 2.0)) <= 1e-14
    assert abs(const_C(sieve_primes(3)) - (-LN2 * LN2)) <= 1e-14


def test_criterion_03_derivative_and_antiderivative_consistency():
    """eval_f_prime matches a finite difference of eval_f, and eval_F
    matches direct quadrature of eval_f."""
    rng = np.random.default_rng(20260814)
    pt = sieve_primes(99991)
    h = 1e-5
    xs = rng.uniform(0.05, 100.0, size=200)
    worst = 0.0
    for x in xs:
        fd = (eval_f(pt, x + h) - eval_f(pt, x - h)) / (2.0 * h)
        worst = max(worst, abs(fd - eval_f_prime(pt, x)))
    assert worst <= 1e-6

    pt_q = sieve_primes(10007)
    worst = 0.0
    for x in rng.uniform(0.1, 30.0, size=20):
        integral, _ = quad(lambda t: eval_f(pt_q, t), 0.0, x,
                           epsabs=1e-9, epsrel=1e-9, limit=600)
        worst = max(worst, abs(integral - eval_F(pt_q, x)))
    assert worst <= 1e-6


def test_criterion_04_atan_kernel_series_bound():
    """Truncating the sine series after N terms stays within the
    geometric tail bound p^-(N+1) / ((N+1)(1 - 1/p))."""
    rng = np.random.default_rng(414243)
    for p in (2, 3, 5):
        for n_terms in range(1, 13):
            bound = p ** -(n_terms + 1) / ((n_terms + 1) * (1.0 - 1.0 / p))
            for t in rng.uniform(-20.0, 20.0, size=100):
                err = abs(atan_kernel(p, t) - atan_kernel_series(p, t, n_terms))
                assert err <= bound


def test_criterion_05_function_ranges(pt_big, zeros_100k):
    """At the 4090441 cutoff the antiderivative stays in [-2, 2], its
    derivative in [-2, 5], and the derivative at nearly all of the first
    30 zero ordinates is at least 2."""
    xs = np.arange(10001, dtype=np.float64) * 0.01
    f_vals = sample_function(pt_big, "f", xs).values
    assert f_vals.min() >= -2.0 and f_vals.max() <= 2.0
    fp_vals = sample_function(pt_big, "f_prime", xs).values
    assert fp_vals.min() >= -2.0 and fp_vals.max() <= 5.0
    at_zeros = [eval_f_prime(pt_big, g) for g in zeros_100k.ordinates[:30]]
    assert sum(1 for v in at_zeros if v >= 2.0) >= 28


def _local_peak(sp, freq):
    """Highest bin within 2 bins of freq: (is local max, magnitude,
    median background over +-20 bins excluding the central 5)."""
    mags = np.hypot(sp.re, sp.im)
    j0 = int(round(freq / sp.freq_step))
    window = range(j0 - 2, j0 + 3)
    j_star = max(window, key=lambda j: mags[j])
    is_max = mags[j_star] > mags[j_star - 1] and mags[j_star] > mags[j_star + 1]
    ring = np.array([abs(j - j_star) > 2 for j in range(j_star - 20, j_star + 21)])
    background = float(np.median(mags[j_star - 20:j_star + 21][ring]))
    return is_max, float(mags[j_star]), background


def test_criterion_06_prime_log_peaks_at_desk_scale(spectrum_100k):
    """The raw 1e5-zero spectrum shows local maxima within 2 bins of
    ln 2, ln 3, ln 5 and 2 ln 2, each exceeding 3x the local median
    background."""
    for freq in (LN2, LN3, LN5, 2.0 * LN2):
        is_max, magnitude, background = _local_peak(spectrum_100k, freq)
        assert is_max, "no local maximum within 2 bins of %.4f" % freq
        assert magnitude > 3.0 * background, (
            "peak at %.4f has magnitude %.4g vs background %.4g "
            "(prominence %.2f < 3)" % (freq, magnitude, background,
                                       magnitude / background))


def test_criterion_07_correction_efficacy_at_desk_scale(
        spectrum_100k, corrected_100k):
    """Fitting and applying the derivative-kernel correction halves the
    band flatness on [0.5, 14.7] and drops the residual ln 2 line below
    1.5x its local background."""
    _, sp_after = corrected_100k
    before = flatness(spectrum_100k, 0.5, 14.7)
    after = flatness(sp_after, 0.5, 14.7)
    residual = peak_amplitude(sp_after, LN2)
    assert residual.magnitude < 1.5 * residual.background
    assert after <= 0.5 * before, (
        "flatness %.4f -> %.4f (ratio %.4f > 0.5)"
        % (before, after, after / before))


def test_criterion_08_synthetic_amplitude_recovery(hist_100k, pt_big, fit_100k):
    """A planted correction amplitude of 7.5 on a flat baseline is
    recovered within 1e-3 at the full histogram geometry."""
    sample = fit_100k.sample
    counts = 119.0 - 7.5 * sample
    planted = Histogram(bin_width=hist_100k.bin_width, x_max=hist_100k.x_max,
                        counts=counts, n_zeros=hist_100k.n_zeros)
    recovered = fit_amplitude(planted, pt_big, variant="f_prime",
                              method="spectral_lsq")
    assert recovered.amplitude == pytest.approx(7.5, abs=1e-3)


def test_criterion_09_histogram_matches_brute_force():
    """The windowed builder equals the O(N^2) brute force pair count,
    bin for bin, on 100 random tables."""
    rng = np.random.default_rng(909090)
    for trial in range(100):
        n = int(rng.integers(2, 2001))
        ords = 14.134725 + np.cumsum(rng.uniform(0.01, 3.0, size=n))
        zt = make_table(ords, source="synthetic")
        bin_width = float(rng.uniform(0.005, 0.5))
        x_max = float(rng.uniform(2.0, 40.0))
        h = build_histogram(zt, bin_width=bin_width, x_max=x_max)

        n_bins = int(math.ceil(x_max / bin_width - 1e-9))
        d = (ords[None, :] - ords[:, None])[np.triu_indices(n, k=1)]
        idx = (d / bin_width).astype(np.int64)
        keep = (d < x_max) & (idx < n_bins)
        expected = np.bincount(idx[keep], minlength=n_bins)
        assert h.n_bins == n_bins
        assert np.array_equal(h.counts, expected), "trial %d differs" % trial


def test_criterion_10_spectral_invariants(hist_100k, spectrum_100k,
                                          fit_100k, corrected_100k):
    """Parseval's identity and Hermitian symmetry hold on the raw,
    corrected, and correction-sample spectra."""
    corrected_values, sp_corr = corrected_100k
    cases = [
        (hist_100k.counts.astype(np.float64), spectrum_100k),
        (corrected_values, sp_corr),
        (fit_100k.sample, dft(fit_100k.sample, hist_100k.bin_width)),
    ]
    for series, sp in cases:
        coefs = sp.values
        power_freq = float(np.sum(np.abs(coefs) ** 2))
        power_time = float(series.size * np.sum(series * series))
        assert power_freq == pytest.approx(power_time, rel=1e-10)
        mirrored = np.conjugate(np.roll(coefs[::-1], 1))
        assert np.allclose(coefs, mirrored, rtol=0.0,
                           atol=1e-12 * float(np.max(np.abs(coefs))))
