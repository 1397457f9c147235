"""Amplitude fitting and application of the prime-sum correction.

A difference histogram carries tones at the prime-log frequencies whose
common scale depends only on how many zeros built it.  The correction
workflow samples one member of the kernel family at the bin centers,
fits the single amplitude A that cancels those tones when the sample is
ADDED to the counts (corrected = counts + A * sample, so A comes out
negative against planted positive content), and reports how flat the
corrected spectrum became.

Two fitting methods:

* spectral_lsq (primary): closed-form one-dimensional least squares over
  the exact transform values at the fit frequencies {n ln p : p <= 20,
  n ln p <= min(ln P, Nyquist) - 0.5}; A = -Re sum H conj(G) / sum |G|^2.
  Both series are mean-subtracted before the transform: the fit
  frequencies are off-grid, and the transform of an un-subtracted mean
  leaks into every off-grid frequency at up to ~2/(f d) times the mean,
  which at desk scale is an order of magnitude larger than the tones
  being fitted.  Mean subtraction removes that leakage exactly and
  leaves the tone content untouched.

* spatial_lsq (cross-check): least squares in bin space against a
  centered moving-average baseline (window 2001 bins).  The regressor
  column is passed through the same baseline filter as the counts;
  regressing the high-passed counts on a raw (unfiltered) sample would
  shrink the fitted amplitude by roughly the ratio of smooth-to-tone
  power in the sample, an order of magnitude here.

The fitted object records everything needed to reproduce the fit and can
be serialized to JSON next to a digest of the exact counts it saw.
"""

from dataclasses import dataclass, field
import hashlib
import json
import math

import numpy as np

from . import __version__ as _tool_version
from .errors import DegenerateFitError, DomainError, GeometryError
from .kernel import sample_function
from .hist import IncrementalHistogram
from .spectrum import dft, dtft_at, flatness

VARIANTS = ("g", "g_tilde", "f_prime")
METHODS = ("spectral_lsq", "spatial_lsq")

FIT_PRIME_CAP = 20
FIT_FREQ_MARGIN = 0.5
BASELINE_WINDOW = 2001
MIN_FIT_BINS = 10_000


@dataclass
class CorrectionFit:
    """One fitted correction amplitude and its context."""

    n_zeros: int
    cutoff: int
    bin_width: float
    amplitude: float
    variant: str
    fit_freqs: list
    residual_flatness: float
    method: str
    sample: np.ndarray = field(default=None, repr=False, compare=False)


def fit_frequencies(pt, bin_width):
    """Prime-power frequencies used by the spectral fit."""
    cap = min(pt.log_limit, math.pi / bin_width) - FIT_FREQ_MARGIN
    freqs = []
    for p, lp in zip(pt.primes, pt.log_p):
        if p > FIT_PRIME_CAP:
            break
        n = 1
        while n * lp <= cap:
            freqs.append(n * lp)
            n += 1
    freqs.sort()
    return freqs


def sample_correction(pt, hist, variant):
    """Evaluate the chosen kernel-family member at every bin center."""
    if variant not in VARIANTS:
        raise DomainError("variant must be one of %s, got %r"
                          % (", ".join(VARIANTS), variant))
    return sample_function(pt, variant, hist.bin_centers).values


def moving_average(values, window=BASELINE_WINDOW):
    """Centered moving average with windows shrunk at the edges.

    Integer input is accumulated in int64, so the baseline of a count
    series is exact up to the final division.
    """
    v = np.asarray(values)
    if window < 1 or window % 2 == 0:
        raise DomainError("window must be odd and positive, got %r" % (window,))
    n = v.size
    half = window // 2
    acc_dtype = np.int64 if np.issubdtype(v.dtype, np.integer) else np.float64
    csum = np.zeros(n + 1, dtype=acc_dtype)
    np.cumsum(v, dtype=acc_dtype, out=csum[1:])
    idx = np.arange(n)
    lo = np.maximum(idx - half, 0)
    hi = np.minimum(idx + half + 1, n)
    return (csum[hi] - csum[lo]).astype(np.float64) / (hi - lo)


def _check_fit_inputs(hist, pt, variant, method):
    if variant not in VARIANTS:
        raise DomainError("variant must be one of %s, got %r"
                          % (", ".join(VARIANTS), variant))
    if method not in METHODS:
        raise DomainError("method must be one of %s, got %r"
                          % (", ".join(METHODS), method))
    if hist.n_bins < MIN_FIT_BINS:
        raise DomainError("histogram too coarse to fit: %d bins < %d"
                          % (hist.n_bins, MIN_FIT_BINS))
    if hist.total_pairs <= 0:
        raise DomainError("histogram holds no pairs")


def _fit_with_sample(hist, pt, sample, variant, method):
    counts = hist.counts.astype(np.float64)
    freqs = fit_frequencies(pt, hist.bin_width)
    if method == "spectral_lsq":
        if not freqs:
            raise DegenerateFitError("no fit frequencies below the cutoff band")
        h = dtft_at(counts - counts.mean(), hist.bin_width, freqs)
        g = dtft_at(sample - sample.mean(), hist.bin_width, freqs)
        gpow = float(np.sum(np.abs(g) ** 2))
        if np.max(np.abs(g)) < 1e-12:
            raise DegenerateFitError(
                "correction sample has no spectral content at the fit frequencies")
        amp = -float(np.sum((h * np.conj(g)).real)) / gpow
    else:
        resid = counts - moving_average(hist.counts)
        design = sample - moving_average(sample)
        dpow = float(np.dot(design, design))
        if dpow < 1e-24:
            raise DegenerateFitError("correction sample is flat after filtering")
        amp = -float(np.dot(resid, design)) / dpow
    corrected = counts + amp * sample
    sp = dft(corrected, hist.bin_width)
    band_hi = min(pt.log_limit, math.pi / hist.bin_width) - FIT_FREQ_MARGIN
    resid_flat = flatness(sp, 0.5, band_hi)
    return CorrectionFit(
        n_zeros=hist.n_zeros,
        cutoff=pt.limit,
        bin_width=hist.bin_width,
        amplitude=amp,
        variant=variant,
        fit_freqs=freqs,
        residual_flatness=resid_flat,
        method=method,
        sample=sample,
    )


def fit_amplitude(hist, pt, variant="f_prime", method="spectral_lsq"):
    """Fit the correction amplitude for one histogram."""
    _check_fit_inputs(hist, pt, variant, method)
    sample = sample_correction(pt, hist, variant)
    return _fit_with_sample(hist, pt, sample, variant, method)


def apply_correction(hist, fit, pt=None):
    """counts + A * sample as a float array.

    Uses the sample stored on the fit when present; a prime table may be
    supplied to re-evaluate it instead.
    """
    if fit.bin_width != hist.bin_width:
        raise GeometryError("fit bin width %r does not match histogram %r"
                            % (fit.bin_width, hist.bin_width))
    sample = fit.sample
    if sample is None:
        if pt is None:
            raise DomainError("fit carries no sample; pass the prime table")
        if pt.limit != fit.cutoff:
            raise DomainError("prime table limit %d does not match fit cutoff %d"
                              % (pt.limit, fit.cutoff))
        sample = sample_correction(pt, hist, fit.variant)
    if sample.size != hist.n_bins:
        raise GeometryError("sample length %d does not match %d bins"
                            % (sample.size, hist.n_bins))
    return hist.counts.astype(np.float64) + fit.amplitude * sample


def amplitude_table(zt, n_values, pt, bin_width=0.001, x_max=100.0,
                    variant="f_prime", method="spectral_lsq", progress=None):
    """Fits for several zero-count prefixes of one table.

    The histogram grows incrementally through the sorted prefix sizes and
    the correction sample is evaluated once, so the sweep costs one
    histogram pass plus one fit per distinct size.
    """
    for n in n_values:
        if n < 1 or n > zt.count:
            raise DomainError("prefix size %d outside [1, %d]" % (n, zt.count))
    inc = IncrementalHistogram(zt.ordinates, bin_width=bin_width, x_max=x_max)
    sample = None
    fits = {}
    for n in sorted(set(int(n) for n in n_values)):
        inc.extend_to(n, progress=progress)
        hist = inc.snapshot()
        _check_fit_inputs(hist, pt, variant, method)
        if sample is None:
            sample = sample_correction(pt, hist, variant)
        fits[n] = _fit_with_sample(hist, pt, sample, variant, method)
    return [fits[int(n)] for n in n_values]


def fit_to_dict(fit, counts=None):
    """JSON-ready dict of a fit; optionally digests the counts it saw."""
    out = {
        "n_zeros": fit.n_zeros,
        "cutoff": fit.cutoff,
        "bin_width": fit.bin_width,
        "amplitude": fit.amplitude,
        "variant": fit.variant,
        "method": fit.method,
        "fit_freqs": [float(f) for f in fit.fit_freqs],
        "residual_flatness": fit.residual_flatness,
        "tool_version": _tool_version,
    }
    if counts is not None:
        h = hashlib.sha256(np.ascontiguousarray(counts, dtype=np.int64).tobytes())
        out["counts_sha256"] = h.hexdigest()
    return out


def write_fit_json(fit, path, counts=None):
    with open(path, "w") as fh:
        json.dump(fit_to_dict(fit, counts=counts), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_corrected_csv(hist, corrected, path):
    """Write ``bin_center,value`` rows of a corrected series."""
    centers = hist.bin_centers
    with open(path, "w") as fh:
        fh.write("bin_center,value\n")
        for c, v in zip(centers, corrected):
            fh.write("%.17g,%.17g\n" % (c, v))
