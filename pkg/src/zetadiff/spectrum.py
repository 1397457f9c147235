"""Fourier analysis of difference histograms and prime-log peak work.

Transforms use the angular convention H(f_j) = sum_k s_k exp(-i f_j k d)
with f_j = 2 pi j / (M d), so a tone cos(w x) in the series shows up at
f = w; prime-log structure lands at n ln p directly.  An ordinary-
frequency convention would misplace every peak by a factor 2 pi, which is
why the convention is stated here and in the CSV header docs.

Display normalization divides by the raw zero-frequency component so the
DC entry becomes exactly 1.  No windowing is applied anywhere; the series
length is transformed as-is and recorded by the caller.

Peak prediction enumerates prime powers: a kernel-sum tone at n ln p has
coefficient (ln p)^2 / p^n, so at the fundamental the envelope across
primes falls off like (ln p)^2 / p while harmonics of one prime decay by
p^(1-n).  Peak measurement refines the nearest-bin magnitude by 3-point
quadratic interpolation and reports the median magnitude of the 40
surrounding bins (excluding the central 5) as local background.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, RangeError


@dataclass(eq=False)
class Spectrum:
    """Full-length transform with angular frequency resolution freq_step."""

    freq_step: float
    re: np.ndarray
    im: np.ndarray
    normalized: bool

    @property
    def n(self):
        return int(self.re.size)

    @property
    def sample_spacing(self):
        return 2.0 * math.pi / (self.n * self.freq_step)

    @property
    def nyquist(self):
        return math.pi / self.sample_spacing

    @property
    def values(self):
        return self.re + 1j * self.im

    @property
    def freqs(self):
        return np.arange(self.n, dtype=np.float64) * self.freq_step


@dataclass
class PeakPrediction:
    """Expected spectral line of the prime-power tone (p, n)."""

    p: int
    n: int
    freq: float
    rel_amplitude: float


@dataclass
class PeakMeasurement:
    """Measured line near a requested frequency, with local background."""

    freq_requested: float
    bin_index: int
    freq_refined: float
    amplitude: complex
    magnitude: float
    background: float

    @property
    def prominence(self):
        if self.background == 0.0:
            return math.inf
        return self.magnitude / self.background


def dft(series, delta_x, normalize=False):
    """Transform a real series sampled at spacing delta_x.

    H(f_j) = sum_k s_k exp(-i f_j k delta_x) at f_j = 2 pi j/(M delta_x),
    computed by the FFT, which matches that sum bit-for-bit in exact
    arithmetic.  With ``normalize`` the result is divided by H(0) and the
    DC entry pinned to exactly 1.
    """
    s = np.asarray(series, dtype=np.float64)
    if s.ndim != 1 or s.size == 0:
        raise DomainError("series must be a nonempty 1-d array")
    if not delta_x > 0:
        raise DomainError("sample spacing must be positive, got %r" % (delta_x,))
    h = np.fft.fft(s)
    step = 2.0 * math.pi / (s.size * delta_x)
    re = h.real
    im = h.imag
    if normalize:
        dc = re[0]
        if dc == 0.0:
            raise DomainError("cannot normalize a spectrum with zero DC component")
        re = re / dc
        im = im / dc
        re[0] = 1.0
        im[0] = 0.0
    return Spectrum(freq_step=step, re=re, im=im, normalized=bool(normalize))


def dtft_at(series, delta_x, freqs):
    """Exact transform sum of a real series at arbitrary frequencies."""
    s = np.asarray(series, dtype=np.float64)
    if s.ndim != 1 or s.size == 0:
        raise DomainError("series must be a nonempty 1-d array")
    k = np.arange(s.size, dtype=np.float64) * delta_x
    out = np.empty(len(freqs), dtype=np.complex128)
    for i, f in enumerate(freqs):
        ph = f * k
        out[i] = np.dot(s, np.cos(ph)) - 1j * np.dot(s, np.sin(ph))
    return out


def predict_peaks(pt, f_max):
    """All prime-power lines (p, n) with n ln p <= f_max, sorted by frequency.

    ``rel_amplitude`` is the tone coefficient (ln p)^2 / p^n of the kernel
    sum, whose fundamental envelope across primes is (ln p)^2 / p and
    whose harmonics for one prime scale by p^(1-n).
    """
    if not f_max > math.log(2.0):
        raise DomainError("f_max must exceed ln 2, got %r" % (f_max,))
    peaks = []
    for p, lp, l2p in zip(pt.primes, pt.log_p, pt.log2_p):
        if lp > f_max:
            break
        n_top = int(math.floor(f_max / lp + 1e-12))
        for n in range(1, n_top + 1):
            peaks.append(PeakPrediction(p=int(p), n=n, freq=n * lp,
                                        rel_amplitude=l2p / float(p) ** n))
    peaks.sort(key=lambda pk: pk.freq)
    return peaks


def _magnitude(sp, j):
    j = j % sp.n
    return math.hypot(sp.re[j], sp.im[j])


def peak_amplitude(sp, freq):
    """Measure the spectral line nearest ``freq`` (0 < freq < Nyquist).

    The magnitude of the nearest bin is refined by fitting a parabola
    through the three neighboring magnitudes; the complex value keeps the
    central bin's phase.  Background is the median magnitude over the 40
    bins within +-20 of the peak, excluding the central 5.
    """
    if not 0.0 < freq < sp.nyquist:
        raise RangeError("frequency %r outside (0, %r)" % (freq, sp.nyquist))
    half = sp.n // 2
    j0 = int(round(freq / sp.freq_step))
    j0 = min(max(j0, 1), half)
    y1 = _magnitude(sp, j0 - 1)
    y2 = _magnitude(sp, j0)
    y3 = _magnitude(sp, j0 + 1)
    denom = y1 - 2.0 * y2 + y3
    if denom == 0.0:
        shift = 0.0
        height = y2
    else:
        shift = 0.5 * (y1 - y3) / denom
        shift = min(max(shift, -0.5), 0.5)
        height = y2 - 0.25 * (y1 - y3) * shift
    lo = max(1, j0 - 20)
    hi = min(half, j0 + 20)
    ring = [abs(j - j0) > 2 for j in range(lo, hi + 1)]
    mags = np.hypot(sp.re[lo:hi + 1], sp.im[lo:hi + 1])[np.array(ring)]
    background = float(np.median(mags)) if mags.size else 0.0
    phase = math.atan2(sp.im[j0], sp.re[j0])
    return PeakMeasurement(
        freq_requested=float(freq),
        bin_index=j0,
        freq_refined=(j0 + shift) * sp.freq_step,
        amplitude=height * complex(math.cos(phase), math.sin(phase)),
        magnitude=float(height),
        background=background,
    )


def flatness(sp, f_lo, f_hi):
    """Dispersion of the real part over a band: std(Re) / mean(|Re|)."""
    if not (0.0 < f_lo < f_hi < sp.nyquist):
        raise DomainError("band [%r, %r] must satisfy 0 < lo < hi < Nyquist %r"
                          % (f_lo, f_hi, sp.nyquist))
    j_lo = int(math.ceil(f_lo / sp.freq_step - 1e-9))
    j_hi = int(math.floor(f_hi / sp.freq_step + 1e-9))
    j_lo = max(j_lo, 0)
    j_hi = min(j_hi, sp.n // 2)
    if j_hi < j_lo:
        raise DomainError("band [%r, %r] contains no frequency bins" % (f_lo, f_hi))
    band = sp.re[j_lo:j_hi + 1]
    scale = float(np.mean(np.abs(band)))
    if scale == 0.0:
        return 0.0
    return float(np.std(band)) / scale


def write_spectrum_csv(sp, path):
    """Write ``freq,re,im`` rows for bins up to the Nyquist index."""
    half = sp.n // 2
    with open(path, "w") as fh:
        fh.write("freq,re,im\n")
        for j in range(half + 1):
            fh.write("%.17g,%.17g,%.17g\n"
                     % (j * sp.freq_step, sp.re[j], sp.im[j]))
