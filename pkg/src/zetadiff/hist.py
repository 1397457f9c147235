"""Windowed pair-difference histograms of zero ordinates.

For an increasing ordinate sequence o_1 < o_2 < ... the histogram counts
every ordered pair (i < j) whose difference d = o_j - o_i lies below the
window x_max, binned as floor(d / bin_width).  A pair contributes exactly
when both d < x_max and the computed bin index is below the bin count;
the fast path and any brute-force cross-check must apply that rule with
the same floating-point expressions to agree pair-for-pair.

The fast path walks the j index in chunks, finds each candidate i range
by bisection with a small safety margin, and filters with the exact rule,
so the margin never changes the result.  An incremental builder exposes
the same counting for growing prefixes of a table, which makes sweeps of
histogram size cost one pass instead of one pass per size.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, GeometryError

# absolute slack for the bisection prefilter; exact masks do the real cut
_SEARCH_MARGIN = 1e-6


def _bin_count(bin_width, x_max):
    return int(math.ceil(x_max / bin_width - 1e-9))


@dataclass(eq=False)
class Histogram:
    """Pair-difference counts on [0, x_max) with uniform bins."""

    bin_width: float
    x_max: float
    counts: np.ndarray
    n_zeros: int

    @property
    def n_bins(self):
        return int(self.counts.size)

    @property
    def total_pairs(self):
        return int(self.counts.sum())

    @property
    def bin_centers(self):
        return (np.arange(self.n_bins, dtype=np.float64) + 0.5) * self.bin_width


def _check_geometry(bin_width, x_max):
    if not (bin_width > 0.0 and math.isfinite(bin_width)):
        raise DomainError("bin width must be positive, got %r" % (bin_width,))
    if not (x_max > 0.0 and math.isfinite(x_max)):
        raise DomainError("window must be positive, got %r" % (x_max,))


def _accumulate(counts, ords, j_lo, j_hi, bin_width, x_max, chunk, progress):
    n_bins = counts.size
    cut = x_max + _SEARCH_MARGIN
    for a in range(j_lo, j_hi, chunk):
        b = min(a + chunk, j_hi)
        oc = ords[a:b]
        starts = np.searchsorted(ords, oc - cut, side="left")
        jarr = np.arange(a, b, dtype=np.int64)
        lengths = jarr - starts
        total = int(lengths.sum())
        if total:
            offsets = np.cumsum(lengths) - lengths
            flat = (np.arange(total, dtype=np.int64)
                    - np.repeat(offsets, lengths)
                    + np.repeat(starts, lengths))
            d = np.repeat(oc, lengths) - ords[flat]
            idx = (d / bin_width).astype(np.int64)
            keep = (d < x_max) & (idx < n_bins)
            counts += np.bincount(idx[keep], minlength=n_bins)
        if progress is not None:
            progress("histogram", b - j_lo, j_hi - j_lo)


class IncrementalHistogram:
    """Histogram over a growing prefix of one ordinate table.

    ``extend_to(n)`` adds exactly the pairs whose larger index falls in
    the newly admitted range, so a sweep over prefix sizes touches each
    pair once.
    """

    def __init__(self, ordinates, bin_width=0.001, x_max=100.0, chunk=20000):
        _check_geometry(bin_width, x_max)
        self.ordinates = np.ascontiguousarray(ordinates, dtype=np.float64)
        self.bin_width = float(bin_width)
        self.x_max = float(x_max)
        self.chunk = int(chunk)
        self.counts = np.zeros(_bin_count(bin_width, x_max), dtype=np.int64)
        self.n_current = 0

    def extend_to(self, n, progress=None):
        if n < self.n_current or n > self.ordinates.size:
            raise DomainError(
                "prefix size %d outside [%d, %d]"
                % (n, self.n_current, self.ordinates.size))
        _accumulate(self.counts, self.ordinates, self.n_current, n,
                    self.bin_width, self.x_max, self.chunk, progress)
        self.n_current = n

    def snapshot(self):
        return Histogram(bin_width=self.bin_width, x_max=self.x_max,
                         counts=self.counts.copy(), n_zeros=self.n_current)


def build_histogram(table, bin_width=0.001, x_max=100.0, chunk=20000,
                    progress=None):
    """Histogram of all in-window pair differences of a zero table."""
    ords = table.ordinates if hasattr(table, "ordinates") else np.asarray(table)
    inc = IncrementalHistogram(ords, bin_width=bin_width, x_max=x_max, chunk=chunk)
    inc.extend_to(inc.ordinates.size, progress=progress)
    return inc.snapshot()


def merge(first, second):
    """Sum two histograms of identical geometry (disjoint pair sets)."""
    same = (first.bin_width == second.bin_width
            and first.x_max == second.x_max
            and first.n_bins == second.n_bins)
    if not same:
        raise GeometryError(
            "histograms disagree: width %r vs %r, window %r vs %r, bins %d vs %d"
            % (first.bin_width, second.bin_width, first.x_max, second.x_max,
               first.n_bins, second.n_bins))
    return Histogram(bin_width=first.bin_width, x_max=first.x_max,
                     counts=first.counts + second.counts,
                     n_zeros=first.n_zeros + second.n_zeros)


def decimate(hist, factor):
    """Combine runs of ``factor`` adjacent bins into one coarser bin.

    The factor must divide the bin count so the coarse grid covers the
    same range exactly; total pairs are conserved.
    """
    if factor < 1 or int(factor) != factor:
        raise DomainError("decimation factor must be a positive integer, got %r"
                          % (factor,))
    factor = int(factor)
    m = hist.n_bins
    if m % factor != 0:
        raise DomainError("factor %d does not divide %d bins" % (factor, m))
    return Histogram(bin_width=hist.bin_width * factor, x_max=hist.x_max,
                     counts=hist.counts.reshape(m // factor, factor).sum(axis=1),
                     n_zeros=hist.n_zeros)


def write_histogram_csv(hist, path):
    """Write ``bin_center,count`` rows; counts stay exact integers."""
    centers = hist.bin_centers
    with open(path, "w") as fh:
        fh.write("bin_center,count\n")
        for c, v in zip(centers, hist.counts):
            fh.write("%.17g,%d\n" % (c, v))
