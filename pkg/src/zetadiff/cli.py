"""Command-line front end for the zero-difference pipeline.

Commands map one-to-one onto the library stages and emit plot-ready CSV
or JSON; nothing is plotted here.  All diagnostics and progress go to
stderr (at most one line per second); stdout carries only the requested
result.  Errors print one ``error_code: message`` line and exit nonzero.

A config file may hold ``key = value`` lines ('#' comments allowed) for
any long flag of the invoked command, using either dashes or
underscores in the key; explicit flags override the file.
"""

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .errors import UsageError, ZetaDiffError
from .primes import sieve_primes
from .kernel import (FunctionSample, const_for_limit, sample_function,
                     write_sample_csv)
from .zeros import load_binary, load_text, take_first
from .hist import Histogram, build_histogram, write_histogram_csv
from .spectrum import (dft, flatness, peak_amplitude, predict_peaks,
                       write_spectrum_csv)
from .correction import (FIT_FREQ_MARGIN, apply_correction, fit_amplitude,
                         fit_to_dict, write_corrected_csv, write_fit_json)

FUNCTION_FLAGS = ("g", "g-tilde", "f-prime", "f", "F", "cin")
REPORT_PEAK_F_MAX = 3.5


class _Progress:
    """Rate-limited stage/percent lines on stderr."""

    def __init__(self, min_interval=1.0):
        self.min_interval = min_interval
        self.last = 0.0

    def __call__(self, stage, done, total):
        now = time.monotonic()
        if now - self.last < self.min_interval and done < total:
            return
        self.last = now
        pct = 100.0 * done / total if total else 100.0
        sys.stderr.write("%s: %d/%d (%.0f%%)\n" % (stage, done, total, pct))
        sys.stderr.flush()


def _apply_threads(args):
    threads = getattr(args, "threads", None)
    if threads is None:
        return
    if threads < 1:
        raise UsageError("--threads must be >= 1, got %d" % threads)
    import numba

    numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))


def _load_zeros(args):
    if args.format == "binary":
        zt = load_binary(args.zeros)
    else:
        zt = load_text(args.zeros)
    if args.n_zeros is not None:
        zt = take_first(zt, args.n_zeros)
    return zt


def _read_series_csv(path, headers):
    centers = []
    values = []
    with open(path, "r") as fh:
        header = fh.readline().strip()
        if header not in headers:
            raise UsageError("%s: expected header %s, got %r"
                             % (path, " or ".join(repr(h) for h in headers), header))
        for ln, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise UsageError("%s:%d: expected two columns" % (path, ln))
            try:
                centers.append(float(parts[0]))
                values.append(float(parts[1]))
            except ValueError:
                raise UsageError("%s:%d: not numeric: %r"
                                 % (path, ln, line)) from None
    if len(centers) < 2:
        raise UsageError("%s: need at least two rows" % (path,))
    return np.asarray(centers), np.asarray(values)


def _read_histogram_csv(path, n_zeros=0):
    centers, values = _read_series_csv(path, ("bin_center,count",))
    width = centers[1] - centers[0]
    arr = values.astype(np.int64)
    if not np.array_equal(arr.astype(np.float64), values):
        raise UsageError("%s: counts must be integers" % (path,))
    return Histogram(bin_width=width, x_max=width * arr.size, counts=arr,
                     n_zeros=n_zeros)


def _json_out(payload, out):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_primes(args):
    pt = sieve_primes(args.limit)
    _json_out({"limit": pt.limit, "count": pt.count, "last": int(pt.primes[-1])},
              args.out)
    return 0


def cmd_const(args):
    value = const_for_limit(args.prime_cutoff, progress=_Progress())
    sys.stdout.write("%.15g\n" % value)
    return 0


def cmd_eval(args):
    which = args.function.replace("-", "_")
    n = int(math.floor((args.x_to - args.x_from) / args.step + 1e-9)) + 1
    if n < 1:
        raise UsageError("empty grid: x_to < x_from")
    xs = args.x_from + args.step * np.arange(n)
    pt = None
    if which != "cin":
        if args.prime_cutoff is None:
            raise UsageError("--prime-cutoff is required for %s" % args.function)
        pt = sieve_primes(args.prime_cutoff)
    _apply_threads(args)
    progress = _Progress()
    chunk = max(256, n // 32)
    vals = np.empty(n, dtype=np.float64)
    for a in range(0, n, chunk):
        b = min(a + chunk, n)
        vals[a:b] = sample_function(pt, which, xs[a:b]).values
        progress("eval %s" % args.function, b, n)
    sample = FunctionSample(which=which, cutoff=pt.limit if pt else 0,
                            x_grid=xs, values=vals)
    write_sample_csv(sample, args.out)
    return 0


def cmd_hist(args):
    zt = _load_zeros(args)
    hist = build_histogram(zt, bin_width=args.bin_width, x_max=args.x_max,
                           progress=_Progress())
    write_histogram_csv(hist, args.out)
    sys.stderr.write("zeros: %d, pairs in window: %d\n"
                     % (hist.n_zeros, hist.total_pairs))
    return 0


def cmd_fft(args):
    centers, values = _read_series_csv(
        args.hist, ("bin_center,count", "bin_center,value"))
    sp = dft(values, centers[1] - centers[0],
             normalize=(args.normalize == "yes"))
    write_spectrum_csv(sp, args.out)
    return 0


def _hist_for_fit(args):
    if args.hist is not None:
        return _read_histogram_csv(args.hist, n_zeros=args.n_zeros or 0)
    if args.zeros is None:
        raise UsageError("provide --zeros or --hist")
    zt = _load_zeros(args)
    return build_histogram(zt, bin_width=args.bin_width, x_max=args.x_max,
                           progress=_Progress())


def cmd_fit(args):
    _apply_threads(args)
    hist = _hist_for_fit(args)
    pt = sieve_primes(args.prime_cutoff)
    sys.stderr.write("sampling %s at %d bin centers, P=%d\n"
                     % (args.variant, hist.n_bins, pt.limit))
    fit = fit_amplitude(hist, pt, variant=args.variant.replace("-", "_"),
                        method=_method_name(args.method))
    _json_out(fit_to_dict(fit, counts=hist.counts), args.out)
    return 0


def cmd_correct(args):
    _apply_threads(args)
    hist = _hist_for_fit(args)
    pt = sieve_primes(args.prime_cutoff)
    sys.stderr.write("sampling %s at %d bin centers, P=%d\n"
                     % (args.variant, hist.n_bins, pt.limit))
    fit = fit_amplitude(hist, pt, variant=args.variant.replace("-", "_"),
                        method=_method_name(args.method))
    corrected = apply_correction(hist, fit)
    write_corrected_csv(hist, corrected, args.out)
    if args.fit_out:
        write_fit_json(fit, args.fit_out, counts=hist.counts)
    sys.stderr.write("amplitude: %.6f\n" % fit.amplitude)
    return 0


def cmd_report(args):
    _apply_threads(args)
    zt = _load_zeros(args)
    hist = build_histogram(zt, bin_width=args.bin_width, x_max=args.x_max,
                           progress=_Progress())
    pt = sieve_primes(args.prime_cutoff)
    sys.stderr.write("sampling %s at %d bin centers, P=%d\n"
                     % (args.variant, hist.n_bins, pt.limit))
    fit = fit_amplitude(hist, pt, variant=args.variant.replace("-", "_"),
                        method=_method_name(args.method))
    corrected = apply_correction(hist, fit)
    raw = hist.counts.astype(np.float64)
    sp_before = dft(raw, hist.bin_width)
    sp_after = dft(corrected, hist.bin_width)
    band_hi = min(pt.log_limit, math.pi / hist.bin_width) - FIT_FREQ_MARGIN
    flat_before = flatness(sp_before, 0.5, band_hi)
    flat_after = flatness(sp_after, 0.5, band_hi)
    peaks = []
    for pred in predict_peaks(pt, min(REPORT_PEAK_F_MAX, band_hi)):
        before = peak_amplitude(sp_before, pred.freq)
        after = peak_amplitude(sp_after, pred.freq)
        peaks.append({
            "p": pred.p,
            "n": pred.n,
            "freq": pred.freq,
            "rel_amplitude": pred.rel_amplitude,
            "freq_measured": before.freq_refined,
            "magnitude_before": before.magnitude,
            "background_before": before.background,
            "prominence_before": before.prominence,
            "magnitude_after": after.magnitude,
            "prominence_after": after.prominence,
        })
    payload = {
        "params": {
            "zeros": args.zeros,
            "n_zeros": hist.n_zeros,
            "bin_width": hist.bin_width,
            "x_max": hist.x_max,
            "prime_cutoff": pt.limit,
            "variant": args.variant.replace("-", "_"),
            "method": _method_name(args.method),
        },
        "fit": fit_to_dict(fit, counts=hist.counts),
        "flatness_band": [0.5, band_hi],
        "flatness_before": flat_before,
        "flatness_after": flat_after,
        "peaks": peaks,
        "tool_version": __version__,
    }
    _json_out(payload, args.out)
    return 0


def _method_name(flag_value):
    return {"spectral": "spectral_lsq", "spatial": "spatial_lsq"}[flag_value]


# ---------------------------------------------------------------------------
# parser and config plumbing


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="zetadiff",
        description="Zero-difference histogram, spectrum, and prime-sum "
                    "correction pipeline.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_zero_flags(p):
        p.add_argument("--zeros", help="path to a zero-ordinate table")
        p.add_argument("--format", choices=("text", "binary"), default="text")
        p.add_argument("--n-zeros", type=int, default=None,
                       help="use only the first N ordinates")

    def add_hist_flags(p):
        p.add_argument("--bin-width", type=float, default=0.001)
        p.add_argument("--x-max", type=float, default=100.0)

    def add_fit_flags(p):
        p.add_argument("--prime-cutoff", type=int, default=4090441)
        p.add_argument("--variant", choices=("g", "g-tilde", "f-prime"),
                       default="f-prime")
        p.add_argument("--method", choices=("spectral", "spatial"),
                       default="spectral")

    def add_common(p):
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--config", default=None,
                       help="key = value defaults for this command")

    p = sub.add_parser("primes", help="sieve and summarize a prime table")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--out", default=None)
    add_common(p)
    p.set_defaults(func=cmd_primes)

    p = sub.add_parser("const", help="limit constant for a prime cutoff")
    p.add_argument("--prime-cutoff", type=int, required=True)
    add_common(p)
    p.set_defaults(func=cmd_const)

    p = sub.add_parser("eval", help="sample a kernel-family function to CSV")
    p.add_argument("--function", choices=FUNCTION_FLAGS, required=True)
    p.add_argument("--prime-cutoff", type=int, default=None)
    p.add_argument("--x-from", type=float, default=0.0)
    p.add_argument("--x-to", type=float, default=100.0)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--out", required=True)
    add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("hist", help="pair-difference histogram to CSV")
    add_zero_flags(p)
    add_hist_flags(p)
    p.add_argument("--out", required=True)
    add_common(p)
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("fft", help="transform a histogram CSV to freq,re,im")
    p.add_argument("--hist", required=True)
    p.add_argument("--normalize", choices=("yes", "no"), default="yes")
    p.add_argument("--out", required=True)
    add_common(p)
    p.set_defaults(func=cmd_fft)

    p = sub.add_parser("fit", help="fit the correction amplitude")
    add_zero_flags(p)
    add_hist_flags(p)
    p.add_argument("--hist", default=None,
                   help="fit a histogram CSV instead of rebuilding from zeros")
    add_fit_flags(p)
    p.add_argument("--out", default=None)
    add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("correct", help="fit, apply, and export the corrected series")
    add_zero_flags(p)
    add_hist_flags(p)
    p.add_argument("--hist", default=None)
    add_fit_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--fit-out", default=None)
    add_common(p)
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("report", help="end-to-end JSON report")
    add_zero_flags(p)
    add_hist_flags(p)
    add_fit_flags(p)
    p.add_argument("--out", default=None)
    add_common(p)
    p.set_defaults(func=cmd_report)

    return parser


def _parse_config_file(path):
    entries = []
    with open(path, "r") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError("%s:%d: expected 'key = value'" % (path, ln))
            key, value = line.split("=", 1)
            key = key.strip().replace("_", "-")
            value = value.strip()
            if not key or not value:
                raise UsageError("%s:%d: empty key or value" % (path, ln))
            entries.append((key, value))
    return entries


def _inject_config(argv):
    """Expand --config into flag pairs placed before explicit flags."""
    path = None
    cleaned = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--config":
            if i + 1 >= len(argv):
                raise UsageError("--config needs a path")
            path = argv[i + 1]
            i += 2
            continue
        if tok.startswith("--config="):
            path = tok.split("=", 1)[1]
            i += 1
            continue
        cleaned.append(tok)
        i += 1
    if path is None:
        return argv
    if not cleaned or cleaned[0].startswith("-"):
        raise UsageError("--config requires a command")
    injected = []
    for key, value in _parse_config_file(path):
        injected.extend(("--" + key, value))
    return [cleaned[0]] + injected + cleaned[1:]


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _inject_config(argv)
        parser = _build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except ZetaDiffError as exc:
        sys.stderr.write("%s: %s\n" % (exc.code, exc))
        return 1
    except OSError as exc:
        sys.stderr.write("io_error: %s\n" % (exc,))
        return 1


if __name__ == "__main__":
    sys.exit(main())
