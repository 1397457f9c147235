"""Numerical laboratory for pair-difference statistics of zeta zeros.

Pipeline: load a zero table, histogram the in-window pair differences,
transform, locate prime-log peaks, fit the kernel-family correction
amplitude, and quantify the flatness of the corrected spectrum.
"""

__version__ = "0.1.0"

from .errors import (
    ZetaDiffError,
    DomainError,
    ParseError,
    ValidationError,
    FormatError,
    RangeError,
    GeometryError,
    DegenerateFitError,
    UsageError,
)
from .primes import PrimeTable, prime_blocks, sieve_primes
from .kernel import (
    FunctionSample,
    atan_kernel,
    atan_kernel_series,
    cin,
    const_C,
    const_for_limit,
    eval_F,
    eval_f,
    eval_f_prime,
    eval_g,
    eval_g_tilde,
    sample_function,
    write_sample_csv,
)
from .zeros import (
    ZeroTable,
    load_binary,
    load_text,
    make_table,
    take_first,
    write_binary,
    write_text,
)
from .hist import (
    Histogram,
    IncrementalHistogram,
    build_histogram,
    decimate,
    merge,
    write_histogram_csv,
)
from .spectrum import (
    PeakMeasurement,
    PeakPrediction,
    Spectrum,
    dft,
    dtft_at,
    flatness,
    peak_amplitude,
    predict_peaks,
    write_spectrum_csv,
)
from .correction import (
    CorrectionFit,
    amplitude_table,
    apply_correction,
    fit_amplitude,
    fit_frequencies,
    fit_to_dict,
    moving_average,
    sample_correction,
    write_corrected_csv,
    write_fit_json,
)

__all__ = [
    "ZetaDiffError", "DomainError", "ParseError", "ValidationError",
    "FormatError", "RangeError", "GeometryError", "DegenerateFitError",
    "UsageError",
    "PrimeTable", "prime_blocks", "sieve_primes",
    "FunctionSample", "atan_kernel", "atan_kernel_series", "cin",
    "const_C", "const_for_limit", "eval_F", "eval_f", "eval_f_prime",
    "eval_g", "eval_g_tilde", "sample_function", "write_sample_csv",
    "ZeroTable", "load_binary", "load_text", "make_table", "take_first",
    "write_binary", "write_text",
    "Histogram", "IncrementalHistogram", "build_histogram", "decimate",
    "merge", "write_histogram_csv",
    "PeakMeasurement", "PeakPrediction", "Spectrum", "dft", "dtft_at",
    "flatness", "peak_amplitude", "predict_peaks", "write_spectrum_csv",
    "CorrectionFit", "amplitude_table", "apply_correction", "fit_amplitude",
    "fit_frequencies", "fit_to_dict", "moving_average", "sample_correction",
    "write_corrected_csv", "write_fit_json",
    "__version__",
]
