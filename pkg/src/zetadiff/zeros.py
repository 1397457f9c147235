"""Loading, validating, and writing tables of zeta-zero ordinates.

A zero table is the increasing sequence of positive imaginary parts of
the nontrivial zeros, starting from the first (14.134725...).  Text
tables carry one ordinate per line (six or more decimals is plenty for
millibin histogram work); binary tables are raw little-endian float64.
Loaders validate ordering, positivity, and — so that a wrong file fails
fast — the identity of the leading entry.  :func:`make_table` skips the
leading-entry check so synthetic sequences can use the same machinery.
Empty tables are valid but degenerate.
"""

from dataclasses import dataclass, field
import os

import numpy as np

from .errors import FormatError, ParseError, RangeError, ValidationError

FIRST_ZERO = 14.134725
FIRST_ZERO_TOL = 5e-6


@dataclass(eq=False)
class ZeroTable:
    """Strictly increasing positive ordinates, first zero first."""

    ordinates: np.ndarray
    source: str = field(default="")

    @property
    def count(self):
        return int(self.ordinates.size)

    @property
    def span(self):
        return float(self.ordinates[-1] - self.ordinates[0])


def _validate(ordinates, check_first):
    if ordinates.size == 0:
        return
    if not np.all(np.isfinite(ordinates)):
        raise ValidationError("zero table contains non-finite entries")
    if ordinates[0] <= 0.0:
        raise ValidationError("ordinates must be positive, first is %r"
                              % (float(ordinates[0]),))
    diffs = np.diff(ordinates)
    if diffs.size and not np.all(diffs > 0.0):
        bad = int(np.flatnonzero(diffs <= 0.0)[0])
        raise ValidationError(
            "ordinates must be strictly increasing; entry at index %d (%r) "
            "does not exceed index %d (%r)"
            % (bad + 1, float(ordinates[bad + 1]), bad, float(ordinates[bad])))
    if check_first and abs(float(ordinates[0]) - FIRST_ZERO) >= FIRST_ZERO_TOL:
        raise ValidationError(
            "table must start at the first zero ordinate %.6f (+-%g), got %r"
            % (FIRST_ZERO, FIRST_ZERO_TOL, float(ordinates[0])))


def make_table(ordinates, source="synthetic"):
    """Wrap an explicit ordinate sequence, validating order and sign only."""
    arr = np.ascontiguousarray(np.asarray(ordinates, dtype=np.float64))
    if arr.ndim != 1:
        raise ValidationError("ordinates must form a 1-d sequence")
    _validate(arr, check_first=False)
    return ZeroTable(ordinates=arr, source=source)


def load_text(path, check_first=True):
    """Read a one-ordinate-per-line text table; '#' starts a comment."""
    vals = []
    with open(path, "r") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                vals.append(float(line))
            except ValueError:
                raise ParseError("%s:%d: not a number: %r" % (path, ln, line)) from None
    arr = np.asarray(vals, dtype=np.float64)
    _validate(arr, check_first)
    return ZeroTable(ordinates=arr, source=path)


def load_binary(path, check_first=True):
    """Read a raw little-endian float64 table (no header)."""
    size = os.path.getsize(path)
    if size % 8 != 0:
        raise FormatError("%s: size %d is not a multiple of 8 bytes" % (path, size))
    arr = np.fromfile(path, dtype="<f8").astype(np.float64)
    _validate(arr, check_first)
    return ZeroTable(ordinates=arr, source=path)


def take_first(table, n):
    """The leading n ordinates as a new table (n may be 0)."""
    if n < 0 or n > table.count:
        raise RangeError("requested %d zeros, table has %d" % (n, table.count))
    return ZeroTable(ordinates=np.ascontiguousarray(table.ordinates[:n]),
                     source="%s[:%d]" % (table.source, n))


def write_text(table, path):
    with open(path, "w") as fh:
        for v in table.ordinates:
            fh.write("%.17g\n" % (v,))


def write_binary(table, path):
    table.ordinates.astype("<f8").tofile(path)
