"""Prime generation with a segmented sieve of Eratosthenes.

The rest of the package consumes primes together with their logarithms, so
the central type bundles ``primes`` with precomputed ``log_p`` and
``log2_p = (ln p)^2`` arrays.  Limits up to about 10^9 are routine; the
segmented layout keeps the working set at one block of odd flags regardless
of the limit.  Consumers that must not materialize every prime at once
(for example the running-constant evaluation at 10^9) iterate over
:func:`prime_blocks` instead.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError

# one flag per odd number; 2^21 odds cover a span of 2^22 integers per block
_BLOCK_ODDS = 1 << 21

_LIMIT_CAP = 1 << 40


@dataclass
class PrimeTable:
    """All primes p <= limit, ascending, with their logarithms.

    Attributes
    ----------
    limit : int
        Inclusive sieving bound P.  The cutoff logarithm ``ln P`` used by
        the function family is ``log(limit)`` whether or not the limit
        itself is prime.
    primes : ndarray of int64
    log_p : ndarray of float64
    log2_p : ndarray of float64, equal to log_p**2
    """

    limit: int
    primes: np.ndarray
    log_p: np.ndarray
    log2_p: np.ndarray
    primes_f: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.primes_f is None:
            self.primes_f = self.primes.astype(np.float64)

    @property
    def count(self):
        return int(self.primes.size)

    @property
    def log_limit(self):
        return math.log(self.limit)


def _simple_sieve(limit):
    """Boolean sieve up to limit inclusive, small limits only."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return np.flatnonzero(flags).astype(np.int64)


def prime_blocks(limit, block_odds=_BLOCK_ODDS):
    """Yield ascending, disjoint int64 arrays that together cover all
    primes <= limit.

    The first block starts with 2.  Memory stays bounded by the block size,
    which makes this suitable for streaming sums over primes at limits
    where a full table would not fit comfortably.
    """
    if limit < 2:
        raise DomainError("prime limit must be at least 2, got %r" % (limit,))
    if limit > _LIMIT_CAP:
        raise DomainError("prime limit above 2^40 is not supported")
    root = math.isqrt(limit)
    base = _simple_sieve(max(root, 3))
    base_odd = base[1:]  # skip 2; even composites never enter odd blocks

    lo = 3
    first = True
    while lo <= limit:
        span = 2 * block_odds
        hi = min(lo + span, limit + 1)  # half open [lo, hi), lo odd
        n_odds = (hi - lo + 1) // 2
        flags = np.ones(n_odds, dtype=bool)
        for p in base_odd:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start < hi:
                flags[(start - lo) // 2 :: p] = False
        block = lo + 2 * np.flatnonzero(flags).astype(np.int64)
        if first:
            block = np.concatenate(([np.int64(2)], block))
            first = False
        if block.size:
            yield block
        lo = hi if hi % 2 == 1 else hi + 1
    if first:
        # limit == 2: the odd loop never ran
        yield np.array([2], dtype=np.int64)


def sieve_primes(limit):
    """Build a :class:`PrimeTable` of all primes <= limit.

    Raises
    ------
    DomainError
        If limit < 2 or limit exceeds 2^40.
    """
    blocks = list(prime_blocks(limit))
    primes = np.concatenate(blocks)
    pf = primes.astype(np.float64)
    lp = np.log(pf)
    return PrimeTable(limit=int(limit), primes=primes, log_p=lp, log2_p=lp * lp,
                      primes_f=pf)
