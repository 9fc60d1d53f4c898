"""Exact and log-space combinatorics for spin-chain state counting.

Binomial coefficients stay exact (arbitrary-precision integers) up to
``EXACT_LIMIT`` and switch to log-gamma evaluation beyond, so desk-scale
identities hold to full precision while chain lengths of order 10^3
remain usable.  Combination sequences follow one canonical order,
lexicographic on 1-based site indices; every matrix basis in this
package refers back to it.

All functions here are pure and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations as _lex_combinations

from .errors import DomainError

__all__ = [
    "EXACT_LIMIT",
    "SiteList",
    "BinomialValue",
    "AdmissibleRange",
    "binomial",
    "log_binomial",
    "validate_sitelist",
    "enumerate_combinations",
    "rank_combination",
    "unrank_combination",
    "admissible_q",
    "hypergeometric_pmf",
    "binary_entropy",
]

# Largest n for which C(n, k) is carried as an exact integer.
EXACT_LIMIT = 64

SiteList = tuple[int, ...]


@dataclass(frozen=True)
class BinomialValue:
    """C(n, k) as a natural log, with the exact integer when representable."""

    log_value: float
    exact: int | None = None

    def __float__(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        return math.exp(self.log_value)


@dataclass(frozen=True)
class AdmissibleRange:
    """Inclusive range of spin-up counts a subsystem can hold."""

    q_min: int
    q_max: int

    def __iter__(self):
        return iter(range(self.q_min, self.q_max + 1))

    def __contains__(self, q) -> bool:
        return self.q_min <= q <= self.q_max

    def __len__(self) -> int:
        return self.q_max - self.q_min + 1


def _check_binomial_args(n: int, k: int) -> None:
    if n < 0:
        raise DomainError(f"binomial needs n >= 0, got n={n}")
    if k < 0 or k > n:
        raise DomainError(f"binomial needs 0 <= k <= n, got n={n}, k={k}")


def binomial(n: int, k: int) -> BinomialValue:
    """Binomial coefficient C(n, k).

    Parameters
    ----------
    n, k : int
        Population and draw sizes, 0 <= k <= n.

    Returns
    -------
    BinomialValue
        Exact integer alongside its natural log when n <= EXACT_LIMIT,
        log-gamma value alone beyond that.
    """
    _check_binomial_args(n, k)
    if n <= EXACT_LIMIT:
        exact = math.comb(n, k)
        return BinomialValue(log_value=math.log(exact), exact=exact)
    return BinomialValue(log_value=log_binomial(n, k))


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k); exact log below EXACT_LIMIT, log-gamma beyond."""
    _check_binomial_args(n, k)
    if n <= EXACT_LIMIT:
        return math.log(math.comb(n, k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def validate_sitelist(sites, n: int) -> SiteList:
    """Check a strictly increasing list of site indices within [1, n]."""
    out = []
    for s in sites:
        i = int(s)
        if i != s:
            raise DomainError(f"site indices must be integers, got {s!r}")
        out.append(i)
    for a, b in zip(out, out[1:]):
        if a >= b:
            raise DomainError(f"site indices must be strictly increasing, got {tuple(out)}")
    if out and (out[0] < 1 or out[-1] > n):
        raise DomainError(f"site indices must lie in [1, {n}], got {tuple(out)}")
    return tuple(out)


def enumerate_combinations(n: int, m: int) -> list[SiteList]:
    """All m-element site lists from {1, ..., n} in lexicographic order."""
    if n < 0 or m < 0 or m > n:
        raise DomainError(f"cannot enumerate {m}-subsets of {n} sites")
    return list(_lex_combinations(range(1, n + 1), m))


def rank_combination(sites, n: int) -> int:
    """Zero-based lexicographic rank of a site list among C(n, m) peers."""
    t = validate_sitelist(sites, n)
    m = len(t)
    rank = 0
    prev = 0
    for i, s in enumerate(t, start=1):
        for c in range(prev + 1, s):
            rank += math.comb(n - c, m - i)
        prev = s
    return rank


def unrank_combination(rank: int, n: int, m: int) -> SiteList:
    """Site list at a given lexicographic rank; inverse of rank_combination."""
    if n < 0 or m < 0 or m > n:
        raise DomainError(f"cannot unrank {m}-subsets of {n} sites")
    total = math.comb(n, m)
    if not 0 <= rank < total:
        raise DomainError(f"rank {rank} outside [0, {total}) for C({n}, {m})")
    sites = []
    prev = 0
    rem = rank
    for slots in range(m, 0, -1):
        c = prev + 1
        while True:
            block = math.comb(n - c, slots - 1)
            if rem < block:
                break
            rem -= block
            c += 1
        sites.append(c)
        prev = c
    return tuple(sites)


def admissible_q(N: int, n: int, m: int) -> AdmissibleRange:
    """Range of spin-up counts an n-site block of an N-chain with m flips admits.

    The complement holds m - q flips, so q runs from max(0, m - (N - n))
    to min(n, m).
    """
    if not 1 <= n <= N:
        raise DomainError(f"block size must satisfy 1 <= n <= N, got n={n}, N={N}")
    if not 0 <= m <= N:
        raise DomainError(f"flip count must satisfy 0 <= m <= N, got m={m}, N={N}")
    return AdmissibleRange(max(0, m - (N - n)), min(n, m))


def hypergeometric_pmf(N: int, n: int, m: int, q: int) -> float:
    """Probability that q of the m flipped spins land inside an n-site block.

    Equals C(N-n, m-q) C(n, q) / C(N, m); assembled in log space and
    exponentiated so large chains cannot overflow.
    """
    if q not in admissible_q(N, n, m):
        raise DomainError(f"q={q} outside the admissible range for N={N}, n={n}, m={m}")
    return math.exp(log_binomial(N - n, m - q) + log_binomial(n, q) - log_binomial(N, m))


def binary_entropy(x: float) -> float:
    """s(x) = -x ln x - (1-x) ln(1-x) in nats, with s(0) = s(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy needs x in [0, 1], got {x}")
    total = 0.0
    if x > 0.0:
        total -= x * math.log(x)
    if x < 1.0:
        total -= (1.0 - x) * math.log1p(-x)
    return total
