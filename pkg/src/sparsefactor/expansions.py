"""Sparse signed-power-of-two representations and their enumeration.

The canonical form used everywhere is the nonadjacent form (NAF): the unique
signed-binary expansion with no two adjacent nonzero digits.  Any pattern of
pairwise non-adjacent signed digits *is* the NAF of its value, so enumerating
such patterns enumerates canonical values with no duplicates.

The enumeration order is fixed: weight ascending, then absolute value
ascending, then positive before negative.  Engines record stream indices in
their certificates, so this order is part of the package contract.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator


@dataclass(frozen=True)
class SparseInt:
    """A value sum(sign_i * 2**exp_i) with strictly decreasing exponents."""

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        last = None
        for sign, exp in self.terms:
            if sign not in (-1, 1) or exp < 0:
                raise ValueError("terms must be (+-1, exponent >= 0)")
            if last is not None and exp >= last:
                raise ValueError("exponents must be strictly decreasing")
            last = exp

    @property
    def weight(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (sign, exp) in enumerate(self.terms):
            op = "-" if sign < 0 else ("+" if i else "")
            parts.append(f"{op}2^{exp}" if i == 0 else f"{op} 2^{exp}")
        return " ".join(parts)


def value_of(s: SparseInt) -> int:
    return sum(sign << exp for sign, exp in s.terms)


def naf(n: int) -> SparseInt:
    """The nonadjacent form of n (empty for 0)."""
    terms = []
    m, pos = abs(n), 0
    while m:
        if m & 1:
            digit = 1 if m & 3 == 1 else -1
            terms.append((digit, pos))
            m -= digit
        m >>= 1
        pos += 1
    if n < 0:
        terms = [(-sign, exp) for sign, exp in terms]
    return SparseInt(tuple(reversed(terms)))


def weight(n: int) -> int:
    """Number of nonzero NAF digits of n.

    Uses the identity wt(n) = popcount(n XOR 3n): a nonzero NAF digit sits
    exactly where adding n and 2n produces a carry-boundary bit.
    """
    m = abs(n)
    return (m ^ 3 * m).bit_count()


def cardinality_bound(k: int, v: int) -> int:
    """(2v)**k, the coarse upper bound on the size of the sparse grid."""
    if k < 1 or v < 1:
        raise ValueError("need k >= 1 and v >= 1")
    return (2 * v) ** k


@lru_cache(maxsize=64)
def _level_values(w: int, v_max: int) -> tuple[int, ...]:
    """Positive values of exact NAF weight w, exponents <= v_max, ascending.

    Exponent combinations e_0 < e_1 < ... with gaps >= 2 are produced via the
    bijection e_i = c_i + i over ascending combinations c; the leading digit
    is +1 (value > 0) and the lower digits range over all sign patterns.
    """
    if w == 0:
        return (0,)
    if v_max - 2 * (w - 1) < 0:
        return ()
    out = []
    for combo in itertools.combinations(range(v_max - w + 2), w):
        exps = [c + i for i, c in enumerate(combo)]
        top = 1 << exps[-1]
        lowers = exps[:-1]
        if not lowers:
            out.append(top)
            continue
        for signs in itertools.product((1, -1), repeat=w - 1):
            out.append(top + sum(s << e for s, e in zip(signs, lowers)))
    out.sort()
    return tuple(out)


def sparse_values(k: int, v_max: int, signed: bool) -> Iterator[int]:
    """Canonical value stream; the integer backbone of enumerate_sparse."""
    if k < 1 or v_max < 0:
        raise ValueError("need k >= 1 and v_max >= 0")
    if signed:
        yield 0
    for w in range(1, k + 1):
        for val in _level_values(w, v_max):
            yield val
            if signed:
                yield -val


def enumerate_sparse(k: int, v_max: int,
                     include_negative_values: bool) -> Iterator[SparseInt]:
    """Every canonical SparseInt with weight <= k and exponents <= v_max.

    Emitted exactly once each, ordered by (weight, |value|, sign with
    positive first).  Element i is a pure function of (k, v_max, i); see
    sparse_value_at for direct indexing.
    """
    for val in sparse_values(k, v_max, include_negative_values):
        yield naf(val)


def stream_length(k: int, v_max: int, signed: bool) -> int:
    """Exact number of stream elements for the given parameters."""
    total = 1 if signed else 0
    mult = 2 if signed else 1
    for w in range(1, k + 1):
        total += mult * len(_level_values(w, v_max))
    return total


def sparse_value_at(k: int, v_max: int, signed: bool, index: int) -> int:
    """Random access into the canonical stream (used by partitioned search)."""
    if index < 0:
        raise IndexError(index)
    if signed:
        if index == 0:
            return 0
        index -= 1
    mult = 2 if signed else 1
    for w in range(1, k + 1):
        level = _level_values(w, v_max)
        span = mult * len(level)
        if index < span:
            val = level[index // mult]
            if signed and index % 2:
                val = -val
            return val
        index -= span
    raise IndexError("index beyond stream end")


def stream_slice(k: int, v_max: int, signed: bool, start: int,
                 stride: int) -> Iterator[tuple[int, int]]:
    """(index, value) pairs for indices start, start+stride, ...

    Pure in (k, v_max, start, stride): concatenating the stride-partitions
    reproduces the full stream, which is what makes worker fan-out safe.
    Weight levels are materialized only when the scan reaches them, so a
    capped search against a huge nominal grid stays cheap.
    """
    if start < 0 or stride < 1:
        raise ValueError("need start >= 0 and stride >= 1")
    idx = start
    offset = 0
    if signed:
        if idx == 0:
            yield 0, 0
            idx += stride
        offset = 1
    mult = 2 if signed else 1
    for w in range(1, k + 1):
        level = _level_values(w, v_max)
        span = mult * len(level)
        while idx - offset < span:
            j = idx - offset
            val = level[j // mult]
            if signed and j % 2:
                val = -val
            yield idx, val
            idx += stride
        offset += span


def naf_weight_stats(bits: int, samples: int, seed: int) -> tuple[float, float]:
    """Empirical mean and standard deviation of NAF weight.

    Samples uniform random `bits`-bit integers (top bit forced) and returns
    exact-integer accumulations converted to float at the end.
    """
    if bits < 8 or samples < 100:
        raise ValueError("need bits >= 8 and samples >= 100")
    rng = random.Random(seed)
    top = 1 << (bits - 1)
    s1 = s2 = 0
    for _ in range(samples):
        w = weight(rng.getrandbits(bits) | top)
        s1 += w
        s2 += w * w
    mean = s1 / samples
    var = s2 / samples - mean * mean
    return mean, var ** 0.5 if var > 0 else 0.0
