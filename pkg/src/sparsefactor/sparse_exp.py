"""Factoring with running exponents E = prod(A_i*N + B_j).

The accumulated power T^E is tracked modulo N while E itself is never
materialized: each grid step raises the current power to |A*N + B|.  A gcd
probe after every step looks for gcd(T^E - 1, N) to land strictly between
1 and N.  When the probe degenerates to N, the trace's factorization of E
into known integer factors allows walking square roots of unity downward
(w = T^s, T^(2s), ...) to recover a nontrivial root and split N anyway.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from . import expansions
from .arith import is_probable_prime
from .expansions import SparseInt, value_of
from .model import (
    Certificate,
    FactorResult,
    METHOD_SPARSE_EXPONENT,
    METHOD_TRIAL_DIVISION,
    SearchBudget,
    exhausted,
    factored,
    probable_prime,
    trivial_input,
)


@dataclass(frozen=True)
class RunningExponent:
    """Accumulated state T^(prod of trace factors) mod n."""

    n: int
    base: int
    power: int
    trace: tuple[tuple[SparseInt, SparseInt], ...] = ()
    factor_bits: int = 0  # sum of factor bit lengths: size summary of E

    @classmethod
    def fresh(cls, n: int, base: int) -> "RunningExponent":
        return cls(n, base, base % n)

    def factor_values(self) -> list[int]:
        return [abs(value_of(a) * self.n + value_of(b)) for a, b in self.trace]


def exponent_step(state: RunningExponent, a: SparseInt,
                  b: SparseInt) -> RunningExponent:
    """Multiply A*N + B into the running exponent."""
    f = value_of(a) * state.n + value_of(b)
    if f == 0:
        raise ValueError("degenerate factor")
    f = abs(f)
    return RunningExponent(state.n, state.base, pow(state.power, f, state.n),
                           state.trace + ((a, b),),
                           state.factor_bits + f.bit_length())


class GcdProbe(NamedTuple):
    kind: str  # "no_split" | "split" | "degenerate"
    p: Optional[int]
    q: Optional[int]
    side: int  # which gcd hit: -1 for T^E - 1, +1 for T^E + 1


def gcd_probe(state: RunningExponent) -> GcdProbe:
    """Inspect gcd(T^E -+ 1, N) for a proper divisor."""
    n = state.n
    d0 = math.gcd(state.power - 1, n)
    if d0 == n:
        return GcdProbe("degenerate", None, None, -1)
    if d0 > 1:
        return GcdProbe("split", min(d0, n // d0), max(d0, n // d0), -1)
    d1 = math.gcd(state.power + 1, n)
    if 1 < d1 < n:
        return GcdProbe("split", min(d1, n // d1), max(d1, n // d1), 1)
    return GcdProbe("no_split", None, None, 0)


class UnitySplit(NamedTuple):
    p: int
    q: int
    square_ups: int  # squarings applied to T^s before the root appeared


def unity_root_recovery(base: int, e_trace: Sequence[int],
                        n: int) -> Optional[UnitySplit]:
    """Walk w = T^s, T^(2s), ... for a square root of unity other than +-1.

    e_trace lists the integer factors whose product is the exponent E with
    T^E == 1 (mod N).  The 2-adic valuation of E is accumulated per factor,
    so E is never materialized.  Returns None when every encountered root
    is +-1 (the failure case where T has common order mod both factors).
    """
    r = 0
    w = base % n
    for f in e_trace:
        f = abs(int(f))
        if f == 0:
            raise ValueError("degenerate factor")
        v = (f & -f).bit_length() - 1
        r += v
        w = pow(w, f >> v, n)
    if w == 1:
        return None
    prev = w
    for i in range(r):
        nxt = prev * prev % n
        if nxt == 1:
            if prev == n - 1:
                return None
            g = math.gcd(prev - 1, n)
            if not (1 < g < n):
                return None
            return UnitySplit(min(g, n // g), max(g, n // g), i)
        prev = nxt
    return None


def _digits(value: int) -> list[list[int]]:
    return [[s, e] for s, e in expansions.naf(value).terms]


def _lucky_split(n: int, base: int, g: int, ops: int) -> FactorResult:
    cert = Certificate(METHOD_SPARSE_EXPONENT,
                       {"kind": "lucky", "base": base, "divisor": g})
    return factored(g, n // g, cert, ops)


def sparse_exponent_factor(n: int, budget: SearchBudget, trials: int = 8,
                           seed: int = 0) -> FactorResult:
    """Run the sparse grid under up to `trials` bases.

    The first base is 2; later bases are drawn from the seeded generator.
    A degenerate probe triggers unity-root recovery, and if that also
    fails the base is abandoned (its order divides both p-1 and q-1, so
    the whole row would stay degenerate).
    """
    if n < 3:
        return trivial_input()
    if n % 2 == 0:
        cert = Certificate(METHOD_TRIAL_DIVISION, {"divisor": 2})
        return factored(2, n // 2, cert, 0)
    if is_probable_prime(n, seed):
        return probable_prime()
    rng = random.Random(seed)
    ops = 0
    for trial in range(trials):
        base = 2 if trial == 0 else rng.randrange(2, n - 1)
        g = math.gcd(base, n)
        if g > 1:
            if g == n:
                continue
            return _lucky_split(n, base, g, ops)
        state = RunningExponent.fresh(n, base)
        abandoned = False
        for a_val in _nonneg_values(budget.k, budget.v_max):
            for b_val in _signed_with_zero(budget.k, budget.v_max):
                f = a_val * n + b_val
                if -1 <= f <= 1:
                    continue
                if ops >= budget.op_cap:
                    return exhausted(ops)
                ops += 1
                state = exponent_step(state, expansions.naf(a_val),
                                      expansions.naf(b_val))
                probe = gcd_probe(state)
                if probe.kind == "split":
                    trace = [[_digits(value_of(a)), _digits(value_of(b))]
                             for a, b in state.trace]
                    cert = Certificate(
                        METHOD_SPARSE_EXPONENT,
                        {"kind": "grid", "trace": trace, "base": base,
                         "gcd_side": probe.side,
                         "exponent_bits": state.factor_bits})
                    return factored(probe.p, probe.q, cert, ops)
                if probe.kind == "degenerate":
                    split = unity_root_recovery(base, state.factor_values(), n)
                    if split is not None:
                        cert = Certificate(
                            METHOD_SPARSE_EXPONENT,
                            {"kind": "unity_root",
                             "factors": state.factor_values(), "base": base,
                             "square_ups": split.square_ups})
                        return factored(split.p, split.q, cert, ops)
                    abandoned = True
                    break
            if abandoned:
                break
    return exhausted(ops)


def _nonneg_values(k: int, v_max: int):
    # the A = 0 row multiplies plain sparse B factors into the exponent,
    # which scoops up small primes before any A*N + B factor is needed
    yield 0
    yield from expansions.sparse_values(k, v_max, False)


def _signed_with_zero(k: int, v_max: int):
    # B = 0 contributes the bare factor A*N
    yield from expansions.sparse_values(k, v_max, True)


def germain_factor(n: int, k_max: int, base: int = 2) -> FactorResult:
    """Probe exponents E = 2kN, which annihilate q - 1 when q = 2kp + 1."""
    if n < 3 or n % 2 == 0:
        raise ValueError("need an odd n >= 3")
    g = math.gcd(base, n)
    if 1 < g < n:
        return _lucky_split(n, base, g, 0)
    ops = 0
    for k in range(1, k_max + 1):
        ops += 1
        x = pow(base, 2 * k * n, n)
        d = math.gcd(x - 1, n)
        if 1 < d < n:
            cert = Certificate(METHOD_SPARSE_EXPONENT,
                               {"kind": "germain", "multiple": k, "base": base})
            return factored(d, n // d, cert, ops)
    return exhausted(ops)


def _negative_first_values(k: int, v_max: int):
    # Linear conditions A*k + B == 0 (mod m) with 0 < A*k < m have their
    # minimal-magnitude solutions at negative B, so scan those first.
    for val in expansions.sparse_values(k, v_max, False):
        yield -val
        yield val


def cyclotomic_form_factor(n: int, form: tuple[str, int],
                           budget: SearchBudget, base: int = 3) -> FactorResult:
    """Structured exponents for Mersenne and Fermat-shaped inputs.

    Probes E = (N-1)*A + period*B where the period is 2r for N = 2^r - 1
    and 2^(m+2) for N = 2^(2^m) + 1; every prime factor of such N is
    congruent to 1 modulo the period, so E kills one factor's order as
    soon as the linear condition lands.
    """
    kind, param = form
    if kind == "mersenne":
        if n != (1 << param) - 1:
            raise ValueError("form mismatch")
        period = 2 * param
    elif kind == "fermat":
        if n != (1 << (1 << param)) + 1:
            raise ValueError("form mismatch")
        period = 1 << (param + 2)
    else:
        raise ValueError("form mismatch")
    g = math.gcd(base, n)
    if 1 < g < n:
        return _lucky_split(n, base, g, 0)
    ops = 0
    v_b = max(1, min(budget.v_max, n.bit_length() - period.bit_length() - 1))
    for a_val in expansions.sparse_values(budget.k, budget.v_max, False):
        if a_val == 0:
            continue
        for b_val in _negative_first_values(budget.k, v_b):
            e = (n - 1) * a_val + period * b_val
            if e == 0:
                continue
            if ops >= budget.op_cap:
                return exhausted(ops)
            ops += 1
            x = pow(base, abs(e), n)
            d = math.gcd(x - 1, n)
            if 1 < d < n:
                cert = Certificate(
                    METHOD_SPARSE_EXPONENT,
                    {"kind": "cyclotomic", "a": a_val, "b": b_val,
                     "period": period, "base": base, "steps": ops})
                return factored(d, n // d, cert, ops)
            if d == n:
                split = unity_root_recovery(base, [abs(e)], n)
                if split is not None:
                    cert = Certificate(
                        METHOD_SPARSE_EXPONENT,
                        {"kind": "unity_root", "factors": [abs(e)],
                         "base": base, "square_ups": split.square_ups,
                         "steps": ops})
                    return factored(split.p, split.q, cert, ops)
    return exhausted(ops)
