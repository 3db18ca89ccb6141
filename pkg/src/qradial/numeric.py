"""High-precision complex values and the adaptive summation engine.

Every numeric q-series evaluation goes through :func:`adaptive_sum`. It sums
a term stream at some working precision, measures how many digits were lost
to cancellation (log10 of the largest partial sum or term over the final
magnitude) and re-runs at a higher precision until the result is good to the
requested number of relative digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import mpmath
from mpmath import mp

DEFAULT_MAX_DPS = 12000
DEFAULT_MAX_TERMS = 400_000


class PrecisionGuardError(ArithmeticError):
    """Cancellation needs more working digits than the configured cap."""


class NonConvergenceError(ArithmeticError):
    """Term summation did not settle within the term cap."""


@dataclass(frozen=True)
class BigComplex:
    """An mpmath complex value tagged with the number of digits it is good to.

    ``error`` is an absolute error estimate (0 when not tracked).
    """

    value: mpmath.mpc
    digits: int
    error: mpmath.mpf = mpmath.mpf(0)

    @property
    def re(self):
        return self.value.real

    @property
    def im(self):
        return self.value.imag

    def __abs__(self):
        return abs(self.value)

    def _other(self, o):
        if isinstance(o, BigComplex):
            return o.value, o.digits
        return mpmath.mpc(o), self.digits

    def __add__(self, o):
        v, d = self._other(o)
        return BigComplex(self.value + v, min(self.digits, d))

    __radd__ = __add__

    def __sub__(self, o):
        v, d = self._other(o)
        return BigComplex(self.value - v, min(self.digits, d))

    def __rsub__(self, o):
        v, d = self._other(o)
        return BigComplex(v - self.value, min(self.digits, d))

    def __mul__(self, o):
        v, d = self._other(o)
        return BigComplex(self.value * v, min(self.digits, d))

    __rmul__ = __mul__

    def __truediv__(self, o):
        v, d = self._other(o)
        return BigComplex(self.value / v, min(self.digits, d))

    def __neg__(self):
        return BigComplex(-self.value, self.digits, self.error)

    def close_to(self, other, tol) -> bool:
        v = other.value if isinstance(other, BigComplex) else other
        return abs(self.value - v) < tol

    def __str__(self):
        return mpmath.nstr(self.value, min(self.digits, 30))


def log10_abs(x) -> float:
    """log10 |x| as a float, -inf for zero; safe for huge mp exponents."""
    a = abs(x)
    if a == 0:
        return -math.inf
    return float(mpmath.log10(a))


@dataclass
class SumResult:
    value: mpmath.mpc
    peak: mpmath.mpf  # largest |partial sum| or |term| seen
    terms: int
    dps: int

    @property
    def loss(self) -> float:
        """Digits lost to cancellation."""
        if self.peak == 0:
            return 0.0
        if self.value == 0:
            return math.inf
        return max(0.0, log10_abs(self.peak) - log10_abs(self.value))


def accumulate(terms: Iterator, dps: int, tail: int = 3,
               max_terms: int = DEFAULT_MAX_TERMS) -> SumResult:
    """Sum a term stream in the current mp context.

    Stops after ``tail`` consecutive terms fall below 10**-dps times the
    running maximum partial-sum magnitude. Streams that end on their own
    (terminating sums) simply stop.
    """
    total = mpmath.mpc(0)
    peak = mpmath.mpf(0)
    biggest_sum = mpmath.mpf(0)
    eps = mpmath.mpf(10) ** (-dps)
    quiet = 0
    n = 0
    for term in terms:
        n += 1
        total += term
        a = abs(term)
        s = abs(total)
        if s > biggest_sum:
            biggest_sum = s
        if a > peak:
            peak = a
        if a <= eps * biggest_sum:
            quiet += 1
            if quiet >= tail:
                break
        else:
            quiet = 0
        if n >= max_terms:
            raise NonConvergenceError(
                f"no convergence after {max_terms} terms (|q| too close to 1 for dps={dps}?)"
            )
    if biggest_sum > peak:
        peak = biggest_sum
    return SumResult(total, peak, n, dps)


def adaptive_sum(make_terms: Callable[[], Iterator], digits: int, *,
                 start_dps: int | None = None, tail: int = 3,
                 max_dps: int = DEFAULT_MAX_DPS,
                 max_terms: int = DEFAULT_MAX_TERMS) -> SumResult:
    """Sum ``make_terms()`` to ``digits`` relative digits, raising precision as needed.

    ``make_terms`` is called inside the working-precision context so it can
    build its constants (roots of unity, powers of q) at that precision.
    """
    dps = start_dps or digits + 20
    while True:
        if dps > max_dps:
            raise PrecisionGuardError(
                f"needs more than {max_dps} working digits for {digits} digits of result"
            )
        with mp.workdps(dps):
            res = accumulate(make_terms(), dps, tail=tail, max_terms=max_terms)
        if res.peak == 0 or dps >= digits + res.loss + 10:
            return res
        need = digits + res.loss + 20
        if math.isinf(need):
            need = 2 * dps
        dps = max(int(math.ceil(need)), dps * 3 // 2)
