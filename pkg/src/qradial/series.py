"""Truncated formal power series in q over an exact coefficient field.

A :class:`Series` tracks the coefficients of q^0 .. q^N. The coefficient
field is whatever the entries are: ``Fraction`` for rational identities,
:class:`~qradial.exactnum.Cyclo` once a root of unity is substituted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .exactnum import Cyclo, cyclo_embed

__all__ = [
    "Series",
    "SeriesOrderError",
    "PochSpec",
    "series_arith",
    "series_invert",
    "pochhammer",
    "geometric_frac",
    "coefficient",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class SeriesOrderError(ValueError):
    """Two series with different truncation orders were combined."""


class Series:
    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = list(coeffs)
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        elif len(cs) < order + 1:
            cs.extend([_ZERO] * (order + 1 - len(cs)))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "Series":
        return cls((), order)

    @classmethod
    def one(cls, order: int) -> "Series":
        return cls.monomial(_ONE, 0, order)

    @classmethod
    def monomial(cls, c, k: int, order: int) -> "Series":
        """c * q^k truncated at ``order`` (vanishes when k > order)."""
        cs = [_ZERO] * (order + 1)
        if 0 <= k <= order:
            cs[k] = c
        return cls(cs, order)

    @classmethod
    def from_sparse(cls, terms: dict, order: int) -> "Series":
        cs = [_ZERO] * (order + 1)
        for k, c in terms.items():
            if 0 <= k <= order:
                cs[k] = cs[k] + c
        return cls(cs, order)

    # -- access -----------------------------------------------------------

    def __getitem__(self, n: int):
        return coefficient(self, n)

    def __len__(self):
        return self.order + 1

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise SeriesOrderError(f"cannot extend order {self.order} to {order}")
        return Series(self.coeffs[: order + 1], order)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def first_mismatch(self, other: "Series") -> int | None:
        self._check(other)
        for n, (a, b) in enumerate(zip(self.coeffs, other.coeffs)):
            if a != b:
                return n
        return None

    # -- ring operations --------------------------------------------------

    def _check(self, other: "Series"):
        if not isinstance(other, Series):
            raise TypeError(f"expected Series, got {type(other).__name__}")
        if other.order != self.order:
            raise SeriesOrderError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        if not isinstance(other, Series):
            return self + Series.monomial(other, 0, self.order)
        self._check(other)
        return Series([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return Series([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        if not isinstance(other, Series):
            return self - Series.monomial(other, 0, self.order)
        self._check(other)
        return Series([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            return Series([a * other for a in self.coeffs], self.order)
        self._check(other)
        n = self.order
        a, b = self.coeffs, other.coeffs
        # skip the sparse side's zeros; many catalog factors are sparse
        if sum(1 for x in a if x) > sum(1 for x in b if x):
            a, b = b, a
        out = [_ZERO] * (n + 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j in range(n + 1 - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return Series(out, n)

    def __rmul__(self, other):
        return Series([other * a for a in self.coeffs], self.order)

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.invert()
        return Series([a / other for a in self.coeffs], self.order)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = Series.one(self.order)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    __hash__ = None

    # -- structured O(N) updates -----------------------------------------

    def shift(self, k: int) -> "Series":
        """Multiply by q^k (k >= 0)."""
        if k < 0:
            raise ValueError("negative shifts leave the ring")
        n = self.order
        if k > n:
            return Series.zero(n)
        return Series([_ZERO] * k + list(self.coeffs[: n + 1 - k]), n)

    def mul_binomial(self, c, d: int) -> "Series":
        """Multiply by (1 - c q^d), d >= 1."""
        if d < 1:
            raise ValueError("binomial exponent must be >= 1")
        cs = list(self.coeffs)
        for k in range(self.order, d - 1, -1):
            x = cs[k - d]
            if x:
                cs[k] = cs[k] - c * x
        return Series(cs, self.order)

    def div_binomial(self, c, d: int) -> "Series":
        """Divide by (1 - c q^d), d >= 1, exactly within the truncation."""
        if d < 1:
            raise ValueError("binomial exponent must be >= 1")
        cs = list(self.coeffs)
        for k in range(d, self.order + 1):
            x = cs[k - d]
            if x:
                cs[k] = cs[k] + c * x
        return Series(cs, self.order)

    def invert(self) -> "Series":
        return series_invert(self)

    # -- numeric evaluation ----------------------------------------------

    def evaluate(self, x, embed=None):
        """Evaluate the truncated polynomial at a numeric point (Horner).

        ``embed`` maps a coefficient to an mpmath number; the default
        handles ``Fraction`` and ``Cyclo`` at the current mp precision.
        """
        if embed is None:
            embed = _embed_default
        acc = mpmath.mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * x
            if c:
                acc += embed(c)
        return acc

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if self.order >= 8 else ""
        return f"Series(order={self.order}, [{shown}{more}])"


def _embed_default(c):
    if isinstance(c, Cyclo):
        return cyclo_embed(c, mpmath.mp.dps).value
    c = Fraction(c)
    return mpmath.mpf(c.numerator) / c.denominator


def series_arith(s: Series, t: Series, op: str) -> Series:
    s._check(t)
    if op == "add":
        return s + t
    if op == "sub":
        return s - t
    if op == "mul":
        return s * t
    raise ValueError(f"unknown operation {op!r}")


def series_invert(s: Series) -> Series:
    """1/s by the coefficient recurrence; needs an invertible constant term."""
    c0 = s.coeffs[0]
    if not c0:
        raise ZeroDivisionError("series has zero constant term")
    n = s.order
    inv0 = 1 / c0
    nz = [(k, a) for k, a in enumerate(s.coeffs) if k and a]
    out = [inv0] + [_ZERO] * n
    for m in range(1, n + 1):
        acc = _ZERO
        for k, a in nz:
            if k > m:
                break
            r = out[m - k]
            if r:
                acc = acc + a * r
        out[m] = -acc * inv0
    return Series(out, n)


@dataclass(frozen=True)
class PochSpec:
    """Product of (1 - scale * q^(offset + j*step)) for j = 0 .. count-1.

    ``count=None`` is the infinite product; it is cut off once exponents
    pass the truncation order.
    """

    scale: object = _ONE
    offset: int = 1
    step: int = 1
    count: int | None = None

    def __post_init__(self):
        if self.step < 1:
            raise ValueError("Pochhammer step must be >= 1")
        if self.offset < 0 or (self.count is None and self.offset < 1):
            raise ValueError("infinite Pochhammer products need offset >= 1")
        if self.count is not None and self.count < 0:
            raise ValueError("Pochhammer count must be >= 0")


def pochhammer(spec: PochSpec, order: int) -> Series:
    out = Series.one(order)
    j = 0
    while spec.count is None or j < spec.count:
        e = spec.offset + j * spec.step
        if e > order:
            break
        if e == 0:
            out = out * (1 - spec.scale)
        else:
            out = out.mul_binomial(spec.scale, e)
        j += 1
    return out


def qpoch(scale, offset: int, step: int, count: int | None, order: int) -> Series:
    """Shorthand for ``pochhammer(PochSpec(scale, offset, step, count), order)``."""
    return pochhammer(PochSpec(scale, offset, step, count), order)


def geometric_frac(scale, d: int, order: int) -> Series:
    """1 / (1 - scale q^d) = sum_k scale^k q^(kd)."""
    if d < 1:
        raise ValueError("geometric exponent must be >= 1")
    return Series.one(order).div_binomial(scale, d)


def coefficient(s: Series, n: int):
    if not 0 <= n <= s.order:
        raise IndexError(f"coefficient index {n} outside 0..{s.order}")
    return s.coeffs[n]


def from_ints(values: Sequence[int], order: int | None = None) -> Series:
    return Series([Fraction(v) for v in values], order)
