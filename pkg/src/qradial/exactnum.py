"""Exact rational and cyclotomic-field arithmetic.

Elements of Q(zeta_m) are stored in the power basis 1, z, ..., z^(phi(m)-1)
reduced modulo the m-th cyclotomic polynomial, so two elements of the same
order are equal exactly when their coefficient vectors agree.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational
from typing import Sequence

import mpmath

from .numeric import BigComplex

Rat = Fraction

__all__ = [
    "Rat",
    "Cyclo",
    "CycloOrderError",
    "cyclotomic_poly",
    "euler_phi",
    "cyclo_root",
    "cyclo_const",
    "cyclo_arith",
    "cyclo_inv",
    "cyclo_embed",
    "lift",
]


class CycloOrderError(ValueError):
    """Raised when two cyclotomic elements of different orders are combined."""


def euler_phi(m: int) -> int:
    return sum(1 for j in range(1, m + 1) if gcd(j, m) == 1)


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    # den is monic with integer coefficients (low -> high)
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dd]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError(f"cyclotomic order must be positive, got {m}")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in _divisors(m)[:-1]:
        poly = _poly_divexact(poly, cyclotomic_poly(d))
    return tuple(poly)


class _Field:
    """Per-order tables: x^k mod Phi_m for every k needed by multiplication."""

    def __init__(self, m: int):
        self.m = m
        self.phi_poly = cyclotomic_poly(m)
        self.deg = len(self.phi_poly) - 1
        top = max(m, 2 * self.deg - 1)
        rows = []
        cur = [0] * self.deg
        cur[0] = 1
        for _ in range(top + 1):
            rows.append(tuple(cur))
            # multiply by x and reduce the overflow coefficient
            carry = cur[-1]
            cur = [0] + cur[:-1]
            if carry:
                for j in range(self.deg):
                    cur[j] -= carry * self.phi_poly[j]
        self.powers = rows


@lru_cache(maxsize=None)
def _field(m: int) -> _Field:
    return _Field(m)


_ZERO = Fraction(0)
_ONE = Fraction(1)


class Cyclo:
    """An element of the cyclotomic field Q(zeta_m).

    Instances are immutable. Arithmetic between elements requires equal
    orders; use :func:`lift` to move an element into a larger field.
    ``int`` and ``Fraction`` operands are promoted automatically.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence):
        fld = _field(order)
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != fld.deg:
            raise ValueError(
                f"Q(zeta_{order}) needs {fld.deg} coefficients, got {len(cs)}"
            )
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("Cyclo is immutable")

    @classmethod
    def _raw(cls, order: int, coeffs: tuple) -> "Cyclo":
        obj = object.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def from_poly(cls, order: int, poly: Sequence) -> "Cyclo":
        """Reduce an arbitrary polynomial in zeta_m (low -> high) to canonical form."""
        fld = _field(order)
        out = [_ZERO] * fld.deg
        for k, c in enumerate(poly):
            if not c:
                continue
            if k >= len(fld.powers):
                k %= order
            row = fld.powers[k]
            for j, rj in enumerate(row):
                if rj:
                    out[j] += c * rj
        return cls._raw(order, tuple(out))

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> "Cyclo | None":
        if isinstance(other, Cyclo):
            if other.order != self.order:
                raise CycloOrderError(
                    f"order mismatch: {self.order} vs {other.order}; lift explicitly"
                )
            return other
        if isinstance(other, Rational):
            return cyclo_const(self.order, other)
        return None

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclo._raw(self.order, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo._raw(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclo._raw(self.order, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, Rational) and not isinstance(other, Cyclo):
            c = Fraction(other)
            return Cyclo._raw(self.order, tuple(a * c for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        n = len(a)
        if n == 1:
            return Cyclo._raw(self.order, (a[0] * b[0],))
        conv = [_ZERO] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        return Cyclo.from_poly(self.order, conv)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational) and not isinstance(other, Cyclo):
            if other == 0:
                raise ZeroDivisionError("division of Cyclo by zero")
            c = Fraction(other)
            return Cyclo._raw(self.order, tuple(a / c for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * cyclo_inv(o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * cyclo_inv(self)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return cyclo_inv(self) ** (-e)
        result = cyclo_const(self.order, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Cyclo):
            if other.order == self.order:
                return self.coeffs == other.coeffs
            big = self.order * other.order // gcd(self.order, other.order)
            return lift(self, big).coeffs == lift(other, big).coeffs
        if isinstance(other, Rational):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    __hash__ = None  # equality is defined across orders via lifting

    def __repr__(self):
        return f"Cyclo({self.order}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        return format_cyclo(self)


def _fmt_coeff(c: Fraction) -> str:
    return str(c)


def format_cyclo(x: Cyclo) -> str:
    """Human-readable form, e.g. ``4·i`` or ``1 - 2·z6``."""
    name = "i" if x.order == 4 else f"z{x.order}"
    parts = []
    for j, c in enumerate(x.coeffs):
        if not c:
            continue
        if j == 0:
            mono = None
        elif j == 1:
            mono = name
        else:
            mono = f"{name}^{j}"
        if mono is None:
            body = _fmt_coeff(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(abs(c))}·{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def cyclo_const(m: int, c) -> Cyclo:
    fld = _field(m)
    return Cyclo._raw(m, (Fraction(c),) + (_ZERO,) * (fld.deg - 1))


def cyclo_root(m: int, j: int) -> Cyclo:
    """zeta_m ** j in canonical form (j taken mod m)."""
    if m < 1:
        raise ValueError(f"root order must be positive, got {m}")
    fld = _field(m)
    row = fld.powers[j % m]
    return Cyclo._raw(m, tuple(Fraction(v) for v in row))


def cyclo_arith(x: Cyclo, y: Cyclo, op: str) -> Cyclo:
    if x.order != y.order:
        raise CycloOrderError(f"order mismatch: {x.order} vs {y.order}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown operation {op!r}")


# -- polynomial helpers over Q for the extended Euclidean algorithm --------


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _pdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [_ZERO] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
    return _trim(q), a


def _psub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _trim(out)


def cyclo_inv(x: Cyclo) -> Cyclo:
    """Multiplicative inverse via extended Euclid against Phi_m."""
    if x.is_zero():
        raise ZeroDivisionError("inverse of zero in cyclotomic field")
    if x.is_rational():
        return cyclo_const(x.order, 1 / x.coeffs[0])
    m = x.order
    r0 = [Fraction(c) for c in cyclotomic_poly(m)]
    r1 = _trim(list(x.coeffs))
    s0, s1 = [], [_ONE]
    while len(r1) > 1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
    # r1 is now a nonzero constant since Phi_m is irreducible
    c = r1[0]
    return Cyclo.from_poly(m, [v / c for v in s1])


def lift(x: Cyclo, m: int) -> Cyclo:
    """Embed x from Q(zeta_k) into Q(zeta_m) for k | m, via zeta_k -> zeta_m^(m/k)."""
    k = x.order
    if m % k:
        raise CycloOrderError(f"cannot lift order {k} into order {m}")
    if m == k:
        return x
    step = m // k
    poly = [_ZERO] * (step * len(x.coeffs))
    for j, c in enumerate(x.coeffs):
        poly[j * step] = c
    return Cyclo.from_poly(m, poly)


def cyclo_embed(x: Cyclo, digits: int) -> BigComplex:
    """Complex value of x under zeta_m -> exp(2*pi*i/m)."""
    if digits < 1:
        raise ValueError("digits must be positive")
    with mpmath.mp.workdps(digits + 15):
        total = mpmath.mpc(0)
        for j, c in enumerate(x.coeffs):
            if c:
                total += mpmath.mpf(c.numerator) / c.denominator * mpmath.expjpi(
                    mpmath.mpf(2 * j) / x.order
                )
        return BigComplex(+total, digits)
