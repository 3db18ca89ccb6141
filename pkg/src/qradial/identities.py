"""Coefficient-by-coefficient certification of the rank/crank q-series identities.

Each identity is built as two exact truncated series and compared
coefficient-wise. Bilateral sums over n in Z are folded onto n >= 0 so
every term is an ordinary power series:

* ``sum_j q^(j(2j-1)) / (1 + q^(2j-1))`` pairs j <= 0 with 1 - j, giving
  ``2 sum_{i>=0} q^((i+1)(2i+1)) / (1 + q^(2i+1))``;
* ``sum_j q^(j(2j+1)) / (1 + q^(2j))`` pairs j < 0 with -j, giving
  ``1/2 + 2 sum_{i>=1} q^(i(2i+1)) / (1 + q^(2i))``;
* sums in ``(-q)^(n(n+1)/2)`` pair n with -1 - n, which fixes n(n+1)/2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .catalog import SeriesTag, appell_lerch, expand
from .exactnum import Cyclo, cyclo_inv
from .series import Series, qpoch

__all__ = [
    "IdentityId",
    "IdentityReport",
    "Mismatch",
    "RelationResult",
    "identity_sides",
    "check_identity",
    "run_suite",
    "find_qzeta_relation",
    "relation_system",
]


class IdentityId(enum.Enum):
    RAMA1 = "RAMA1"
    RAMA2 = "RAMA2"
    COMBINED_MINUS = "COMBINED_MINUS"
    COMBINED_PLUS = "COMBINED_PLUS"
    TR1 = "TR1"
    TR2 = "TR2"
    ALT_TR1 = "ALT_TR1"
    PARTIAL_THETA = "PARTIAL_THETA"
    BILATERAL_ODD = "BILATERAL_ODD"
    BILATERAL_EVEN_WEIGHTED = "BILATERAL_EVEN_WEIGHTED"

    @property
    def needs_w(self) -> bool:
        return self in (IdentityId.RAMA1, IdentityId.RAMA2)


PARAMETER_FREE = [i for i in IdentityId if not i.needs_w]

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Mismatch:
    n: int
    lhs: object
    rhs: object


@dataclass(frozen=True, eq=False)
class IdentityReport:
    identity: IdentityId
    order: int
    w: Cyclo | None
    status: str
    first_mismatch: Mismatch | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def __eq__(self, other):
        if not isinstance(other, IdentityReport):
            return NotImplemented
        return (self.identity, self.order, self.status, self.first_mismatch) == (
            other.identity, other.order, other.status, other.first_mismatch
        ) and ((self.w is None and other.w is None)
               or (self.w is not None and other.w is not None and self.w == other.w))


# ---------------------------------------------------------------------------
# building blocks
# ---------------------------------------------------------------------------


def _sum_minus(N: int) -> Series:
    total = Series.zero(N)
    i = 0
    while (i + 1) * (2 * i + 1) <= N:
        total = total + Series.monomial(Fraction(2), (i + 1) * (2 * i + 1), N).div_binomial(-1, 2 * i + 1)
        i += 1
    return total


def _sum_plus(N: int) -> Series:
    total = Series.monomial(_HALF, 0, N)
    i = 1
    while i * (2 * i + 1) <= N:
        total = total + Series.monomial(Fraction(2), i * (2 * i + 1), N).div_binomial(-1, 2 * i)
        i += 1
    return total


def _inverse_euler(N: int) -> Series:
    s = Series.one(N)
    for j in range(1, N + 1):
        s = s.div_binomial(1, j)
    return s


def _neg_qpoch_sq(N: int) -> Series:
    p = qpoch(-1, 1, 1, None, N)
    return p * p


def _tr1_sum(N: int) -> Series:
    total = Series.zero(N)
    term = Series.monomial(Fraction(1), 1, N).div_binomial(-1, 1).div_binomial(-1, 1)
    n = 1
    while n * n <= N:
        total = total + term
        # n -> n + 1
        term = -(term.mul_binomial(1, 2 * n - 1).shift(2 * n + 1)
                 .div_binomial(-1, 2 * n + 1).div_binomial(-1, 2 * n + 1))
        n += 1
    return total


def _tr2_sum(N: int) -> Series:
    total = Series.zero(N)
    term = Series.one(N)
    n = 0
    while n * n <= N:
        total = total + term
        term = -(term.mul_binomial(1, 2 * n + 1).shift(2 * n + 1)
                 .div_binomial(-1, 2 * n + 2).div_binomial(-1, 2 * n + 2))
        n += 1
    return total


def _alt_tr1_sum(N: int) -> Series:
    total = Series.zero(N)
    term = Series.monomial(Fraction(1), 1, N).div_binomial(-1, 1)
    n = 1
    while n <= N:
        total = total + term
        term = -(term.mul_binomial(-1, 2 * n).shift(1).div_binomial(-1, 2 * n + 1))
        n += 1
    return total


def _partial_theta_lhs(N: int) -> Series:
    total = Series.zero(N)
    term = Series.one(N)
    n = 0
    while n <= N:
        total = total + term
        term = -(term.mul_binomial(-1, 2 * n + 1).shift(1).div_binomial(-1, 2 * n + 2))
        n += 1
    return total


def _partial_theta_rhs(N: int) -> Series:
    terms = {}
    n = 0
    while n * (n + 1) // 2 <= N:
        terms[n * (n + 1) // 2] = Fraction((-1) ** n)
        n += 1
    return Series.from_sparse(terms, N)


def _bilateral_odd_sum(N: int) -> Series:
    # sum_{n in Z} (-q)^T / (1 + q^(2n)), T = n(n+1)/2, folded onto n >= 0
    total = Series.zero(N)
    n = 0
    while n * (n + 1) // 2 <= N:
        tri = n * (n + 1) // 2
        sign = Fraction((-1) ** tri)
        if n == 0:
            first = Series.monomial(sign * _HALF, tri, N)
        else:
            first = Series.monomial(sign, tri, N).div_binomial(-1, 2 * n)
        partner = Series.monomial(sign, tri + 2 * n + 2, N).div_binomial(-1, 2 * n + 2)
        total = total + first + partner
        n += 1
    return total


def _bilateral_weighted_sum(N: int) -> Series:
    # sum_{n in Z} (-1)^n n (-q)^T / (1 + q^(2n)); the n = 0 term vanishes
    total = Series.zero(N)
    n = 0
    while n * (n + 1) // 2 <= N:
        tri = n * (n + 1) // 2
        sign = Fraction((-1) ** (tri + n))
        if n:
            total = total + Series.monomial(sign * n, tri, N).div_binomial(-1, 2 * n)
        total = total + Series.monomial(sign * (n + 1), tri + 2 * n + 2, N).div_binomial(-1, 2 * n + 2)
        n += 1
    return total


def _weighted_prefactor(N: int) -> Series:
    # 2 (-q^2;q^2)^2 (q;q^2) / ((-q;q^2) (q^2;q^2)^2)
    a = qpoch(-1, 2, 2, None, N)
    s = a * a * qpoch(1, 1, 2, None, N) * Fraction(2)
    for e in range(1, N + 1, 2):
        s = s.div_binomial(-1, e)
    for e in range(2, N + 1, 2):
        s = s.div_binomial(1, e).div_binomial(1, e)
    return s


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------


def identity_sides(ident: IdentityId, N: int, w: Cyclo | None = None) -> tuple[Series, Series]:
    """Exact (lhs, rhs) truncated at q^N."""
    ident = IdentityId(ident)
    if ident.needs_w:
        if w is None:
            raise ValueError(f"{ident.value} needs a root of unity w")
        if w == 1:
            raise ValueError("w = 1 is a pole of the Appell-Lerch side")
    elif w is not None:
        raise ValueError(f"{ident.value} takes no w parameter")

    if ident is IdentityId.RAMA1:
        scale = (1 - w) * (1 - cyclo_inv(w))
        lhs = expand(SeriesTag.RANK, N, w=w) + expand(SeriesTag.U_BIG, N, w=w) * scale
        return lhs, appell_lerch(SeriesTag.APPELL1, w, N)
    if ident is IdentityId.RAMA2:
        return expand(SeriesTag.CRANK, N, w=w), appell_lerch(SeriesTag.APPELL2, w, N)

    f = lambda: expand(SeriesTag.F, N)  # noqa: E731
    u4 = lambda: expand(SeriesTag.U_SMALL, N) * 4  # noqa: E731
    b = lambda: expand(SeriesTag.B, N)  # noqa: E731

    if ident is IdentityId.COMBINED_MINUS:
        return f() + u4() - b(), _sum_minus(N) * _inverse_euler(N) * 4
    if ident is IdentityId.COMBINED_PLUS:
        return f() + u4() + b(), _sum_plus(N) * _inverse_euler(N) * 4
    if ident is IdentityId.TR1:
        return (_sum_minus(N) * _inverse_euler(N),
                _neg_qpoch_sq(N) * _tr1_sum(N) * 2)
    if ident is IdentityId.TR2:
        return (_sum_plus(N) * _inverse_euler(N),
                _neg_qpoch_sq(N) * _tr2_sum(N) * _HALF)
    if ident is IdentityId.ALT_TR1:
        return (_sum_minus(N) * _inverse_euler(N),
                _neg_qpoch_sq(N) * _alt_tr1_sum(N) * 2)
    if ident is IdentityId.PARTIAL_THETA:
        return _partial_theta_lhs(N), _partial_theta_rhs(N)
    if ident is IdentityId.BILATERAL_ODD:
        pref = qpoch(-1, 1, 1, None, N) * qpoch(-1, 1, 2, None, N)
        return _sum_plus(N), pref * _bilateral_odd_sum(N)
    if ident is IdentityId.BILATERAL_EVEN_WEIGHTED:
        return _sum_minus(N), _weighted_prefactor(N) * _bilateral_weighted_sum(N)
    raise ValueError(f"unhandled identity {ident}")  # pragma: no cover


def check_identity(ident, N: int, w: Cyclo | None = None, *,
                   perturb: tuple[int, object] | None = None) -> IdentityReport:
    """Compare both sides through q^N.

    ``perturb=(n, delta)`` adds ``delta`` to coefficient n of the right-hand
    side before comparing; it exists to exercise the mismatch path.
    """
    ident = IdentityId(ident)
    if N < 1:
        raise ValueError("order must be >= 1")
    lhs, rhs = identity_sides(ident, N, w)
    if perturb is not None:
        n, delta = perturb
        cs = list(rhs.coeffs)
        cs[n] = cs[n] + delta
        rhs = Series(cs, N)
    n = lhs.first_mismatch(rhs)
    if n is None:
        return IdentityReport(ident, N, w, "pass")
    return IdentityReport(ident, N, w, "fail", Mismatch(n, lhs.coeffs[n], rhs.coeffs[n]))


def run_suite(N: int, w_list: Sequence[Cyclo], *,
              perturb: dict | None = None) -> list[IdentityReport]:
    """RAMA1/RAMA2 for each w (in the given order), then the parameter-free identities.

    ``perturb`` optionally maps an IdentityId to an ``(n, delta)`` defect.
    """
    if not w_list:
        raise ValueError("w_list must contain at least one root of unity")
    for w in w_list:
        if w == 1:
            raise ValueError("w = 1 is not allowed")
    perturb = {IdentityId(k): v for k, v in (perturb or {}).items()}
    reports = []
    for w in w_list:
        for ident in (IdentityId.RAMA1, IdentityId.RAMA2):
            reports.append(check_identity(ident, N, w, perturb=perturb.get(ident)))
    for ident in PARAMETER_FREE:
        reports.append(check_identity(ident, N, perturb=perturb.get(ident)))
    return reports


# ---------------------------------------------------------------------------
# graded relations among Eisenstein series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelationResult:
    weight: int
    found: bool
    normalizing_constant: Fraction | None = None
    monomials: tuple = field(default_factory=tuple)  # (i, j, coefficient)
    verified_order: int = 0
    unique: bool = True


def _monomial_exponents(s: int) -> list[tuple[int, int]]:
    return [(i, (s - 4 * i) // 6) for i in range(s // 4 + 1) if (s - 4 * i) % 6 == 0]


def _eisenstein_monomials(s: int, N: int) -> list[Series]:
    Q = expand(SeriesTag.EIS_Q, N)
    R = expand(SeriesTag.EIS_R, N)
    return [Q ** i * R ** j for i, j in _monomial_exponents(s)]


def relation_system(s: int, N: int) -> tuple[sympy.Matrix, sympy.Matrix]:
    """Linear system A x = b for x = (lambda_ij ..., c) on coefficients q^0..q^N."""
    monos = _eisenstein_monomials(s, N)
    zeta = expand(SeriesTag.QZETA, N, s=s)
    rows = []
    for n in range(N + 1):
        rows.append([sympy.Rational(m.coeffs[n]) for m in monos] + [-sympy.Rational(zeta.coeffs[n])])
    rhs = sympy.Matrix([1] + [0] * N)
    return sympy.Matrix(rows), rhs


def find_qzeta_relation(s: int, N: int, verify_order: int | None = None) -> RelationResult:
    """Find lambda_ij and c with sum lambda_ij Q^i R^j = 1 + c zeta_q(s), 4i + 6j = s."""
    if s % 2:
        raise ValueError("odd q-zeta values are not searched (no graded relation expected)")
    if s < 2:
        raise ValueError("weight must be an even integer >= 2")
    exps = _monomial_exponents(s)
    if not exps:
        return RelationResult(s, False)
    if N < 2 * (len(exps) + 1):
        raise ValueError(f"order {N} too small for {len(exps) + 1} unknowns")
    A, b = relation_system(s, N)
    try:
        sol, params = A.gauss_jordan_solve(b)
    except ValueError:
        return RelationResult(s, False)
    unique = params.shape[0] == 0
    if not unique:
        sol = sol.subs({p: 0 for p in params})
    lam = [Fraction(int(x.p), int(x.q)) for x in sol[:-1]]
    c = Fraction(int(sol[-1].p), int(sol[-1].q))

    order2 = verify_order if verify_order is not None else 2 * N
    Q = expand(SeriesTag.EIS_Q, order2)
    R = expand(SeriesTag.EIS_R, order2)
    combo = Series.zero(order2)
    for (i, j), coef in zip(exps, lam):
        if coef:
            combo = combo + (Q ** i * R ** j) * coef
    target = Series.one(order2) + expand(SeriesTag.QZETA, order2, s=s) * c
    if combo != target:
        return RelationResult(s, False)
    monomials = tuple((i, j, coef) for (i, j), coef in zip(exps, lam) if coef)
    return RelationResult(s, True, c, monomials, order2, unique)
