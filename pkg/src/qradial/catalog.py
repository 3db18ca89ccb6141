"""Named q-series: exact truncated expansions and high-precision evaluation.

Tags
----
F, B, U_SMALL      Ramanujan's f(q), b(q) and u(q)
PSI, PHI           psi(q), phi(q)
RANK, CRANK, U_BIG Dyson's rank R(w;q), the crank C(w;q), and U(w;q)
APPELL1, APPELL2   (1 - 1/w)/(q;q)_inf times the bilateral Appell-Lerch sums
                   sum q^(n(n+1)/2) (-w)^n / (1 - q^n/w)   and
                   sum q^(n(n+1)/2) (-1)^n / (1 - q^n/w)
QZETA              zeta_q(s) = sum m^(s-1) q^m / (1 - q^m)
EIS_P/Q/R          1 - 24 zeta_q(2), 1 + 240 zeta_q(4), 1 - 504 zeta_q(6)
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

import mpmath
import numpy as np
from mpmath import mp

from .exactnum import Cyclo, cyclo_embed, cyclo_inv
from .numeric import (
    DEFAULT_MAX_DPS,
    BigComplex,
    adaptive_sum,
)
from .series import Series, qpoch

__all__ = [
    "SeriesTag",
    "SeriesId",
    "expand",
    "appell_lerch",
    "eval_numeric",
    "b_theta_form",
    "euler_numeric",
    "neg_qpoch_sq_numeric",
    "tr_sum_numeric",
    "appell_sum_numeric",
    "u_sum_numeric",
]


class SeriesTag(enum.Enum):
    F = "F"
    B = "B"
    U_SMALL = "U_SMALL"
    PSI = "PSI"
    PHI = "PHI"
    RANK = "RANK"
    CRANK = "CRANK"
    U_BIG = "U_BIG"
    APPELL1 = "APPELL1"
    APPELL2 = "APPELL2"
    QZETA = "QZETA"
    EIS_P = "EIS_P"
    EIS_Q = "EIS_Q"
    EIS_R = "EIS_R"


_NEEDS_W = {SeriesTag.RANK, SeriesTag.CRANK, SeriesTag.U_BIG,
            SeriesTag.APPELL1, SeriesTag.APPELL2}
_APPELL = {SeriesTag.APPELL1, SeriesTag.APPELL2}
_EIS = {SeriesTag.EIS_P: (2, -24), SeriesTag.EIS_Q: (4, 240), SeriesTag.EIS_R: (6, -504)}


@dataclass(frozen=True, eq=False)
class SeriesId:
    tag: SeriesTag
    w: Cyclo | None = None
    s: int | None = None

    def __post_init__(self):
        tag = SeriesTag(self.tag)
        object.__setattr__(self, "tag", tag)
        if tag in _NEEDS_W:
            if self.w is None:
                raise ValueError(f"{tag.value} needs a w parameter")
            if tag in _APPELL and self.w == 1:
                raise ValueError(f"{tag.value} has a pole at w = 1")
        elif self.w is not None:
            raise ValueError(f"{tag.value} takes no w parameter")
        if tag is SeriesTag.QZETA:
            if self.s is None or self.s < 1:
                raise ValueError("QZETA needs an integer s >= 1")
        elif self.s is not None:
            raise ValueError(f"{tag.value} takes no s parameter")


def _sid(id_or_tag, w=None, s=None) -> SeriesId:
    if isinstance(id_or_tag, SeriesId):
        return id_or_tag
    return SeriesId(SeriesTag(id_or_tag), w, s)


# ---------------------------------------------------------------------------
# exact expansions
# ---------------------------------------------------------------------------


def _inverse_euler(N: int) -> Series:
    """1/(q;q)_inf, the partition generating function."""
    s = Series.one(N)
    for j in range(1, N + 1):
        s = s.div_binomial(1, j)
    return s


def _rank_like(N: int, c1, c2) -> Series:
    # sum q^(n^2) / ((c1 q;q)_n (c2 q;q)_n)
    total = Series.one(N)
    term = Series.one(N)
    n = 1
    while n * n <= N:
        term = term.shift(2 * n - 1).div_binomial(c1, n).div_binomial(c2, n)
        total = total + term
        n += 1
    return total


def _u_like(N: int, c1, c2) -> Series:
    # sum (c1 q;q)_n (c2 q;q)_n q^(n+1)
    total = Series.zero(N)
    prod = Series.one(N)
    for n in range(N):
        if n:
            prod = prod.mul_binomial(c1, n).mul_binomial(c2, n)
        total = total + prod.shift(n + 1)
    return total


def _crank_like(N: int, c1, c2) -> Series:
    s = qpoch(1, 1, 1, None, N)
    for j in range(1, N + 1):
        s = s.div_binomial(c1, j).div_binomial(c2, j)
    return s


def _psi(N: int) -> Series:
    total = Series.zero(N)
    prod = Series.one(N)
    for n in range(N):
        if n:
            prod = prod.mul_binomial(-1, 2 * n)
        total = total + prod.shift(n + 1)
    return total


def _phi(N: int) -> Series:
    total = Series.one(N)
    prod = Series.one(N)
    n = 0
    while 2 * n + 1 <= N:
        if n:
            prod = prod.mul_binomial(1, 2 * n - 1)
        term = prod.shift(2 * n + 1)
        total = total + term if n % 2 == 0 else total - term
        n += 1
    return total


def _qzeta(N: int, s: int) -> Series:
    cs = [0] * (N + 1)
    for m in range(1, N + 1):
        w = m ** (s - 1)
        for k in range(m, N + 1, m):
            cs[k] += w
    return Series([Fraction(c) for c in cs], N)


def b_theta_form(N: int) -> Series:
    """b(q) as (q;q^2)_inf * sum_n (-1)^n q^(n^2)."""
    theta = {0: Fraction(1)}
    n = 1
    while n * n <= N:
        theta[n * n] = Fraction(2 * (-1) ** n)
        n += 1
    return qpoch(1, 1, 2, None, N) * Series.from_sparse(theta, N)


def expand(id_or_tag, N: int, *, w: Cyclo | None = None, s: int | None = None) -> Series:
    """Exact expansion of a catalogued series through q^N."""
    sid = _sid(id_or_tag, w, s)
    tag = sid.tag
    if N < 0:
        raise ValueError("order must be >= 0")
    if tag is SeriesTag.F:
        return _rank_like(N, -1, -1)
    if tag is SeriesTag.B:
        return _crank_like(N, -1, -1)
    if tag is SeriesTag.U_SMALL:
        return _u_like(N, -1, -1)
    if tag is SeriesTag.PSI:
        return _psi(N)
    if tag is SeriesTag.PHI:
        return _phi(N)
    if tag is SeriesTag.QZETA:
        return _qzeta(N, sid.s)
    if tag in _EIS:
        weight, c = _EIS[tag]
        return Series.one(N) + _qzeta(N, weight) * Fraction(c)
    if tag in _APPELL:
        return appell_lerch(tag, sid.w, N)
    wv = sid.w
    winv = cyclo_inv(wv)
    if tag is SeriesTag.RANK:
        return _rank_like(N, wv, winv)
    if tag is SeriesTag.CRANK:
        return _crank_like(N, wv, winv)
    if tag is SeriesTag.U_BIG:
        return _u_like(N, wv, winv)
    raise ValueError(f"unhandled tag {tag}")  # pragma: no cover


def appell_lerch(tag, w: Cyclo, N: int) -> Series:
    """Right-hand side of the rank (APPELL1) or crank (APPELL2) representation.

    Negative indices n = -m are rewritten as q^(m(m+1)/2) * unit / (1 - w q^m)
    so that every term is a power series in q.
    """
    tag = SeriesTag(tag)
    if tag not in _APPELL:
        raise ValueError(f"{tag} is not an Appell-Lerch tag")
    if w == 1:
        raise ValueError("Appell-Lerch sums have a pole at w = 1")
    winv = cyclo_inv(w)
    total = Series.zero(N) + 1 / (1 - winv)
    neg_w = -w
    n = 1
    while n * (n + 1) // 2 <= N:
        tri = n * (n + 1) // 2
        sign = -1 if n % 2 else 1
        if tag is SeriesTag.APPELL1:
            pos_c = neg_w ** n
            neg_c = neg_w ** (1 - n)
        else:
            pos_c = sign
            neg_c = -w * sign
        total = total + Series.monomial(pos_c, tri, N).div_binomial(winv, n)
        total = total + Series.monomial(neg_c, tri, N).div_binomial(w, n)
        n += 1
    return total * _inverse_euler(N) * (1 - winv)


# ---------------------------------------------------------------------------
# numeric evaluation
# ---------------------------------------------------------------------------


def _as_mpc(q):
    if isinstance(q, BigComplex):
        return q.value
    if isinstance(q, mpmath.mpc):
        return q
    return mpmath.mpc(q)


def _log10_poch_estimate(a: complex, q: complex, cap: int = 4_000_000) -> float:
    """Float estimate of log10 |(a;q)_inf|; used only to pick a starting precision."""
    aq = abs(q)
    if aq == 0:
        return math.log10(abs(1 - a)) if a != 1 else -math.inf
    J = int(math.ceil(math.log(1e-18) / math.log(aq))) + 1
    if J > cap:
        return 0.0
    j = np.arange(J, dtype=float)
    terms = a * np.exp(j * np.log(complex(q)))
    with np.errstate(divide="ignore"):
        return float(np.sum(np.log10(np.abs(1 - terms))))


def _start(digits: int, est: float) -> int:
    return digits + 20 + max(0, int(math.ceil(-est)))


def _terms_euler(q) -> Iterator:
    # pentagonal number theorem, k and -k paired
    yield mpmath.mpc(1)
    a = mpmath.mpc(1)
    step = q
    q3 = q ** 3
    qj = mpmath.mpc(1)
    j = 0
    while True:
        j += 1
        a = a * step
        step = step * q3
        qj = qj * q
        t = a + a * qj
        yield -t if j % 2 else t


def euler_numeric(q, digits: int, max_dps: int = DEFAULT_MAX_DPS) -> mpmath.mpc:
    """(q;q)_inf to ``digits`` relative digits."""
    q = _as_mpc(q)
    est = _log10_poch_estimate(complex(q), complex(q))
    res = adaptive_sum(lambda: _terms_euler(q), digits,
                       start_dps=_start(digits, est), max_dps=max_dps)
    return res.value


def _terms_rank(q, c1, c2) -> Iterator:
    term = mpmath.mpc(1)
    yield term
    qn = mpmath.mpc(1)
    p = q
    q2 = q * q
    while True:
        qn = qn * q
        term = term * p / ((1 - c1 * qn) * (1 - c2 * qn))
        p = p * q2
        yield term


def _terms_u(q, c1, c2) -> Iterator:
    prod = mpmath.mpc(1)
    qn1 = q
    yield qn1
    qn = mpmath.mpc(1)
    while True:
        qn = qn * q
        prod = prod * (1 - c1 * qn) * (1 - c2 * qn)
        qn1 = qn1 * q
        yield prod * qn1


def _terms_psi(q) -> Iterator:
    prod = mpmath.mpc(1)
    qn1 = q
    yield qn1
    q2 = q * q
    q2n = mpmath.mpc(1)
    while True:
        q2n = q2n * q2
        prod = prod * (1 + q2n)
        qn1 = qn1 * q
        yield prod * qn1


def _terms_phi(q) -> Iterator:
    yield mpmath.mpc(1)
    yield q
    prod = mpmath.mpc(1)
    q2 = q * q
    odd = q  # q^(2n-1)
    top = q  # q^(2n+1)
    n = 0
    while True:
        n += 1
        prod = prod * (1 - odd)
        odd = odd * q2
        top = top * q2
        t = prod * top
        yield -t if n % 2 else t


def _terms_theta_w(q, w, winv) -> Iterator:
    # sum_{n in Z} (-1)^n w^n q^(n(n-1)/2), pairing n with 1 - n
    qpow = mpmath.mpc(1)
    qn = mpmath.mpc(1)
    wn = w
    w1n = mpmath.mpc(1)
    n = 1
    while True:
        t = (wn - w1n) * qpow
        yield -t if n % 2 else t
        qn = qn * q
        qpow = qpow * qn
        wn = wn * w
        w1n = w1n * winv
        n += 1


def _terms_appell(q, w, winv, first: bool) -> Iterator:
    yield 1 / (1 - winv)
    qn = mpmath.mpc(1)
    tri = mpmath.mpc(1)
    negw = -w
    pw = mpmath.mpc(1)  # (-w)^n
    nw = mpmath.mpc(1)  # (-w)^(1-n)
    n = 0
    while True:
        n += 1
        qn = qn * q
        tri = tri * qn
        if first:
            pw = pw * negw
            pos = pw
            neg = nw
            nw = nw / negw
        else:
            sign = -1 if n % 2 else 1
            pos = sign
            neg = -w * sign
        yield tri * (pos / (1 - winv * qn) + neg / (1 - w * qn))


def _terms_lambert(q, s: int) -> Iterator:
    qm = mpmath.mpc(1)
    m = 0
    while True:
        m += 1
        qm = qm * q
        yield mpmath.mpf(m) ** (s - 1) * qm / (1 - qm)


def _tr1_terms(q) -> Iterator:
    # sum_{n>=1} (-1)^(n-1) (q;q^2)_(n-1) q^(n^2) / (-q;q^2)_n^2
    t = q / (1 + q) ** 2
    yield t
    q2 = q * q
    odd = q          # q^(2n-1)
    nxt = q * q2     # q^(2n+1)
    while True:
        t = -t * (1 - odd) * nxt / (1 + nxt) ** 2
        odd = odd * q2
        nxt = nxt * q2
        yield t


def _tr2_terms(q) -> Iterator:
    # sum_{n>=0} (-1)^n (q;q^2)_n q^(n^2) / (-q^2;q^2)_n^2
    t = mpmath.mpc(1)
    yield t
    q2 = q * q
    odd = q      # q^(2n+1)
    even = q2    # q^(2n+2)
    while True:
        t = -t * (1 - odd) * odd / (1 + even) ** 2
        odd = odd * q2
        even = even * q2
        yield t


def _w_numeric(w):
    if isinstance(w, Cyclo):
        return cyclo_embed(w, mp.dps).value
    return _as_mpc(w)


def _plain_sum(make: Callable[[], Iterator], digits, tail, max_dps, start=None):
    return adaptive_sum(make, digits, tail=tail, max_dps=max_dps, start_dps=start).value


def _check_disc(q, digits: int):
    if abs(q) >= 1 - mpmath.mpf(10) ** (-(digits // 2)):
        raise ValueError(f"|q| = {mpmath.nstr(abs(q), 15)} is not inside the unit disc with margin")


def eval_numeric(id_or_tag, q, digits: int, *, w=None, s: int | None = None,
                 tail: int = 3, max_dps: int = DEFAULT_MAX_DPS) -> BigComplex:
    """Evaluate a catalogued series at a complex point with |q| < 1.

    The result carries ``digits`` relative digits. Infinite products are
    evaluated through their theta-series forms (pentagonal numbers and the
    triple product), which converge in O(sqrt(digits / (1 - |q|))) terms.
    """
    sid = _sid(id_or_tag, w, s)
    tag = sid.tag
    q = _as_mpc(q)
    _check_disc(q, digits)
    d = digits + 5
    qc = complex(q)

    def rel(make, est=0.0):
        return _plain_sum(make, d, tail, max_dps, _start(d, est))

    if sid.w is not None:
        wc = complex(cyclo_embed(sid.w, 20).value)

    if tag is SeriesTag.F:
        val = rel(lambda: _terms_rank(q, -1, -1))
    elif tag is SeriesTag.RANK:
        val = rel(lambda: _terms_rank(q, _w_numeric(sid.w), _w_numeric(cyclo_inv(sid.w))))
    elif tag is SeriesTag.B:
        e1 = euler_numeric(q, d, max_dps)
        e2 = euler_numeric(q * q, d, max_dps)
        with mp.workdps(d + 10):
            val = e1 ** 3 / e2 ** 2
    elif tag is SeriesTag.U_SMALL:
        val = u_sum_numeric(-1, q, d, tail=tail, max_dps=max_dps)
    elif tag is SeriesTag.U_BIG:
        val = u_sum_numeric(sid.w, q, d, tail=tail, max_dps=max_dps)
    elif tag is SeriesTag.PSI:
        val = rel(lambda: _terms_psi(q))
    elif tag is SeriesTag.PHI:
        val = rel(lambda: _terms_phi(q))
    elif tag is SeriesTag.CRANK:
        e1 = euler_numeric(q, d, max_dps)
        if sid.w == 1:
            with mp.workdps(d + 10):
                val = 1 / e1
        else:
            est = (_log10_poch_estimate(wc, qc) + _log10_poch_estimate(1 / wc * qc, qc)
                   + _log10_poch_estimate(qc, qc))
            th = rel(lambda: _terms_theta_w(q, _w_numeric(sid.w),
                                            _w_numeric(cyclo_inv(sid.w))), est)
            with mp.workdps(d + 10):
                val = (1 - _w_numeric(sid.w)) * e1 ** 2 / th
    elif tag in _APPELL:
        val = appell_sum_numeric(tag, sid.w, q, d, tail=tail, max_dps=max_dps)
        e1 = euler_numeric(q, d, max_dps)
        with mp.workdps(d + 10):
            val = (1 - _w_numeric(cyclo_inv(sid.w))) * val / e1
    elif tag is SeriesTag.QZETA:
        val = rel(lambda: _terms_lambert(q, sid.s))
    elif tag in _EIS:
        weight, c = _EIS[tag]
        z = rel(lambda: _terms_lambert(q, weight))
        with mp.workdps(d + 10):
            val = 1 + c * z
    else:  # pragma: no cover
        raise ValueError(f"unhandled tag {tag}")
    with mp.workdps(d + 10):
        val = +val
        err = abs(val) * mpmath.mpf(10) ** (-digits)
    return BigComplex(val, digits, err)


def _pair_poch_numeric(w, q, digits: int, tail: int, max_dps: int):
    """(w q;q)_inf (q/w;q)_inf via the triple product (or (q;q)_inf^2 at w = 1)."""
    e1 = euler_numeric(q, digits + 5, max_dps)
    if w == 1:
        with mp.workdps(digits + 15):
            return e1 * e1
    wc = complex(_w_numeric(w) if isinstance(w, Cyclo) else w)
    qc = complex(q)
    est = (_log10_poch_estimate(wc, qc) + _log10_poch_estimate(qc / wc, qc)
           + _log10_poch_estimate(qc, qc))
    th = _plain_sum(lambda: _terms_theta_w(q, _w_numeric(w), 1 / _w_numeric(w)),
                    digits + 5, tail, max_dps, _start(digits + 5, est))
    with mp.workdps(digits + 15):
        return th / ((1 - _w_numeric(w)) * e1)


def _u_tail_terms(q, c1, c2, y) -> Iterator:
    # sum_k d_k y^(k+1) / (1 - q^(k+1)), where
    # 1 / ((c1 x;q)_inf (c2 x;q)_inf) = sum_k d_k x^k
    e1 = [mpmath.mpc(1)]
    e2 = [mpmath.mpc(1)]
    qk = mpmath.mpc(1)
    yk = y
    k = 0
    while True:
        if k:
            qk = qk * q
            e1.append(e1[-1] * c1 / (1 - qk))
            e2.append(e2[-1] * c2 / (1 - qk))
            yk = yk * y
        dk = mpmath.fsum(e1[i] * e2[k - i] for i in range(k + 1))
        yield dk * yk / (1 - qk * q)
        k += 1


def u_sum_numeric(w, q, digits: int, *, tail: int = 3,
                  max_dps: int = DEFAULT_MAX_DPS, accelerate: bool = True) -> mpmath.mpc:
    """sum_n (w q;q)_n (q/w;q)_n q^(n+1); w = -1 gives u(q).

    Near |q| = 1 the products settle at (wq;q)_inf (q/w;q)_inf long before
    the q^(n+1) factor is small, so after N terms the remainder is summed
    in closed form: P_inf * sum_k d_k y^(k+1) / (1 - q^(k+1)), y = q^(N+1).
    """
    q = _as_mpc(q)
    aq = float(abs(q))
    cyc = isinstance(w, Cyclo)

    def consts():
        if cyc:
            return _w_numeric(w), _w_numeric(cyclo_inv(w))
        wn = mpmath.mpc(w)
        return wn, 1 / wn

    def plain(limit=None):
        def make():
            c1, c2 = consts()
            gen = _terms_u(q, c1, c2)
            if limit is None:
                return gen
            return (x for _, x in zip(range(limit), gen))
        return adaptive_sum(make, digits, tail=tail, max_dps=max_dps)

    gap = 1 - aq
    if not accelerate or gap > 0.05 or aq == 0:
        return plain().value
    N = int(math.ceil(math.log(min(gap, 0.1) ** 2 / 100) / math.log(aq)))
    head = plain(N)
    if head.terms < N:
        return head.value
    pinf = _pair_poch_numeric(w, q, digits, tail, max_dps)
    with mp.workdps(head.dps):
        y = q ** (N + 1)
    def make_tail():
        c1, c2 = consts()
        return _u_tail_terms(q, c1, c2, y)
    tl = adaptive_sum(make_tail, digits, tail=tail, max_dps=max_dps)
    with mp.workdps(max(head.dps, tl.dps) + 5):
        return head.value + pinf * tl.value


def appell_sum_numeric(tag, w, q, digits: int, *, tail: int = 3,
                       max_dps: int = DEFAULT_MAX_DPS) -> mpmath.mpc:
    """The bare bilateral Appell-Lerch sum (no (1 - 1/w)/(q;q)_inf prefactor)."""
    tag = SeriesTag(tag)
    q = _as_mpc(q)
    first = tag is SeriesTag.APPELL1
    winv = cyclo_inv(w) if isinstance(w, Cyclo) else None
    return adaptive_sum(
        lambda: _terms_appell(q, _w_numeric(w),
                              _w_numeric(winv) if winv is not None else 1 / _w_numeric(w),
                              first),
        digits, tail=tail, max_dps=max_dps).value


def neg_qpoch_sq_numeric(q, digits: int, max_dps: int = DEFAULT_MAX_DPS) -> mpmath.mpc:
    """(-q;q)_inf^2 computed as ((q^2;q^2)_inf / (q;q)_inf)^2."""
    q = _as_mpc(q)
    e1 = euler_numeric(q, digits + 5, max_dps)
    e2 = euler_numeric(q * q, digits + 5, max_dps)
    with mp.workdps(digits + 15):
        return (e2 / e1) ** 2


def tr_sum_numeric(which: int, q, digits: int, *, tail: int = 3,
                   max_dps: int = DEFAULT_MAX_DPS) -> mpmath.mpc:
    """Sums on the right of the two (-q;q)_inf^2 representations.

    which=1: sum_{n>=1} (-1)^(n-1) (q;q^2)_(n-1) q^(n^2) / (-q;q^2)_n^2
    which=2: sum_{n>=0} (-1)^n (q;q^2)_n q^(n^2) / (-q^2;q^2)_n^2
    """
    q = _as_mpc(q)
    gen = {1: _tr1_terms, 2: _tr2_terms}[which]
    return adaptive_sum(lambda: gen(q), digits, tail=tail, max_dps=max_dps).value
