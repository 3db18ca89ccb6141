"""Limits at roots of unity: exact terminating values and radial experiments.

Exact side: the limiting values are finite sums in a cyclotomic field,
because some q-Pochhammer factor vanishes at the root. Each evaluator walks
the sum term by term and stops at the first exactly-zero product, so a
parameter choice that does not terminate is reported instead of assumed.

Numeric side: functions are sampled at q = zeta * r_t with r_t = 1 - 2^-t
and the sample sequence is extrapolated with iterated Aitken delta-squared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Sequence

import mpmath
from mpmath import mp

from .catalog import (
    SeriesTag,
    appell_sum_numeric,
    euler_numeric,
    eval_numeric,
    neg_qpoch_sq_numeric,
    tr_sum_numeric,
)
from .exactnum import Cyclo, cyclo_const, cyclo_embed, cyclo_inv, cyclo_root
from .numeric import DEFAULT_MAX_DPS, NonConvergenceError, PrecisionGuardError, log10_abs

__all__ = [
    "RootSpec",
    "ForParams",
    "RadialPath",
    "RadialSample",
    "RadialReport",
    "SplitResult",
    "exact_u_at_root",
    "for1_value",
    "for2_value",
    "exact_bigU_at_root",
    "for3_value",
    "theta_multiplier",
    "collapsing_residue",
    "split_appell_numeric",
    "aitken",
    "extrapolate",
    "quotient_limit_check",
    "radial_diff_report",
    "decomposed_radial_check",
]


@dataclass(frozen=True)
class RootSpec:
    """The root of unity zeta_m^h."""

    h: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("root order must be positive")
        if self.m == 1:
            if self.h != 0:
                raise ValueError("the order-1 root is zeta_1^0")
        elif not 1 <= self.h < self.m:
            raise ValueError(f"need 1 <= h < m, got h={self.h}, m={self.m}")
        if gcd(self.h, self.m) != 1:
            raise ValueError(f"gcd(h, m) = gcd({self.h}, {self.m}) != 1")

    def exact(self) -> Cyclo:
        return cyclo_root(self.m, self.h)

    def numeric(self) -> mpmath.mpc:
        return mpmath.expjpi(mpmath.mpf(2 * self.h) / self.m)


@dataclass(frozen=True)
class ForParams:
    a: int
    b: int
    root: RootSpec
    hprime: int

    @classmethod
    def make(cls, a: int, b: int, h: int, m: int) -> "ForParams":
        if not 1 <= a < b:
            raise ValueError(f"need 1 <= a < b, got a={a}, b={b}")
        if gcd(a, b) != 1:
            raise ValueError(f"gcd(a, b) = gcd({a}, {b}) != 1")
        root = RootSpec(h, m)
        if m % b:
            raise ValueError(f"b = {b} must divide m = {m}")
        return cls(a, b, root, pow(h, -1, m))

    def __post_init__(self):
        m = self.root.m
        if (self.root.h * self.hprime - 1) % m or not 0 <= self.hprime < m:
            raise ValueError("hprime must be the reduced inverse of h mod m")
        if m % self.b or gcd(self.a, self.b) != 1 or not 1 <= self.a < self.b:
            raise ValueError("invalid (a, b) for this root")

    @property
    def h(self) -> int:
        return self.root.h

    @property
    def m(self) -> int:
        return self.root.m

    def w_exact(self) -> Cyclo:
        """zeta_b^a inside Q(zeta_m)."""
        return cyclo_root(self.m, self.a * (self.m // self.b))

    def w_own(self) -> Cyclo:
        """zeta_b^a inside Q(zeta_b)."""
        return cyclo_root(self.b, self.a)


@dataclass(frozen=True)
class RadialPath:
    t_min: int
    t_max: int
    digits: int = 60

    def __post_init__(self):
        if not 2 <= self.t_min < self.t_max:
            raise ValueError(f"need 2 <= t_min < t_max, got {self.t_min}, {self.t_max}")
        if self.digits < 10:
            raise ValueError("digits must be >= 10")

    def ts(self) -> range:
        return range(self.t_min, self.t_max + 1)

    @staticmethod
    def radius(t: int) -> mpmath.mpf:
        return 1 - mpmath.mpf(2) ** (-t)


@dataclass(frozen=True)
class RadialSample:
    t: int
    r: mpmath.mpf
    value: mpmath.mpc


@dataclass
class RadialReport:
    samples: list[RadialSample]
    extrapolated: mpmath.mpc | None
    error_estimate: mpmath.mpf | None
    exact_target: Cyclo | None = None
    agreement: mpmath.mpf | None = None
    digits: int = 0
    failed: list[tuple[int, str]] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return not self.failed

    def within(self, tol) -> bool:
        return self.agreement is not None and self.agreement < tol


# ---------------------------------------------------------------------------
# exact terminating sums
# ---------------------------------------------------------------------------


def _terminating(factor: Callable[[int], Cyclo], summand: Callable[[int, Cyclo], Cyclo],
                 m: int, limit: int) -> tuple[Cyclo, int]:
    """sum_n summand(n, P_n) where P_n = prod_{j=1..n} factor(j).

    Returns (value, n0) with n0 the first index whose product is exactly 0.
    """
    total = cyclo_const(m, 0)
    prod = cyclo_const(m, 1)
    for n in range(limit + 1):
        if n:
            prod = prod * factor(n)
        if prod.is_zero():
            return total, n
        total = total + summand(n, prod)
    raise ValueError(f"sum does not terminate within {limit} terms at this root")


def _root_of_order(k: int, root) -> RootSpec:
    if root is None:
        root = RootSpec(1, 2 * k)
    elif isinstance(root, int):
        root = RootSpec(root, 2 * k)
    if k < 1:
        raise ValueError("k must be positive")
    if root.m != 2 * k:
        raise ValueError(f"root zeta_{root.m}^{root.h} does not have order 2k = {2 * k}")
    return root


def exact_u_at_root(k: int, root: RootSpec | int | None = None) -> Cyclo:
    """u(zeta) = sum (-zeta;zeta)_n^2 zeta^(n+1) at a primitive root of order 2k."""
    if root is not None and not isinstance(root, int) and root.m % 2:
        raise ValueError("u(q) terminates only at even-order roots")
    root = _root_of_order(k, root)
    m = root.m
    z = root.exact()
    value, n0 = _terminating(lambda j: (1 + z ** j) ** 2,
                             lambda n, p: p * z ** (n + 1), m, 2 * m)
    if n0 != k:
        raise AssertionError(f"expected termination at n = {k}, found n = {n0}")
    return value


def for1_value(k: int, root: RootSpec | int | None = None) -> Cyclo:
    return exact_u_at_root(k, root) * (-4)


def for2_value(k: int, root: RootSpec | int | None = None) -> Cyclo:
    """-4 psi(-zeta) for even k, 2 phi(-zeta) for odd k."""
    root = _root_of_order(k, root)
    m = root.m
    q = -root.exact()
    if k % 2 == 0:
        # psi(q) = sum (-q^2;q^2)_n q^(n+1)
        value, _ = _terminating(lambda j: 1 + q ** (2 * j),
                                lambda n, p: p * q ** (n + 1), m, 2 * m)
        return value * (-4)
    # phi(q) = 1 + sum (-1)^n (q;q^2)_n q^(2n+1)
    value, _ = _terminating(lambda j: 1 - q ** (2 * j - 1),
                            lambda n, p: p * q ** (2 * n + 1) * (-1) ** n, m, 2 * m)
    return (value + 1) * 2


def exact_bigU_at_root(p: ForParams) -> Cyclo:
    """U(zeta_b^a; zeta_m^h), a terminating sum in Q(zeta_m)."""
    m = p.m
    w = p.w_exact()
    winv = cyclo_inv(w)
    z = p.root.exact()
    value, _ = _terminating(lambda j: (1 - w * z ** j) * (1 - winv * z ** j),
                            lambda n, pr: pr * z ** (n + 1), m, m)
    return value


def for3_value(p: ForParams) -> Cyclo:
    w = p.w_exact()
    return -(1 - w) * (1 - cyclo_inv(w)) * exact_bigU_at_root(p)


def theta_multiplier(p: ForParams) -> Cyclo:
    """zeta_{b^2}^(h' a^2 m) in Q(zeta_{b^2})."""
    bb = p.b * p.b
    return cyclo_root(bb, p.hprime * p.a * p.a * p.m)


def collapsing_residue(p: ForParams) -> int:
    """The residue c0 mod m with zeta_b^-a zeta_m^(h c0) = 1."""
    return (p.hprime * p.a * (p.m // p.b)) % p.m


# ---------------------------------------------------------------------------
# extrapolation
# ---------------------------------------------------------------------------


def aitken(seq: Sequence) -> list:
    """One sweep of Aitken's delta-squared process."""
    out = []
    for i in range(len(seq) - 2):
        x0, x1, x2 = seq[i], seq[i + 1], seq[i + 2]
        d1 = x2 - x1
        d2 = d1 - (x1 - x0)
        scale = max(abs(x0), abs(x1), abs(x2), 1)
        if abs(d2) <= scale * mpmath.mpf(10) ** (-(mp.dps - 5)):
            out.append(x2)
        else:
            out.append(x2 - d1 * d1 / d2)
    return out


def extrapolate(values: Sequence, levels: int = 2):
    """Iterated Aitken; returns (limit, |last - previous| at the deepest level)."""
    seq = list(values)
    if not seq:
        raise ValueError("nothing to extrapolate")
    for _ in range(levels):
        if len(seq) < 4:
            break
        seq = aitken(seq)
    if len(seq) == 1:
        return seq[-1], None
    return seq[-1], abs(seq[-1] - seq[-2])


def _finish(samples, digits, target: Cyclo | None, failed, diagnostics) -> RadialReport:
    with mp.workdps(digits + 10):
        if samples:
            limit, err = extrapolate([s.value for s in samples])
        else:
            limit, err = None, None
        agreement = None
        if target is not None and limit is not None:
            agreement = abs(limit - cyclo_embed(target, digits).value)
    return RadialReport(samples, limit, err, target, agreement, digits, failed, diagnostics)


def _point(root: RootSpec, t: int, dps: int) -> tuple[mpmath.mpf, mpmath.mpc]:
    with mp.workdps(dps):
        r = RadialPath.radius(t)
        return r, root.numeric() * r


# ---------------------------------------------------------------------------
# Appell-Lerch splitting by residue class
# ---------------------------------------------------------------------------


@dataclass
class SplitResult:
    c0: int
    rank_parts: list      # residue parts of sum q^T (-w)^n / (1 - q^n / w)
    crank_parts: list     # residue parts of sum q^T (-1)^n / (1 - q^n / w)
    rank_total: mpmath.mpc
    crank_total: mpmath.mpc


def split_appell_numeric(p: ForParams, r, digits: int, *,
                         max_terms: int = 200_000) -> SplitResult:
    """Split both bilateral Appell-Lerch sums at q = zeta_m^h r by n mod m.

    Terms are summed in their original bilateral form (negative n use
    q^n = 1/q^|n| directly), independent of the folded series used elsewhere.
    """
    m = p.m
    dps = digits + 20
    with mp.workdps(dps):
        r = mpmath.mpf(r)
        if not 0 < r < 1:
            raise ValueError("need 0 < r < 1")
        q = p.root.numeric() * r
        w = cyclo_embed(p.w_own(), dps).value
        winv = 1 / w
        negw = -w
        parts1 = [mpmath.mpc(0)] * m
        parts2 = [mpmath.mpc(0)] * m
        eps = mpmath.mpf(10) ** (-dps)
        quiet = 0
        biggest = mpmath.mpf(0)

        def add(n: int, qn, tri):
            sign = -1 if n % 2 else 1
            den = 1 - winv * qn
            t1 = tri * negw ** n / den
            t2 = tri * sign / den
            c = n % m
            parts1[c] += t1
            parts2[c] += t2
            return max(abs(t1), abs(t2))

        add(0, mpmath.mpc(1), mpmath.mpc(1))
        qpos = mpmath.mpc(1)
        qneg = mpmath.mpc(1)
        tri_pos = mpmath.mpc(1)   # q^(n(n+1)/2)
        tri_neg = mpmath.mpc(1)   # q^((-n)(-n+1)/2) = q^(n(n-1)/2)
        n = 0
        while True:
            n += 1
            tri_neg = tri_neg * qpos   # qpos is still q^(n-1) here
            qpos = qpos * q
            qneg = qneg / q
            tri_pos = tri_pos * qpos
            a = add(n, qpos, tri_pos)
            b = add(-n, qneg, tri_neg)
            size = max(max(abs(x) for x in parts1), max(abs(x) for x in parts2))
            biggest = max(biggest, size)
            if max(a, b) <= eps * biggest:
                quiet += 1
                if quiet >= 2 * m + 3:
                    break
            else:
                quiet = 0
            if n > max_terms:
                raise NonConvergenceError("Appell-Lerch split did not converge")
        total1 = mpmath.fsum(parts1)
        total2 = mpmath.fsum(parts2)
    return SplitResult(collapsing_residue(p), parts1, parts2, total1, total2)


# ---------------------------------------------------------------------------
# radial experiments
# ---------------------------------------------------------------------------


def quotient_limit_check(p: ForParams, path: RadialPath, *,
                         max_dps: int = DEFAULT_MAX_DPS) -> RadialReport:
    """Sample (rank Appell-Lerch side) / C(w;q) and compare with theta_multiplier."""
    digits = path.digits
    tail = 2 * p.m + 3
    samples, failed = [], []
    for t in path.ts():
        try:
            r, q = _point(p.root, t, digits + 20)
            a1 = eval_numeric(SeriesTag.APPELL1, q, digits, w=p.w_own(), tail=tail, max_dps=max_dps)
            c = eval_numeric(SeriesTag.CRANK, q, digits, w=p.w_own(), tail=tail, max_dps=max_dps)
            with mp.workdps(digits + 10):
                samples.append(RadialSample(t, r, a1.value / c.value))
        except (PrecisionGuardError, NonConvergenceError) as exc:
            failed.append((t, str(exc)))
    return _finish(samples, digits, theta_multiplier(p), failed,
                   {"c0": collapsing_residue(p)})


def _magnitude(fn: Callable[[int], mpmath.mpc]) -> float:
    return max(0.0, log10_abs(fn(15)))


def _for1_sample(k: int, root: RootSpec, t: int, digits: int, max_dps: int):
    r, q = _point(root, t, digits + 30)
    mag = _magnitude(lambda d: eval_numeric(SeriesTag.F, q, d, max_dps=max_dps).value)
    work = int(digits + mag + 10)
    f = eval_numeric(SeriesTag.F, q, work, max_dps=max_dps).value
    b = eval_numeric(SeriesTag.B, q, work, max_dps=max_dps).value
    with mp.workdps(work + 10):
        d = f - b if k % 2 == 0 else f + b
    return r, d, mag


def _for3_sample(p: ForParams, t: int, digits: int, route: str, max_dps: int):
    r, q = _point(p.root, t, digits + 30)
    w = p.w_own()
    tail = 2 * p.m + 3
    mu = theta_multiplier(p)
    if route == "appell":
        # R - mu C = pref * (S1 - mu S2) - (1 - w)(1 - 1/w) U(w;q)
        e_mag = -log10_abs(euler_numeric(q, 15, max_dps))
        work = int(digits + max(e_mag, 0) + 10)
        s1 = appell_sum_numeric(SeriesTag.APPELL1, w, q, work, tail=tail, max_dps=max_dps)
        s2 = appell_sum_numeric(SeriesTag.APPELL2, w, q, work, tail=tail, max_dps=max_dps)
        e = euler_numeric(q, work, max_dps)
        u = eval_numeric(SeriesTag.U_BIG, q, digits, w=w, tail=tail, max_dps=max_dps).value
        with mp.workdps(work + 10):
            wn = cyclo_embed(w, work + 10).value
            mun = cyclo_embed(mu, work + 10).value
            pref = (1 - 1 / wn) / e
            d = pref * (s1 - mun * s2) - (1 - wn) * (1 - 1 / wn) * u
        return r, d, e_mag
    if route == "direct":
        mag = _magnitude(lambda dd: eval_numeric(SeriesTag.RANK, q, dd, w=w, tail=tail,
                                                 max_dps=max_dps).value)
        work = int(digits + mag + 10)
        rank = eval_numeric(SeriesTag.RANK, q, work, w=w, tail=tail, max_dps=max_dps).value
        crank = eval_numeric(SeriesTag.CRANK, q, work, w=w, tail=tail, max_dps=max_dps).value
        with mp.workdps(work + 10):
            d = rank - cyclo_embed(mu, work + 10).value * crank
        return r, d, mag
    raise ValueError(f"unknown route {route!r}")


def radial_diff_report(mode: str, params, path: RadialPath, *, route: str = "appell",
                       max_dps: int = DEFAULT_MAX_DPS) -> RadialReport:
    """Sample a difference with a known exact radial limit and extrapolate.

    mode "for1": params is k or (k, h); samples f - (-1)^k b at zeta_{2k}^h r.
    mode "for3": params is a ForParams; samples R(w;q) - mu C(w;q).
    """
    digits = path.digits
    samples, failed, mags = [], [], {}
    mode = mode.lower()
    if mode == "for1":
        k, h = (params, 1) if isinstance(params, int) else params
        root = _root_of_order(k, h)
        target = for1_value(k, root)
        sample = lambda t: _for1_sample(k, root, t, digits, max_dps)  # noqa: E731
    elif mode == "for3":
        if not isinstance(params, ForParams):
            params = ForParams.make(*params)
        target = for3_value(params)
        sample = lambda t: _for3_sample(params, t, digits, route, max_dps)  # noqa: E731
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for t in path.ts():
        try:
            r, d, mag = sample(t)
            samples.append(RadialSample(t, r, d))
            mags[t] = mag
        except (PrecisionGuardError, NonConvergenceError) as exc:
            failed.append((t, str(exc)))
    return _finish(samples, digits, target, failed, {"log10_magnitude": mags})


def decomposed_radial_check(k: int, path: RadialPath, h: int = 1, *,
                            max_dps: int = DEFAULT_MAX_DPS) -> RadialReport:
    """Cancellation-free route to f - (-1)^k b -> -4 u(zeta).

    Uses f + 4u - (-1)^k b = c (-q;q)_inf^2 S(q), with S the sum that stays
    bounded at this root (the q^(n^2)/(-q;q^2)_n^2 sum for even k, the
    q^(n^2)/(-q^2;q^2)_n^2 sum for odd k; c = 8 resp. 2). Samples are the
    recomposed differences -4u(q) + c (-q;q)^2 S(q).
    """
    root = _root_of_order(k, h)
    digits = path.digits
    which, c = (1, 8) if k % 2 == 0 else (2, 2)
    u_exact = exact_u_at_root(k, root)
    tail = 2 * root.m + 3
    samples, failed = [], []
    pref, sums, u_dist, u_vals = {}, {}, {}, {}
    with mp.workdps(digits + 10):
        u_num = cyclo_embed(u_exact, digits).value
    for t in path.ts():
        try:
            r, q = _point(root, t, digits + 30)
            p2 = neg_qpoch_sq_numeric(q, digits, max_dps)
            s = tr_sum_numeric(which, q, digits, tail=tail, max_dps=max_dps)
            u = eval_numeric(SeriesTag.U_SMALL, q, digits, tail=tail, max_dps=max_dps).value
            with mp.workdps(digits + 10):
                samples.append(RadialSample(t, r, -4 * u + c * p2 * s))
                pref[t] = abs(p2)
                sums[t] = s
                u_dist[t] = abs(u - u_num)
                u_vals[t] = u
        except (PrecisionGuardError, NonConvergenceError) as exc:
            failed.append((t, str(exc)))
    ts = sorted(pref)
    diagnostics = {
        "prefactor_abs": pref,
        "prefactor_monotone": all(pref[a] > pref[b] for a, b in zip(ts, ts[1:])),
        "tr_sum": sums,
        "tr_sum_box": max((max(abs(v.real), abs(v.imag)) for v in sums.values()), default=None),
        "u_distance": u_dist,
        "u_exact": u_exact,
        "which_sum": which,
    }
    rep = _finish(samples, digits, for1_value(k, root), failed, diagnostics)
    if len(u_vals) >= 3:
        with mp.workdps(digits + 10):
            u_lim, _ = extrapolate([u_vals[t] for t in ts])
            diagnostics["u_extrapolated_distance"] = abs(u_lim - u_num)
    return rep
