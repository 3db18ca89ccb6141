"""Independent reference computations for the test suite.

Nothing here touches qradial.series or qradial.catalog: truncated power
series are plain Python lists, products are multiplied out term by term,
and bilateral sums are expanded as Laurent series without the index
rewriting the library uses.
"""

from __future__ import annotations

from fractions import Fraction


def pmul(a, b, N):
    out = [0] * (N + 1)
    for i, x in enumerate(a[: N + 1]):
        if not x:
            continue
        for j, y in enumerate(b[: N + 1 - i]):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def pinv(a, N):
    """1/a for a list with invertible constant term (generic ring)."""
    inv0 = 1 / a[0] if not isinstance(a[0], int) else Fraction(1, a[0])
    out = [inv0] + [0] * N
    for n in range(1, N + 1):
        acc = 0
        for k in range(1, min(n, len(a) - 1) + 1):
            if a[k]:
                acc = acc + a[k] * out[n - k]
        out[n] = -acc * inv0
    return out


def binomial(c, d, N):
    """1 - c q^d as a list."""
    out = [0] * (N + 1)
    out[0] = 1
    if d <= N:
        out[d] = -c
    return out


def euler_product(N):
    """(q;q)_inf by multiplying out every factor."""
    out = [1] + [0] * N
    for j in range(1, N + 1):
        out = pmul(out, binomial(1, j, N), N)
    return out


def pentagonal(N):
    """(q;q)_inf from Euler's pentagonal number theorem."""
    out = [0] * (N + 1)
    k = 0
    while True:
        hit = False
        for kk in {k, -k}:
            e = kk * (3 * kk - 1) // 2
            if e <= N:
                out[e] += (-1) ** (kk % 2)
                hit = True
        if not hit:
            break
        k += 1
    return out


def partitions_dp(N):
    """p(0..N) by counting with parts 1..N (coin-change recursion)."""
    p = [1] + [0] * N
    for part in range(1, N + 1):
        for n in range(part, N + 1):
            p[n] += p[n - part]
    return p


def partitions_durfee(N):
    """p(0..N) via Durfee squares: sum q^(k^2) / (q;q)_k^2."""
    out = [0] * (N + 1)
    k = 0
    while k * k <= N:
        den = [1] + [0] * N
        for j in range(1, k + 1):
            den = pmul(den, binomial(1, j, N), N)
        den = pmul(den, den, N)
        term = [0] * (N + 1)
        term[k * k] = 1
        out = [x + y for x, y in zip(out, pmul(term, pinv(den, N), N))]
        k += 1
    return [int(x) for x in out]


def f_direct(N):
    """f(q) = sum q^(n^2) / (-q;q)_n^2 term by term."""
    out = [Fraction(0)] * (N + 1)
    n = 0
    while n * n <= N:
        den = [1] + [0] * N
        for j in range(1, n + 1):
            den = pmul(den, binomial(-1, j, N), N)
        den = pmul(den, den, N)
        num = [0] * (N + 1)
        num[n * n] = 1
        out = [x + y for x, y in zip(out, pmul(num, pinv(den, N), N))]
        n += 1
    return out


def sigma(n, k):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def appell_bilateral(w, winv, N, rank: bool):
    """Bilateral sum over |n| <= N of q^(n(n+1)/2) c_n / (1 - q^n / w).

    For n < 0 the factor 1/(1 - q^n/w) is expanded as the Laurent series
    -sum_{k>=1} w^k q^(-n k). ``w``/``winv`` live in any field with ``*``.
    """
    out = [0] * (N + 1)

    def cn(n):
        if rank:
            return (-w) ** n if n >= 0 else (-winv) ** (-n)
        return (-1) ** (n % 2)

    for n in range(-N - 1, N + 2):
        tri = n * (n + 1) // 2
        if tri > N:
            continue
        c = cn(n)
        if n > 0:
            # geometric in q^n / w
            k = 0
            while tri + k * n <= N:
                out[tri + k * n] = out[tri + k * n] + c * winv ** k
                k += 1
        elif n == 0:
            out[0] = out[0] + c * (1 / (1 - winv))
        else:
            m = -n
            k = 1
            while tri + k * m <= N:
                out[tri + k * m] = out[tri + k * m] - c * w ** k
                k += 1
    return out


def rank_direct(w, winv, N):
    """R(w;q) = sum q^(n^2) / ((wq;q)_n (q/w;q)_n)."""
    out = [0] * (N + 1)
    n = 0
    while n * n <= N:
        den = [1] + [0] * N
        for j in range(1, n + 1):
            den = pmul(den, binomial(w, j, N), N)
            den = pmul(den, binomial(winv, j, N), N)
        num = [0] * (N + 1)
        num[n * n] = 1
        out = [x + y for x, y in zip(out, pmul(num, pinv(den, N), N))]
        n += 1
    return out


def u_direct(w, winv, N):
    """U(w;q) = sum (wq;q)_n (q/w;q)_n q^(n+1)."""
    out = [0] * (N + 1)
    prod = [1] + [0] * N
    for n in range(N):
        if n:
            prod = pmul(prod, binomial(w, n, N), N)
            prod = pmul(prod, binomial(winv, n, N), N)
        for i in range(N - n):
            if prod[i]:
                out[i + n + 1] = out[i + n + 1] + prod[i]
    return out
