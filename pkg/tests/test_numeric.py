import mpmath
import pytest

from qradial.numeric import (
    BigComplex,
    NonConvergenceError,
    PrecisionGuardError,
    accumulate,
    adaptive_sum,
)


def geometric(num, den):
    def make():
        t = mpmath.mpf(1)
        ratio = mpmath.mpf(num) / den
        while True:
            yield t
            t = t * ratio
    return make


def test_geometric_series_to_requested_digits():
    res = adaptive_sum(geometric(1, 3), 50)
    with mpmath.workdps(60):
        assert abs(res.value - mpmath.mpf(3) / 2) < mpmath.mpf(10) ** -50


def test_precision_is_raised_for_cancellation():
    # exp(-40) from its Taylor series loses about 17 digits to cancellation
    def make():
        x = mpmath.mpf(-40)
        t = mpmath.mpf(1)
        k = 0
        while True:
            yield t
            k += 1
            t = t * x / k
    res = adaptive_sum(make, 30)
    assert res.loss > 15
    assert res.dps >= 30 + res.loss
    with mpmath.workdps(60):
        assert abs(res.value / mpmath.exp(-40) - 1) < mpmath.mpf(10) ** -30


def test_precision_guard():
    def make():
        x = mpmath.mpf(-200)
        t = mpmath.mpf(1)
        k = 0
        while True:
            yield t
            k += 1
            t = t * x / k
    with pytest.raises(PrecisionGuardError):
        adaptive_sum(make, 30, max_dps=60)


def test_non_convergence_is_reported():
    with pytest.raises(NonConvergenceError):
        with mpmath.workdps(20):
            accumulate(geometric(99999, 100000)(), 20, max_terms=1000)


def test_terminating_stream_stops_by_itself():
    with mpmath.workdps(20):
        res = accumulate(iter([mpmath.mpf(1), mpmath.mpf(2)]), 20)
    assert res.value == 3 and res.terms == 2


def test_bigcomplex_arithmetic_tracks_min_digits():
    a = BigComplex(mpmath.mpc(1, 2), 40)
    b = BigComplex(mpmath.mpc(3, -1), 20)
    assert (a + b).digits == 20
    assert (a * b).value == mpmath.mpc(5, 5)
    assert (-a).re == -1
    assert a.close_to(mpmath.mpc(1, 2), 1e-30)
