import math
import random
import sys
from fractions import Fraction as F

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylm.errors import (
    BranchCutStraddle,
    DivisionByIntervalContainingZero,
    IntervalOverflow,
    NegativeBaseFractionalPower,
)
from weylm.interval import ComplexBox, RealInterval, arith, carith, csqrt, mag_bounds, rpow


def ulp(x):
    return math.nextafter(x, math.inf) - x


def holds(iv, q):
    return F(iv.lo) <= q <= F(iv.hi)


def box_holds(b, re, im):
    return holds(b.re, re) and holds(b.im, im)


# -- real arithmetic ------------------------------------------------------


def test_add_exact_endpoints():
    r = arith(RealInterval(1, 2), RealInterval(3, 4), "+")
    assert (r.lo, r.hi) == (4.0, 6.0)


def test_symmetric_product():
    r = arith(RealInterval(-1, 1), RealInterval(-1, 1), "*")
    assert (r.lo, r.hi) == (-1.0, 1.0)


def test_one_third_is_tight():
    r = arith(RealInterval(1), RealInterval(3), "/")
    assert holds(r, F(1, 3))
    assert r.hi - r.lo <= 2 * ulp(1 / 3)


def test_decimal_strings_are_enclosed():
    r = RealInterval("0.1")
    assert holds(r, F(1, 10))
    assert r.lo < r.hi


def test_division_by_zero_interval():
    with pytest.raises(DivisionByIntervalContainingZero):
        RealInterval(1) / RealInterval(-1, 1)


def test_overflow_is_an_error():
    with pytest.raises(IntervalOverflow):
        RealInterval(1e308) * RealInterval(1e308)


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        RealInterval(2, 1)


@given(
    st.floats(-1e6, 1e6), st.floats(0, 1e3), st.floats(-1e6, 1e6), st.floats(0, 1e3),
    st.sampled_from("+-*/"), st.floats(0, 1), st.floats(0, 1),
)
@settings(max_examples=400, deadline=None)
def test_real_containment_property(a, wa, b, wb, op, ta, tb):
    A = RealInterval(a, a + wa)
    B = RealInterval(b, b + wb)
    if op == "/" and B.lo <= 0.0 <= B.hi:
        return
    x = F(A.lo) + F(ta) * (F(A.hi) - F(A.lo))
    y = F(B.lo) + F(tb) * (F(B.hi) - F(B.lo))
    exact = {"+": x + y, "-": x - y, "*": x * y, "/": x / y if y else None}[op]
    f = {"+": F.__add__, "-": F.__sub__, "*": F.__mul__, "/": F.__truediv__}[op]
    corners = [f(F(u), F(v)) for u in (A.lo, A.hi) for v in (B.lo, B.hi)]
    if max(abs(c) for c in corners) > F(sys.float_info.max):
        # e.g. [0, 1] / subnormal: the exact range has no finite enclosure
        with pytest.raises(IntervalOverflow):
            arith(A, B, op)
        return
    assert holds(arith(A, B, op), exact)


def test_inclusion_monotonicity():
    rng = random.Random(3)
    for _ in range(500):
        a, b = sorted(rng.uniform(-5, 5) for _ in range(2))
        c, d = sorted(rng.uniform(1, 5) for _ in range(2))
        A, B = RealInterval(a, b), RealInterval(c, d)
        A2, B2 = A.inflate(0.5), B.inflate(0.25)
        for op in "+-*/":
            assert arith(A, B, op).subset(arith(A2, B2, op))


def test_point_inputs_give_narrow_results():
    rng = random.Random(5)
    for _ in range(200):
        x, y = rng.uniform(0.5, 2), rng.uniform(0.5, 2)
        for op in "+-*/":
            r = arith(RealInterval(x), RealInterval(y), op)
            assert r.width <= 4 * ulp(max(abs(r.lo), abs(r.hi), 1e-300))


# -- complex boxes --------------------------------------------------------


def test_complex_rotation():
    r = carith(ComplexBox(1.0, 0.0), ComplexBox(0.0, 1.0), "/")
    assert r.contains(-1j)


def test_complex_add():
    a = ComplexBox(RealInterval(0, 1), RealInterval(0, 1))
    r = carith(a, ComplexBox(1.0, 0.0), "+")
    assert (r.re.lo, r.re.hi, r.im.lo, r.im.hi) == (1.0, 2.0, 0.0, 1.0)


def test_complex_division_oracle():
    r = carith(ComplexBox(2.0, 1.0), ComplexBox(1.0, 1.0), "/")
    assert box_holds(r, F(3, 2), F(-1, 2))


def test_complex_division_by_box_with_zero():
    with pytest.raises(DivisionByIntervalContainingZero):
        ComplexBox(1.0) / ComplexBox(RealInterval(-1, 1), RealInterval(-1, 1))


def test_conj_and_hull():
    a = ComplexBox(RealInterval(1, 2), RealInterval(3, 4))
    assert a.conj().im.hi == -3.0
    h = a.hull(ComplexBox(0.0, 0.0))
    assert h.contains(0) and h.contains(2 + 4j)


# -- csqrt ----------------------------------------------------------------


def test_csqrt_positive_real():
    assert csqrt(ComplexBox(4.0)).contains(2)


def test_csqrt_below_cut():
    r = csqrt(ComplexBox(-1.0, -1e-12))
    with mp.workdps(40):
        w = mp.sqrt(mp.mpc(-1, F(-1e-12).__float__()))
    assert box_holds(r, F(str(w.real)), F(str(w.imag)))
    assert r.im.hi < 0 < r.re.hi


def test_csqrt_straddling_cut():
    with pytest.raises(BranchCutStraddle):
        csqrt(ComplexBox(RealInterval(-2, -1), RealInterval(-1, 1)))


@given(st.floats(-50, 50), st.floats(0, 5), st.floats(-50, 50), st.floats(0, 5), st.floats(0, 1), st.floats(0, 1))
@settings(max_examples=300, deadline=None)
def test_csqrt_containment_property(x, wx, y, wy, tx, ty):
    b = ComplexBox(RealInterval(x, x + wx), RealInterval(y, y + wy))
    try:
        r = csqrt(b)
    except BranchCutStraddle:
        assert b.re.lo < 0 and b.im.lo < 0 <= b.im.hi
        return
    px = F(b.re.lo) + F(tx) * (F(b.re.hi) - F(b.re.lo))
    py = F(b.im.lo) + F(ty) * (F(b.im.hi) - F(b.im.lo))
    with mp.workdps(50):
        w = mp.sqrt(mp.mpc(mp.mpf(px.numerator) / px.denominator, mp.mpf(py.numerator) / py.denominator))
        assert r.re.lo <= w.real <= r.re.hi
        assert r.im.lo <= w.imag <= r.im.hi


# -- magnitudes and real powers ------------------------------------------


def test_mag_bounds_pythagorean():
    m = mag_bounds(ComplexBox(3.0, 4.0))
    assert m.contains(5) and m.width <= 4 * ulp(5.0)


def test_mag_bounds_zero():
    m = mag_bounds(ComplexBox(0.0, 0.0))
    assert (m.lo, m.hi) == (0.0, 0.0)


def test_mag_bounds_square_box():
    m = mag_bounds(ComplexBox(RealInterval(1, 2), RealInterval(1, 2)))
    assert m.lo <= math.sqrt(2) <= m.lo + 2 * ulp(1.5)
    assert m.hi >= 2 * math.sqrt(2) >= m.hi - 2 * ulp(3.0)
    with mp.workdps(40):
        assert m.lo <= mp.sqrt(2) and m.hi >= 2 * mp.sqrt(2)


def test_rpow_monotone():
    r = rpow(RealInterval(4, 9), F(1, 2))
    assert (r.lo, r.hi) == (2.0, 3.0)


def test_rpow_three_halves_unit():
    r = rpow(RealInterval(0, 1), F(3, 2))
    assert (r.lo, r.hi) == (0.0, 1.0)


def test_rpow_sqrt2_tight():
    r = rpow(RealInterval(2), F(1, 2))
    with mp.workdps(40):
        assert r.lo <= mp.sqrt(2) <= r.hi
    assert r.width <= 2 * ulp(1.4142135623730951)


def test_rpow_negative_base_fractional():
    with pytest.raises(NegativeBaseFractionalPower):
        rpow(RealInterval(-1, 1), F(1, 2))


@pytest.mark.parametrize("alpha", [F(1, 2), F(3, 2), F(-3, 2), F(5, 4), F(-1, 3)])
def test_rpow_containment(alpha):
    rng = random.Random(11)
    for _ in range(100):
        a = rng.uniform(0.01, 100)
        b = a * (1 + rng.uniform(0, 0.1))
        r = rpow(RealInterval(a, b), alpha)
        with mp.workdps(40):
            for v in (a, b, (a + b) / 2):
                w = mp.mpf(v) ** (mp.mpf(alpha.numerator) / alpha.denominator)
                assert r.lo <= w <= r.hi
