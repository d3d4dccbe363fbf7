"""Outward-rounded real intervals and rectangular complex boxes.

Endpoints are IEEE doubles. Sums and differences go through an error-free
transformation, so results that happen to be exact stay exact. Products,
quotients and square roots are pushed one ulp outward unless an operand makes
them trivially exact (0 or +-1). All rounding is software-side, so nothing
depends on a global FPU mode and values may be shared between threads.

Both classes are treated as immutable values; no method mutates its operands.
"""

import math
import sys
from fractions import Fraction

from .errors import (
    BranchCutStraddle,
    DivisionByIntervalContainingZero,
    DivisorBoxContainsZero,
    IntervalOverflow,
    NegativeBaseFractionalPower,
)

__all__ = [
    "RealInterval",
    "ComplexBox",
    "arith",
    "carith",
    "csqrt",
    "mag_bounds",
    "rpow",
    "as_interval",
    "as_box",
    "exp_up",
    "expm1_up",
    "add_up",
    "mul_up",
    "div_up",
    "float_up",
]

_INF = math.inf
_MAX = sys.float_info.max
_nextafter = math.nextafter
_EXACT = frozenset((0.0, 1.0, -1.0))


def _dn(x):
    return _nextafter(x, -_INF)


def _up(x):
    return _nextafter(x, _INF)


def _add_dn(a, b):
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return _dn(s) if e < 0.0 else s


def _add_up(a, b):
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return _up(s) if e > 0.0 else s


def _mul(a, b, c, d):
    """Bounds of [a, b] * [c, d]."""
    p1 = a * c
    p2 = a * d
    p3 = b * c
    p4 = b * d
    lo = min(p1, p2, p3, p4)
    hi = max(p1, p2, p3, p4)
    if (a in _EXACT and b in _EXACT) or (c in _EXACT and d in _EXACT):
        return lo, hi
    return _dn(lo), _up(hi)


def _div(a, b, c, d):
    """Bounds of [a, b] / [c, d]; caller guarantees 0 not in [c, d]."""
    q1 = a / c
    q2 = a / d
    q3 = b / c
    q4 = b / d
    lo = min(q1, q2, q3, q4)
    hi = max(q1, q2, q3, q4)
    if (c == d and (c == 1.0 or c == -1.0)) or (a == 0.0 and b == 0.0):
        return lo, hi
    return _dn(lo), _up(hi)


def _sqr(a, b):
    """Bounds of {x**2 : x in [a, b]}."""
    if a >= 0.0:
        lo, hi = a * a, b * b
    elif b <= 0.0:
        lo, hi = b * b, a * a
    else:
        return 0.0, _up(max(a * a, b * b))
    if a in _EXACT and b in _EXACT:
        return lo, hi
    return max(_dn(lo), 0.0), _up(hi)


def _sqrt_dn(a):
    r = math.sqrt(a)
    if r * r == a and r.is_integer() and r < 67108864.0:
        return r
    return max(_dn(r), 0.0)


def _sqrt_up(a):
    r = math.sqrt(a)
    if r * r == a and r.is_integer() and r < 67108864.0:
        return r
    return _up(r)


def _float_lo(v):
    """Largest double not above the exact value ``v``."""
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        v = Fraction(v)
    f = float(v)
    if math.isinf(f):
        raise IntervalOverflow(f"value {v!r} exceeds double range")
    if Fraction(f) > v:
        f = _dn(f)
    return f


def _float_hi(v):
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        v = Fraction(v)
    f = float(v)
    if math.isinf(f):
        raise IntervalOverflow(f"value {v!r} exceeds double range")
    if Fraction(f) < v:
        f = _up(f)
    return f


def _ri(lo, hi):
    if not (-_MAX <= lo and hi <= _MAX):
        raise IntervalOverflow(f"interval endpoint overflow: [{lo}, {hi}]")
    r = object.__new__(RealInterval)
    r.lo = lo
    r.hi = hi
    return r


class RealInterval:
    """Closed interval ``[lo, hi]`` of reals with double endpoints.

    ``RealInterval(v)`` builds the tightest interval around ``v``; ints,
    ``Fraction`` and decimal strings are enclosed exactly, so
    ``RealInterval("0.1")`` contains one tenth.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        lo_f = _float_lo(lo)
        hi_f = _float_hi(hi)
        if not lo_f <= hi_f:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        if not (-_MAX <= lo_f and hi_f <= _MAX):
            raise IntervalOverflow(f"interval endpoint overflow: [{lo}, {hi}]")
        self.lo = lo_f
        self.hi = hi_f

    @classmethod
    def from_mid_rad(cls, mid, rad):
        return _ri(_add_dn(mid, -rad), _add_up(mid, rad))

    # -- inspection -----------------------------------------------------
    @property
    def mid(self):
        return 0.5 * self.lo + 0.5 * self.hi

    @property
    def rad(self):
        """Upper bound on the half-width about ``mid``."""
        m = self.mid
        return max(_add_up(self.hi, -m), _add_up(m, -self.lo))

    @property
    def width(self):
        return _add_up(self.hi, -self.lo)

    def mag(self):
        return max(-self.lo, self.hi)

    def mig(self):
        if self.lo > 0.0:
            return self.lo
        if self.hi < 0.0:
            return -self.hi
        return 0.0

    def is_point(self):
        return self.lo == self.hi

    def contains(self, x):
        if isinstance(x, RealInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def subset(self, other):
        return other.lo <= self.lo and self.hi <= other.hi

    def intersects(self, other):
        other = as_interval(other)
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other):
        other = as_interval(other)
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return _ri(lo, hi)

    def hull(self, other):
        other = as_interval(other)
        return _ri(min(self.lo, other.lo), max(self.hi, other.hi))

    def inflate(self, r):
        return _ri(_add_dn(self.lo, -r), _add_up(self.hi, r))

    # -- arithmetic -----------------------------------------------------
    def __neg__(self):
        return _ri(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __abs__(self):
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return -self
        return _ri(0.0, max(-self.lo, self.hi))

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _ri(_add_dn(self.lo, o.lo), _add_up(self.hi, o.hi))

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _ri(_add_dn(self.lo, -o.hi), _add_up(self.hi, -o.lo))

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _ri(*_mul(self.lo, self.hi, o.lo, o.hi))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if o.lo <= 0.0 <= o.hi:
            raise DivisionByIntervalContainingZero(f"divisor {o} contains 0")
        return _ri(*_div(self.lo, self.hi, o.lo, o.hi))

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def sqr(self):
        return _ri(*_sqr(self.lo, self.hi))

    def __pow__(self, n):
        if isinstance(n, int):
            return _ipow(self, n)
        return rpow(self, n)

    def sqrt(self):
        if self.lo < 0.0:
            raise NegativeBaseFractionalPower(f"sqrt of {self}")
        return _ri(_sqrt_dn(self.lo), _sqrt_up(self.hi))

    def __eq__(self, other):
        if isinstance(other, RealInterval):
            return self.lo == other.lo and self.hi == other.hi
        return NotImplemented

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"RealInterval({self.lo!r}, {self.hi!r})"


def _coerce(v):
    if isinstance(v, RealInterval):
        return v
    if isinstance(v, float):
        return _ri(v, v)
    if isinstance(v, (int, Fraction)):
        return _ri(_float_lo(v), _float_hi(v))
    return None


def as_interval(v):
    """Enclose ``v`` (RealInterval, number or decimal string)."""
    if isinstance(v, RealInterval):
        return v
    if isinstance(v, str):
        return RealInterval(v)
    r = _coerce(v)
    if r is None:
        raise TypeError(f"cannot enclose {type(v).__name__} as a real interval")
    return r


def _ipow(x, n):
    if n < 0:
        return 1 / _ipow(x, -n)
    if n == 0:
        return _ri(1.0, 1.0)
    if n % 2 == 0:
        return _ipow(x.sqr(), n // 2)
    if n == 1:
        return x
    return x * _ipow(x.sqr(), n // 2)


def arith(a, b, op):
    """Apply ``op`` in ``{"+", "-", "*", "/"}`` to two real intervals."""
    a = as_interval(a)
    b = as_interval(b)
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"unknown operator {op!r}")


def _root_bounds(t, q):
    """Doubles ``(lo, hi)`` with ``lo**q <= t <= hi**q`` for ``t >= 0``."""
    if t == 0.0:
        return 0.0, 0.0
    if q == 2:
        return _sqrt_dn(t), _sqrt_up(t)
    r = t ** (1.0 / q)
    lo = r
    for _ in range(64):
        if _ipow(_ri(lo, lo), q).hi <= t:
            break
        lo = _dn(lo)
    hi = r
    for _ in range(64):
        if _ipow(_ri(hi, hi), q).lo >= t:
            break
        hi = _up(hi)
    return lo, hi


def rpow(x, alpha):
    """Enclosure of ``x**alpha`` for a rational exponent ``alpha``.

    Fractional exponents need ``x.lo >= 0``; the q-th root is certified by
    raising candidate endpoints back to the q-th power.
    """
    x = as_interval(x)
    alpha = Fraction(alpha)
    p, q = alpha.numerator, alpha.denominator
    if q == 1:
        return _ipow(x, p)
    if x.lo < 0.0:
        raise NegativeBaseFractionalPower(f"{x} ** {alpha}")
    if p < 0:
        if x.lo == 0.0:
            raise DivisionByIntervalContainingZero(f"{x} ** {alpha}")
        return 1 / rpow(x, -alpha)
    lo, _ = _root_bounds(x.lo, q)
    _, hi = _root_bounds(x.hi, q)
    return _ipow(_ri(lo, hi), p)


def exp_up(x):
    """Upper bound for ``exp(x)``; libm results are widened by a few ulps."""
    v = math.exp(x)
    for _ in range(4):
        v = _up(v)
    return v


def expm1_up(x):
    """Upper bound for ``exp(x) - 1``, accurate for small ``x``."""
    v = math.expm1(x)
    for _ in range(4):
        v = _up(v)
    return v


def add_up(a, b):
    """Upper bound of ``a + b`` for doubles."""
    return _add_up(a, b)


def mul_up(a, b):
    """Upper bound of ``a * b`` for non-negative doubles."""
    p = a * b
    if a in _EXACT or b in _EXACT:
        return p
    return _up(p)


def div_up(a, b):
    """Upper bound of ``a / b`` for non-negative ``a`` and positive ``b``."""
    q = a / b
    if b == 1.0 or a == 0.0:
        return q
    return _up(q)


def float_up(v):
    """Smallest double not below the exact number ``v``."""
    return _float_hi(v)


# ---------------------------------------------------------------------------
# complex boxes


def _cb(rl, rh, il, ih):
    if not (-_MAX <= rl and rh <= _MAX and -_MAX <= il and ih <= _MAX):
        raise IntervalOverflow("complex box endpoint overflow")
    z = object.__new__(ComplexBox)
    z.rl = rl
    z.rh = rh
    z.il = il
    z.ih = ih
    return z


class ComplexBox:
    """Rectangle ``re + i*im`` in the complex plane.

    ``re`` and ``im`` are exposed as :class:`RealInterval`; internally the
    four endpoints are stored flat so that the hot arithmetic avoids
    allocating intermediate interval objects.
    """

    __slots__ = ("rl", "rh", "il", "ih")

    def __init__(self, re, im=0.0):
        if isinstance(re, complex):
            if im != 0.0:
                raise TypeError("complex real part with separate imaginary part")
            re, im = re.real, re.imag
        re = as_interval(re)
        im = as_interval(im)
        self.rl = re.lo
        self.rh = re.hi
        self.il = im.lo
        self.ih = im.hi

    @classmethod
    def from_bounds(cls, rl, rh, il, ih):
        if not (rl <= rh and il <= ih):
            raise ValueError("empty complex box")
        return _cb(float(rl), float(rh), float(il), float(ih))

    @property
    def re(self):
        return _ri(self.rl, self.rh)

    @property
    def im(self):
        return _ri(self.il, self.ih)

    @property
    def mid(self):
        return complex(0.5 * self.rl + 0.5 * self.rh, 0.5 * self.il + 0.5 * self.ih)

    @property
    def width(self):
        """Larger of the two component widths."""
        return max(_add_up(self.rh, -self.rl), _add_up(self.ih, -self.il))

    def is_point(self):
        return self.rl == self.rh and self.il == self.ih

    def contains(self, z):
        if isinstance(z, ComplexBox):
            return self.rl <= z.rl and z.rh <= self.rh and self.il <= z.il and z.ih <= self.ih
        if isinstance(z, tuple):
            re, im = z
        else:
            re, im = z.real, z.imag
        return self.rl <= re <= self.rh and self.il <= im <= self.ih

    __contains__ = contains

    def subset(self, other):
        return other.contains(self)

    def intersection(self, other):
        """Common part of two boxes, or None if they are disjoint."""
        o = as_box(other)
        rl, rh = max(self.rl, o.rl), min(self.rh, o.rh)
        il, ih = max(self.il, o.il), min(self.ih, o.ih)
        if rl > rh or il > ih:
            return None
        return _cb(rl, rh, il, ih)

    def intersects(self, other):
        o = as_box(other)
        return self.rl <= o.rh and o.rl <= self.rh and self.il <= o.ih and o.il <= self.ih

    def hull(self, other):
        o = as_box(other)
        return _cb(min(self.rl, o.rl), max(self.rh, o.rh), min(self.il, o.il), max(self.ih, o.ih))

    def inflate(self, r):
        """Widen both components by ``r`` (covers the disc of radius ``r``)."""
        return _cb(_add_dn(self.rl, -r), _add_up(self.rh, r), _add_dn(self.il, -r), _add_up(self.ih, r))

    def conj(self):
        return _cb(self.rl, self.rh, -self.ih, -self.il)

    def __neg__(self):
        return _cb(-self.rh, -self.rl, -self.ih, -self.il)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = _coerce_box(other)
        if o is None:
            return NotImplemented
        return _cb(
            _add_dn(self.rl, o.rl), _add_up(self.rh, o.rh), _add_dn(self.il, o.il), _add_up(self.ih, o.ih)
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce_box(other)
        if o is None:
            return NotImplemented
        return _cb(
            _add_dn(self.rl, -o.rh), _add_up(self.rh, -o.rl), _add_dn(self.il, -o.ih), _add_up(self.ih, -o.il)
        )

    def __rsub__(self, other):
        o = _coerce_box(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (RealInterval, float, int, Fraction)):
            s = _coerce(other)
            rl, rh = _mul(self.rl, self.rh, s.lo, s.hi)
            il, ih = _mul(self.il, self.ih, s.lo, s.hi)
            return _cb(rl, rh, il, ih)
        o = _coerce_box(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.rl, self.rh, self.il, self.ih
        e, f, g, h = o.rl, o.rh, o.il, o.ih
        l1, h1 = _mul(a, b, e, f)
        l2, h2 = _mul(c, d, g, h)
        l3, h3 = _mul(a, b, g, h)
        l4, h4 = _mul(c, d, e, f)
        return _cb(_add_dn(l1, -h2), _add_up(h1, -l2), _add_dn(l3, l4), _add_up(h3, h4))

    __rmul__ = __mul__

    def abs2(self):
        """Interval of ``|z|**2`` over the box."""
        l1, h1 = _sqr(self.rl, self.rh)
        l2, h2 = _sqr(self.il, self.ih)
        return _ri(_add_dn(l1, l2), _add_up(h1, h2))

    def __truediv__(self, other):
        if isinstance(other, (RealInterval, float, int, Fraction)):
            s = _coerce(other)
            if s.lo <= 0.0 <= s.hi:
                raise DivisionByIntervalContainingZero(f"divisor {s} contains 0")
            rl, rh = _div(self.rl, self.rh, s.lo, s.hi)
            il, ih = _div(self.il, self.ih, s.lo, s.hi)
            return _cb(rl, rh, il, ih)
        o = _coerce_box(other)
        if o is None:
            return NotImplemented
        den = o.abs2()
        if den.lo <= 0.0:
            raise DivisorBoxContainsZero(f"divisor {o} may vanish")
        num = self * o.conj()
        rl, rh = _div(num.rl, num.rh, den.lo, den.hi)
        il, ih = _div(num.il, num.ih, den.lo, den.hi)
        return _cb(rl, rh, il, ih)

    def __rtruediv__(self, other):
        o = _coerce_box(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** (-n))
        result = _cb(1.0, 1.0, 0.0, 0.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def sqrt(self):
        return csqrt(self)

    def mag(self):
        """Upper bound of ``|z|`` over the box."""
        return mag_bounds(self).hi

    def __eq__(self, other):
        if isinstance(other, ComplexBox):
            return (self.rl, self.rh, self.il, self.ih) == (other.rl, other.rh, other.il, other.ih)
        return NotImplemented

    def __hash__(self):
        return hash((self.rl, self.rh, self.il, self.ih))

    def __repr__(self):
        return f"ComplexBox([{self.rl!r}, {self.rh!r}] + i[{self.il!r}, {self.ih!r}])"


def _coerce_box(v):
    if isinstance(v, ComplexBox):
        return v
    if isinstance(v, complex):
        return _cb(v.real, v.real, v.imag, v.imag)
    r = _coerce(v)
    if r is None:
        return None
    return _cb(r.lo, r.hi, 0.0, 0.0)


def as_box(v):
    """Enclose ``v`` as a ComplexBox (boxes, intervals, numbers)."""
    if isinstance(v, str):
        v = RealInterval(v)
    b = _coerce_box(v)
    if b is None:
        raise TypeError(f"cannot enclose {type(v).__name__} as a complex box")
    return b


def carith(a, b, op):
    """Apply ``op`` in ``{"+", "-", "*", "/"}`` to two complex boxes."""
    a = as_box(a)
    b = as_box(b)
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"unknown operator {op!r}")


def _hypot_bounds(x, y):
    lx, hx = _sqr(x, x)
    ly, hy = _sqr(y, y)
    return _sqrt_dn(_add_dn(lx, ly)), _sqrt_up(_add_up(hx, hy))


def mag_bounds(a):
    """``[min |z|, max |z|]`` over the box ``a``."""
    a = as_box(a)
    xn = 0.0 if a.rl <= 0.0 <= a.rh else min(abs(a.rl), abs(a.rh))
    yn = 0.0 if a.il <= 0.0 <= a.ih else min(abs(a.il), abs(a.ih))
    xf = max(abs(a.rl), abs(a.rh))
    yf = max(abs(a.il), abs(a.ih))
    lo, _ = _hypot_bounds(xn, yn)
    _, hi = _hypot_bounds(xf, yf)
    return _ri(lo, hi)


def _sqrt_point(x, y, upper_half):
    """Enclosures of Re and Im of the principal sqrt at the point x + iy.

    ``upper_half`` selects the sign used for Im when y == 0 (the branch cut is
    approached from above).
    """
    ax = _ri(abs(x), abs(x))
    r2 = _ri(*_sqr(x, x)) + _ri(*_sqr(y, y))
    r = r2.sqrt()
    # (r +- |x|) / 2 >= 0; outward rounding may push a zero endpoint below it
    t = (r + ax) * 0.5
    t = _ri(max(t.lo, 0.0), t.hi)
    big = t.sqrt()
    if y == 0.0:
        small = _ri(0.0, 0.0)
    elif big.lo > 0.0:
        small = _ri(abs(y), abs(y)) / (big * 2.0)
    else:
        # subnormal corner: the division form has no positive divisor
        u = (r - ax) * 0.5
        small = _ri(max(u.lo, 0.0), max(u.hi, 0.0)).sqrt()
    re, im = (big, small) if x >= 0.0 else (small, big)
    if y < 0.0 or (y == 0.0 and not upper_half and x < 0.0):
        im = -im
    return re, im


def csqrt(a):
    """Principal square root of every point of the box ``a``.

    Re sqrt(z) grows with x and |y|; Im sqrt(z) is monotone on each closed
    half-plane, so corner evaluations bound the image. Boxes that meet the
    negative real axis from below are rejected because the principal branch
    jumps there.
    """
    a = as_box(a)
    x1, x2, y1, y2 = a.rl, a.rh, a.il, a.ih
    if x1 < 0.0 and y1 <= 0.0 <= y2 and not y1 == 0.0:
        raise BranchCutStraddle(f"{a} meets the negative real axis")
    ymin_abs = 0.0 if y1 <= 0.0 <= y2 else min(abs(y1), abs(y2))
    ymax_abs = max(abs(y1), abs(y2))
    re_lo = _sqrt_point(x1, ymin_abs, True)[0].lo
    re_hi = _sqrt_point(x2, ymax_abs, True)[0].hi
    if y1 >= 0.0:
        im_lo = _sqrt_point(x2, y1, True)[1].lo
        im_hi = _sqrt_point(x1, y2, True)[1].hi
    elif y2 <= 0.0:
        im_lo = _sqrt_point(x1, y1, False)[1].lo
        im_hi = _sqrt_point(x2, y2, False)[1].hi
    else:
        im_lo = _sqrt_point(x1, y1, False)[1].lo
        im_hi = _sqrt_point(x1, y2, True)[1].hi
    return _cb(re_lo, re_hi, im_lo, im_hi)
