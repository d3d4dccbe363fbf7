"""Truncated series in inverse powers of x with a rigorous remainder.

A :class:`TailSeries` represents a function on ``[X0, inf)`` as

    sum_beta c_beta * x**(-beta)  +  r(x),      |r(x)| <= C * x**(-K)

with :class:`ComplexBox` coefficients and exact rational exponents.  Every
exponent that reaches ``K`` is folded into the remainder using
``x**(-beta) <= X0**(-(beta - K)) * x**(-K)``.
"""

from fractions import Fraction
from math import gcd

from .errors import (
    IncompatibleDomain,
    NonIntegrableDecay,
    NormNotContractive,
    RatioNotLessThanOne,
    UnderivableTail,
)
from .interval import (
    ComplexBox,
    RealInterval,
    add_up,
    as_box,
    div_up,
    float_up,
    mul_up,
    rpow,
)

__all__ = [
    "TailSeries",
    "SeriesMatrix",
    "series_arith",
    "binomial_expand",
    "neumann_inverse",
    "neumann_order",
    "differentiate",
    "tail_integral",
    "common_grid",
]

_ZERO = ComplexBox(0.0)


def _frac(v):
    return v if isinstance(v, Fraction) else Fraction(v)


def common_grid(g1, g2):
    """Largest rational step dividing both ``g1`` and ``g2``."""
    g1, g2 = _frac(g1), _frac(g2)
    num = gcd(g1.numerator * g2.denominator, g2.numerator * g1.denominator)
    return Fraction(num, g1.denominator * g2.denominator)


def _xpow_hi(X0, e):
    """Upper bound of X0**(-e) for rational ``e``."""
    if e == 0:
        return 1.0
    return rpow(RealInterval(X0), -_frac(e)).hi


def _xpow(x, e):
    """Enclosure of x**(-e)."""
    if e == 0:
        return RealInterval(1.0)
    return rpow(x if isinstance(x, RealInterval) else RealInterval(x), -_frac(e))


class TailSeries:
    """Terms ``{beta: ComplexBox}`` plus a tail ``C * x**(-K)`` valid on ``[X0, inf)``.

    ``dtail`` optionally bounds the derivative of the remainder by
    ``dtail * x**(-(K + 1))``; :func:`differentiate` needs it whenever ``C > 0``.
    """

    __slots__ = ("terms", "K", "C", "X0", "grid", "dtail")

    def __init__(self, terms=None, K=1, C=0.0, X0=1.0, grid=Fraction(1, 2), dtail=None):
        self.K = _frac(K)
        self.X0 = float(X0)
        self.grid = _frac(grid)
        if self.X0 <= 0.0:
            raise ValueError("X0 must be positive")
        if C < 0.0:
            raise ValueError("tail constant must be non-negative")
        self.C = float(C)
        self.dtail = dtail
        clean = {}
        if terms:
            for beta, c in terms.items():
                beta = _frac(beta)
                c = as_box(c)
                if beta >= self.K:
                    self.C = add_up(self.C, mul_up(c.mag(), _xpow_hi(self.X0, beta - self.K)))
                    # a folded term is differentiable, but keep the stored bound honest
                    self.dtail = None
                    continue
                if beta in clean:
                    clean[beta] = clean[beta] + c
                else:
                    clean[beta] = c
        self.terms = clean

    # -- constructors ----------------------------------------------------
    @classmethod
    def constant(cls, c, K=1, X0=1.0, grid=Fraction(1, 2)):
        return cls({Fraction(0): c}, K=K, X0=X0, grid=grid)

    @classmethod
    def monomial(cls, beta, c=1.0, K=1, X0=1.0, grid=Fraction(1, 2)):
        return cls({beta: c}, K=K, X0=X0, grid=grid)

    def zero_like(self):
        return TailSeries({}, self.K, 0.0, self.X0, self.grid)

    def one_like(self):
        return TailSeries({Fraction(0): 1.0}, self.K, 0.0, self.X0, self.grid)

    # -- inspection ------------------------------------------------------
    def is_zero(self):
        return not self.terms and self.C == 0.0

    def order(self):
        """Smallest exponent present (``K`` for a tail-only series)."""
        betas = [b for b, c in self.terms.items() if not (c.is_point() and c.mid == 0)]
        if betas:
            return min(betas)
        return self.K

    def sup_scaled(self, ell):
        """Upper bound of ``sup_{x >= X0} x**ell * |s(x)|`` for ``ell <= order``."""
        ell = _frac(ell)
        total = 0.0
        for beta, c in self.terms.items():
            if beta < ell:
                raise ValueError("scaling exponent exceeds series order")
            total = add_up(total, mul_up(c.mag(), _xpow_hi(self.X0, beta - ell)))
        if self.C:
            total = add_up(total, mul_up(self.C, _xpow_hi(self.X0, self.K - ell)))
        return total

    def evaluate(self, x):
        """ComplexBox enclosing s(x); ``x`` is a float or RealInterval with x >= X0."""
        xi = x if isinstance(x, RealInterval) else RealInterval(x)
        if xi.lo < self.X0:
            raise IncompatibleDomain(f"x={x} below X0={self.X0}")
        acc = _ZERO
        for beta, c in self.terms.items():
            acc = acc + c * _xpow(xi, beta)
        if self.C:
            r = mul_up(self.C, _xpow(xi, self.K).hi)
            acc = acc + ComplexBox(RealInterval(-r, r), RealInterval(-r, r))
        return acc

    def scaled(self, c):
        c = as_box(c)
        terms = {b: v * c for b, v in self.terms.items()}
        m = c.mag()
        dt = None if self.dtail is None else mul_up(self.dtail, m)
        return TailSeries(terms, self.K, mul_up(self.C, m), self.X0, self.grid, dt)

    def with_tail(self, C, K=None):
        """Copy with an extra remainder ``C * x**(-K)`` folded in."""
        K = self.K if K is None else _frac(K)
        if K < self.K:
            out = TailSeries(self.terms, K, self.C and mul_up(self.C, _xpow_hi(self.X0, self.K - K)),
                             self.X0, self.grid)
        else:
            out = TailSeries(self.terms, self.K, self.C, self.X0, self.grid)
            C = mul_up(C, _xpow_hi(self.X0, K - self.K))
        out.C = add_up(out.C, C)
        return out

    def __add__(self, other):
        return series_arith(self, other, "+")

    def __sub__(self, other):
        return series_arith(self, other, "-")

    def __mul__(self, other):
        if isinstance(other, TailSeries):
            return series_arith(self, other, "*")
        return self.scaled(other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.scaled(-1.0)

    def __repr__(self):
        parts = [f"{c!r}*x^-({b})" for b, c in sorted(self.terms.items())]
        parts.append(f"O({self.C:.3g}*x^-({self.K}))")
        return " + ".join(parts)


def series_arith(a, b, op):
    """``a op b`` for op in ``+ - *``; mixed cutoffs use the smaller ``K``."""
    if a.X0 != b.X0:
        raise IncompatibleDomain(f"X0 mismatch: {a.X0} vs {b.X0}")
    X0 = a.X0
    grid = common_grid(a.grid, b.grid)
    K = min(a.K, b.K)
    if op in ("+", "-"):
        terms = dict(a.terms)
        for beta, c in b.terms.items():
            c = c if op == "+" else -c
            terms[beta] = terms[beta] + c if beta in terms else c
        C = add_up(mul_up(a.C, _xpow_hi(X0, a.K - K)), mul_up(b.C, _xpow_hi(X0, b.K - K)))
        dt = None
        if a.dtail is not None or b.dtail is not None or (a.C == 0 and b.C == 0):
            da = 0.0 if a.C == 0 else a.dtail
            db = 0.0 if b.C == 0 else b.dtail
            if da is not None and db is not None:
                dt = add_up(mul_up(da, _xpow_hi(X0, a.K - K)), mul_up(db, _xpow_hi(X0, b.K - K)))
        out = TailSeries(terms, K, C, X0, grid)
        if out.dtail is None and dt is not None and len(out.terms) == len(terms):
            out.dtail = dt
        return out
    if op != "*":
        raise ValueError(f"unknown op {op!r}")
    terms = {}
    C = 0.0
    for b1, c1 in a.terms.items():
        for b2, c2 in b.terms.items():
            beta = b1 + b2
            p = c1 * c2
            if beta >= K:
                C = add_up(C, mul_up(p.mag(), _xpow_hi(X0, beta - K)))
            elif beta in terms:
                terms[beta] = terms[beta] + p
            else:
                terms[beta] = p
    if a.C or b.C:
        if min(a.order(), b.order()) < 0:
            raise ValueError("tail products need non-negative exponents")
        sa = a.sup_scaled(0) if a.terms else 0.0
        sb = b.sup_scaled(0) if b.terms else 0.0
        ta = mul_up(a.C, _xpow_hi(X0, a.K - K))
        tb = mul_up(b.C, _xpow_hi(X0, b.K - K))
        # |a_terms| * C_b x^-Kb etc.; the tail-tail product gains an extra X0**-K
        C = add_up(C, mul_up(sa, tb))
        C = add_up(C, mul_up(sb, ta))
        C = add_up(C, mul_up(mul_up(a.C, b.C), _xpow_hi(X0, a.K + b.K - K)))
    out = TailSeries(terms, K, C, X0, grid)
    if C == 0.0:
        out.dtail = 0.0
    return out


def _binom(s, j):
    r = Fraction(1)
    for i in range(j):
        r = r * (s - i) / (i + 1)
    return r


def binomial_expand(gamma, shift, s, K, X0, sign=1):
    """Series for ``(sign * x**gamma + shift)**s`` on ``[X0, inf)``, principal branch.

    Exponents are ``j*gamma - gamma*s`` for ``j = 0, 1, ...``; the dropped part of
    the binomial series is bounded geometrically, and so is its derivative.
    For ``sign = -1`` the exponent ``s`` must be a multiple of 1/2.
    """
    gamma, s, K = _frac(gamma), _frac(s), _frac(K)
    shift = as_box(shift)
    grid = gamma if gamma > 0 else Fraction(1)
    if sign == 1:
        mu = shift
        unit = ComplexBox(1.0)
    elif sign == -1:
        mu = -shift
        if (2 * s).denominator != 1:
            raise NotImplementedError("negative base needs a half-integer exponent")
        # (-1)**s on the principal branch; the side is fixed by Im(shift)
        if shift.im.lo > 0 or (shift.im.lo == 0 and shift.im.hi == 0):
            sigma = 1
        elif shift.im.hi < 0:
            sigma = -1
        else:
            from .errors import BranchCutStraddle
            raise BranchCutStraddle("shift box straddles the real axis")
        k2 = int(2 * s * sigma) % 4  # exp(i*pi*sigma*s) = i**(2*sigma*s)
        unit = [ComplexBox(1.0), ComplexBox(0.0, 1.0), ComplexBox(-1.0), ComplexBox(0.0, -1.0)][k2]
    else:
        raise ValueError("sign must be +1 or -1")
    mu_mag = mu.mag()
    if mu_mag == 0.0:
        return TailSeries({-gamma * s: unit}, K, 0.0, X0, grid, dtail=0.0)
    r0 = mul_up(mu_mag, _xpow_hi(X0, gamma))
    if not r0 < 1.0:
        raise RatioNotLessThanOne(f"|shift| * X0^-gamma = {r0} >= 1")
    terms = {}
    j = 0
    mu_pow = ComplexBox(1.0)
    while j * gamma - gamma * s < K:
        terms[j * gamma - gamma * s] = unit * mu_pow * ComplexBox(RealInterval(_binom(s, j)))
        mu_pow = mu_pow * mu
        j += 1
    J = j
    beta_J = J * gamma - gamma * s
    bJ = float_up(abs(_binom(s, J)))
    muJ = mu_pow.mag()
    # sup_{j >= J} |b_{j+1} / b_j| = sup |s - j| / (j + 1)
    rho_star = max(Fraction(1), (J - s) / (J + 1)) if J >= s else None
    if rho_star is None:
        raise ValueError("cutoff too small for the geometric tail bound")
    q = mul_up(float_up(rho_star), r0)
    if not q < 1.0:
        raise RatioNotLessThanOne("binomial tail ratio not below one")
    shrink = _xpow_hi(X0, beta_J - K)
    C = mul_up(mul_up(bJ, muJ), shrink)
    C = div_up(C, (RealInterval(1.0) - RealInterval(q)).lo)
    qd = mul_up(float_up(rho_star * (beta_J + gamma) / beta_J), r0)
    if not qd < 1.0:
        raise RatioNotLessThanOne("derivative tail ratio not below one")
    dC = mul_up(mul_up(mul_up(float_up(beta_J), bJ), muJ), shrink)
    dC = div_up(dC, (RealInterval(1.0) - RealInterval(qd)).lo)
    return TailSeries(terms, K, C, X0, grid, dtail=dC)


def differentiate(s):
    """Term-wise derivative; the tail needs ``s.dtail`` unless it is zero."""
    if s.K <= 0:
        raise UnderivableTail("tail exponent must be positive")
    terms = {}
    for beta, c in s.terms.items():
        if beta != 0:
            terms[beta + 1] = c * ComplexBox(RealInterval(-beta))
    if s.C == 0.0:
        C = 0.0
    elif s.dtail is not None:
        C = s.dtail
    else:
        raise UnderivableTail("series carries a tail without a derivative bound")
    out = TailSeries(terms, s.K + 1, C, s.X0, s.grid)
    if C == 0.0:
        out.dtail = 0.0
    return out


def tail_integral(s, X):
    """Interval ``[0, B]`` with ``B >= int_X^inf |s(t)| dt``."""
    X = float(X)
    if X < s.X0:
        raise IncompatibleDomain("integration start below X0")
    total = 0.0
    for beta, c in s.terms.items():
        m = c.mag()
        if m == 0.0:
            continue
        if beta <= 1:
            raise NonIntegrableDecay(f"term x^-({beta}) is not integrable")
        v = rpow(RealInterval(X), 1 - beta) / RealInterval(beta - 1)
        total = add_up(total, mul_up(m, v.hi))
    if s.C:
        if s.K <= 1:
            raise NonIntegrableDecay(f"tail x^-({s.K}) is not integrable")
        v = rpow(RealInterval(X), 1 - s.K) / RealInterval(s.K - 1)
        total = add_up(total, mul_up(s.C, v.hi))
    return RealInterval(0.0, total)


class SeriesMatrix:
    """Square matrix of series entries (TailSeries or anything with the same algebra)."""

    __slots__ = ("e",)

    def __init__(self, entries):
        self.e = [list(row) for row in entries]

    @property
    def n(self):
        return len(self.e)

    def __getitem__(self, ij):
        i, j = ij
        return self.e[i][j]

    @classmethod
    def identity_like(cls, s, n=2):
        return cls([[s.one_like() if i == j else s.zero_like() for j in range(n)] for i in range(n)])

    def __add__(self, other):
        n = self.n
        return SeriesMatrix([[self.e[i][j] + other.e[i][j] for j in range(n)] for i in range(n)])

    def __sub__(self, other):
        n = self.n
        return SeriesMatrix([[self.e[i][j] - other.e[i][j] for j in range(n)] for i in range(n)])

    def __neg__(self):
        return SeriesMatrix([[-x for x in row] for row in self.e])

    def __matmul__(self, other):
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = None
                for k in range(n):
                    a, b = self.e[i][k], other.e[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    t = a * b
                    acc = t if acc is None else acc + t
                row.append(self.e[i][j].zero_like() if acc is None else acc)
            out.append(row)
        return SeriesMatrix(out)

    def map(self, f):
        return SeriesMatrix([[f(x) for x in row] for row in self.e])

    def diag(self):
        n = self.n
        return SeriesMatrix([[self.e[i][j] if i == j else self.e[i][j].zero_like()
                              for j in range(n)] for i in range(n)])

    def offdiag(self):
        n = self.n
        return SeriesMatrix([[self.e[i][j].zero_like() if i == j else self.e[i][j]
                              for j in range(n)] for i in range(n)])

    def order(self):
        return min(x.order() for row in self.e for x in row)

    def evaluate(self, x):
        return [[s.evaluate(x) for s in row] for row in self.e]


def neumann_order(ell, K):
    """Smallest nu with (nu + 1) * ell >= K: higher powers of P fall into the tail."""
    ell, K = _frac(ell), _frac(K)
    if ell <= 0:
        raise NormNotContractive("P does not decay")
    nu = 0
    while (nu + 1) * ell < K:
        nu += 1
    return nu


def neumann_inverse(p, nu):
    """``(I + P)**-1`` as ``sum_{k<=nu} (-P)**k`` plus a folded remainder.

    Uses the row-sum norm: with ``||P(x)|| <= Cp * x**-ell`` the remainder is
    entrywise at most ``Cp**(nu+1) x**(-(nu+1) ell) / (1 - ||P(X0)||)``.
    """
    n = p.n
    ref = p.e[0][0]
    eye = SeriesMatrix.identity_like(ref, n)
    if all(x.is_zero() for row in p.e for x in row):
        return eye
    ell = p.order()
    if ell <= 0:
        raise NormNotContractive("P does not decay")
    Cp = 0.0
    for row in p.e:
        rs = 0.0
        for x in row:
            if not x.is_zero():
                rs = add_up(rs, x.sup_scaled(ell))
        Cp = max(Cp, rs)
    q0 = mul_up(Cp, _xpow_hi(ref.X0, ell))
    if not q0 < 1.0:
        raise NormNotContractive(f"||P(X0)|| bound {q0} >= 1")
    out = eye
    power = eye
    for _ in range(nu):
        power = power @ (-p)
        out = out + power
    Kr = (nu + 1) * ell
    rem = Cp
    for _ in range(nu):
        rem = mul_up(rem, Cp)
    rem = div_up(rem, (RealInterval(1.0) - RealInterval(q0)).lo)
    return out.map(lambda s: s.with_tail(rem, Kr))
