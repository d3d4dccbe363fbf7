"""Asymptotic initial data for the decaying solution of -y'' + q y = lam y.

With ``c(x) = q(x) - lam`` and ``rho = sqrt(c)`` the substitution
``(y, y') = T Z``, ``T = [[1, 1], [rho, -rho]]`` gives

    Z' = rho (D + R) Z,   D = diag(1, -1),   R = c'/(4 rho^3) [[-1, 1], [1, -1]].

Repeated near-identity changes of variable push the off-diagonal part of the
perturbation to higher and higher decay order.  The leftover is handled by a
Gronwall estimate on the Volterra equation for the decaying solution.

Series entries are polynomials in the monomials ``x**a * rho**b`` with exact
rational coefficients.  They do not depend on ``lam`` at all; ``lam`` only
enters through the bounds on ``|rho|`` used for tails and through evaluation
at the matching point.  This avoids expanding ``rho`` in powers of
``lam / x**alpha``, which would need ``|lam| < X**alpha``.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NormNotContractive, SignUndetermined
from .interval import (
    ComplexBox,
    RealInterval,
    add_up,
    as_box,
    csqrt,
    div_up,
    expm1_up,
    exp_up,
    float_up,
    mul_up,
    rpow,
)
from .series import SeriesMatrix, TailSeries, neumann_inverse, neumann_order, tail_integral

__all__ = [
    "ProblemSpec",
    "RhoContext",
    "RhoSeries",
    "DiagState",
    "AsymptoticData",
    "build_system",
    "initial_state",
    "diag_sweep",
    "diagonalize",
    "levinson_remainder",
    "select_recessive",
    "initial_data",
]


@dataclass(frozen=True)
class ProblemSpec:
    """q(x) = sign * x**alpha on [0, inf), spectral parameter lam, matching point X.

    ``M`` is the number of diagonalizing transformations.  Each one raises the
    decay order of the off-diagonal part by alpha/2 + 1, so after ``M`` of them
    it is ``(M + 1) * (alpha/2 + 1)``, the default cutoff ``K``.
    """

    alpha: Fraction
    sign: int
    lam: ComplexBox
    X: float
    M: int = 6
    K: Fraction = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "lam", as_box(self.lam))
        object.__setattr__(self, "X", float(self.X))
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.M < 1:
            raise ValueError("need at least one transformation")
        if self.X <= 0:
            raise ValueError("X must be positive")
        if self.lam.im.lo <= 0.0 <= self.lam.im.hi:
            raise SignUndetermined("lam must be strictly non-real")
        if self.K is None:
            object.__setattr__(self, "K", (self.M + 1) * (self.alpha / 2 + 1))
        else:
            object.__setattr__(self, "K", Fraction(self.K))


class RhoContext:
    """Shared constants for series on [X, inf): exponent scaling and |rho| bounds.

    Orders are stored as integers ``o2 = 2Q * order`` where ``alpha = p/Q``;
    the monomial ``x**(n/Q) * rho**b`` has ``o2 = -(2n + p b)``.
    """

    def __init__(self, spec):
        self.spec = spec
        self.alpha = spec.alpha
        self.p = spec.alpha.numerator
        self.Q = spec.alpha.denominator
        self.sign = spec.sign
        self.X = spec.X
        K2 = spec.K * 2 * self.Q
        if K2.denominator != 1:
            raise ValueError("K must lie on the exponent grid 1/(2Q)")
        self.K2 = int(K2)
        self._xpow = {}
        self._F = {}
        self._bounds()
        lam = spec.lam
        self.Xi = RealInterval(spec.X)
        self.cX = ComplexBox(rpow(self.Xi, self.alpha) * self.sign) - lam
        self.rhoX = csqrt(self.cX)
        self._rho_pows = {0: ComplexBox(1.0), 1: self.rhoX}
        self._xa = {}

    def _bounds(self):
        # |c| = x**alpha * L,  L = |1 - mu u|,  mu = sign*lam,  u = x**-alpha in (0, U]
        U = rpow(RealInterval(self.X), -self.alpha)
        mu = self.spec.lam * self.sign
        self.Lmax = add_up(1.0, mul_up(mu.mag(), U.hi))
        a = mu.re
        b = abs(mu.im)
        if a.hi <= 0.0:
            lmin2 = 1.0
        else:
            fU = (1.0 - a * U).sqr() + (b * U).sqr()
            cand = fU.lo
            bm = b.mig()
            ah = RealInterval(max(a.lo, 0.0), a.hi)
            den = ah.sqr() + RealInterval(bm).sqr()
            vertex_possible = True
            if a.lo > 0.0:
                ustar_lo = (RealInterval(a.lo) / (RealInterval(a.hi).sqr() + RealInterval(b.hi).sqr())).lo
                vertex_possible = ustar_lo <= U.hi
            if vertex_possible:
                v = (RealInterval(bm).sqr() / den).lo if den.lo > 0 else 0.0
                cand = min(cand, v)
            lmin2 = min(1.0, cand)
        if not lmin2 > 0.0:
            raise SignUndetermined("|q - lam| not bounded away from zero on [X, inf)")
        self.Lmin = RealInterval(lmin2).sqrt().lo

    def F(self, b):
        """Upper bound of |rho|**b / x**(alpha b/2) on [X, inf)."""
        v = self._F.get(b)
        if v is None:
            if b == 0:
                v = 1.0
            elif b > 0:
                v = rpow(RealInterval(self.Lmax), Fraction(b, 2)).hi
            else:
                v = rpow(RealInterval(self.Lmin), Fraction(b, 2)).hi
            self._F[b] = v
        return v

    def xpow(self, o2):
        """Upper bound of X**(-o2 / 2Q)."""
        v = self._xpow.get(o2)
        if v is None:
            v = 1.0 if o2 == 0 else rpow(self.Xi, Fraction(-o2, 2 * self.Q)).hi
            self._xpow[o2] = v
        return v

    def rho_pow(self, b):
        v = self._rho_pows.get(b)
        if v is None:
            if b > 0:
                v = self.rho_pow(b - 1) * self.rhoX
            else:
                v = ComplexBox(1.0) / self.rho_pow(-b)
            self._rho_pows[b] = v
        return v

    def x_pow(self, n):
        v = self._xa.get(n)
        if v is None:
            v = rpow(self.Xi, Fraction(n, self.Q))
            self._xa[n] = v
        return v


class RhoSeries:
    """Finite sum of ``coef * x**(n/Q) * rho**b`` plus a tail ``C * x**(-K)``."""

    __slots__ = ("ctx", "terms", "C")

    def __init__(self, ctx, terms=None, C=0.0):
        self.ctx = ctx
        self.terms = terms if terms is not None else {}
        self.C = C

    @classmethod
    def _build(cls, ctx, raw, C):
        """Drop zeros and fold everything of order >= K into the tail."""
        terms = {}
        K2 = ctx.K2
        p = ctx.p
        for key, c in raw.items():
            if not c:
                continue
            o2 = -(2 * key[0] + p * key[1])
            if o2 >= K2:
                C = add_up(C, mul_up(mul_up(float_up(abs(c)), ctx.F(key[1])), ctx.xpow(o2 - K2)))
            else:
                terms[key] = c
        return cls(ctx, terms, C)

    # interface shared with TailSeries (used by SeriesMatrix / neumann_inverse)
    @property
    def X0(self):
        return self.ctx.X

    @property
    def K(self):
        return Fraction(self.ctx.K2, 2 * self.ctx.Q)

    def zero_like(self):
        return RhoSeries(self.ctx)

    def one_like(self):
        return RhoSeries(self.ctx, {(0, 0): Fraction(1)})

    def is_zero(self):
        return not self.terms and self.C == 0.0

    def o2(self, key):
        return -(2 * key[0] + self.ctx.p * key[1])

    def order2(self):
        if not self.terms:
            return self.ctx.K2
        return min(self.o2(k) for k in self.terms)

    def order(self):
        return Fraction(self.order2(), 2 * self.ctx.Q)

    def explicit(self):
        return RhoSeries(self.ctx, dict(self.terms))

    def tail_only(self):
        return RhoSeries(self.ctx, {}, self.C)

    def sup_scaled(self, ell):
        """Upper bound of sup x**ell |s(x)| over [X, inf)."""
        ctx = self.ctx
        l2 = ell * 2 * ctx.Q
        if l2.denominator != 1:
            raise ValueError("scaling exponent off grid")
        l2 = int(l2)
        total = 0.0
        for key, c in self.terms.items():
            o2 = self.o2(key)
            if o2 < l2:
                raise ValueError("scaling exponent exceeds series order")
            total = add_up(total, mul_up(mul_up(float_up(abs(c)), ctx.F(key[1])), ctx.xpow(o2 - l2)))
        if self.C:
            total = add_up(total, mul_up(self.C, ctx.xpow(ctx.K2 - l2)))
        return total

    def with_tail(self, C, K):
        K2 = K * 2 * self.ctx.Q
        if K2 < self.ctx.K2:
            raise ValueError("cannot lower the series cutoff")
        extra = mul_up(C, self.ctx.xpow(int(K2) - self.ctx.K2)) if K2.denominator == 1 else \
            mul_up(C, rpow(self.ctx.Xi, -(K - self.K)).hi)
        return RhoSeries(self.ctx, dict(self.terms), add_up(self.C, extra))

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        t = {k: c for k, c in t.items() if c}
        return RhoSeries(self.ctx, t, add_up(self.C, other.C))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return RhoSeries(self.ctx, {k: -c for k, c in self.terms.items()}, self.C)

    def scale(self, q):
        return RhoSeries(self.ctx, {k: c * q for k, c in self.terms.items()},
                         mul_up(self.C, float_up(abs(q))))

    def __mul__(self, other):
        ctx = self.ctx
        raw = {}
        for (n1, b1), c1 in self.terms.items():
            for (n2, b2), c2 in other.terms.items():
                k = (n1 + n2, b1 + b2)
                raw[k] = raw.get(k, 0) + c1 * c2
        C = 0.0
        if self.C or other.C:
            sa = self.sup_scaled(0) if self.terms else 0.0
            sb = other.sup_scaled(0) if other.terms else 0.0
            C = add_up(mul_up(sa, other.C), mul_up(sb, self.C))
            C = add_up(C, mul_up(mul_up(self.C, other.C), ctx.xpow(ctx.K2)))
        return RhoSeries._build(ctx, raw, C)

    def mul_rho(self, k):
        """Multiply by rho**k; a tail is only allowed for k <= 0."""
        ctx = self.ctx
        C = 0.0
        if self.C:
            if k > 0:
                raise ValueError("cannot raise the order of a tail")
            C = mul_up(mul_up(self.C, ctx.F(k)), ctx.xpow(-ctx.p * k))
        return RhoSeries._build(ctx, {(n, b + k): c for (n, b), c in self.terms.items()}, C)

    def derivative(self):
        """d/dx of the explicit part; rho' = sign*alpha*x**(alpha-1) / (2 rho)."""
        if self.C:
            from .errors import UnderivableTail
            raise UnderivableTail("series with a tail has no derivative bound")
        ctx = self.ctx
        Q, p = ctx.Q, ctx.p
        half = ctx.sign * ctx.alpha / 2
        raw = {}
        for (n, b), c in self.terms.items():
            if n:
                k = (n - Q, b)
                raw[k] = raw.get(k, 0) + c * Fraction(n, Q)
            if b:
                k = (n + p - Q, b - 2)
                raw[k] = raw.get(k, 0) + c * b * half
        return RhoSeries._build(ctx, raw, 0.0)

    def evaluate(self, x=None):
        """ComplexBox enclosure of the value at the matching point X."""
        ctx = self.ctx
        acc = ComplexBox(0.0)
        for (n, b), c in self.terms.items():
            acc = acc + ctx.rho_pow(b) * (ctx.x_pow(n) * RealInterval(c))
        if self.C:
            r = mul_up(self.C, ctx.xpow(ctx.K2))
            acc = acc + ComplexBox(RealInterval(-r, r), RealInterval(-r, r))
        return acc

    def majorant(self, rho_power=0):
        """TailSeries in x**-beta bounding |rho**rho_power * s(x)| on [X, inf)."""
        ctx = self.ctx
        k = rho_power
        terms = {}
        for (n, b), c in self.terms.items():
            beta = Fraction(-(2 * n + ctx.p * (b + k)), 2 * ctx.Q)
            m = mul_up(float_up(abs(c)), ctx.F(b + k))
            terms[beta] = add_up(terms.get(beta, 0.0), m)
        Kt = self.K - Fraction(k) * ctx.alpha / 2
        C = mul_up(self.C, ctx.F(k))
        ts = TailSeries({}, K=Kt, C=C, X0=ctx.X, grid=Fraction(1, 2 * ctx.Q))
        for beta, m in terms.items():
            if beta >= Kt:
                ts.C = add_up(ts.C, mul_up(m, rpow(ctx.Xi, -(beta - Kt)).hi))
            else:
                ts.terms[beta] = ComplexBox(RealInterval(0.0, m))
        return ts

    def __repr__(self):
        ctx = self.ctx
        parts = [f"{c}*x^({Fraction(n, ctx.Q)})*rho^{b}" for (n, b), c in sorted(self.terms.items())]
        parts.append(f"O({self.C:.3g} x^-{self.K})")
        return " + ".join(parts)


def _max_majorant(a, b):
    terms = dict(a.terms)
    for beta, v in b.terms.items():
        if beta in terms:
            terms[beta] = ComplexBox(RealInterval(0.0, max(terms[beta].re.hi, v.re.hi)))
        else:
            terms[beta] = v
    return TailSeries(terms, a.K, max(a.C, b.C), a.X0, a.grid)


@dataclass
class DiagState:
    """Stage m: perturbation split as diagonal ``delta`` plus off-diagonal ``R``."""

    stage: int
    delta: SeriesMatrix
    R: SeriesMatrix
    transforms: list = field(default_factory=list)


@dataclass
class AsymptoticData:
    psiX: ComplexBox
    dpsiX: ComplexBox
    epsilonM: float
    k: int = 2
    rhoX: ComplexBox = None
    stages: int = 0
    recessive: tuple = None  # (y, y') at X for theta = 0
    dominant: tuple = None  # (y, y') of the direction theta multiplies
    theta: float = 0.0

    @property
    def recessiveIndex(self):
        return self.k


def build_system(spec):
    """Context (rho data), constant D and the first perturbation R."""
    ctx = RhoContext(spec)
    r = RhoSeries._build(ctx, {(ctx.p - ctx.Q, -3): spec.sign * spec.alpha / 4}, 0.0)
    R = SeriesMatrix([[-r, r], [r, -r]])
    return ctx, (1, -1), R


def _split(G):
    z = G[0, 0].zero_like()
    delta = SeriesMatrix([[G[0, 0], z], [z, G[1, 1]]])
    off = SeriesMatrix([[z, G[0, 1]], [G[1, 0], z]])
    return delta, off


def initial_state(ctx, R):
    delta, off = _split(R)
    return DiagState(1, delta, off, [])


def diag_sweep(state, D=(1, -1)):
    """One near-identity transformation Z = (I + P) W with p_ij = r_ij / (d_j - d_i)."""
    R = state.R
    z = R[0, 1].zero_like()
    if R[0, 1].is_zero() and R[1, 0].is_zero():
        return DiagState(state.stage + 1, state.delta, R, state.transforms + [None])
    v12 = R[0, 1].explicit()
    v21 = R[1, 0].explicit()
    p12 = v12.scale(Fraction(1, D[1] - D[0]))
    p21 = v21.scale(Fraction(1, D[0] - D[1]))
    P = SeriesMatrix([[z, p12], [p21, z]])
    G = state.delta + R
    H = state.delta + SeriesMatrix([[z, R[0, 1].tail_only()], [R[1, 0].tail_only(), z]])
    dP = SeriesMatrix([[z, p12.derivative().mul_rho(-1)], [p21.derivative().mul_rho(-1), z]])
    inner = H + (G @ P) - dP
    ell = P.order()
    if ell <= 0:
        raise NormNotContractive("P does not decay")
    N = neumann_inverse(P, neumann_order(ell, z.K))
    Gn = N @ inner
    delta, off = _split(Gn)
    return DiagState(state.stage + 1, delta, off, state.transforms + [P])


def levinson_remainder(state, ctx):
    """Bound on the Volterra correction eta at X, componentwise.

    With growth rates rho*(d_i + delta_i), Re rho > 0 bounds the kernel of the
    dominant component by exp(J), J = int |rho (delta_1 - delta_2)|, so
    |eta| <= exp(exp(J) * I) - 1 with I = int |rho| max|E_ij|.
    """
    E = state.R
    if E[0, 1].is_zero() and E[1, 0].is_zero():
        return 0.0
    diff = state.delta[0, 0] - state.delta[1, 1]
    J = tail_integral(diff.majorant(1), ctx.X).hi if not diff.is_zero() else 0.0
    emaj = _max_majorant(E[0, 1].majorant(1), E[1, 0].majorant(1))
    I = tail_integral(emaj, ctx.X).hi
    return expm1_up(mul_up(exp_up(J), I))


def select_recessive(ctx):
    """Index of the decaying direction: 2, since Re rho > 0 on [X, inf).

    Im(q - lam) = -Im(lam) never vanishes, so q - lam stays off the branch cut
    of the principal root and Re rho cannot change sign.
    """
    lam = ctx.spec.lam
    if lam.im.lo <= 0.0 <= lam.im.hi:
        raise SignUndetermined("Im(lam) does not exclude 0")
    if not ctx.rhoX.re.lo > 0.0:
        raise SignUndetermined("Re rho(X) not certified positive")
    return 2


def diagonalize(spec):
    ctx, D, R = build_system(spec)
    state = initial_state(ctx, R)
    for _ in range(spec.M):
        state = diag_sweep(state, D)
    return ctx, state


def initial_data(spec):
    """Enclosure of (psi(X), psi'(X)) for the L2 solution, up to a common factor."""
    ctx, state = diagonalize(spec)
    k = select_recessive(ctx)
    eps = levinson_remainder(state, ctx)
    if not eps < 1.0:
        raise NormNotContractive(f"Levinson bound {eps} too large")
    # e_2 + eta, rescaled by 1/(1 + eta_2): e_2 + theta e_1 with |theta| <= eps/(1-eps)
    t = div_up(eps, (RealInterval(1.0) - RealInterval(eps)).lo) if eps else 0.0
    rec = _back_transform(ctx, state, ComplexBox(0.0), ComplexBox(1.0))
    dom = _back_transform(ctx, state, ComplexBox(1.0), ComplexBox(0.0))
    box = ComplexBox(RealInterval(-t, t), RealInterval(-t, t))
    psi = rec[0] + box * dom[0]
    dpsi = rec[1] + box * dom[1]
    return AsymptoticData(psi, dpsi, eps, k, ctx.rhoX, state.stage, rec, dom, t)


def _back_transform(ctx, state, z1, z2):
    """(y, y') at X of the vector Z = prod(I + P_m) (z1, z2), through T(X)."""
    for P in reversed(state.transforms):
        if P is None:
            continue
        p12 = P[0, 1].evaluate()
        p21 = P[1, 0].evaluate()
        z1, z2 = z1 + p12 * z2, p21 * z1 + z2
    return z1 + z2, ctx.rhoX * (z1 - z2)
