"""Validated Taylor integrator for y'' = (q(x) - lam) y.

The complex equation is carried as the real system for
``(Re y, Im y, Re y', Im y')``.  A state is the set ``mid + B @ e`` with
``e`` in an interval box; each step maps it through an enclosure of the
transition matrix and re-orthogonalizes ``B`` (Lohner's QR variant) so the
box does not wrap.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import EnclosureFailure, NonSmoothCenter
from .interval import ComplexBox, RealInterval, add_up, div_up, mul_up, rpow

__all__ = [
    "CoeffGenerator",
    "EnclosureState",
    "StepPlan",
    "taylor_coeffs",
    "apriori_enclosure",
    "step",
    "integrate",
]

_ONE = ComplexBox(1.0)
_ZERO = ComplexBox(0.0)


class CoeffGenerator:
    """Taylor coefficients of ``c(x) = sign * x**alpha - lam``.

    ``sign = 0`` gives the constant ``c = -lam`` (used for test problems).
    For non-integer ``alpha`` the powers come from ``x u' = alpha u``,
    i.e. ``u_{k+1} = (alpha - k) u_k / ((k + 1) x0)``.
    """

    def __init__(self, alpha, sign, lam):
        self.alpha = Fraction(alpha)
        self.sign = sign
        self.lam = lam if isinstance(lam, ComplexBox) else ComplexBox(lam)
        self.integer = self.alpha.denominator == 1
        if sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or 1")

    def coeffs(self, x0, n):
        """ComplexBox list ``c_0 .. c_{n-1}`` about the center ``x0`` (float or interval)."""
        x0 = x0 if isinstance(x0, RealInterval) else RealInterval(x0)
        out = [_ZERO] * n
        if self.sign == 0 or self.alpha == 0:
            out[0] = ComplexBox(float(self.sign)) - self.lam
            return out
        a = self.alpha
        if self.integer:
            p = int(a)
            binom = 1
            for j in range(min(n, p + 1)):
                out[j] = ComplexBox(x0 ** (p - j) * (self.sign * binom))
                binom = binom * (p - j) // (j + 1)
        else:
            if x0.lo <= 0.0:
                raise NonSmoothCenter(f"x^{a} is not smooth at {x0}")
            u = rpow(x0, a) * self.sign
            for j in range(n):
                out[j] = ComplexBox(u)
                u = u * RealInterval(a - j) / (x0 * (j + 1))
        out[0] = out[0] - self.lam
        return out


def _series(cs, y0, y1, n):
    """Coefficients y_0 .. y_{n-1} of the solution with y(x0)=y0, y'(x0)=y1."""
    ys = [y0, y1]
    nz = [j for j, c in enumerate(cs) if not (c.rl == c.rh == c.il == c.ih == 0.0)]
    for k in range(n - 2):
        acc = _ZERO
        for j in nz:
            if j > k:
                break
            acc = acc + cs[j] * ys[k - j]
        ys.append(acc / float((k + 1) * (k + 2)))
    return ys[:n]


def taylor_coeffs(gen, x0, y0, yp0, r):
    """Pairs ``(Y_k, Y'_k)``, k < r, of the Taylor expansion of (y, y') about x0."""
    cs = gen.coeffs(x0, r + 1)
    ys = _series(cs, y0, yp0, r + 1)
    return [(ys[k], ys[k + 1] * float(k + 1)) for k in range(r)]


def _realify(a, b, c, d):
    """Real 4x4 interval matrix of the complex 2x2 [[a, b], [c, d]]."""
    rows = []
    for u, v in ((a, b), (c, d)):
        ur, ui, vr, vi = u.re, u.im, v.re, v.im
        rows.append([ur, -ui, vr, -vi])
        rows.append([ui, ur, vi, vr])
    return rows


def _to_complex(v):
    return ComplexBox(v[0], v[1]), ComplexBox(v[2], v[3])


def _hull_vec(mid, B, err):
    out = []
    for i in range(4):
        acc = RealInterval(mid[i])
        row = B[i]
        for j in range(4):
            if row[j] != 0.0:
                acc = acc + err[j] * row[j]
        out.append(acc)
    return out


@dataclass
class EnclosureState:
    """The set ``{mid + basis @ e : e in err}`` at abscissa ``x``."""

    x: float
    mid: list
    basis: list
    err: list
    steps: int = 0

    @classmethod
    def from_boxes(cls, x, y, yp):
        y, yp = ComplexBox(y) if not isinstance(y, ComplexBox) else y, \
            ComplexBox(yp) if not isinstance(yp, ComplexBox) else yp
        comps = [y.re, y.im, yp.re, yp.im]
        mid = [c.mid for c in comps]
        err = [c - m for c, m in zip(comps, mid)]
        eye = [[1.0 if i == j else 0.0 for j in range(4)] for i in range(4)]
        return cls(float(x), mid, eye, err)

    @classmethod
    def from_family(cls, x, center, direction, theta):
        """Set ``center + t * direction`` with complex ``|Re t|, |Im t| <= theta``.

        ``center`` and ``direction`` are pairs of ComplexBox (y, y').  The box
        widths of both are absorbed into the error coordinates.
        """
        c = [center[0].re, center[0].im, center[1].re, center[1].im]
        d = [direction[0].re, direction[0].im, direction[1].re, direction[1].im]
        mid = [v.mid for v in c]
        dm = [v.mid for v in d]
        cm = mid
        # columns: direction, i*direction, center, i*center
        cols = [dm, [-dm[1], dm[0], -dm[3], dm[2]], cm, [-cm[1], cm[0], -cm[3], cm[2]]]
        B = [[cols[j][i] for j in range(4)] for i in range(4)]
        Binv = _inverse_enclosure(np.array(B))
        t = RealInterval(-theta, theta)
        # residual: (c - mid) + t*(d - dm) in both the t and i*t parts
        dd = [v - m for v, m in zip(d, dm)]
        ddi = [-dd[1], dd[0], -dd[3], dd[2]]
        w = [(c[i] - mid[i]) + t * dd[i] + t * ddi[i] for i in range(4)]
        err = _imat_vec(Binv, w)
        err[0] = err[0] + t
        err[1] = err[1] + t
        return cls(float(x), mid, B, err)

    def hull(self):
        """Interval 4-vector enclosing the set."""
        return _hull_vec(self.mid, self.basis, self.err)

    def as_complex(self):
        return _to_complex(self.hull())

    def max_width(self):
        return max(v.width for v in self.hull())


class StepPlan:
    """Fixed-step schedule: from ``start`` through ``phases = [(end, h), ...]``.

    Each phase length must be an integer multiple of its step (checked to a
    relative 1e-9, since decimal steps such as 1.5625e-5 are not binary).
    Abscissas are the doubles nearest to the exact decimal grid points; each
    actual step is the exact difference of consecutive abscissas.
    """

    def __init__(self, start, phases, r=15):
        self.start = float(start)
        self.phases = [(float(e), float(h)) for e, h in phases]
        self.r = int(r)
        if self.r < 2:
            raise ValueError("Taylor order must be at least 2")
        self.counts = []
        x = self.start
        for end, h in self.phases:
            if h == 0.0 or (end - x) * h < 0.0:
                raise ValueError(f"step {h} does not move {x} toward {end}")
            n = round((end - x) / h)
            if n < 0 or abs(n * h - (end - x)) > 1e-9 * max(abs(end - x), abs(h)):
                raise ValueError(f"[{x}, {end}] is not a multiple of {h}")
            self.counts.append(n)
            x = end

    @property
    def h(self):
        return self.phases[0][1] if self.phases else 0.0

    @property
    def schedule(self):
        out = []
        x = self.start
        for end, h in self.phases:
            out.append(((x, end), h))
            x = end
        return out

    @property
    def total_steps(self):
        return sum(self.counts)

    @classmethod
    def standard(cls, X, alpha, r=15, eps=0.000015625, coarse=0.03125):
        """Default schedule: one coarse phase down to 0 for integer alpha, else
        coarse down to ``coarse`` and fine (step ``eps``) down to ``eps``."""
        alpha = Fraction(alpha)
        if alpha.denominator == 1:
            return cls(X, [(0.0, -coarse)], r)
        return cls(X, [(coarse, -coarse), (eps, -eps)], r)

    def abscissas(self):
        x0 = Fraction(str(self.start)) if self.start != int(self.start) else Fraction(int(self.start))
        yield self.start
        for (end, h), n in zip(self.phases, self.counts):
            hf = Fraction(repr(h))
            for k in range(1, n):
                yield float(x0 + k * hf)
            yield end
            x0 = Fraction(repr(end))


def _imat_vec(A, v):
    out = []
    for row in A:
        acc = None
        for a, x in zip(row, v):
            t = a * x
            acc = t if acc is None else acc + t
        out.append(acc)
    return out


def _imat_mat(A, B):
    n = len(B[0])
    return [[_dot([row[k] for k in range(len(row))], [B[k][j] for k in range(len(B))]) for j in range(n)]
            for row in A]


def _dot(a, b):
    acc = None
    for x, y in zip(a, b):
        if isinstance(y, float) and y == 0.0:
            continue
        t = x * y
        acc = t if acc is None else acc + t
    return acc if acc is not None else RealInterval(0.0)


def _inverse_enclosure(Bm):
    """Interval matrix containing the inverse of the float matrix ``Bm``."""
    Binv = np.linalg.inv(Bm)
    n = Bm.shape[0]
    Ri = [[RealInterval(float(v)) for v in row] for row in Binv]
    Bi = [[float(v) for v in row] for row in Bm]
    E = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = RealInterval(1.0 if i == j else 0.0)
            for k in range(n):
                acc = acc - Ri[i][k] * Bi[k][j]
            row.append(acc)
        E.append(row)
    # inv(B) = (I - E)^-1 X with X = approx inverse, E = I - X B
    delta = 0.0
    for row in E:
        s = 0.0
        for v in row:
            s = add_up(s, v.mag())
        delta = max(delta, s)
    if not delta < 1.0:
        raise EnclosureFailure("basis matrix numerically singular")
    xn = 0.0
    for row in Binv:
        s = 0.0
        for v in row:
            s = add_up(s, abs(float(v)))
        xn = max(xn, s)
    rad = div_up(mul_up(delta, xn), (RealInterval(1.0) - RealInterval(delta)).lo)
    return [[RealInterval(float(v)).inflate(rad) for v in row] for row in Binv]


def apriori_enclosure(state, gen, h, retries=20):
    """Boxes (Y, Y') containing the solution over [x, x + h] for every start in the state."""
    if h == 0.0:
        raise ValueError("zero step")
    x0 = state.x
    tau = RealInterval(min(x0, x0 + h), max(x0, x0 + h))
    y0, yp0 = state.as_complex()
    hs = RealInterval(min(0.0, h), max(0.0, h))
    cs = gen.coeffs(tau, 1)[0]
    uy = y0 + yp0 * hs
    uyp = yp0 + cs * y0 * hs
    uy = _inflate_box(uy, 1.1)
    uyp = _inflate_box(uyp, 1.1)
    for _ in range(retries):
        ny = y0 + uyp * hs
        nyp = yp0 + cs * uy * hs
        if ny.subset(uy) and nyp.subset(uyp):
            return ny, nyp
        uy = _inflate_box(uy.hull(ny), 1.1)
        uyp = _inflate_box(uyp.hull(nyp), 1.1)
    raise EnclosureFailure(f"no a-priori enclosure for step {h} at x={x0}", x=x0)


def _inflate_box(b, f):
    wr = b.rh - b.rl
    wi = b.ih - b.il
    r = max(wr, wi) * (f - 1.0) / 2 + 1e-3 * max(wr, wi) + 1e-300
    return b.inflate(r)


def _transition(gen, x0, h, r):
    """Interval 4x4 matrix enclosing the Taylor polynomial part of the flow."""
    cs = gen.coeffs(x0, r + 1)
    c1 = _series(cs, _ONE, _ZERO, r + 1)
    c2 = _series(cs, _ZERO, _ONE, r + 1)
    hI = RealInterval(h)
    # Horner in h on the four complex entries
    a = b = c = d = _ZERO
    for k in range(r - 1, -1, -1):
        a = a * hI + c1[k]
        b = b * hI + c2[k]
        c = c * hI + c1[k + 1] * float(k + 1)
        d = d * hI + c2[k + 1] * float(k + 1)
    return _realify(a, b, c, d)


def _remainder(gen, x0, h, r, uy, uyp):
    """h**r times the r-th Taylor coefficient of (y, y') over the step, as 4 intervals."""
    tau = RealInterval(min(x0, x0 + h), max(x0, x0 + h))
    cs = gen.coeffs(tau, r + 1)
    ys = _series(cs, uy, uyp, r + 2)
    hr = RealInterval(h) ** r
    ry = ys[r] * hr
    ryp = ys[r + 1] * (hr * float(r + 1))
    return [ry.re, ry.im, ryp.re, ryp.im]


def step(state, gen, h, r=15, naive=False):
    """Advance the enclosure by one step of (signed) length ``h``."""
    x0 = state.x
    x1 = x0 + h
    if x1 - x0 != h:
        raise ValueError("step does not land on a representable abscissa exactly")
    uy, uyp = apriori_enclosure(state, gen, h)
    rem = _remainder(gen, x0, h, r, uy, uyp)
    T = _transition(gen, x0, h, r)
    Tm = _imat_vec(T, [RealInterval(v) for v in state.mid])
    Tm = [a + b for a, b in zip(Tm, rem)]
    mid = [v.mid for v in Tm]
    z = [v - m for v, m in zip(Tm, mid)]
    A = [[_dot(row, [state.basis[k][j] for k in range(4)]) for j in range(4)] for row in T]
    if naive:
        err = [a + b for a, b in zip(_imat_vec(A, state.err), z)]
        B = state.basis
    else:
        # order columns by their contribution so the largest lead the QR
        weights = []
        for j in range(4):
            nrm = sum(abs(A[i][j].mid) for i in range(4))
            weights.append(nrm * state.err[j].mag())
        perm = sorted(range(4), key=lambda j: -weights[j])
        Ap = [[A[i][j] for j in perm] for i in range(4)]
        ep = [state.err[j] for j in perm]
        Am = np.array([[v.mid for v in row] for row in Ap])
        Q, _ = np.linalg.qr(Am)
        Qinv = _inverse_enclosure(Q)
        C = _imat_mat(Qinv, Ap)
        err = [a + b for a, b in zip(_imat_vec(C, ep), _imat_vec(Qinv, z))]
        B = [[float(v) for v in row] for row in Q]
    return EnclosureState(x1, mid, B, err, state.steps + 1)


def integrate(state, gen, plan, record=False, naive=False):
    """Run ``plan`` from ``state``; returns the final state (and widths if ``record``).

    ``naive`` propagates the error box in fixed coordinates (for comparison).
    """
    widths = []
    xs = plan.abscissas()
    first = next(xs)
    if first != state.x:
        raise ValueError(f"plan starts at {first}, state at {state.x}")
    cur = state
    for x in xs:
        h = x - cur.x
        try:
            cur = step(cur, gen, h, plan.r, naive)
        except EnclosureFailure as e:
            if e.x is None:
                e.x = cur.x
            raise
        if record:
            widths.append((cur.x, cur.max_width()))
    if record:
        return cur, widths
    return cur
