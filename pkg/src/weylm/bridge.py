"""Carry an enclosure of (y, y') from a small eps > 0 to the origin.

For q = -x**alpha with 0 < alpha < 2 the potential is not smooth at 0, so
the Taylor integrator stops at eps.  On [0, eps] the solution is compared
with the first-order approximants about eps,

    f(t) = A0 + (t - eps) A1,        g(t) = A1 + (t - eps) c(eps) A0,

and a contraction argument bounds |y(0) - f(0)| <= alpha1 and
|y'(0) - g(0)| <= alpha2, where with b = eps * int_0^eps |c|,

    alpha1 = (int|f' - g| + eps int|g' - c f|) / (1 - b)
    alpha2 = (int|c| int|f' - g| + int|g' - c f|) / (1 - b).
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContractionFailed
from .interval import ComplexBox, RealInterval, as_box, rpow

__all__ = [
    "BridgeInput",
    "BridgeOutput",
    "contraction_bound",
    "bridge_sqrt",
    "bridge_x32",
    "generic_bridge",
    "bridge",
]


@dataclass(frozen=True)
class BridgeInput:
    eps: float
    lam: ComplexBox
    alpha: Fraction
    A0: ComplexBox
    A1: ComplexBox
    sign: int = -1  # q = sign * x**alpha; 0 gives q = 0

    def __post_init__(self):
        object.__setattr__(self, "lam", as_box(self.lam))
        object.__setattr__(self, "A0", as_box(self.A0))
        object.__setattr__(self, "A1", as_box(self.A1))
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.eps < 0:
            raise ValueError("eps must be non-negative")


@dataclass(frozen=True)
class BridgeOutput:
    y0: ComplexBox
    dy0: ComplexBox
    alpha1: float
    alpha2: float


def _ball(r):
    return ComplexBox(RealInterval(-r, r), RealInterval(-r, r))


def _int_abs_c(E, alpha, lam_mag, sign=-1):
    """Upper bound (as interval) of int_0^eps |sign t**alpha - lam| dt."""
    out = lam_mag * E
    if sign:
        out = out + rpow(E, alpha + 1) / RealInterval(alpha + 1)
    return out


def contraction_bound(eps, lam, alpha, sign=-1):
    """Interval whose upper end bounds b = eps * int_0^eps |c| dt."""
    E = RealInterval(eps)
    lm = RealInterval(0.0, as_box(lam).mag())
    return E * _int_abs_c(E, Fraction(alpha), lm, sign)


def _centers(inp, E, ea):
    lam = inp.lam
    y0 = inp.A0 - inp.A1 * E
    # g(0) = A1 - eps c(eps) A0 with c(eps) = sign eps**alpha - lam
    ceps = ComplexBox(ea * inp.sign) - lam
    dy0 = inp.A1 - ceps * inp.A0 * E
    return y0, dy0


def _finish(inp, E, num1, num2, b):
    one_minus_b = RealInterval(1.0) - b
    if not one_minus_b.lo > 0.0:
        raise ContractionFailed(f"b = {b.hi} is not below 1")
    a1 = (num1 / one_minus_b).hi
    a2 = (num2 / one_minus_b).hi
    ea = rpow(E, inp.alpha) if inp.sign else RealInterval(0.0)
    y0, dy0 = _centers(inp, E, ea)
    return BridgeOutput(y0 + _ball(a1), dy0 + _ball(a2), a1, a2)


def _mags(inp):
    return (RealInterval(inp.lam.mag()), RealInterval(inp.A0.mag()), RealInterval(inp.A1.mag()))


def bridge_sqrt(inp):
    """Closed-form radii for q = -sqrt(x)."""
    if inp.alpha != Fraction(1, 2) or inp.sign != -1:
        raise ValueError("bridge_sqrt needs q = -x**(1/2)")
    E = RealInterval(inp.eps)
    L, a0, a1 = _mags(inp)
    s = E.sqrt()
    b = E * E * (L + RealInterval(Fraction(2, 3)) * s)
    half = RealInterval(0.5)
    k = half * L + RealInterval(Fraction(4, 15)) * s
    num1 = E * E * ((half * L + RealInterval(Fraction(5, 6)) * s) * a0 + E * k * a1)
    inner = half * E * s * (L + s) * (L + RealInterval(Fraction(2, 3)) * s) + RealInterval(Fraction(1, 3))
    num2 = E * s * (inner * a0 + s * k * a1)
    return _finish(inp, E, num1, num2, b)


def bridge_x32(inp):
    """Closed-form radii for q = -x**(3/2)."""
    if inp.alpha != Fraction(3, 2) or inp.sign != -1:
        raise ValueError("bridge_x32 needs q = -x**(3/2)")
    E = RealInterval(inp.eps)
    L, a0, a1 = _mags(inp)
    s = E.sqrt()
    e32 = E * s
    b = E * E * (L + RealInterval(Fraction(2, 5)) * e32)
    half = RealInterval(0.5)
    k = half * L + RealInterval(Fraction(4, 35)) * e32
    num1 = E * E * ((half * L + RealInterval(Fraction(11, 10)) * e32) * a0 + E * k * a1)
    inner = half * E * (L + e32) * (L + RealInterval(Fraction(2, 5)) * e32) + RealInterval(Fraction(3, 5)) * s
    num2 = E * E * (inner * a0 + k * a1)
    return _finish(inp, E, num1, num2, b)


def generic_bridge(inp):
    """Radii from power-function integrals, any alpha > 0 (or q = 0)."""
    E = RealInterval(inp.eps)
    L, a0, a1 = _mags(inp)
    al = inp.alpha
    if inp.sign:
        ea = rpow(E, al)
        eap1 = rpow(E, al + 1)
        eap2 = rpow(E, al + 2)
    else:
        ea = eap1 = eap2 = RealInterval(0.0)
    int_c = _int_abs_c(E, al, L, inp.sign)
    b = E * int_c
    E2 = E * E
    half = RealInterval(0.5)
    # |f' - g| = (eps - t) |c(eps)| |A0|,  |c(eps)| <= eps**alpha + |lam|
    i_fg = half * E2 * (ea + L) * a0
    # |g' - c f| <= |c(eps) - c(t)| |A0| + |c(t)| (eps - t) |A1|
    i_cc = eap1 * RealInterval(al / (al + 1))
    i_ct = eap2 / RealInterval((al + 1) * (al + 2)) + half * L * E2
    i_gcf = i_cc * a0 + i_ct * a1
    num1 = i_fg + E * i_gcf
    num2 = int_c * i_fg + i_gcf
    return _finish(inp, E, num1, num2, b)


def bridge(inp):
    """Closed form when one exists, otherwise the generic bound."""
    if inp.sign == -1 and inp.alpha == Fraction(1, 2):
        return bridge_sqrt(inp)
    if inp.sign == -1 and inp.alpha == Fraction(3, 2):
        return bridge_x32(inp)
    return generic_bridge(inp)
