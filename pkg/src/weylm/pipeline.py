"""End-to-end enclosure of m(lam) = -psi(0) / psi'(0)."""

import time
from dataclasses import dataclass, field

from .asymptotic import ProblemSpec, initial_data
from .bridge import BridgeInput, bridge
from .errors import DenominatorContainsZero, DivisionByIntervalContainingZero
from .interval import ComplexBox, RealInterval, rpow
from .ivp import CoeffGenerator, EnclosureState, StepPlan, integrate

__all__ = ["MEnclosure", "compute_m", "conjugate_check", "default_plan", "quotient"]


@dataclass
class MEnclosure:
    spec: ProblemSpec
    schedule: StepPlan
    box: ComplexBox
    diagnostics: dict = field(default_factory=dict)


def default_plan(spec, r=15, bridge_eps=None):
    """Integer alpha: straight to 0 with step 1/32.  Otherwise 1/32 down to 1/32,
    then steps of ``bridge_eps`` (default 1.5625e-5) down to ``bridge_eps``."""
    if spec.alpha.denominator == 1:
        return StepPlan.standard(spec.X, spec.alpha, r)
    eps = 0.000015625 if bridge_eps is None else float(bridge_eps)
    return StepPlan(spec.X, [(0.03125, -0.03125), (eps, -eps)], r)


def quotient(y, yp):
    """Box for -y / yp; a denominator box touching 0 is a failed enclosure."""
    try:
        return -(y / yp)
    except (DivisionByIntervalContainingZero, ZeroDivisionError) as e:
        raise DenominatorContainsZero(f"psi'(0) enclosure {yp} may vanish") from e


def _columns(state):
    """Complex (dy, dy') direction of each error coordinate of a Lohner set."""
    B = state.basis
    return [(ComplexBox(B[0][k], B[1][k]), ComplexBox(B[2][k], B[3][k])) for k in range(4)]


def _centered_quotient(center, cols, err, extra, yp_hull):
    """-y/y' over {center + sum_k cols[k] * err[k] + extra}.

    Uses -y/y' + ym/ym' = (ym dy' - ym' dy) / (y' ym'), which is linear in the
    displacement, so directions along (ym, ym') itself cancel.
    """
    ym, ypm = center
    num = ym * extra[1] - ypm * extra[0]
    for (dy, dyp), e in zip(cols, err):
        num = num + (ym * dyp - ypm * dy) * e
    base = quotient(ym, ypm)
    try:
        corr = num / (yp_hull * ypm)
    except (DivisionByIntervalContainingZero, ZeroDivisionError) as e:
        raise DenominatorContainsZero(f"psi'(0) enclosure {yp_hull} may vanish") from e
    return base + corr


def _point(b):
    return ComplexBox(b.re.mid, b.im.mid)


def _state_quotient(state):
    mid = state.mid
    center = (ComplexBox(mid[0], mid[1]), ComplexBox(mid[2], mid[3]))
    zero = ComplexBox(0.0)
    _, yp = state.as_complex()
    return _centered_quotient(center, _columns(state), state.err, (zero, zero), yp)


def _bridged_quotient(state, spec, out):
    """Quotient after the affine bridge map (y, y') -> (y - eps y', y' - eps c(eps) y)."""
    E = RealInterval(state.x)
    ceps = ComplexBox(rpow(E, spec.alpha) * spec.sign) - spec.lam
    ec = ceps * E

    def f(y, yp):
        return y - yp * E, yp - ec * y

    mid = state.mid
    cy, cyp = f(ComplexBox(mid[0], mid[1]), ComplexBox(mid[2], mid[3]))
    center = (_point(cy), _point(cyp))
    r1, r2 = out.alpha1, out.alpha2
    ball1 = ComplexBox(RealInterval(-r1, r1), RealInterval(-r1, r1))
    ball2 = ComplexBox(RealInterval(-r2, r2), RealInterval(-r2, r2))
    extra = (cy - center[0] + ball1, cyp - center[1] + ball2)
    cols = [f(dy, dyp) for dy, dyp in _columns(state)]
    return _centered_quotient(center, cols, state.err, extra, out.dy0)


def compute_m(spec, schedule=None, bridge_eps=None, r=15):
    """Enclose m(lam) for q = sign * x**alpha."""
    t0 = time.perf_counter()
    plan = schedule if schedule is not None else default_plan(spec, r, bridge_eps)
    end = plan.phases[-1][0] if plan.phases else plan.start
    smooth = spec.alpha.denominator == 1
    if plan.start != spec.X:
        raise ValueError(f"schedule starts at {plan.start}, not X = {spec.X}")
    if smooth and end != 0.0:
        raise ValueError(f"schedule ends at {end}, not 0")
    if not smooth and not end > 0.0:
        raise ValueError("non-smooth potential: the schedule must stop at some eps > 0")
    data = initial_data(spec)
    state = EnclosureState.from_family(spec.X, data.recessive, data.dominant, data.theta)
    gen = CoeffGenerator(spec.alpha, spec.sign, spec.lam)
    state = integrate(state, gen, plan)
    diag = {
        "epsilonM": data.epsilonM,
        "steps": plan.total_steps,
    }
    if state.x == 0.0:
        box = _state_quotient(state)
        y, yp = state.as_complex()
    else:
        A0, A1 = state.as_complex()
        out = bridge(BridgeInput(state.x, spec.lam, spec.alpha, A0, A1, spec.sign))
        diag["bridge"] = {"eps": state.x, "alpha1": out.alpha1, "alpha2": out.alpha2}
        y, yp = out.y0, out.dy0
        box = _bridged_quotient(state, spec, out).intersection(quotient(y, yp))
    diag["widths"] = {"psi": y.width, "dpsi": yp.width, "m": box.width}
    diag["seconds"] = time.perf_counter() - t0
    return MEnclosure(spec, plan, box, diag)


def conjugate_check(spec, schedule=None, bridge_eps=None):
    """(intersects, nevanlinna_ok, enclosure, conjugate enclosure)."""
    a = compute_m(spec, schedule, bridge_eps)
    cs = ProblemSpec(spec.alpha, spec.sign, spec.lam.conj(), spec.X, spec.M, spec.K)
    b = compute_m(cs, schedule, bridge_eps)
    inter = a.box.conj().intersects(b.box)
    if spec.lam.im.lo > 0:
        nev = a.box.im.hi > 0 and b.box.im.lo < 0
    else:
        nev = a.box.im.lo < 0 and b.box.im.hi > 0
    return inter, nev, a, b
