from fractions import Fraction as F

import mpmath as mp
import pytest

from weylm.asymptotic import (
    ProblemSpec,
    RhoContext,
    RhoSeries,
    _back_transform,
    build_system,
    diag_sweep,
    diagonalize,
    initial_data,
    initial_state,
    levinson_remainder,
    select_recessive,
)
from weylm.errors import SignUndetermined
from weylm.interval import ComplexBox, RealInterval
from weylm.ivp import CoeffGenerator, EnclosureState, StepPlan, integrate
from weylm.pipeline import quotient
from weylm.series import SeriesMatrix

LAM = ComplexBox(1.0, 1.0)


def contains(box, z):
    return box.re.lo <= mp.re(z) <= box.re.hi and box.im.lo <= mp.im(z) <= box.im.hi


def test_leading_perturbation_matches_direct_value():
    spec = ProblemSpec(2, -1, ComplexBox(0.0, 1.0), 10.0)
    ctx, D, R = build_system(spec)
    assert D == (1, -1)
    with mp.workdps(30):
        x = mp.mpf(10)
        r = -2 * x / (4 * mp.sqrt(-x**2 - 1j) ** 3)
        assert contains(R[0, 1].evaluate(), r)
        assert contains(R[1, 0].evaluate(), r)
        assert contains(R[0, 0].evaluate(), -r)


def test_default_cutoff():
    assert ProblemSpec(1, -1, LAM, 10.0).K == F(21, 2)
    assert ProblemSpec(F(1, 2), -1, LAM, 10.0, M=2).K == F(15, 4)


def test_real_lambda_rejected():
    with pytest.raises(SignUndetermined):
        ProblemSpec(1, -1, ComplexBox(1.0, 0.0), 10.0)
    with pytest.raises(SignUndetermined):
        ProblemSpec(1, -1, ComplexBox(RealInterval(1.0), RealInterval(-1e-3, 1e-3)), 10.0)


def test_zero_perturbation_is_a_fixed_point():
    ctx = RhoContext(ProblemSpec(1, -1, LAM, 10.0))
    z = RhoSeries(ctx)
    state = initial_state(ctx, SeriesMatrix([[z, z], [z, z]]))
    out = diag_sweep(state)
    assert out.transforms == [None]
    assert out.R[0, 1].is_zero() and out.delta[0, 0].is_zero()
    assert levinson_remainder(out, ctx) == 0.0


def test_first_transform_entries():
    spec = ProblemSpec(1, -1, LAM, 10.0)
    ctx, D, R = build_system(spec)
    out = diag_sweep(initial_state(ctx, R), D)
    P = out.transforms[0]
    r = R[0, 1].evaluate()
    # p12 = r12 / (d2 - d1) = -r / 2, p21 = r21 / (d1 - d2) = r / 2
    assert P[0, 1].evaluate().intersects(r * -0.5)
    assert P[1, 0].evaluate().intersects(r * 0.5)
    assert P[0, 0].is_zero() and P[1, 1].is_zero()


@pytest.mark.parametrize("alpha", [F(1), F(2), F(1, 2), F(3, 2)])
def test_order_ledger(alpha):
    spec = ProblemSpec(alpha, -1, LAM, 10.0)
    ctx, D, R = build_system(spec)
    state = initial_state(ctx, R)
    step = alpha / 2 + 1
    assert state.R.order() == step
    for m in range(1, spec.M + 1):
        prev = state.R.order()
        state = diag_sweep(state, D)
        assert state.R.order() - prev >= alpha / 2
        assert state.R.order() >= (m + 1) * step or state.R.order() >= spec.K
        P = state.transforms[-1]
        assert P[0, 0].is_zero() and P[1, 1].is_zero()
    assert state.R.order() >= spec.K


def test_recessive_sign_check():
    with mp.workdps(30):
        vals = [mp.re(mp.sqrt(-mp.mpf(x) - mp.mpc(1, 1))) for x in (10, 100, 1000)]
    assert all(v > 0 for v in vals) and vals[0] > vals[1] > vals[2]
    ctx = RhoContext(ProblemSpec(1, -1, LAM, 10.0))
    assert select_recessive(ctx) == 2
    ctx_c = RhoContext(ProblemSpec(1, -1, LAM.conj(), 10.0))
    assert select_recessive(ctx_c) == 2
    assert initial_data(ProblemSpec(1, -1, LAM, 10.0)).recessiveIndex == 2


def test_zero_perturbation_initial_vector():
    spec = ProblemSpec(1, -1, LAM, 10.0, M=2)
    ctx = RhoContext(spec)
    z = RhoSeries(ctx)
    state = initial_state(ctx, SeriesMatrix([[z, z], [z, z]]))
    for _ in range(spec.M):
        state = diag_sweep(state)
    y, yp = _back_transform(ctx, state, ComplexBox(0.0), ComplexBox(1.0))
    assert y.contains(1) and y.is_point()
    assert (-yp).subset(ctx.rhoX) and ctx.rhoX.subset(-yp)


def test_remainder_decreases_with_X():
    e10 = initial_data(ProblemSpec(1, -1, LAM, 10.0)).epsilonM
    e20 = initial_data(ProblemSpec(1, -1, LAM, 20.0)).epsilonM
    e40 = initial_data(ProblemSpec(1, -1, LAM, 40.0)).epsilonM
    assert 0 < e40 < e20 < e10 < 1


def test_width_bookkeeping():
    d = initial_data(ProblemSpec(1, -1, LAM, 10.0))
    scale = d.recessive[0].mag() + d.dominant[0].mag()
    assert d.psiX.width <= 10 * d.epsilonM * scale
    assert d.psiX.contains(d.recessive[0].mid)


def test_more_sweeps_do_not_contradict():
    a = initial_data(ProblemSpec(1, -1, LAM, 10.0, M=4))
    b = initial_data(ProblemSpec(1, -1, LAM, 10.0, M=6))
    assert quotient(a.psiX, a.dpsiX).intersects(quotient(b.psiX, b.dpsiX))
    assert b.epsilonM < a.epsilonM


def test_cross_matching_point_consistency():
    gen = CoeffGenerator(1, -1, LAM)
    far = initial_data(ProblemSpec(1, -1, LAM, 40.0))
    state = EnclosureState.from_family(40.0, far.recessive, far.dominant, far.theta)
    state = integrate(state, gen, StepPlan(40.0, [(10.0, -0.03125)]))
    y, yp = state.as_complex()
    near = initial_data(ProblemSpec(1, -1, LAM, 10.0))
    assert quotient(y, yp).intersects(quotient(near.psiX, near.dpsiX))


def test_diagonalize_runs_M_sweeps():
    ctx, state = diagonalize(ProblemSpec(F(1, 2), -1, LAM, 10.0, M=3))
    assert len(state.transforms) == 3
