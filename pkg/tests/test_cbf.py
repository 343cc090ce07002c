import math

import numpy as np
import pytest

from helmguard.exceptions import SingularAzimuth
from helmguard.schemas import (
    Branch,
    ControlInput,
    EcbfForm,
    PolarBundle,
    ReferencePoint,
    TrajectorySegment,
    TrajectorySpec,
    VesselState,
)
from helmguard.services.cbf import (
    assemble,
    build_constraints,
    cc1_barriers,
    cc1_row,
    cc2_row,
    hurwitz,
    select_branch,
)
from helmguard.services.trajectory import reference_at
from helmguard.services.transforms import build_bundle, polar_error, polar_velocity
from helmguard.services.vessel import drift_terms, eval_dynamics, step_rk4

B_U, B_R = 1.0 / 1.2e5, 1.0 / 6.36e7
REF = ReferencePoint(x_d=0.0, y_d=0.0, psi_ld=0.0, u_ld=5.0)


def make_bundle(**overrides) -> PolarBundle:
    fields = dict(u_l=5.0, psi_a=0.0, psi_l=0.0, r_l=0.0, p_e=6.0, psi_b=0.0, b_ul=B_U, b_r=B_R)
    fields.update(overrides)
    return PolarBundle(**fields)


@pytest.fixture
def always_on(cbf_params):
    return cbf_params.model_copy(update={"activation_margin": 2.0})


@pytest.mark.parametrize("alpha1, alpha2, expected", [(0.01, 0.3, True), (1.0, 2.0, True), (0.01, 0.0, False)])
def test_hurwitz(alpha1, alpha2, expected):
    assert hurwitz(alpha1, alpha2) is expected


def test_barriers_sum_to_twice_margin():
    rng = np.random.default_rng(2)
    for psi_l, psi_b in rng.uniform(-10, 10, size=(100, 2)):
        h_fwd, h_rev = cc1_barriers(psi_l, psi_b, 0.25)
        assert h_fwd + h_rev == pytest.approx(-0.5, abs=1e-12)


def test_branch_selection_includes_right_angle():
    assert select_branch(math.pi / 2, 0.0) == Branch.FORWARD
    assert select_branch(0.3, 0.0) == Branch.FORWARD
    assert select_branch(2.0, 0.0) == Branch.REVERSE
    assert select_branch(-2.0, 0.0) == Branch.REVERSE


def test_cc1_coefficients_at_quarter_turn(always_on):
    result = cc1_row(make_bundle(psi_l=math.pi / 4), REF, ControlInput(), always_on)
    assert result.diagnostics.c1 == pytest.approx(B_U * 0.5 / 6.0)
    assert result.diagnostics.c2 == pytest.approx(math.sqrt(2.0) / 2.0 * B_R)
    assert result.branch == Branch.FORWARD
    assert result.row.a == pytest.approx([result.diagnostics.c1, result.diagnostics.c2])


def test_cc1_row_dropped_at_barrier_maximum(cbf_params):
    result = cc1_row(make_bundle(psi_l=0.2, psi_b=0.2), REF, ControlInput(tau_u=1e4, tau_r=-2e6), cbf_params)
    assert not result.diagnostics.active
    assert result.row.a == [0.0, 0.0]
    assert result.row.b == 0.0
    assert result.diagnostics.c1 == 0.0 and result.diagnostics.c2 == 0.0


def test_cc1_row_enforced_only_inside_activation_band(cbf_params):
    far = cc1_row(make_bundle(psi_l=math.pi / 4), REF, ControlInput(), cbf_params)
    assert far.diagnostics.h >= cbf_params.activation_margin
    assert not far.diagnostics.active
    assert far.row.a == [0.0, 0.0] and far.row.rhs_tau is None
    # diagnostics are still reported outside the band
    assert far.diagnostics.c1 > 0.0

    near = cc1_row(make_bundle(psi_l=1.3), REF, ControlInput(), cbf_params)
    assert 0.0 < near.diagnostics.h < cbf_params.activation_margin
    assert near.diagnostics.active
    assert near.row.a == pytest.approx([near.diagnostics.c1, near.diagnostics.c2])


def test_cc1_reverse_branch_negates_coefficients(always_on):
    result = cc1_row(make_bundle(psi_l=2.5), REF, ControlInput(), always_on)
    assert result.branch == Branch.REVERSE
    assert result.row.a == pytest.approx([-result.diagnostics.c1, -result.diagnostics.c2])
    assert result.diagnostics.h == pytest.approx(-math.cos(2.5) - always_on.eps_psi)


def test_cc1_shift_by_reference_input(always_on):
    bundle = make_bundle(psi_l=0.9, r_l=0.05, psi_b_dot=0.02, f_ul=-0.1, f_rl=0.001)
    tau_ref = ControlInput(tau_u=3e4, tau_r=1e6)
    row = cc1_row(bundle, REF, tau_ref, always_on).row
    assert row.b == pytest.approx(row.rhs_tau - (row.a[0] * tau_ref.tau_u + row.a[1] * tau_ref.tau_r))


def test_printed_form_uses_printed_m(cbf_params):
    bundle = make_bundle(psi_l=0.9, r_l=0.05, psi_b_dot=0.02, f_ul=-0.1, f_rl=0.001)
    printed = cc1_row(bundle, REF, ControlInput(), cbf_params.model_copy(update={"ecbf_form": EcbfForm.PRINTED}))
    exact = cc1_row(bundle, REF, ControlInput(), cbf_params)
    assert printed.diagnostics.drift_term == pytest.approx(math.sin(0.9) * printed.diagnostics.M)
    assert printed.diagnostics.M == exact.diagnostics.M
    delta_dot = bundle.r_l - bundle.psi_b_dot
    assert exact.diagnostics.drift_term - printed.diagnostics.drift_term == pytest.approx(
        (1 - math.sin(0.9)) * (cbf_params.alpha1 * math.cos(0.9) - cbf_params.alpha2 * math.sin(0.9) * delta_dot)
        - math.cos(0.9) * delta_dot ** 2
    )


def test_cc1_needs_positive_distance(cbf_params):
    with pytest.raises(SingularAzimuth):
        cc1_row(make_bundle(psi_l=0.5, p_e=0.0), REF, ControlInput(), cbf_params)


def test_cc1_row_half_plane_never_empty(always_on):
    rng = np.random.default_rng(8)
    for _ in range(100):
        bundle = make_bundle(psi_l=rng.uniform(-3, 3), f_ul=rng.uniform(-1, 1), f_rl=rng.uniform(-0.01, 0.01))
        row = cc1_row(bundle, REF, ControlInput(), always_on).row
        if row.a == [0.0, 0.0]:
            continue
        # the projection onto the boundary satisfies the row
        a = np.array(row.a)
        X = row.b / (a @ a) * a
        assert a @ X <= row.b + 1e-9 * max(1.0, abs(row.b))


def test_cc2_row_at_margin(cbf_params):
    row = cc2_row(cbf_params.eps_u, 0.0, 1.0, 0.0, cbf_params)
    assert row.a == [-1.0, 0.0]
    assert row.b == 0.0


def test_cc2_row_bounds_surge_force(cbf_params):
    row = cc2_row(cbf_params.eps_u + 1.0, 0.0, 1.0, 0.0, cbf_params)
    # -tau_u <= 1, i.e. tau_u >= -1
    assert row.rhs_tau == pytest.approx(1.0)
    assert row.b == pytest.approx(1.0)


def test_cc2_row_shift_and_negative_gain(cbf_params):
    row = cc2_row(2.0, -0.2, 1e-5, 5e4, cbf_params)
    assert row.b == pytest.approx((-0.2 + 1.5) / 1e-5 + 5e4)
    flipped = cc2_row(2.0, -0.2, -1e-5, 5e4, cbf_params)
    assert flipped.a == [1.0, 0.0]
    assert flipped.b == pytest.approx((-0.2 + 1.5) / 1e-5 - 5e4)


def test_assemble_shape(always_on, cbf_params):
    cc1 = cc1_row(make_bundle(psi_l=0.7), REF, ControlInput(), always_on)
    cc2 = cc2_row(3.0, -0.1, B_U, 0.0, cbf_params)
    constraints = assemble(cc1, cc2, h_cc2=2.5)
    assert len(constraints.A) == 2 and all(len(row) == 2 for row in constraints.A)
    assert constraints.A[1] == [-1.0, 0.0]
    assert constraints.branch == Branch.FORWARD
    assert constraints.h_cc2 == 2.5


def test_feasible_at_zero_means_non_negative_b(cbf_params):
    constraints = build_constraints(make_bundle(psi_l=0.3, p_e=6.0), REF, ControlInput(), 5.0, -0.2, B_U, cbf_params)
    assert constraints.satisfied_at_zero() == all(value >= 0 for value in constraints.b)


def test_surge_gain_vanishes_with_sideslip_cosine(params):
    rng = np.random.default_rng(4)
    for u, v in zip(rng.uniform(1e-3, 5, 100), rng.uniform(-5, 5, 100)):
        _, psi_a = polar_velocity(u, v)
        b_ul = params.b_u * math.cos(psi_a)
        assert (abs(b_ul) < 1e-15) == (abs(math.cos(psi_a)) < 1e-15 / params.b_u)


def barrier(s: VesselState, ref: ReferencePoint, branch: Branch, eps_psi: float) -> float:
    _, psi_a = polar_velocity(s.u, s.v)
    _, psi_b = polar_error(ref.x_d - s.x, ref.y_d - s.y)
    c = math.cos(s.psi + psi_a - psi_b)
    return (c if branch == Branch.FORWARD else -c) - eps_psi


@pytest.mark.parametrize(
    "state, eps_r",
    [
        (VesselState(x=0.0, y=-4.0, psi=1.2, u=3.0, v=0.3, r=0.05), 0.0),
        (VesselState(x=0.0, y=-4.0, psi=1.2, u=3.0, v=0.3, r=0.05), 1e-7),
        (VesselState(x=2.0, y=3.0, psi=2.4, u=2.0, v=-0.4, r=-0.08), 0.0),
    ],
)
def test_ecbf_row_matches_finite_difference_rollout(params, always_on, state, eps_r):
    """With tau_ref = tau, the row's right-hand side equals h_ddot + alpha2*h_dot + alpha1*h"""
    p = params.model_copy(update={"eps_r": eps_r})
    spec = TrajectorySpec(
        x0=5.0, y0=1.0, psi0=0.3, segments=[TrajectorySegment(duration=10.0, u_ld=4.0, psi_ld_dot=-0.05)]
    )
    tau = ControlInput(tau_u=1e4, tau_r=1e6)
    h, t0 = 1e-4, 1.0

    s0 = state
    s1 = step_rk4(s0, tau, p, h)
    s2 = step_rk4(s1, tau, p, h)
    refs = [reference_at(t0 + k * h, spec) for k in range(3)]

    nu_dot = [eval_dynamics(s, tau, p).nu_dot for s in (s0, s1, s2)]
    nu_ddot = tuple((after - before) / (2 * h) for after, before in zip(nu_dot[2], nu_dot[0]))
    bundle = build_bundle(s1, refs[1], drift_terms(s1, p), nu_dot[1], nu_ddot, p)

    result = cc1_row(bundle, refs[1], tau, always_on)
    assert result.diagnostics.active
    values = [barrier(s, ref, result.branch, always_on.eps_psi) for s, ref in zip((s0, s1, s2), refs)]
    h_dot = (values[2] - values[0]) / (2 * h)
    h_ddot = (values[2] - 2 * values[1] + values[0]) / h ** 2
    ecbf = h_ddot + always_on.alpha2 * h_dot + always_on.alpha1 * values[1]

    assert result.diagnostics.h == pytest.approx(values[1], abs=1e-12)
    assert result.diagnostics.h_dot == pytest.approx(h_dot, rel=1e-4, abs=1e-8)
    assert result.row.b == pytest.approx(ecbf, rel=1e-2, abs=1e-5)
