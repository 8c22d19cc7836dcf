import cmath
import math

import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import diffusion_params, evanescent_params, klein_params
from weylbarrier.errors import RegimeError, SingularityError
from weylbarrier.kinematics import Kinematics
from weylbarrier.steps import (
    AlphaFactor,
    StepKind,
    alpha_factor,
    beta_direct,
    beta_from_alpha,
    gamma_direct,
    gamma_from_alpha,
    step1,
    step2,
    step3,
    step_reflection_probability,
)

TOL = 1e-12


def close(a, b, tol=TOL):
    return abs(a - b) <= tol * max(1.0, abs(b))


def test_alpha_reference_point():
    af = alpha_factor(Kinematics(3.0, 1.0, 1.0))
    # q1 = sqrt(3), p1 = sqrt(8), inner = 2
    expected = (math.sqrt(3) * 3 + 1j) / (math.sqrt(8) * 2)
    assert close(af.alpha, expected)
    assert close(af.N, math.sqrt(3 * 2 / (2 * 3)))


def test_head_on_alpha_is_one():
    af = alpha_factor(Kinematics(5.0, 2.0))
    assert close(af.alpha, 1.0)
    r = step1(Kinematics(5.0, 2.0))
    assert abs(r.r) < TOL


def test_zero_potential_is_transparent():
    kin = Kinematics(2.0, 0.0, 0.3, -0.4)
    res = step1(kin)
    assert abs(res.r) < TOL and close(res.t, 1.0)


def test_step_kinds():
    kin = Kinematics(3.0, 1.0, 1.0)
    assert step1(kin).which is StepKind.STEP1
    assert step2(kin, 1.0).which is StepKind.STEP2
    assert step3(kin).which is StepKind.STEP3
    assert StepKind.STEP2.value == "Step2_atL"


def test_evanescent_alpha_requires_opt_in():
    kin = Kinematics(1.2, 1.0, 0.5)
    with pytest.raises(RegimeError):
        alpha_factor(kin)
    af = alpha_factor(kin, allow_evanescent=True)
    assert math.isnan(af.N) or af.N > 0


@pytest.mark.parametrize("kin", [Kinematics(1.0, 1.0, 0.0), Kinematics(1.5, 1.0, 0.5)])
def test_boundary_is_rejected(kin):
    with pytest.raises(RegimeError):
        alpha_factor(kin)


def test_grazing_is_singular():
    with pytest.raises(SingularityError):
        alpha_factor(Kinematics(1.0, 3.0, 1.0))


def test_klein_head_on_is_singular():
    # alpha = -1 exactly: the step denominators vanish
    kin = Kinematics(1.0, 3.0)
    assert close(alpha_factor(kin).alpha, -1.0)
    with pytest.raises(SingularityError):
        step1(kin)


def test_negative_width_rejected():
    with pytest.raises(ValueError):
        step2(Kinematics(3.0, 1.0, 1.0), -1.0)


@given(st.one_of(diffusion_params(), klein_params()))
def test_step1_matches_continuity_solve(params):
    E, V0, p2, p3, _ = params
    res = step1(Kinematics(E, V0, p2, p3))
    r, t = oracles.step1(E, V0, p2, p3)
    assert close(res.r, r, 1e-10) and close(res.t, t, 1e-10)


@given(st.one_of(diffusion_params(), klein_params()))
def test_step2_matches_continuity_solve(params):
    E, V0, p2, p3, L = params
    res = step2(Kinematics(E, V0, p2, p3), L)
    r, t = oracles.step2(E, V0, p2, p3, L)
    assert close(res.r, r, 1e-9) and close(res.t, t, 1e-9)


@given(st.one_of(diffusion_params(), klein_params()))
def test_step3_matches_continuity_solve(params):
    E, V0, p2, p3, _ = params
    res = step3(Kinematics(E, V0, p2, p3))
    r, t = oracles.step3(E, V0, p2, p3)
    assert close(res.r, r, 1e-10) and close(res.t, t, 1e-10)


@given(diffusion_params())
def test_step_flux_balance(params):
    E, V0, p2, p3, L = params
    kin = Kinematics(E, V0, p2, p3)
    af = alpha_factor(kin)
    s1 = step1(kin, af)
    assert abs(abs(s1.r) ** 2 + af.flux_factor * abs(s1.t) ** 2 - 1) < TOL
    # the interior steps carry the inverse flux ratio
    for s in (step2(kin, L, af), step3(kin, af)):
        assert abs(abs(s.r) ** 2 + abs(s.t) ** 2 / af.flux_factor - 1) < 1e-11


@given(klein_params())
def test_klein_step_over_reflects(params):
    kin = Kinematics(*params[:4])
    af = alpha_factor(kin)
    s1 = step1(kin, af)
    assert abs(s1.r) > 1
    # flux balance still holds with a negative transmitted current
    assert af.flux_factor < 0
    assert abs(abs(s1.r) ** 2 + af.flux_factor * abs(s1.t) ** 2 - 1) < 1e-10 * abs(s1.r) ** 2


@given(st.one_of(diffusion_params(), klein_params()))
def test_reflection_probability_forms_agree(params):
    kin = Kinematics(*params[:4])
    assert close(step_reflection_probability(kin), abs(step1(kin).r) ** 2, 1e-11)


@given(evanescent_params())
def test_evanescent_total_reflection(params):
    kin = Kinematics(*params)
    assert abs(step_reflection_probability(kin) - 1.0) < TOL


@given(st.one_of(diffusion_params(), klein_params()))
def test_beta_gamma_identities(params):
    kin = Kinematics(*params[:4])
    af = alpha_factor(kin)
    a, b, g = af.alpha, beta_from_alpha(af), gamma_from_alpha(af)
    assert close(1 + b.conjugate(), (1 + a) / a.real)
    assert close(1 - b, (a - 1) / a.real)
    assert g == b.conjugate()
    assert close(b, beta_direct(kin), 1e-11)
    assert close(g, gamma_direct(kin), 1e-11)


@given(diffusion_params())
def test_loop_magnitude_equals_step_reflection(params):
    E, V0, p2, p3, L = params
    kin = Kinematics(E, V0, p2, p3)
    loop = step2(kin, L).r * step3(kin).r
    assert abs(abs(loop) - abs(step1(kin).r) ** 2) < TOL


@given(diffusion_params(), st.floats(0.1, 10.0))
def test_two_step_product_independent_of_normalisation(params, scale):
    E, V0, p2, p3, L = params
    kin = Kinematics(E, V0, p2, p3)
    af = alpha_factor(kin)
    scaled = AlphaFactor(af.alpha, af.N * scale)
    ref = step1(kin, af).t * step2(kin, L, af).t
    alt = step1(kin, scaled).t * step2(kin, L, scaled).t
    assert close(alt, ref)


def test_step2_phase_convention():
    kin = Kinematics(3.0, 1.0, 1.0)
    r0, rL = step2(kin, 0.0).r, step2(kin, 2.0).r
    assert close(rL, r0 * cmath.exp(4j * kin.q1.real))
